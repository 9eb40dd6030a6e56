"""Constant-size statistics for the rank-1 construction on random frames in R^3.

Draws seeded unit-norm frames, builds a piecewise scaling for each, and
summarizes the mixing weight, the largest constant, and the verification
residuals.  The largest constants blow up exactly when a projected part
is tiny, which is the price of a construction that never fails.
"""

import argparse

import numpy as np

import framescale as fs


def run(runs: int, seed: int) -> None:
    rng = np.random.default_rng(seed)
    weights, peaks, residuals, overlaps = [], [], [], []
    for _ in range(runs):
        m = int(rng.integers(3, 9))
        X = rng.standard_normal((m, 3))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        frame = fs.Frame(X)
        if not frame.is_frame():
            continue
        detail = fs.construct_r3_detailed(frame)
        rep = fs.verify_piecewise(frame, detail.scaling)
        weights.append(abs(detail.mixing_weight))
        overlaps.append(detail.pair_overlap)
        peaks.append(max(detail.scaling.a.max(), detail.scaling.b.max()))
        residuals.append(rep.direct_residual)

    def describe(name, values):
        arr = np.array(values)
        print(
            f"{name:>18}: median {np.median(arr):.4g}   "
            f"p90 {np.quantile(arr, 0.9):.4g}   max {arr.max():.4g}"
        )

    print(f"{len(weights)} frames (seed {seed})")
    describe("pair overlap", overlaps)
    describe("mixing weight", weights)
    describe("largest constant", peaks)
    describe("direct residual", residuals)


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--runs", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    run(args.runs, args.seed)
