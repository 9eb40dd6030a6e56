"""Piecewise scalings: verification, explicit constructors, and search.

A piecewise scaling splits every frame vector by an orthogonal projection
and scales the two parts separately, aiming for a Parseval family
a_i P x_i + b_i (I - P) x_i.  The verifier evaluates both the direct
Parseval residual of the recombined family and the equivalent three-part
decomposition: each projected family must rebuild its projection operator
and the mixed-term operator must vanish.  Constructors cover frames in
R^2 and R^3, orthogonal-split data in any dimension, and a special
position in R^4; a seeded randomized search built on the feasibility
solver handles the rest on a best-effort basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import (
    DEFAULT_TOL,
    RANK_RTOL,
    Frame,
    InternalInconsistencyError,
    _freeze,
    as_vector_array,
    verify_parseval,
    VerificationReport,
)
from .projections import (
    OrthogonalProjection,
    _orthonormalize,
    _random_projection,
    canonical_projection,
    complement,
    projection_from_basis,
)
from .scaling import solve_standard_scaling


@dataclass(frozen=True)
class PiecewiseScaling:
    """Projection plus the per-index constants for the two projected parts."""

    projection: OrthogonalProjection
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.a, dtype=float).ravel()
        b = np.array(self.b, dtype=float).ravel()
        if a.shape != b.shape:
            raise ValueError(f"constant vectors differ in length: {a.shape} vs {b.shape}")
        object.__setattr__(self, "a", _freeze(a))
        object.__setattr__(self, "b", _freeze(b))

    @property
    def size(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True)
class PiecewiseReport:
    """Direct residual, both one-sided reports, and the mixed-term norm."""

    passed: bool
    p_side: VerificationReport
    q_side: VerificationReport
    cross_norm: float
    direct_residual: float
    tolerance: float


def _split_parts(frame, ps: PiecewiseScaling) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    X = as_vector_array(frame)
    P = ps.projection
    if P.dim != X.shape[1]:
        raise ValueError(f"projection acts on R^{P.dim} but vectors live in R^{X.shape[1]}")
    if ps.size != X.shape[0]:
        raise ValueError(f"scaling has {ps.size} constants for {X.shape[0]} vectors")
    Y = X @ P.matrix
    return X, Y, X - Y


def scaled_family(frame, ps: PiecewiseScaling) -> np.ndarray:
    """Rows a_i P x_i + b_i (I - P) x_i of the rescaled family."""
    _, Y, Z = _split_parts(frame, ps)
    return ps.a[:, None] * Y + ps.b[:, None] * Z


def cross_operator(frame, ps: PiecewiseScaling) -> np.ndarray:
    """C = sum_i a_i b_i (P x_i) ((I - P) x_i)^T.

    The mixed term of the rescaled family vanishes exactly when C = 0:
    the quadratic form x -> x^T C x is the mixed sum, and a symmetric
    part of zero forces the whole operator to zero.
    """
    _, Y, Z = _split_parts(frame, ps)
    return Y.T @ ((ps.a * ps.b)[:, None] * Z)


def verify_piecewise(frame, ps: PiecewiseScaling, tol: float = DEFAULT_TOL) -> PiecewiseReport:
    """Direct Parseval check plus the three-part decomposition.

    ``passed`` reflects the direct check.  The two routes must agree; a
    verdict gap with residuals beyond 10x tol raises
    InternalInconsistencyError because it can only come from a bug, not
    from the input.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    _, Y, Z = _split_parts(frame, ps)
    P = ps.projection
    n = P.dim
    p_rep = verify_parseval(ps.a[:, None] * Y, target=P, tol=tol)
    q_rep = verify_parseval(ps.b[:, None] * Z, target=complement(P), tol=tol)
    cross = float(np.linalg.norm(Y.T @ ((ps.a * ps.b)[:, None] * Z), "fro"))
    W = ps.a[:, None] * Y + ps.b[:, None] * Z
    direct = float(np.linalg.norm(W.T @ W - np.eye(n), "fro"))
    passed = direct <= tol
    three_way = p_rep.passed and q_rep.passed and cross <= tol
    if passed != three_way:
        worst = direct if three_way else max(p_rep.residual, q_rep.residual, cross)
        if worst > 10.0 * tol:
            raise InternalInconsistencyError(
                f"direct residual {direct:.3e} and decomposition residuals "
                f"(p={p_rep.residual:.3e}, q={q_rep.residual:.3e}, cross={cross:.3e}) disagree"
            )
    return PiecewiseReport(
        passed=passed,
        p_side=p_rep,
        q_side=q_rep,
        cross_norm=cross,
        direct_residual=direct,
        tolerance=tol,
    )


def _require_nontrivial(P: OrthogonalProjection) -> None:
    if P.is_trivial:
        raise ValueError("piecewise constructors need a non-trivial projection")


def _index_list(indices, m: int, what: str) -> list[int]:
    idx = [int(i) for i in indices]
    if len(set(idx)) != len(idx):
        raise ValueError(f"{what} contains repeated indices: {idx}")
    if any(i < 0 or i >= m for i in idx):
        raise ValueError(f"{what} must lie in [0, {m}), got {idx}")
    return idx


def construct_r2(frame, projection: OrthogonalProjection, tol: float = DEFAULT_TOL) -> PiecewiseScaling:
    """Scaling for a spanning family in R^2 under any non-trivial projection.

    Finds indices i != j with P x_i and (I - P) x_j both nonzero and puts
    reciprocal norms there; every spanning family admits such a pair, so
    the result is an orthonormal basis of R^2.
    """
    X = as_vector_array(frame)
    m, n = X.shape
    if n != 2:
        raise ValueError("construct_r2 needs vectors in R^2")
    s = np.linalg.svd(X, compute_uv=False)
    if m < 2 or s[0] == 0.0 or s[1] <= RANK_RTOL * s[0]:
        raise ValueError("frame must span R^2")
    if projection.dim != 2:
        raise ValueError("projection must act on R^2")
    _require_nontrivial(projection)
    Y = X @ projection.matrix
    Z = X - Y
    xn = np.linalg.norm(X, axis=1)
    yn = np.linalg.norm(Y, axis=1)
    zn = np.linalg.norm(Z, axis=1)
    for i in range(m):
        if yn[i] <= tol * xn[i]:
            continue
        for j in range(m):
            if j == i or zn[j] <= tol * xn[j]:
                continue
            a = np.zeros(m)
            b = np.zeros(m)
            a[i] = 1.0 / yn[i]
            b[j] = 1.0 / zn[j]
            return PiecewiseScaling(projection, a, b)
    raise InternalInconsistencyError("no valid index pair exists for a spanning family")


def construct_from_orthogonal_split(
    frame,
    projection: OrthogonalProjection,
    p_indices,
    q_indices,
    tol: float = DEFAULT_TOL,
) -> PiecewiseScaling:
    """Reciprocal-norm constants on two disjoint index sets.

    The projected parts on ``p_indices`` must form an orthogonal set of
    nonzero vectors spanning the range of the projection, and likewise
    the complement parts on ``q_indices`` for the complementary range.
    Disjoint supports make the mixed term vanish structurally, so the
    rescaled family is an orthonormal basis.
    """
    X = as_vector_array(frame)
    m, n = X.shape
    if projection.dim != n:
        raise ValueError(f"projection acts on R^{projection.dim} but vectors live in R^{n}")
    _require_nontrivial(projection)
    pidx = _index_list(p_indices, m, "p_indices")
    qidx = _index_list(q_indices, m, "q_indices")
    if set(pidx) & set(qidx):
        raise ValueError(
            "p_indices and q_indices must be disjoint so that a_i b_i = 0 at every index"
        )
    k = projection.rank
    if len(pidx) != k:
        raise ValueError(f"need exactly {k} p-side vectors to span the range, got {len(pidx)}")
    if len(qidx) != n - k:
        raise ValueError(f"need exactly {n - k} q-side vectors to span the complement, got {len(qidx)}")
    Y = X @ projection.matrix
    Z = X - Y
    xn = np.linalg.norm(X, axis=1)
    a = np.zeros(m)
    b = np.zeros(m)
    _check_orthogonal_nonzero(Y[pidx], xn[pidx], tol, "projected p-side")
    _check_orthogonal_nonzero(Z[qidx], xn[qidx], tol, "complement q-side")
    for i in pidx:
        a[i] = 1.0 / float(np.linalg.norm(Y[i]))
    for j in qidx:
        b[j] = 1.0 / float(np.linalg.norm(Z[j]))
    return PiecewiseScaling(projection, a, b)


def _check_orthogonal_nonzero(rows: np.ndarray, scales: np.ndarray, tol: float, what: str) -> None:
    norms = np.linalg.norm(rows, axis=1)
    small = np.nonzero(norms <= tol * np.maximum(scales, 1e-300))[0]
    if small.size:
        raise ValueError(f"{what} vector {int(small[0])} is numerically zero")
    if rows.shape[0] < 2:
        return
    G = rows @ rows.T
    C = np.abs(G) / np.outer(norms, norms)
    np.fill_diagonal(C, 0.0)
    worst = float(C.max())
    if worst > tol:
        raise ValueError(f"{what} set is not orthogonal (worst normalized overlap {worst:.3e})")


@dataclass(frozen=True)
class R3Construction:
    """A rank-1 scaling in R^3 together with its construction diagnostics."""

    scaling: PiecewiseScaling
    indices: tuple[int, int, int]
    mixing_vector: np.ndarray
    mixing_weight: float
    pair_overlap: float
    norm_identity_residual: float
    complement_orthogonality_residual: float


def _greedy_independent_triple(X: np.ndarray) -> tuple[int, int, int]:
    # column-pivoted selection: each step takes the vector with the
    # largest component outside the span chosen so far
    R = X.T.copy()
    scale = float(np.linalg.norm(R, axis=0).max())
    chosen: list[int] = []
    for _ in range(3):
        norms = np.linalg.norm(R, axis=0)
        if chosen:
            norms[chosen] = -1.0
        j = int(np.argmax(norms))
        if norms[j] <= RANK_RTOL * scale:
            raise ValueError("frame must span R^3")
        q = R[:, j] / norms[j]
        R -= np.outer(q, q @ R)
        chosen.append(j)
    return tuple(chosen)  # type: ignore[return-value]


def construct_r3(frame, tol: float = DEFAULT_TOL) -> PiecewiseScaling:
    """Rank-1 piecewise scaling for any spanning family in R^3."""
    return construct_r3_detailed(frame, tol).scaling


def construct_r3_detailed(frame, tol: float = DEFAULT_TOL) -> R3Construction:
    """Rank-1 piecewise scaling in R^3 with construction diagnostics.

    Takes an independent triple (the first three vectors when there are
    exactly three, otherwise a pivoted selection), aligns signs so the
    first two overlap nonnegatively, and mixes their sum with the
    orthogonal complement direction z using weight
    lam = sqrt(overlap / (1 - overlap^2)).  Projecting out span{u} with
    u = lam (x1 + x2) + z makes the complement parts of the pair
    orthogonal, while one of the two signs of lam keeps the third vector
    visible on the projected side.  Constants are reciprocal norms,
    rescaled so they apply to the original, unnormalized vectors.
    """
    X = as_vector_array(frame)
    m, n = X.shape
    if n != 3:
        raise ValueError("construct_r3 needs vectors in R^3")
    if m < 3:
        raise ValueError("frame must contain at least three vectors")
    sel = (0, 1, 2) if m == 3 else _greedy_independent_triple(X)
    triple = X[list(sel)]
    norms = np.linalg.norm(triple, axis=1)
    s = np.linalg.svd(triple, compute_uv=False)
    if s[0] == 0.0 or s[2] <= RANK_RTOL * s[0]:
        raise ValueError("frame must span R^3")
    x1, x2, x3 = triple / norms[:, None]
    overlap = float(x1 @ x2)
    if overlap < 0.0:
        x2 = -x2  # sign flips leave every outer product, hence the scaling, unchanged
        overlap = -overlap
    if overlap >= 1.0 - 1e-12:
        raise ValueError("selected pair is numerically dependent")
    z = np.cross(x1, x2)
    z /= np.linalg.norm(z)
    lead = np.nonzero(np.abs(z) > 1e-12)[0][0]
    if z[lead] < 0.0:
        z = -z
    lam0 = float(np.sqrt(overlap / (1.0 - overlap**2)))
    u = None
    lam = 0.0
    p_norm3 = 0.0
    for candidate in (lam0, -lam0):
        trial = candidate * (x1 + x2) + z
        trial_norm3 = abs(float(x3 @ trial)) / float(np.linalg.norm(trial))
        if trial_norm3 > tol:
            u, lam, p_norm3 = trial, candidate, trial_norm3
            break
    if u is None:
        raise ValueError("triple is numerically degenerate: the third vector hides from both mixings")
    identity_residual = abs(float(u @ u) - (2.0 * lam * lam * (1.0 + overlap) + 1.0))
    if identity_residual > tol:
        raise InternalInconsistencyError(
            f"mixing vector norm identity violated by {identity_residual:.3e}"
        )
    P = projection_from_basis([u])
    q1 = x1 - P.matrix @ x1
    q2 = x2 - P.matrix @ x2
    orth_residual = abs(float(q1 @ q2))
    if orth_residual > tol:
        raise InternalInconsistencyError(
            f"complement parts of the pair are not orthogonal (residual {orth_residual:.3e})"
        )
    q1n = float(np.linalg.norm(q1))
    q2n = float(np.linalg.norm(q2))
    if min(q1n, q2n) <= tol:
        raise InternalInconsistencyError("complement part of the pair vanished")
    a = np.zeros(m)
    b = np.zeros(m)
    b[sel[0]] = 1.0 / (q1n * norms[0])
    b[sel[1]] = 1.0 / (q2n * norms[1])
    a[sel[2]] = 1.0 / (p_norm3 * norms[2])
    return R3Construction(
        scaling=PiecewiseScaling(P, a, b),
        indices=sel,
        mixing_vector=_freeze(u),
        mixing_weight=lam,
        pair_overlap=overlap,
        norm_identity_residual=identity_residual,
        complement_orthogonality_residual=orth_residual,
    )


def construct_r4_special(frame, indices, tol: float = DEFAULT_TOL) -> PiecewiseScaling:
    """Rank-2 scaling from four unit vectors in special position in R^4.

    Needs independent unit vectors x1..x4 (selected by index) with x2 and
    x3 orthogonal to x4 while x1 is not.  Two successive complements
    produce an orthonormal pair (u, v) whose span projects x1, x2 to an
    orthogonal pair and leaves x3, x4 orthogonal on the complement side;
    reciprocal norms then give an orthonormal basis.
    """
    X = as_vector_array(frame)
    m, n = X.shape
    if n != 4:
        raise ValueError("construct_r4_special needs vectors in R^4")
    idx = _index_list(indices, m, "indices")
    if len(idx) != 4:
        raise ValueError(f"need exactly 4 indices, got {len(idx)}")
    quad = X[idx]
    norms = np.linalg.norm(quad, axis=1)
    if np.abs(norms - 1.0).max() > tol:
        raise ValueError("the selected vectors must be unit-norm")
    s = np.linalg.svd(quad, compute_uv=False)
    if s[0] == 0.0 or s[3] <= RANK_RTOL * s[0]:
        raise ValueError("the selected vectors must be linearly independent")
    x1, x2, x3, x4 = quad
    if abs(float(x2 @ x4)) > tol or abs(float(x3 @ x4)) > tol:
        raise ValueError("need <x2, x4> = <x3, x4> = 0 for the selected vectors")
    if abs(float(x1 @ x4)) <= tol:
        raise ValueError("need <x1, x4> != 0 for the selected vectors")
    Q = projection_from_basis([x2, x4])
    w = x1 - Q.matrix @ x1
    wn = float(np.linalg.norm(w))
    if wn <= tol:
        raise ValueError("x1 lies in span{x2, x4}; the vectors are not in special position")
    u = w / wn
    R = projection_from_basis([x1, x3, u])
    zvec = x2 - R.matrix @ x2
    zn = float(np.linalg.norm(zvec))
    if zn <= tol:
        raise ValueError("x2 lies in span{x1, x3, u}; the vectors are not in special position")
    v = zvec / zn
    P = projection_from_basis([u, v])
    if P.rank != 2:
        raise InternalInconsistencyError("mixing pair failed to span a plane")
    y1 = P.matrix @ x1
    y2 = P.matrix @ x2
    q3 = x3 - P.matrix @ x3
    q4 = x4 - P.matrix @ x4
    parts = [float(np.linalg.norm(t)) for t in (y1, y2, q3, q4)]
    if min(parts) <= tol:
        raise InternalInconsistencyError("a projected part vanished despite the position hypotheses")
    a = np.zeros(m)
    b = np.zeros(m)
    a[idx[0]] = 1.0 / parts[0]
    a[idx[1]] = 1.0 / parts[1]
    b[idx[2]] = 1.0 / parts[2]
    b[idx[3]] = 1.0 / parts[3]
    return PiecewiseScaling(P, a, b)


def _complement_form(ps: PiecewiseScaling) -> PiecewiseScaling:
    # the definition is symmetric under swapping the projection with its
    # complement and the two constant vectors with each other
    return PiecewiseScaling(complement(ps.projection), ps.b, ps.a)


def _restricted_constants(V: np.ndarray, target: OrthogonalProjection, keep: np.ndarray, tol: float):
    idx = np.nonzero(keep)[0]
    if idx.size == 0:
        return None
    verdict = solve_standard_scaling(V[idx], target, tol)
    if not verdict.feasible:
        return None
    out = np.zeros(keep.shape[0])
    out[idx] = verdict.scaling.constants
    return out


def _disjoint_split_candidate(X: np.ndarray, P: OrthogonalProjection, tol: float):
    Y = X @ P.matrix
    Z = X - Y
    Q = complement(P)
    vp = solve_standard_scaling(Y, P, tol)
    if not vp.feasible:
        return None
    vq = solve_standard_scaling(Z, Q, tol)
    if not vq.feasible:
        return None
    a = np.array(vp.scaling.constants)
    b = np.array(vq.scaling.constants)
    overlap = (a > 0.0) & (b > 0.0)
    if overlap.any():
        resolved = _restricted_constants(Y, P, (a > 0.0) & ~overlap, tol)
        if resolved is not None:
            a = resolved
        else:
            resolved = _restricted_constants(Z, Q, (b > 0.0) & ~overlap, tol)
            if resolved is None:
                return None
            b = resolved
    return PiecewiseScaling(P, a, b)


def search_piecewise(
    frame,
    ranks=None,
    budget: int = 100,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
) -> PiecewiseScaling | None:
    """Look for a passing piecewise scaling; absence of a result is a value.

    Strategy, in order: standard scalability (equal constants work with
    any projection), the dedicated constructors for dimensions two and
    three, then a seeded sweep of ``budget`` random projections per
    requested rank, each tried with a disjoint-support feasibility split.
    Candidate k of rank r derives its generator from (seed, r, k), so the
    outcome does not depend on evaluation order.  A miss is not a proof
    that no scaling exists.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    fr = frame if isinstance(frame, Frame) else Frame(frame)
    n = fr.dim
    wanted = set(range(1, n)) if ranks is None else {int(k) for k in ranks} & set(range(1, n))
    valid = sorted(wanted)
    if not valid or not fr.is_frame():
        return None
    X = fr.vectors
    verdict = solve_standard_scaling(X, None, tol)
    if verdict.feasible:
        c = verdict.scaling.constants
        ps = PiecewiseScaling(canonical_projection(range(valid[0]), n), c, c)
        if verify_piecewise(fr, ps, tol).passed:
            return ps
    if n <= 3:
        try:
            built = (
                construct_r2(fr, canonical_projection([0], 2), tol)
                if n == 2
                else construct_r3(fr, tol)
            )
        except ValueError:
            return None
        if built.projection.rank not in valid:
            if (n - built.projection.rank) not in valid:
                return None
            built = _complement_form(built)
        if verify_piecewise(fr, built, tol).passed:
            return built
        return None
    for k in valid:
        for candidate in range(budget):
            rng = np.random.default_rng(np.random.SeedSequence(entropy=(seed, k, candidate)))
            P = _random_projection(rng, n, k)
            ps = _disjoint_split_candidate(X, P, tol)
            if ps is not None and verify_piecewise(fr, ps, tol).passed:
                return ps
    return None
