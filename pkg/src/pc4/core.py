"""Finite-dimensional real algebras given by structure constants.

An algebra of dimension ``n`` is stored as a tensor ``c`` of shape ``(n, n, n)``
where ``c[k, i, j]`` is the k-th coordinate of ``basis_i * basis_j``. Elements
are plain 1-d numpy arrays. Every function here is pure; sampling functions
take an explicit seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
import numpy as np
from scipy.spatial import cKDTree


class ValidationError(ValueError):
    """Input violates a documented precondition or invariant."""


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, last_rank: int):
        super().__init__(message)
        self.last_rank = last_rank


DEFAULT_RANK_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class AlgebraTable:
    c: np.ndarray
    labels: Optional[tuple] = None

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] < 1:
            raise ValidationError(f"structure tensor must have shape (n, n, n), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValidationError("structure tensor has non-finite entries")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != c.shape[0]:
                raise ValidationError("number of labels does not match dimension")
            object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    def basis(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim)
        v[i] = 1.0
        return v

    def __repr__(self):
        return f"AlgebraTable(dim={self.dim}, labels={self.labels})"


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal basis stored as the columns of ``vectors`` (shape n x rank)."""

    vectors: np.ndarray
    degenerate: bool = False

    @property
    def rank(self) -> int:
        return self.vectors.shape[1]

    def projector(self) -> np.ndarray:
        return self.vectors @ self.vectors.T

    def contains(self, v, tol: float = 1e-9) -> bool:
        v = np.asarray(v, dtype=float)
        return float(np.linalg.norm(v - self.projector() @ v)) <= tol * max(1.0, np.linalg.norm(v))


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a sampled verification.

    ``statistic`` is the worst value seen over the samples. For residual
    checks (``mode="max"``) it is the largest residual and the check passes
    when it is below ``tolerance``; for lower-bound checks (``mode="min"``)
    it is the smallest value and the check passes when it is above.
    """

    name: str
    statistic: float
    tolerance: float
    samples_used: int
    worst_witness: tuple
    mode: str = "max"
    passed: bool = field(init=False)

    def __post_init__(self):
        if self.mode == "max":
            ok = self.statistic < self.tolerance
        elif self.mode == "min":
            ok = self.statistic > self.tolerance
        else:
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "passed", bool(ok))

    @property
    def max_residual(self) -> float:
        if self.mode != "max":
            raise AttributeError(f"{self.name} is a lower-bound check; use .statistic")
        return self.statistic

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "mode": self.mode,
            "statistic": float(self.statistic),
            "tolerance": float(self.tolerance),
            "samples_used": int(self.samples_used),
            "passed": self.passed,
            "worst_witness": [np.asarray(w, dtype=float).tolist() for w in self.worst_witness],
        }


def _element(A: AlgebraTable, a, name: str = "element") -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (A.dim,):
        raise ValidationError(f"{name} has shape {a.shape}, expected ({A.dim},)")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite entries")
    return a


def table_from_products(n: int, product, labels=None) -> AlgebraTable:
    """Tabulate a bilinear ``product(a, b)`` on the standard basis of R^n."""
    eye = np.eye(n)
    c = np.empty((n, n, n))
    for i in range(n):
        for j in range(n):
            c[:, i, j] = product(eye[i], eye[j])
    return AlgebraTable(c, labels)


# ---------------------------------------------------------------- arithmetic

def multiply(A: AlgebraTable, a, b) -> np.ndarray:
    a = _element(A, a, "left factor")
    b = _element(A, b, "right factor")
    return np.einsum("kij,i,j->k", A.c, a, b)


def _mul_batch(c: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # a, b: (m, n) -> (m, n)
    return np.einsum("kij,mi,mj->mk", c, a, b)


def left_mult_matrix(A: AlgebraTable, a) -> np.ndarray:
    """Matrix of ``x -> a x``."""
    a = _element(A, a)
    return np.einsum("kij,i->kj", A.c, a)


def right_mult_matrix(A: AlgebraTable, a) -> np.ndarray:
    """Matrix of ``x -> x a``."""
    a = _element(A, a)
    return np.einsum("kij,j->ki", A.c, a)


def commutator(A: AlgebraTable, a, b) -> np.ndarray:
    return multiply(A, a, b) - multiply(A, b, a)


def bullet(A: AlgebraTable, a, b) -> np.ndarray:
    return multiply(A, a, b) + multiply(A, b, a)


def square(A: AlgebraTable, a) -> np.ndarray:
    return multiply(A, a, a)


# ---------------------------------------------------------------- subspaces

def orthonormal_span(vectors, tol: float = DEFAULT_RANK_TOL, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis (columns) of the span of the given columns.

    Singular values below ``tol * scale`` are dropped; ``scale`` defaults to
    the largest singular value.
    """
    M = np.atleast_2d(np.asarray(vectors, dtype=float))
    if M.size == 0:
        return np.zeros((M.shape[0], 0))
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    ref = s[0] if scale is None else scale
    if ref <= 0:
        return np.zeros((M.shape[0], 0))
    return U[:, s > tol * ref]


def null_space(M, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    n = M.shape[1]
    _, s, Vt = np.linalg.svd(M)
    if s.size == 0 or s[0] == 0.0:
        return np.eye(n)
    rank = int(np.sum(s > tol * s[0]))
    return Vt[rank:].T.copy()


def numerical_rank(vectors, tol: float = DEFAULT_RANK_TOL) -> int:
    return orthonormal_span(vectors, tol).shape[1]


def centralizer(A: AlgebraTable, a, tol: float = DEFAULT_RANK_TOL) -> SubspaceBasis:
    """Null space of ``y -> [a, y]``.

    The zero element returns the whole space flagged as degenerate.
    """
    a = _element(A, a)
    if not np.any(a):
        return SubspaceBasis(np.eye(A.dim), degenerate=True)
    ad = left_mult_matrix(A, a) - right_mult_matrix(A, a)
    return SubspaceBasis(null_space(ad, tol))


def generated_subalgebra(A: AlgebraTable, x, tol: float = DEFAULT_RANK_TOL, max_iter: int = 50) -> SubspaceBasis:
    """Smallest subspace containing ``x`` and closed under multiplication."""
    x = _element(A, x)
    nx = np.linalg.norm(x)
    if nx == 0:
        raise ValidationError("generator must be non-zero")
    Q = (x / nx)[:, None]
    for _ in range(max_iter):
        r = Q.shape[1]
        prods = np.einsum("kij,ia,jb->kab", A.c, Q, Q).reshape(A.dim, r * r)
        scale = max(1.0, float(np.max(np.abs(prods), initial=0.0)))
        Q_new = orthonormal_span(np.hstack([Q, prods]), tol, scale=scale)
        if Q_new.shape[1] == r:
            return SubspaceBasis(Q_new)
        Q = Q_new
    raise ConvergenceError(f"closure did not stabilise in {max_iter} iterations", Q.shape[1])


# ---------------------------------------------------------------- sampling

def sample_unit(rng: np.random.Generator, n_samples: int, dim: int) -> np.ndarray:
    v = rng.standard_normal((n_samples, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _worst(values: np.ndarray, mode: str) -> int:
    return int(np.argmax(values) if mode == "max" else np.argmin(values))


def _check_samples(n_samples: int):
    if n_samples < 1:
        raise ValidationError("n_samples must be at least 1")


def check_third_power_assoc(A: AlgebraTable, n_samples: int = 1000, tol: float = 1e-9, seed: int = 0) -> CheckReport:
    """Largest ``|x x^2 - x^2 x|`` over sampled unit vectors."""
    _check_samples(n_samples)
    rng = np.random.default_rng(seed)
    X = sample_unit(rng, n_samples, A.dim)
    X2 = _mul_batch(A.c, X, X)
    res = np.linalg.norm(_mul_batch(A.c, X, X2) - _mul_batch(A.c, X2, X), axis=1)
    w = _worst(res, "max")
    return CheckReport("third_power_assoc", float(res[w]), tol, n_samples, (X[w],))


def check_polarized_identity(A: AlgebraTable, n_samples: int = 1000, tol: float = 1e-9, seed: int = 0) -> CheckReport:
    """Largest ``|[x.y, y] - [x, y^2]|`` (``.`` the symmetrised product)."""
    _check_samples(n_samples)
    rng = np.random.default_rng(seed)
    X = sample_unit(rng, n_samples, A.dim)
    Y = sample_unit(rng, n_samples, A.dim)
    c = A.c
    xy = _mul_batch(c, X, Y) + _mul_batch(c, Y, X)
    y2 = _mul_batch(c, Y, Y)
    lhs = _mul_batch(c, xy, Y) - _mul_batch(c, Y, xy)
    rhs = _mul_batch(c, X, y2) - _mul_batch(c, y2, X)
    res = np.linalg.norm(lhs - rhs, axis=1)
    w = _worst(res, "max")
    return CheckReport("polarized_identity", float(res[w]), tol, n_samples, (X[w], Y[w]))


def idempotent_residual(A: AlgebraTable, e) -> float:
    e = _element(A, e)
    return float(np.linalg.norm(multiply(A, e, e) - e))


def _require_idempotent(A: AlgebraTable, e, tol: float) -> np.ndarray:
    e = _element(A, e, "idempotent")
    if not np.any(e):
        raise ValidationError("zero is not a non-zero idempotent")
    r = idempotent_residual(A, e)
    if r >= tol * max(1.0, float(np.linalg.norm(e))):
        raise ValidationError(f"element is not idempotent (|e e - e| = {r:.3e})")
    return e


def check_idempotent_commutation(A: AlgebraTable, e, n_samples: int = 1000, tol: float = 1e-9, seed: int = 0) -> CheckReport:
    """Largest ``|[e, e.x - x]|`` over sampled unit ``x`` for an idempotent ``e``."""
    _check_samples(n_samples)
    e = _require_idempotent(A, e, max(tol, 1e-9))
    rng = np.random.default_rng(seed)
    X = sample_unit(rng, n_samples, A.dim)
    E = np.broadcast_to(e, X.shape)
    c = A.c
    u = _mul_batch(c, E, X) + _mul_batch(c, X, E) - X
    res = np.linalg.norm(_mul_batch(c, E, u) - _mul_batch(c, u, E), axis=1)
    w = _worst(res, "max")
    return CheckReport("idempotent_commutation", float(res[w]), tol, n_samples, (e, X[w]))


def check_division_sampled(A: AlgebraTable, n_samples: int = 1000, tol: float = 1e-10, seed: int = 0) -> CheckReport:
    """Smallest ``min(|det L_a|, |det R_a|)`` over sampled unit ``a``.

    This is evidence, not a proof: a pass means no zero divisor was hit.
    """
    _check_samples(n_samples)
    rng = np.random.default_rng(seed)
    X = sample_unit(rng, n_samples, A.dim)
    L = np.einsum("kij,mi->mkj", A.c, X)
    R = np.einsum("kij,mj->mki", A.c, X)
    dets = np.minimum(np.abs(np.linalg.det(L)), np.abs(np.linalg.det(R)))
    w = _worst(dets, "min")
    return CheckReport("division", float(dets[w]), tol, n_samples, (X[w],), mode="min")


def check_centralizer_invariance(A: AlgebraTable, e, tol: float = 1e-9) -> CheckReport:
    """How far ``L_e`` moves the centraliser ``C(e)`` out of itself."""
    e = _require_idempotent(A, e, max(tol, 1e-9))
    C = centralizer(A, e).vectors
    moved = left_mult_matrix(A, e) @ C
    leak = moved - C @ (C.T @ moved)
    col = np.linalg.norm(leak, axis=0) if C.shape[1] else np.zeros(1)
    w = int(np.argmax(col))
    witness = (e, C[:, w]) if C.shape[1] else (e,)
    return CheckReport("centralizer_invariance", float(col[w]), tol, max(C.shape[1], 1), witness)


def check_omnipresent(A: AlgebraTable, e, n_samples: int = 1000, tol: float = 1e-9, seed: int = 0) -> CheckReport:
    """Largest component of ``x x`` orthogonal to ``span{e, x}``."""
    _check_samples(n_samples)
    e = _require_idempotent(A, e, max(tol, 1e-9))
    rng = np.random.default_rng(seed)
    X = sample_unit(rng, n_samples, A.dim)
    X2 = _mul_batch(A.c, X, X)
    u = e / np.linalg.norm(e)
    # Gram-Schmidt x against e, row by row
    W = X - np.outer(X @ u, u)
    wn = np.linalg.norm(W, axis=1, keepdims=True)
    W = np.divide(W, wn, out=np.zeros_like(W), where=wn > 1e-12)
    P = X2 - np.outer(X2 @ u, u)
    P = P - W * np.sum(P * W, axis=1, keepdims=True)
    res = np.linalg.norm(P, axis=1)
    w = _worst(res, "max")
    return CheckReport("omnipresent", float(res[w]), tol, n_samples, (e, X[w]))


# ---------------------------------------------------------------- idempotents

@dataclass(frozen=True, eq=False)
class IdempotentCensus:
    roots: np.ndarray  # (m, dim), sorted
    curve_flag: bool
    seeds_used: int
    converged: int

    def __len__(self):
        return self.roots.shape[0]


def dedupe_points(points: np.ndarray, radius: float) -> np.ndarray:
    """Greedy first-come deduplication within ``radius``, sorted lexicographically."""
    points = np.asarray(points, dtype=float)
    if points.shape[0] == 0:
        return np.zeros((0, points.shape[1] if points.ndim == 2 else 0))
    tree = cKDTree(points)
    taken = np.zeros(len(points), dtype=bool)
    kept = []
    for i, p in enumerate(points):
        if taken[i]:
            continue
        kept.append(i)
        taken[tree.query_ball_point(p, radius)] = True
    out = points[kept]
    return out[np.lexsort(out.T[::-1])]


def _polish_root(c: np.ndarray, w: np.ndarray, B: np.ndarray, digits: int = 40, iters: int = 80) -> np.ndarray:
    """Refine a root of ``w w = w`` (w = B t) in extended precision.

    Roots where the Jacobian is singular only converge linearly, so double
    precision stalls near sqrt(eps). Extra digits buy the missing accuracy.
    """
    with mpmath.workdps(digits):
        n, k = B.shape
        C = [[[mpmath.mpf(float(c[a, i, j])) for j in range(n)] for i in range(n)] for a in range(n)]
        Bm = mpmath.matrix(B.tolist())
        t = mpmath.matrix(np.linalg.lstsq(B, w, rcond=None)[0].tolist())
        tiny = mpmath.mpf(10) ** (-digits + 5)
        for _ in range(iters):
            x = Bm * t
            F = mpmath.matrix(n, 1)
            J = mpmath.matrix(n, n)
            for a in range(n):
                s = mpmath.mpf(0)
                for i in range(n):
                    for j in range(n):
                        s += C[a][i][j] * x[i] * x[j]
                        J[a, i] += C[a][i][j] * x[j]
                        J[a, j] += C[a][i][j] * x[i]
                F[a] = s - x[a]
                J[a, a] -= 1
            JB = J * Bm
            try:
                # normal equations keep the step well defined for a tall JB
                step = mpmath.lu_solve(JB.T * JB, JB.T * F)
            except ZeroDivisionError:
                break
            t = t - step
            if mpmath.norm(step) < tiny:
                break
        return np.array([float(v) for v in (Bm * t)])


def _residual(c: np.ndarray, w: np.ndarray) -> float:
    return float(np.linalg.norm(np.einsum("kij,i,j->k", c, w, w) - w))


def find_idempotents_newton(
    A: AlgebraTable,
    grid_density: int = 7,
    tol: float = 1e-10,
    dedupe_radius: float = 1e-6,
    *,
    n_random: int = 200,
    box: float = 3.0,
    max_iter: int = 150,
    seed: int = 0,
    subspace=None,
    curve_threshold: int = 50,
    polish: bool = True,
) -> IdempotentCensus:
    """Numeric census of the non-zero idempotents of ``A``.

    Newton (least-squares steps through a pseudo-inverse) is run on
    ``F(w) = w w - w`` from a uniform grid of seeds in ``[-box, box]^k`` plus
    ``n_random`` uniform seeds. ``subspace`` restricts the search to the
    column span of the given matrix. Roots are deduplicated within
    ``dedupe_radius``; more than ``curve_threshold`` survivors set
    ``curve_flag`` (a continuum of idempotents). When the set is discrete,
    each root is polished in extended precision.

    Idempotents scale like ``1/lambda`` in the constructed algebras; for very
    small ``|lambda|`` widen ``box``.
    """
    if grid_density < 2:
        raise ValidationError("grid_density must be at least 2")
    n = A.dim
    B = np.eye(n) if subspace is None else orthonormal_span(np.asarray(subspace, dtype=float))
    k = B.shape[1]
    axis = np.linspace(-box, box, grid_density)
    grid = np.stack(np.meshgrid(*([axis] * k), indexing="ij"), axis=-1).reshape(-1, k)
    rng = np.random.default_rng(seed)
    T = np.vstack([grid, rng.uniform(-box, box, (n_random, k))])
    c = A.c
    active = np.ones(len(T), dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        t = T[active]
        W = t @ B.T
        F = _mul_batch(c, W, W) - W
        J = np.einsum("kij,mj->mki", c, W) + np.einsum("kij,mi->mkj", c, W) - np.eye(n)
        JB = J @ B
        step = np.einsum("mab,mb->ma", np.linalg.pinv(JB, rcond=1e-12), F)
        t = t - step
        bad = ~np.all(np.isfinite(t), axis=1) | (np.linalg.norm(t, axis=1) > 1e8)
        t[bad] = np.nan
        T[active] = t
        done = bad | (np.linalg.norm(step, axis=1) < 1e-15 * (1.0 + np.linalg.norm(t, axis=1)))
        idx = np.flatnonzero(active)
        active[idx[done]] = False

    finite = np.all(np.isfinite(T), axis=1)
    W = T[finite] @ B.T
    res = np.linalg.norm(_mul_batch(c, W, W) - W, axis=1)
    scale = np.maximum(1.0, np.linalg.norm(W, axis=1)) ** 2
    ok = (res < tol * scale) & (np.linalg.norm(W, axis=1) > 1e-6)
    roots = dedupe_points(W[ok], dedupe_radius)
    curve = roots.shape[0] > curve_threshold
    if polish and not curve and roots.shape[0]:
        polished = []
        for r in roots:
            p = _polish_root(c, r, B)
            # a singular system (e.g. a continuum under the threshold) can
            # send the polish astray; keep whichever point is the better root
            good = np.all(np.isfinite(p)) and _residual(c, p) <= _residual(c, r)
            polished.append(p if good else r)
        roots = dedupe_points(np.array(polished), dedupe_radius)
    return IdempotentCensus(roots, bool(curve), len(T), int(ok.sum()))


def is_exceptional_idempotent(A: AlgebraTable, e, tol: float = 1e-8, n_samples: int = 50, seed: int = 0):
    """Decide whether ``C(e)`` is 3-dimensional and closed under squaring.

    Returns ``(flag, witness)`` with the centraliser rank and the largest
    distance of a sampled square from ``C(e)``.
    """
    if A.dim != 4:
        raise ValidationError("exceptional idempotents are defined for dimension 4")
    e = _require_idempotent(A, e, max(tol, 1e-9))
    C = centralizer(A, e, tol=DEFAULT_RANK_TOL)
    witness = {"centralizer_rank": C.rank, "max_square_leak": None}
    if C.rank != 3:
        return False, witness
    rng = np.random.default_rng(seed)
    Q = C.vectors
    coeffs = np.vstack([np.eye(3), rng.standard_normal((n_samples, 3))])
    X = coeffs @ Q.T
    X2 = _mul_batch(A.c, X, X)
    leak = np.linalg.norm(X2 - (X2 @ Q) @ Q.T, axis=1)
    witness["max_square_leak"] = float(leak.max())
    return bool(leak.max() < tol * max(1.0, float(np.abs(X2).max()))), witness


# ---------------------------------------------------------------- isotopes

def _invertible(M, name: str, n: int) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.shape != (n, n):
        raise ValidationError(f"{name} must be {n}x{n}, got {M.shape}")
    if abs(np.linalg.det(M)) <= 1e-12:
        raise ValidationError(f"{name} is singular")
    return M


def isotope(A: AlgebraTable, S, T) -> AlgebraTable:
    """Algebra on the same space with product ``x o y = (S x)(T y)``."""
    S = _invertible(S, "S", A.dim)
    T = _invertible(T, "T", A.dim)
    return AlgebraTable(np.einsum("kpq,pi,qj->kij", A.c, S, T), A.labels)


def identity_element(A: AlgebraTable, tol: float = 1e-9) -> np.ndarray:
    """Two-sided identity of ``A``; raises if there is none."""
    n = A.dim
    # u b_j = b_j and b_j u = b_j for every j, linear in u
    Lrows = np.transpose(A.c, (2, 0, 1)).reshape(n * n, n)  # (j,k) x i : c[k,i,j]
    Rrows = np.transpose(A.c, (1, 0, 2)).reshape(n * n, n)  # (i,k) x j : c[k,i,j]
    target = np.eye(n).reshape(n * n)
    M = np.vstack([Lrows, Rrows])
    rhs = np.concatenate([target, target])
    u, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    if np.linalg.norm(M @ u - rhs) > tol * max(1.0, np.abs(A.c).max()):
        raise ValidationError("algebra is not unital")
    return u


def _require_central(A: AlgebraTable, e, tol: float):
    e = _require_idempotent(A, e, tol)
    ad = left_mult_matrix(A, e) - right_mult_matrix(A, e)
    if np.abs(ad).max() >= tol * max(1.0, np.abs(A.c).max()):
        raise ValidationError("idempotent is not central")
    return e


def unitalize(A: AlgebraTable, e, tol: float = 1e-9, n_samples: int = 200, seed: int = 0) -> AlgebraTable:
    """Isotope by ``L_e^{-1}`` making the central idempotent ``e`` an identity."""
    e = _require_central(A, e, tol)
    Linv = np.linalg.inv(left_mult_matrix(A, e))
    B = isotope(A, Linv, Linv)
    Le = left_mult_matrix(B, e)
    Re = right_mult_matrix(B, e)
    eye = np.eye(A.dim)
    if max(np.abs(Le - eye).max(), np.abs(Re - eye).max()) >= tol * max(1.0, np.abs(B.c).max()):
        raise ValidationError("e is not an identity of the unitalized algebra")
    if quadratic_defect(B, e, n_samples, seed) >= tol * max(1.0, np.abs(B.c).max()):
        raise ValidationError("unitalized algebra is not quadratic")
    return B


def quadratic_defect(B: AlgebraTable, one, n_samples: int = 1000, seed: int = 0) -> float:
    """Largest third singular value of ``[1, x, x x]`` over sampled unit ``x``."""
    rng = np.random.default_rng(seed)
    X = sample_unit(rng, n_samples, B.dim)
    X2 = _mul_batch(B.c, X, X)
    ones = np.broadcast_to(np.asarray(one, dtype=float), X.shape)
    M = np.stack([ones, X, X2], axis=2)
    s = np.linalg.svd(M, compute_uv=False)
    return float(s[:, 2].max())


# ---------------------------------------------------------------- morphisms

def is_algebra_morphism(A: AlgebraTable, B: AlgebraTable, phi, tol: float = 1e-9):
    """Check ``phi(b_i b_j) = phi(b_i) phi(b_j)`` on all basis pairs.

    Returns ``(holds, max_residual)``.
    """
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (B.dim, A.dim):
        raise ValidationError(f"phi must have shape {(B.dim, A.dim)}, got {phi.shape}")
    lhs = np.einsum("pk,kij->pij", phi, A.c)
    rhs = np.einsum("pab,ai,bj->pij", B.c, phi, phi)
    res = float(np.abs(lhs - rhs).max()) if lhs.size else 0.0
    return res < tol, res


@dataclass(frozen=True)
class MorphismCriterion:
    holds: bool
    isotope_morphism: bool
    morphism_residual: float
    commutation_residual: float
    isotope_residual: float

    def __bool__(self):
        return self.holds


def check_isotopy_morphism_criterion(A: AlgebraTable, B: AlgebraTable, S, T, phi, tol: float = 1e-9) -> MorphismCriterion:
    """Morphisms of planar isotopes ``A_S -> B_T``: a morphism ``A -> B`` with ``phi S = T phi``.

    ``holds`` is that criterion; ``isotope_morphism`` is the direct check on
    the isotopes, reported alongside for cross-validation.
    """
    if A.dim < 4 or B.dim < 4:
        raise ValidationError("criterion requires quadratic algebras of dimension at least 4")
    phi = np.asarray(phi, dtype=float)
    S = _invertible(S, "S", A.dim)
    T = _invertible(T, "T", B.dim)
    ok_m, res_m = is_algebra_morphism(A, B, phi, tol)
    comm = float(np.abs(phi @ S - T @ phi).max())
    ok_i, res_i = is_algebra_morphism(isotope(A, S, S), isotope(B, T, T), phi, tol)
    return MorphismCriterion(bool(ok_m and comm < tol), bool(ok_i), res_m, comm, res_i)
