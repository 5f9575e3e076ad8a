"""Quadratic division algebras from dissident data, and their planar isotopes.

Coordinates on R x R^3 are ``(alpha, u)``: index 0 is the real part, indices
1..3 the imaginary part. A K-tuple ``(x, y, z, d, lam)`` names one
four-dimensional power-commutative division algebra: ``x`` gives the
alternating form ``xi``, ``(y, d)`` the dissident map ``eta``, ``z`` the linear
form ``sigma(v) = <z, v>`` and ``lam`` the scalar of the planar map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    AlgebraTable,
    CheckReport,
    ValidationError,
    identity_element,
    orthonormal_span,
    sample_unit,
    table_from_products,
)

LABELS = ("e", "v1", "v2", "v3")


def _vec3(v, name: str) -> np.ndarray:
    a = np.array(v, dtype=float).reshape(-1)
    if a.shape != (3,):
        raise ValidationError(f"{name} must have 3 entries")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite entries")
    a.setflags(write=False)
    return a


def validate_diagonal(d, tol: float = 0.0) -> np.ndarray:
    d = _vec3(d, "d")
    if d[0] <= 0:
        raise ValidationError("d not positive: d1 must be > 0")
    if d[0] > d[1] + tol or d[1] > d[2] + tol:
        raise ValidationError("d not sorted: need d1 <= d2 <= d3")
    return d


@dataclass(frozen=True, eq=False)
class KTuple:
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    d: np.ndarray
    lam: float

    def __post_init__(self):
        object.__setattr__(self, "x", _vec3(self.x, "x"))
        object.__setattr__(self, "y", _vec3(self.y, "y"))
        object.__setattr__(self, "z", _vec3(self.z, "z"))
        object.__setattr__(self, "d", validate_diagonal(self.d))
        lam = float(self.lam)
        if not np.isfinite(lam):
            raise ValidationError("lambda is not finite")
        if lam == 0.0:
            raise ValidationError("lambda is zero")
        object.__setattr__(self, "lam", lam)

    @property
    def triple(self) -> np.ndarray:
        """3x3 matrix with columns x, y, z."""
        return np.column_stack([self.x, self.y, self.z])

    def with_triple(self, M) -> "KTuple":
        M = np.asarray(M, dtype=float)
        return KTuple(M[:, 0], M[:, 1], M[:, 2], self.d, self.lam)

    def act(self, g) -> "KTuple":
        """``g . kappa``: rotate x, y, z by ``g``; d and lambda unchanged."""
        return self.with_triple(np.asarray(g, dtype=float) @ self.triple)

    def to_dict(self) -> dict:
        return {
            "x": self.x.tolist(),
            "y": self.y.tolist(),
            "z": self.z.tolist(),
            "d": self.d.tolist(),
            "lambda": self.lam,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "KTuple":
        if not isinstance(obj, dict):
            raise ValidationError("K-tuple must be a JSON object")
        missing = [k for k in ("x", "y", "z", "d", "lambda") if k not in obj]
        if missing:
            raise ValidationError(f"K-tuple is missing keys: {', '.join(missing)}")
        try:
            return cls(obj["x"], obj["y"], obj["z"], obj["d"], obj["lambda"])
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"malformed K-tuple: {exc}") from exc

    def allclose(self, other: "KTuple", tol: float = 1e-8) -> bool:
        a = np.concatenate([self.triple.ravel(), self.d, [self.lam]])
        b = np.concatenate([other.triple.ravel(), other.d, [other.lam]])
        return bool(np.max(np.abs(a - b)) <= tol)

    def __repr__(self):
        return (f"KTuple(x={self.x.tolist()}, y={self.y.tolist()}, z={self.z.tolist()}, "
                f"d={self.d.tolist()}, lam={self.lam})")


@dataclass(frozen=True)
class PlanarMapParams:
    sigma_vector: tuple
    lam: float

    def __post_init__(self):
        object.__setattr__(self, "sigma_vector", tuple(float(s) for s in np.ravel(self.sigma_vector)))
        if float(self.lam) == 0.0:
            raise ValidationError("lambda is zero")


@dataclass(frozen=True, eq=False)
class DissidentParams:
    x: np.ndarray
    y: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", _vec3(self.x, "x"))
        object.__setattr__(self, "y", _vec3(self.y, "y"))
        object.__setattr__(self, "d", validate_diagonal(self.d))


def eps_matrix(x) -> np.ndarray:
    """Skew matrix with ``eps_matrix(x) @ u == cross(x, u)``."""
    x1, x2, x3 = _vec3(x, "x")
    return np.array([[0.0, -x3, x2], [x3, 0.0, -x1], [-x2, x1, 0.0]])


def delta_matrix(d) -> np.ndarray:
    return np.diag(_vec3(d, "d"))


def xi(x, u, v) -> float:
    return float(eps_matrix(x) @ np.asarray(u, dtype=float) @ np.asarray(v, dtype=float))


def eta(y, d, u, v) -> np.ndarray:
    return (eps_matrix(y) + delta_matrix(d)) @ np.cross(u, v)


def check_dissident(y, d, n_samples: int = 1000, tol: float = 1e-6, seed: int = 0) -> CheckReport:
    """Smallest normalised ``|det[u, v, eta(u, v)]|`` over orthonormal pairs.

    The three coordinate planes are always included, then ``n_samples``
    random orthonormal pairs.
    """
    y = _vec3(y, "y")
    d = _vec3(d, "d")
    M = eps_matrix(y) + np.diag(d)
    rng = np.random.default_rng(seed)
    eye = np.eye(3)
    U = [eye[1], eye[0], eye[0]]
    V = [eye[2], eye[2], eye[1]]
    G = rng.standard_normal((n_samples, 2, 3))
    for a, b in G:
        a = a / np.linalg.norm(a)
        b = b - (b @ a) * a
        U.append(a)
        V.append(b / np.linalg.norm(b))
    U = np.array(U)
    V = np.array(V)
    H = np.cross(U, V) @ M.T
    dets = np.abs(np.linalg.det(np.stack([U, V, H], axis=1)))
    hn = np.linalg.norm(H, axis=1)
    vals = np.divide(dets, hn, out=np.zeros_like(dets), where=hn > 0)
    w = int(np.argmin(vals))
    return CheckReport("dissident", float(vals[w]), tol, len(vals), (U[w], V[w]), mode="min")


def quadratic_product(p: DissidentParams, a, b) -> np.ndarray:
    al, u = a[0], np.asarray(a[1:])
    be, v = b[0], np.asarray(b[1:])
    w = np.cross(u, v)
    real = al * be - u @ v + (np.cross(p.x, u) @ v)
    imag = al * v + be * u + (eps_matrix(p.y) + np.diag(p.d)) @ w
    return np.concatenate([[real], imag])


def build_quadratic_algebra(p: DissidentParams) -> AlgebraTable:
    """Quadratic division algebra on R x R^3 with identity ``(1, 0)``."""
    if not isinstance(p, DissidentParams):
        p = DissidentParams(*p)
    return table_from_products(4, lambda a, b: quadratic_product(p, a, b), LABELS)


def planar_map_matrix(p: PlanarMapParams, n: int | None = None) -> np.ndarray:
    """Matrix of ``(beta, v) -> (beta + <s, v>, lam v)``."""
    s = np.asarray(p.sigma_vector, dtype=float)
    if n is None:
        n = s.size + 1
    if s.size != n - 1:
        raise ValidationError(f"sigma vector must have {n - 1} entries")
    if p.lam == 0:
        raise ValidationError("lambda is zero")
    T = np.zeros((n, n))
    T[0, 0] = 1.0
    T[0, 1:] = s
    T[1:, 1:] = p.lam * np.eye(n - 1)
    return T


def imaginary_space(B: AlgebraTable, one=None, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of ``{x : x x in R 1}`` complementing ``R 1``.

    In a quadratic algebra ``x x = 2 t(x) x - n(x) 1``; the imaginary space
    is the kernel of the linear form ``t``, read off from the basis squares.
    """
    if one is None:
        one = identity_element(B)
    one = np.asarray(one, dtype=float)
    u = one / np.linalg.norm(one)
    comp = orthonormal_span(np.eye(B.dim) - np.outer(u, u))
    lifted = []
    for b in comp.T:
        b2 = np.einsum("kij,i,j->k", B.c, b, b)
        basis = np.column_stack([one, b])
        coef, *_ = np.linalg.lstsq(basis, b2, rcond=None)
        if np.linalg.norm(basis @ coef - b2) > tol * max(1.0, np.linalg.norm(b2)):
            raise ValidationError("algebra is not quadratic")
        # t(1) = 1, so b - t(b) 1 lies in ker t
        lifted.append(b - (coef[1] / 2.0) * one)
    return orthonormal_span(np.array(lifted).T)


def is_planar(B: AlgebraTable, T, tol: float = 1e-9, n_samples: int = 200, seed: int = 0) -> bool:
    """Sampled test that ``T`` is invertible, fixes 1 and keeps ``T x`` in ``span{1, x}``."""
    T = np.asarray(T, dtype=float)
    one = identity_element(B)
    if T.shape != (B.dim, B.dim):
        raise ValidationError("T has the wrong shape")
    if abs(np.linalg.det(T)) <= 1e-12:
        return False
    if np.linalg.norm(T @ one - one) >= tol:
        return False
    im = imaginary_space(B, one)
    rng = np.random.default_rng(seed)
    coeffs = np.vstack([np.eye(im.shape[1]), sample_unit(rng, n_samples, im.shape[1])])
    for v in coeffs @ im.T:
        s = np.linalg.svd(np.column_stack([one, v, T @ v]), compute_uv=False)
        if s[2] >= tol * max(1.0, s[0]):
            return False
    return True


def pc_product(kappa: KTuple, a, b) -> np.ndarray:
    """Product of the planar isotope written out in closed form."""
    al, u = a[0], np.asarray(a[1:])
    be, v = b[0], np.asarray(b[1:])
    lam = kappa.lam
    su = kappa.z @ u
    sv = kappa.z @ v
    w = np.cross(u, v)
    real = (al * be + al * sv + be * su + su * sv
            + lam**2 * (np.cross(kappa.x, u) @ v) - lam**2 * (u @ v))
    imag = (lam * (al + su) * v + lam * (be + sv) * u
            + lam**2 * ((eps_matrix(kappa.y) + np.diag(kappa.d)) @ w))
    return np.concatenate([[real], imag])


def build_pc_algebra(kappa: KTuple) -> AlgebraTable:
    """Four-dimensional power-commutative division algebra named by ``kappa``.

    ``e = (1, 0, 0, 0)`` is its omnipresent idempotent.
    """
    if not isinstance(kappa, KTuple):
        raise ValidationError("expected a KTuple")
    return table_from_products(4, lambda a, b: pc_product(kappa, a, b), LABELS)


def dissident_params(kappa: KTuple) -> DissidentParams:
    return DissidentParams(kappa.x, kappa.y, kappa.d)


def planar_params(kappa: KTuple) -> PlanarMapParams:
    return PlanarMapParams(kappa.z, kappa.lam)


def omnipresent_idempotent() -> np.ndarray:
    return np.array([1.0, 0.0, 0.0, 0.0])
