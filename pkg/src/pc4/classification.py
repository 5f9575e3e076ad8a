"""Normal forms of K-tuples under the isotropy groups of ``delta_d``.

Two K-tuples name isomorphic algebras exactly when they share ``d`` and
``lambda`` and their triples ``(x, y, z)`` lie in one orbit of

    G_d = {g in SO(3) : g delta_d g^T = delta_d}.

``G_d`` depends only on the equality pattern of ``d`` (the stratum):

    T1  d1 = d2 = d3   SO(3)
    T2  d1 = d2 < d3   rotations about e3, and the half-turn about e1
    T3  d1 < d2 = d3   rotations about e1, and the half-turn about e3
    T4  d1 < d2 < d3   the diagonal sign matrices of determinant 1

Triples are written as 3x3 matrices whose columns are x, y, z. A pattern
lists, row by row, one symbol per entry: ``P`` positive, ``N`` non-negative,
``0`` zero, ``R`` unconstrained.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial.transform import Rotation

from .core import ValidationError, is_algebra_morphism
from .quadratic import KTuple, build_pc_algebra, validate_diagonal

DEFAULT_TOL = 1e-9


class CanonicalizationDefect(RuntimeError):
    """A canonical triple matched no pattern: the pattern tables are inconsistent."""


# Row-wise transcription; the triple with x = 0 is handled by the *0 lists,
# which extend the same normalisation order (y first, then z) to pairs.
_ROWS = {
    "T1": ["PRR/00N/000", "PRR/0PR/00R"],
    "T2": ["000/00N/PRR", "00R/0PR/PRR", "000/PRR/00N", "00P/PRR/00R",
           "00R/PRR/0PR", "0PR/PRR/0RR", "0RR/PRR/PRR"],
    "T3": ["PRR/00N/000", "PRR/0PR/00R", "00R/00P/PRR", "00N/000/PRR",
           "0PR/00R/PRR", "0RR/0PR/PRR", "PRR/0RR/PRR"],
    "T4": ["PRR/00P/00R", "PRR/000/00N", "PRR/0PR/0RR", "PRR/00R/0PR",
           "00P/PRR/00R", "000/PRR/00N", "0PR/PRR/0RR", "00R/PRR/0PR",
           "00P/00R/PRR", "000/00N/PRR", "0PR/0RR/PRR", "00R/0PR/PRR",
           "0RR/PRR/PRR", "PRR/0RR/PRR", "PRR/PRR/RRR"],
}
_ROWS_X0 = {
    "T1": ["0PR/00N/000", "00N/000/000"],
    "T2": ["00R/0PR/0PR", "00P/0PR/00R", "000/0PR/00N", "000/00N/0PR",
           "000/00P/00N", "000/000/00N"],
    "T3": ["0PR/00R/0PR", "00R/00P/0PR", "00N/000/0PR", "0PR/00N/000",
           "00N/000/00P", "00N/000/000"],
    "T4": ["0PR/0PR/0RR", "0PR/00R/0PR", "00R/0PR/0PR", "0PR/00P/00R",
           "0PR/000/00N", "00P/0PR/00R", "000/0PR/00N", "00P/00R/0PR",
           "000/00N/0PR", "00P/00P/00R", "00P/000/00P", "000/00P/00P",
           "00N/000/000", "000/00P/000", "000/000/00P"],
}


def _rows_to_grid(rows: str) -> np.ndarray:
    grid = np.array([list(r) for r in rows.split("/")])
    if grid.shape != (3, 3):
        raise ValueError(f"bad pattern {rows!r}")
    return grid


def _build_patterns() -> dict:
    out = {}
    for tag in ("T1", "T2", "T3", "T4"):
        n = tag[1]
        pats = [(f"C{n}0.{i + 1}", _rows_to_grid(r)) for i, r in enumerate(_ROWS_X0[tag])]
        pats += [(f"C{n}.{i + 1}", _rows_to_grid(r)) for i, r in enumerate(_ROWS[tag])]
        out[tag] = pats
    return out


PATTERNS = _build_patterns()

_GROUP_NAMES = {
    "T1": "full_SO3",
    "T2": "rot12_plus_flip",
    "T3": "rot23_plus_flip",
    "T4": "four_group",
}

FOUR_GROUP = (
    np.eye(3),
    np.diag([1.0, -1.0, -1.0]),
    np.diag([-1.0, 1.0, -1.0]),
    np.diag([-1.0, -1.0, 1.0]),
)


@dataclass(frozen=True)
class Stratum:
    tag: str
    group_descriptor: str


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    kappa: KTuple
    pattern_id: str
    witness: np.ndarray
    stratum: Stratum

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa.to_dict(),
            "pattern_id": self.pattern_id,
            "stratum": self.stratum.tag,
            "witness": self.witness.tolist(),
        }


@dataclass(frozen=True)
class AutType:
    kind: str  # full_rotation_group | o2_group | circle_group | finite | trivial
    order: Optional[int] = None  # group order when finite

    def to_dict(self) -> dict:
        return {"kind": self.kind, "order": self.order}


# ---------------------------------------------------------------- strata

def stratum(d, tol: float = DEFAULT_TOL) -> Stratum:
    """Equality pattern of ``d``.

    Entries closer than ``tol * max(1, |d|)`` count as equal, so inputs near
    a boundary go to the stratum with the larger isotropy group.
    """
    d = np.asarray(d, dtype=float)
    eps = tol * max(1.0, float(np.linalg.norm(d)))
    d = validate_diagonal(d, tol=eps)
    eq12 = abs(d[1] - d[0]) <= eps
    eq23 = abs(d[2] - d[1]) <= eps
    if eq12 and eq23:
        tag = "T1"
    elif eq12:
        tag = "T2"
    elif eq23:
        tag = "T3"
    else:
        tag = "T4"
    return Stratum(tag, _GROUP_NAMES[tag])


def _check_rotation(g, tol: float) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.shape != (3, 3):
        raise ValidationError("group element must be 3x3")
    if np.abs(g @ g.T - np.eye(3)).max() > tol or abs(np.linalg.det(g) - 1.0) > tol:
        raise ValidationError("group element is not a rotation")
    return g


def isotropy_contains(d, g, tol: float = 1e-10) -> bool:
    g = _check_rotation(g, max(tol, 1e-10))
    D = np.diag(np.asarray(d, dtype=float))
    return bool(np.abs(g @ D @ g.T - D).max() < tol)


def embed_12(R2) -> np.ndarray:
    """2x2 block acting on coordinates 1, 2 (0-based 0, 1); fixes e3."""
    g = np.eye(3)
    g[:2, :2] = R2
    return g


def embed_23(R2) -> np.ndarray:
    """2x2 block acting on coordinates 2, 3 (0-based 1, 2); fixes e1."""
    g = np.eye(3)
    g[1:, 1:] = R2
    return g


def rot2(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def isotropy_sample(d, seed=None, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Random element of the isotropy group of ``delta_d``."""
    rng = np.random.default_rng(seed)
    tag = stratum(d, tol).tag
    if tag == "T1":
        return Rotation.random(random_state=rng).as_matrix()
    if tag == "T4":
        return FOUR_GROUP[int(rng.integers(4))].copy()
    theta = rng.uniform(0.0, 2 * np.pi)
    flip = bool(rng.integers(2))
    if tag == "T2":
        g = embed_12(rot2(theta))
        return g @ embed_23(-np.eye(2)) if flip else g
    g = embed_23(rot2(theta))
    return g @ embed_12(-np.eye(2)) if flip else g


# ---------------------------------------------------------------- patterns

def _matches(M: np.ndarray, grid: np.ndarray, ztol: float) -> bool:
    for r in range(3):
        for c in range(3):
            v, sym = M[r, c], grid[r, c]
            if sym == "0" and abs(v) > ztol:
                return False
            if sym == "P" and v <= ztol:
                return False
            if sym == "N" and v < -ztol:
                return False
    return True


def match_patterns(M, tag: str, tol: float = DEFAULT_TOL) -> list[str]:
    M = np.asarray(M, dtype=float)
    ztol = _zero_tol(M, tol)
    return [pid for pid, grid in PATTERNS[tag] if _matches(M, grid, ztol)]


def _zero_tol(M: np.ndarray, tol: float) -> float:
    return tol * max(1.0, float(np.abs(M).max()))


def in_cross_section(kappa: KTuple, tol: float = DEFAULT_TOL):
    """``(True, pattern_id)`` if the triple is a listed normal form, else ``(False, None)``."""
    hits = match_patterns(kappa.triple, stratum(kappa.d, tol).tag, tol)
    return (True, hits[0]) if hits else (False, None)


# ---------------------------------------------------------------- normalisation

def _plane_rotation(p: int, q: int, vp: float, vq: float, target: int) -> np.ndarray:
    """Rotation in the (p, q) coordinate plane taking ``(vp, vq)`` onto ``+e_target``."""
    phi = np.arctan2(vq, vp)
    theta = -phi if target == p else np.pi / 2 - phi
    c, s = np.cos(theta), np.sin(theta)
    g = np.eye(3)
    g[p, p], g[p, q], g[q, p], g[q, q] = c, -s, s, c
    return g


def _other(axis: int) -> tuple[int, int]:
    return tuple(i for i in range(3) if i != axis)


# Residual stabiliser states. The flip priorities and rotation targets are
# read off the normal-form tables: e.g. in T3, once x = (0, 0, P) only
# diag(-1, -1, 1) is left and the tables fix the sign of coordinate 2 first.
_INITIAL = {
    "T1": ("SO3",),
    "T2": ("O2", 2, 1, np.diag([-1.0, 1.0, -1.0]), (0, 2), np.diag([1.0, -1.0, -1.0]), 1),
    "T3": ("O2", 0, 2, np.diag([-1.0, -1.0, 1.0]), (1, 0), np.diag([-1.0, -1.0, 1.0]), 1),
}


def _normalise(state: tuple, v: np.ndarray, ztol: float):
    kind = state[0]
    eye = np.eye(3)
    if kind == "TRIV":
        return state, eye
    if kind == "SO3":
        if np.linalg.norm(v) <= ztol:
            return state, eye
        g = eye
        if np.hypot(v[1], v[2]) > ztol:
            g = _plane_rotation(1, 2, v[1], v[2], 1)
        w = g @ v
        g = _plane_rotation(0, 1, w[0], w[1], 0) @ g
        return ("SO2", 0, 1), g
    if kind == "SO2":
        _, axis, target = state
        p, q = _other(axis)
        if np.hypot(v[p], v[q]) <= ztol:
            return state, eye
        return ("TRIV",), _plane_rotation(p, q, v[p], v[q], target)
    if kind == "FLIP":
        _, F, priority = state
        for i in priority:
            if abs(v[i]) > ztol:
                return ("TRIV",), (F.copy() if v[i] < 0 else eye)
        return state, eye
    if kind == "O2":
        _, axis, target, F, priority, axis_flip, so2_target = state
        p, q = _other(axis)
        if np.hypot(v[p], v[q]) > ztol:
            g = _plane_rotation(p, q, v[p], v[q], target)
            nxt, h = _normalise(("FLIP", F, priority), g @ v, ztol)
            return nxt, h @ g
        if abs(v[axis]) <= ztol:
            return state, eye
        g = axis_flip.copy() if v[axis] < 0 else eye
        return ("SO2", axis, so2_target), g
    raise AssertionError(kind)


def _snap(M: np.ndarray, ztol: float) -> np.ndarray:
    M = M.copy()
    M[np.abs(M) <= ztol] = 0.0
    return M + 0.0  # no negative zeros


def canonicalize(kappa: KTuple, tol: float = DEFAULT_TOL) -> CanonicalForm:
    """Representative of the isomorphism class of ``kappa`` in the cross-section.

    T1-T3 are normalised greedily: each of x, y, z in turn is moved as far as
    the residual stabiliser of the previous vectors allows. T4 tries all four
    group elements and keeps the image that matches a normal form (the
    lexicographically largest one if several do).
    """
    st = stratum(kappa.d, tol)
    M = kappa.triple
    ztol = _zero_tol(M, tol)
    if st.tag == "T4":
        best = None
        for g in FOUR_GROUP:
            img = _snap(g @ M, ztol)
            hits = match_patterns(img, "T4", tol)
            if not hits:
                continue
            key = tuple(img.T.ravel())
            if best is None or key > best[0]:
                best = (key, g.copy(), img, hits[0])
        if best is None:
            raise CanonicalizationDefect(f"no four-group image of {kappa!r} is a normal form")
        _, g, img, pid = best
    else:
        state = _INITIAL[st.tag]
        g = np.eye(3)
        for col in range(3):
            state, h = _normalise(state, (g @ M)[:, col], ztol)
            g = h @ g
        img = _snap(g @ M, ztol)
        hits = match_patterns(img, st.tag, tol)
        if not hits:
            raise CanonicalizationDefect(f"canonical triple {img.tolist()} matches no {st.tag} pattern")
        pid = hits[0]
    return CanonicalForm(kappa.with_triple(img), pid, g, st)


def are_isomorphic(kappa: KTuple, other: KTuple, tol: float = 1e-8) -> Optional[np.ndarray]:
    """A rotation ``g`` with ``g . kappa = other`` (an isomorphism), or ``None``."""
    if abs(kappa.lam - other.lam) > 1e-12:
        return None
    scale = max(1.0, float(np.abs(kappa.d).max()), float(np.abs(other.d).max()))
    if np.abs(kappa.d - other.d).max() > tol * scale:
        return None
    st = stratum(kappa.d)
    M, M2 = kappa.triple, other.triple
    mtol = tol * max(1.0, float(np.abs(M).max()), float(np.abs(M2).max()))
    if st.tag == "T4":
        for g in FOUR_GROUP:
            if np.abs(g @ M - M2).max() <= mtol:
                return g.copy()
        return None
    c1, c2 = canonicalize(kappa), canonicalize(other)
    if np.abs(c1.kappa.triple - c2.kappa.triple).max() > mtol:
        return None
    g = c2.witness.T @ c1.witness
    if np.abs(g @ M - M2).max() > 10 * mtol:
        return None
    return g


def aut_classification(kappa: KTuple, tol: float = DEFAULT_TOL) -> AutType:
    """Isomorphism type of the stabiliser of ``(x, y, z)`` in ``G_d``."""
    tag = stratum(kappa.d, tol).tag
    M = kappa.triple
    ztol = _zero_tol(M, tol)
    s = np.linalg.svd(M, compute_uv=False)
    rank = int(np.sum(s > ztol))
    if tag == "T1":
        if rank == 0:
            return AutType("full_rotation_group")
        return AutType("circle_group") if rank == 1 else AutType("trivial", 1)
    if tag == "T4":
        k = sum(1 for g in FOUR_GROUP if np.abs(g @ M - M).max() <= ztol)
        return AutType("trivial", 1) if k == 1 else AutType("finite", k)
    axis = 2 if tag == "T2" else 0
    p, q = _other(axis)
    if rank == 0:
        return AutType("o2_group")
    if np.abs(M[[p, q], :]).max() <= ztol:
        # everything on the rotation axis
        return AutType("circle_group")
    if rank == 1 and np.abs(M[axis, :]).max() <= ztol:
        # a common line in the plane orthogonal to the axis: one half-turn
        return AutType("finite", 2)
    return AutType("trivial", 1)


@dataclass(frozen=True, eq=False)
class Classification:
    canonical: CanonicalForm
    table: object
    morphism_residual: float


def classify_algebra(kappa: KTuple, tol: float = 1e-9) -> Classification:
    """Canonical form plus its algebra; ``1 x witness`` is checked to be an isomorphism."""
    cf = canonicalize(kappa)
    table = build_pc_algebra(cf.kappa)
    phi = np.eye(4)
    phi[1:, 1:] = cf.witness
    ok, res = is_algebra_morphism(build_pc_algebra(kappa), table, phi, tol * max(1.0, np.abs(table.c).max()))
    if not ok:
        raise CanonicalizationDefect(f"witness does not induce an isomorphism (residual {res:.3e})")
    return Classification(cf, table, res)
