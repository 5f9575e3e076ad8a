"""Closed-form idempotents of planar isotopes, plane by plane.

Every non-zero idempotent of ``A = B_T`` lies in a plane ``span{1, v}`` with
``v`` imaginary, ``v v = -1``. Writing ``w = alpha 1 + beta v`` and
``s = sigma(v)``, ``w o w = w`` becomes

    alpha = (alpha + s beta)^2 - (lam beta)^2
    beta  = 2 lam beta (alpha + s beta)

and for ``beta != 0`` this reduces to ``(lam beta - L s)^2 = (s^2 + 1) L^2 - L``
with ``L = 1 / (2 lam)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import IdempotentCensus, ValidationError, find_idempotents_newton
from .core import dedupe_points
from .quadratic import KTuple, build_pc_algebra, omnipresent_idempotent

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class PlaneIdempotentResult:
    s: float
    lam: float
    discriminant: float
    extra_solutions: tuple  # ((alpha, beta), ...), beta != 0
    multiplicity: str  # "none" | "simple_pair" | "double_root"

    @property
    def count(self) -> int:
        """Non-zero idempotents in the plane, the identity included."""
        return 1 + len(self.extra_solutions)


@dataclass(frozen=True)
class UniquenessVerdict:
    S: float
    lam: float
    unique: bool
    branch: str  # "strict_inequality" | "boundary_S0" | "not_unique"

    def to_dict(self) -> dict:
        return {"S": self.S, "lambda": self.lam, "unique": self.unique, "branch": self.branch}


def sigma_sup(z) -> float:
    """Largest value of ``sigma`` on ``{x : x x = -1}``, i.e. ``|z|``.

    Squares equal to ``-1`` are exactly the unit imaginary vectors, so the
    maximum of ``<z, v>`` over them is the Euclidean norm of ``z``.
    """
    return float(np.linalg.norm(np.asarray(z, dtype=float)))


def plane_equations_residual(s: float, lam: float, alpha: float, beta: float) -> float:
    r1 = alpha - ((alpha + s * beta) ** 2 - (lam * beta) ** 2)
    r2 = beta - 2 * lam * beta * (alpha + s * beta)
    return float(max(abs(r1), abs(r2)))


def solve_plane_idempotents(s: float, lam: float) -> PlaneIdempotentResult:
    s = float(s)
    lam = float(lam)
    if lam == 0.0:
        raise ValidationError("lambda is zero")
    L = 1.0 / (2.0 * lam)
    D = (s * s + 1.0) * L * L - L
    if abs(D) <= BOUNDARY_TOL * max(1.0, L * L):
        beta = L * s / lam
        sols = () if abs(beta) <= BOUNDARY_TOL else ((L - s * beta, beta),)
        return PlaneIdempotentResult(s, lam, D, sols, "double_root")
    if D < 0:
        return PlaneIdempotentResult(s, lam, D, (), "none")
    r = np.sqrt(D)
    sols = []
    for beta in ((L * s + r) / lam, (L * s - r) / lam):
        # beta = 0 is the identity itself
        if abs(beta) > BOUNDARY_TOL * max(1.0, abs(L * s / lam)):
            sols.append((L - s * beta, beta))
    return PlaneIdempotentResult(s, lam, D, tuple(sols), "simple_pair")


def has_unique_idempotent(z, lam: float) -> UniquenessVerdict:
    lam = float(lam)
    if lam == 0.0:
        raise ValidationError("lambda is zero")
    S = sigma_sup(z)
    if lam - (S * S + 1.0) / 2.0 > BOUNDARY_TOL:
        return UniquenessVerdict(S, lam, True, "strict_inequality")
    if S <= BOUNDARY_TOL and abs(lam - 0.5) <= BOUNDARY_TOL:
        return UniquenessVerdict(S, lam, True, "boundary_S0")
    return UniquenessVerdict(S, lam, False, "not_unique")


def fibonacci_hemisphere(n: int) -> np.ndarray:
    """Roughly uniform unit vectors on the upper half-sphere (``v3 >= 0``)."""
    i = np.arange(n) + 0.5
    h = i / n
    phi = np.pi * (1 + 5 ** 0.5) * i
    r = np.sqrt(1 - h * h)
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), h])


def analytic_idempotents(kappa: KTuple, directions: np.ndarray, dedupe_radius: float = 1e-6):
    """Idempotents from the plane equations over the given imaginary directions.

    Returns ``(points, continuum)`` where ``continuum`` is decided from the
    discriminant at ``s = S``: a positive value there means an open cap of
    directions carries extra idempotents.
    """
    e = omnipresent_idempotent()
    pts = [e]
    for v in directions:
        v = v / np.linalg.norm(v)
        s = float(kappa.z @ v)
        if s < 0:
            v, s = -v, -s
        for alpha, beta in solve_plane_idempotents(s, kappa.lam).extra_solutions:
            pts.append(np.concatenate([[alpha], beta * v]))
    S = sigma_sup(kappa.z)
    top = solve_plane_idempotents(S, kappa.lam)
    continuum = top.multiplicity == "simple_pair" and len(top.extra_solutions) > 0
    return dedupe_points(np.array(pts), dedupe_radius), bool(continuum)


@dataclass(frozen=True, eq=False)
class CensusReport:
    analytic: np.ndarray
    analytic_continuum: bool
    newton: IdempotentCensus
    max_newton_residual: float  # worst plane-equation residual of a Newton root
    max_match_distance: float  # discrete case: analytic <-> Newton distance
    agree: bool
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "analytic_count": int(self.analytic.shape[0]),
            "analytic_continuum": self.analytic_continuum,
            "analytic_idempotents": self.analytic.tolist() if not self.analytic_continuum else None,
            "newton_count": len(self.newton),
            "newton_curve_flag": self.newton.curve_flag,
            "newton_idempotents": self.newton.roots.tolist() if not self.newton.curve_flag else None,
            "max_newton_residual": self.max_newton_residual,
            "max_match_distance": self.max_match_distance,
            "agree": self.agree,
        }


def root_to_plane(kappa: KTuple, w) -> tuple[float, float, float]:
    """Express ``w`` as ``alpha 1 + beta v`` with ``s = sigma(v) >= 0``; returns ``(s, alpha, beta)``."""
    w = np.asarray(w, dtype=float)
    u = w[1:]
    beta = float(np.linalg.norm(u))
    if beta == 0.0:
        return 0.0, float(w[0]), 0.0
    v = u / beta
    s = float(kappa.z @ v)
    if s < 0:
        s, beta = -s, -beta
    return s, float(w[0]), beta


def global_idempotent_census(
    kappa: KTuple,
    sphere_grid: int = 2000,
    tol: float = 1e-8,
    *,
    grid_density: int = 7,
    seed: int = 0,
) -> CensusReport:
    """Compare the closed-form idempotents with a Newton census of the algebra."""
    dirs = fibonacci_hemisphere(sphere_grid)
    nz = np.linalg.norm(kappa.z)
    if nz > 0:
        # the extremal plane s = S is where boundary double roots live
        dirs = np.vstack([kappa.z / nz, dirs])
    analytic, continuum = analytic_idempotents(kappa, dirs)
    newton = find_idempotents_newton(build_pc_algebra(kappa), grid_density=grid_density, seed=seed)

    residuals = [plane_equations_residual(s, kappa.lam, a, b)
                 for s, a, b in (root_to_plane(kappa, w) for w in newton.roots)]
    max_res = float(max(residuals, default=0.0))
    notes = []
    if continuum != newton.curve_flag:
        notes.append("continuum flags differ")
    match = 0.0
    if not continuum and not newton.curve_flag:
        if analytic.shape[0] != len(newton):
            notes.append(f"counts differ: {analytic.shape[0]} analytic vs {len(newton)} Newton")
            match = float("inf")
        else:
            for p in analytic:
                match = max(match, float(np.min(np.linalg.norm(newton.roots - p, axis=1))))
            for q in newton.roots:
                match = max(match, float(np.min(np.linalg.norm(analytic - q, axis=1))))
        if match > tol:
            notes.append(f"idempotent positions differ by {match:.3e}")
    # scale the residual test with the size of the roots
    big = max([1.0] + [float(np.linalg.norm(w)) ** 2 for w in newton.roots])
    if max_res > tol * big:
        notes.append(f"Newton root off the plane equations by {max_res:.3e}")
    return CensusReport(analytic, continuum, newton, max_res, match, not notes, notes)
