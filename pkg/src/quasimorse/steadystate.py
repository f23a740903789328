"""Steady flock and mill densities: basis reduction, collocation fit, support search.

Applying the two screened-Poisson factors of the quasi-Morse potential to the
steady-state convolution identity turns it into a second-order ODE on the
(unknown) support, so the density is an affine combination of two (flocks) or
three (mills) elementary radial functions selected by the sign of the regime
constant A.  The remaining work is numerical: fit the combination so the
convolution is flat (flocks) or matches the rotation target D + (a/b) log r
(mills) on the support, under nonnegativity and unit mass, then search the
support that minimizes the residual penalty on a coarse lattice and refine
locally on a fine one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import specfun
from .errors import (
    GridTooCoarseError,
    NegativeDensityError,
    NoCompactSolutionError,
    SingularPotentialError,
    SingularSystemError,
    ZeroMassBasisError,
)
from .params import MotionParams, PotentialParams
from .potential import regime
from .radialconv import (
    ConvolutionOperator,
    RadialGrid,
    build_operator,
    make_grid,
    radial_mass,
)

__all__ = [
    "TargetProfile",
    "SteadyState",
    "Flock3DCertificate",
    "basis",
    "mill_inhomogeneity",
    "fit_flock",
    "fit_mill",
    "search_support",
    "flock_radius_3d",
    "deviation_error",
    "convexity_penalty",
]

# fitted densities may dip this far below zero before being rejected
NEGATIVE_SLACK = 1e-9


@dataclass(frozen=True)
class TargetProfile:
    """Right-hand side s(r) of the steady-state identity (W * rho)(r) = s(r).

    Flocks use the constant D; mills add the rotation term (alpha/beta) log r.
    """

    pattern: str
    D: float
    motion: Optional[MotionParams] = None

    def __call__(self, r):
        if self.pattern == "flock":
            return self.D + 0.0 * np.asarray(r, dtype=float)
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0.0):
            raise ValueError("mill target defined for r > 0 only")
        return self.D + (self.motion.alpha / self.motion.beta) * np.log(r)


@dataclass(frozen=True)
class SteadyState:
    """A solved compactly supported steady pattern."""

    pattern: str                      # "flock" or "mill"
    n: int
    support: tuple                    # (R_m, R_M); flocks have R_m == 0
    mu: tuple                         # basis coefficients of the density
    gamma: Optional[float]            # mill free constant D (mass normalization)
    rho: np.ndarray                   # density sampled on grid.nodes
    e: float                          # total penalty
    e1: Optional[float]               # mill flatness part
    e2: Optional[float]               # mill convexity part
    A: float
    grid: RadialGrid
    alpha_over_beta: Optional[float] = None

    @property
    def mass(self) -> float:
        return radial_mass(self.n, self.grid, self.rho)


@dataclass(frozen=True)
class Flock3DCertificate:
    """One root of the 3D flock radius identity with its nullspace coefficients."""

    R: float
    Lambda_Cl: float
    Lambda_11: float
    det: float
    mu: tuple
    valid: bool   # False when the certificate density turns negative


# ---------------------------------------------------------------------------
# basis families
# ---------------------------------------------------------------------------

def _sinc_like(a: float, hyperbolic: bool):
    fn = np.sinh if hyperbolic else np.sin
    lim = a

    def f(r):
        r = np.asarray(r, dtype=float)
        safe = np.where(r > 0.0, r, 1.0)
        return np.where(r > 0.0, fn(a * safe) / safe, lim)
    return f


def basis(p: PotentialParams, pattern: str, A: float) -> Sequence[Callable]:
    """Ordered homogeneous basis functions for the steady-state ODE.

    Flocks get two functions (the constant last), mills three; mills are only
    defined in two dimensions.
    """
    a = math.sqrt(abs(A))
    const = lambda r: np.ones_like(np.asarray(r, dtype=float))
    if pattern == "flock" and p.n == 2:
        if A > 0.0:
            return [lambda r: specfun.j0(a * np.asarray(r, float)), const]
        if A == 0.0:
            return [lambda r: np.square(np.asarray(r, float)), const]
        return [lambda r: specfun.i0(a * np.asarray(r, float)), const]
    if pattern == "flock" and p.n == 3:
        if A > 0.0:
            return [_sinc_like(a, hyperbolic=False), const]
        if A == 0.0:
            return [lambda r: np.square(np.asarray(r, float)), const]
        return [_sinc_like(a, hyperbolic=True), const]
    if pattern == "mill" and p.n == 2:
        if A > 0.0:
            return [lambda r: specfun.j0(a * np.asarray(r, float)),
                    lambda r: specfun.y0(a * np.asarray(r, float)), const]
        if A == 0.0:
            return [lambda r: np.square(np.asarray(r, float)),
                    lambda r: np.log(np.asarray(r, float)), const]
        return [lambda r: specfun.i0(a * np.asarray(r, float)),
                lambda r: specfun.k0(a * np.asarray(r, float)), const]
    raise ValueError(f"unsupported pattern/dimension: {pattern!r}, n={p.n}")


def mill_inhomogeneity(p: PotentialParams, motion: MotionParams) -> Callable:
    """Fixed inhomogeneous part of the 2D mill density.

    For A != 0 this is c * log(r) with c = (alpha/beta) k^4 / (lam A l^2 (1-C));
    the constant particular part is absorbed by the constant basis function.
    For A = 0 it is (alpha/beta) k^4 / (4 lam l^2 (1-C)) * r^2 (log r - 1).
    """
    if p.n != 2:
        raise ValueError("mills are only defined for n = 2")
    if p.C == 1.0:
        raise SingularPotentialError("mill inhomogeneity undefined for C = 1")
    A = regime(p).A
    ab = motion.alpha / motion.beta
    k4 = p.k ** 4
    if A == 0.0:
        c0 = ab * k4 / (4.0 * p.lam * p.l * p.l * (1.0 - p.C))

        def f0(r):
            r = np.asarray(r, dtype=float)
            return c0 * r * r * (np.log(r) - 1.0)
        return f0

    c = ab * k4 / (p.lam * A * p.l * p.l * (1.0 - p.C))

    def f(r):
        return c * np.log(np.asarray(r, dtype=float))
    return f


# ---------------------------------------------------------------------------
# penalties
# ---------------------------------------------------------------------------

def deviation_error(values, grid: RadialGrid) -> float:
    """Mean absolute deviation of sampled values from their own mean.

    (1/L) * int |v - (1/L) int v dr| dr with trapezoidal quadrature.
    """
    v = np.asarray(values, dtype=float)
    if len(v) < 3:
        raise ValueError("need at least 3 samples")
    length = grid.nodes[-1] - grid.nodes[0]
    mean = np.trapezoid(v, dx=grid.dr) / length
    return float(np.trapezoid(np.abs(v - mean), dx=grid.dr) / length)


def convexity_penalty(values, grid: RadialGrid) -> float:
    """Integral of the positive part of the second derivative of the samples.

    Central differences on interior nodes; vanishes when the samples are
    concave (or affine) on the whole support.
    """
    v = np.asarray(values, dtype=float)
    if len(v) < 3:
        raise ValueError("need at least 3 samples")
    d2 = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / (grid.dr * grid.dr)
    return float(np.trapezoid(np.maximum(d2, 0.0), dx=grid.dr))


# ---------------------------------------------------------------------------
# collocation fits on a fixed support
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlockFit:
    e: float
    rho: np.ndarray
    mu: tuple


@dataclass(frozen=True)
class MillFit:
    e: float
    e1: float
    e2: float
    rho: np.ndarray
    mu: tuple
    gamma: float


def _solve_square(m, rhs):
    try:
        sol = np.linalg.solve(m, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from None
    if not np.all(np.isfinite(sol)):
        raise SingularSystemError("collocation system is not finite")
    # reject numerically rank-deficient systems that solve() lets through
    if np.linalg.cond(m) > 1e14:
        raise SingularSystemError("collocation system is rank deficient")
    return sol


def fit_flock(op: ConvolutionOperator, reg) -> FlockFit:
    """Best flock density on the fixed support of the operator.

    Collocates the convolution at the second and last grid nodes, normalizes
    to unit mass, and scores the flatness of H rho over the whole support.
    Raises NegativeDensityError if the normalized density dips below the
    slack, SingularSystemError if the 2x2 collocation system degenerates.
    """
    grid = op.grid
    f_hom = basis(op.params, "flock", reg.A)[0](grid.nodes)
    g1 = op.H @ f_hom
    g2 = op.H @ np.ones(len(grid))
    mat = np.array([[g1[1], g2[1]], [g1[-1], g2[-1]]])
    mu_raw = _solve_square(mat, np.ones(2))

    rho_raw = mu_raw[0] * f_hom + mu_raw[1]
    mass = radial_mass(op.n, grid, rho_raw)
    if abs(mass) < 1e-240:
        raise SingularSystemError("candidate density carries no mass")
    rho = rho_raw / mass
    if rho.min() < -NEGATIVE_SLACK:
        raise NegativeDensityError(f"min density {rho.min():.3e}")
    conv = (g1 * mu_raw[0] + g2 * mu_raw[1]) / mass
    return FlockFit(e=deviation_error(conv, grid), rho=rho,
                    mu=(mu_raw[0] / mass, mu_raw[1] / mass))


def fit_mill(op: ConvolutionOperator, reg, motion: MotionParams) -> MillFit:
    """Best mill density on the fixed annular support of the operator.

    Two collocation solves (rotation remainder and free constant) at the
    second, middle and last nodes; the free constant is then used to
    normalize mass.  The penalty combines flatness of the residual and a
    convexity penalty on the achieved convolution.
    """
    grid = op.grid
    if grid.r_min <= 0.0:
        raise ValueError("mill support must exclude the origin")
    nodes = grid.nodes
    n_loc = len(nodes) - 1
    rows = (1, n_loc // 2, n_loc)

    fs = [f(nodes) for f in basis(op.params, "mill", reg.A)]
    rho_inhom = mill_inhomogeneity(op.params, motion)(nodes)
    gs = [op.H @ f for f in fs]
    s_inhom = op.H @ rho_inhom
    s0 = (motion.alpha / motion.beta) * np.log(nodes)
    s_rem = s0 - s_inhom

    mat = np.array([[g[i] for g in gs] for i in rows])
    rhs = np.stack([np.array([s_rem[i] for i in rows]), np.ones(3)], axis=1)
    sol = _solve_square(mat, rhs)
    mu_rem, mu_const = sol[:, 0], sol[:, 1]

    masses = np.array([radial_mass(2, grid, f) for f in fs])
    m_rem = float(masses @ mu_rem)
    m_const = float(masses @ mu_const)
    m_inhom = radial_mass(2, grid, rho_inhom)
    if abs(m_const) < 1e-12:
        raise ZeroMassBasisError("constant-fit combination has (near) zero mass")
    gamma = (1.0 - m_rem - m_inhom) / m_const

    mu = tuple(mu_rem[i] + gamma * mu_const[i] for i in range(3))
    rho = rho_inhom + sum(mu[i] * fs[i] for i in range(3))
    if rho.min() < -NEGATIVE_SLACK:
        raise NegativeDensityError(f"min density {rho.min():.3e}")

    conv = s_inhom + sum(mu[i] * gs[i] for i in range(3))
    e1 = deviation_error(conv - s0, grid)
    e2 = convexity_penalty(conv, grid)
    return MillFit(e=e1 + e2, e1=e1, e2=e2, rho=rho, mu=mu, gamma=gamma)


# ---------------------------------------------------------------------------
# support search (coarse scan + local refinement)
# ---------------------------------------------------------------------------

def _flock_scan(op: ConvolutionOperator, reg, j_candidates):
    best = None
    for j in j_candidates:
        try:
            fit = fit_flock(op.restrict(0, j), reg)
        except (NegativeDensityError, SingularSystemError, GridTooCoarseError):
            continue
        if best is None or fit.e < best[0]:
            best = (fit.e, j, fit)
    return best


def _mill_scan_coarse(op: ConvolutionOperator, reg, motion: MotionParams):
    """Penalty scan over all annular supports of the coarse grid.

    Cumulative-sum formulation of the trapezoid sums, so each candidate pair
    costs O(span) instead of O(span^2); algebra identical to fit_mill.
    """
    nodes = op.grid.nodes
    dr = op.grid.dr
    ker = op.kernel
    n_nodes = len(nodes)
    fs = [f(nodes[1:]) for f in basis(op.params, "mill", reg.A)]
    fs.append(mill_inhomogeneity(op.params, motion)(nodes[1:]))
    s0 = (motion.alpha / motion.beta) * np.log(nodes[1:])

    kcols = ker[1:, 1:]
    # conv cumsums: conv_b(row; i, j) = dr*(S[row,j]-S[row,i-1]) - dr/2*(edge terms)
    convS = [np.cumsum(kcols * f[None, :], axis=1) for f in fs]
    # mass cumsums: m_b(i, j) = 2 pi (dr*(T[j]-T[i-1]) - dr/2*(edge terms))
    massT = [np.cumsum(f * nodes[1:]) for f in fs]

    two_pi = 2.0 * math.pi
    best = None
    n_local = n_nodes - 1   # number of usable nodes (origin dropped)

    for j in range(3, n_local):
        for i in range(0, j - 2):
            mid = i + (j - i) // 2
            rows = (i + 1, mid, j)
            span = slice(i, j + 1)

            g = np.empty((3, 4))
            for b in range(4):
                s_lo = convS[b][rows, i - 1] if i > 0 else np.zeros(3)
                g[:, b] = dr * (convS[b][rows, j] - s_lo) \
                    - 0.5 * dr * (kcols[rows, i] * fs[b][i] + kcols[rows, j] * fs[b][j])
            m = np.empty(4)
            for b in range(4):
                t_lo = massT[b][i - 1] if i > 0 else 0.0
                m[b] = two_pi * (dr * (massT[b][j] - t_lo)
                                 - 0.5 * dr * (fs[b][i] * nodes[1 + i] + fs[b][j] * nodes[1 + j]))

            mat = g[:, :3]
            rhs_rem = s0[list(rows)] - g[:, 3]
            try:
                sol = np.linalg.solve(mat, np.stack([rhs_rem, np.ones(3)], axis=1))
            except np.linalg.LinAlgError:
                continue
            if not np.all(np.isfinite(sol)):
                continue
            mu_rem, mu_const = sol[:, 0], sol[:, 1]
            m_const = float(m[:3] @ mu_const)
            if abs(m_const) < 1e-12:
                continue
            gamma = (1.0 - float(m[:3] @ mu_rem) - m[3]) / m_const
            mu = mu_rem + gamma * mu_const

            rho = fs[3][span] + mu[0] * fs[0][span] + mu[1] * fs[1][span] + mu[2] * fs[2][span]
            if rho.min() < -NEGATIVE_SLACK:
                continue

            s_lo_full = [convS[b][span, i - 1] if i > 0 else 0.0 for b in range(4)]
            conv_b = [dr * (convS[b][span, j] - s_lo_full[b])
                      - 0.5 * dr * (kcols[span, i] * fs[b][i] + kcols[span, j] * fs[b][j])
                      for b in range(4)]
            conv = conv_b[3] + mu[0] * conv_b[0] + mu[1] * conv_b[1] + mu[2] * conv_b[2]

            resid = conv - s0[span]
            length = nodes[1 + j] - nodes[1 + i]
            mean = np.trapezoid(resid, dx=dr) / length
            e1 = float(np.trapezoid(np.abs(resid - mean), dx=dr) / length)
            d2 = (conv[2:] - 2.0 * conv[1:-1] + conv[:-2]) / (dr * dr)
            e2 = float(np.trapezoid(np.maximum(d2, 0.0), dx=dr))
            e = e1 + e2
            if best is None or e < best[0]:
                best = (e, 1 + i, 1 + j)   # global node indices
    return best


def _steady_state(pattern, p, reg, grid, fit, motion):
    if pattern == "flock":
        return SteadyState(
            pattern="flock", n=p.n, support=(0.0, float(grid.nodes[-1])),
            mu=fit.mu, gamma=None, rho=fit.rho, e=fit.e, e1=None, e2=None,
            A=reg.A, grid=grid)
    return SteadyState(
        pattern="mill", n=p.n, support=(float(grid.nodes[0]), float(grid.nodes[-1])),
        mu=fit.mu, gamma=fit.gamma, rho=fit.rho, e=fit.e, e1=fit.e1, e2=fit.e2,
        A=reg.A, grid=grid, alpha_over_beta=motion.alpha / motion.beta)


def search_support(p: PotentialParams, pattern: str,
                   motion: Optional[MotionParams] = None,
                   dr1: float = 0.0025, dr2: Optional[float] = None,
                   r_max: Optional[float] = None,
                   c: Optional[float] = None) -> SteadyState:
    """Coarse-to-fine search for the penalty-minimizing compact support.

    Scans every candidate support on a coarse lattice of spacing dr2
    (default 10*dr1) up to r_max (default 10/k), then re-scans within a
    window of half-width c (default 3*dr2) around the coarse minimizer at the
    fine spacing dr1.  Raises NoCompactSolutionError when the coarse
    minimizer sits at the scan boundary, which is the no-compact-solution
    signature of the method.
    """
    if pattern not in ("flock", "mill"):
        raise ValueError(f"unknown pattern {pattern!r}")
    if pattern == "mill":
        if motion is None:
            raise ValueError("mill search requires motion parameters")
        if p.n != 2:
            raise ValueError("mills are only defined for n = 2")
    if pattern == "flock" and p.n not in (2, 3):
        raise ValueError("flocks are defined for n = 2 or 3")

    dr2 = 10.0 * dr1 if dr2 is None else dr2
    ratio = dr2 / dr1
    if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
        raise ValueError("dr2 must be a positive integer multiple of dr1")
    r_max = 10.0 / p.k if r_max is None else r_max
    c = 3.0 * dr2 if c is None else c

    reg = regime(p)
    coarse = build_operator(p, make_grid(0.0, r_max, dr2))
    cn = coarse.grid.nodes
    last = len(cn) - 1

    if pattern == "flock":
        best = _flock_scan(coarse, reg, range(3, last + 1))
        if best is None or best[1] >= last - 1:
            raise NoCompactSolutionError(
                "coarse scan minimizer at the boundary (or no admissible support)")
        r_tilde = cn[best[1]]
        fine = build_operator(p, make_grid(0.0, min(r_tilde + c, r_max), dr1))
        fn = fine.grid.nodes
        cands = [j for j in range(3, len(fn)) if abs(fn[j] - r_tilde) <= c + 1e-12]
        best_f = _flock_scan(fine, reg, cands)
        if best_f is None:
            raise NoCompactSolutionError("no admissible support in refinement window")
        sub = fine.restrict(0, best_f[1])
        return _steady_state("flock", p, reg, sub.grid, best_f[2], motion)

    best = _mill_scan_coarse(coarse, reg, motion)
    if best is None or best[2] >= last - 1:
        raise NoCompactSolutionError(
            "coarse scan minimizer at the boundary (or no admissible support)")
    rm_t, rM_t = cn[best[1]], cn[best[2]]
    fine = build_operator(p, make_grid(0.0, min(rM_t + c, r_max), dr1))
    fn = fine.grid.nodes
    i_c = [i for i in range(1, len(fn)) if abs(fn[i] - rm_t) <= c + 1e-12]
    j_c = [j for j in range(1, len(fn)) if abs(fn[j] - rM_t) <= c + 1e-12]
    best_f = None
    for j in j_c:
        for i in i_c:
            if j - i < 3:
                continue
            try:
                fit = fit_mill(fine.restrict(i, j), reg, motion)
            except (NegativeDensityError, SingularSystemError,
                    ZeroMassBasisError, GridTooCoarseError):
                continue
            if best_f is None or fit.e < best_f[0]:
                best_f = (fit.e, i, j, fit)
    if best_f is None:
        raise NoCompactSolutionError("no admissible support in refinement window")
    sub = fine.restrict(best_f[1], best_f[2])
    return _steady_state("mill", p, reg, sub.grid, best_f[3], motion)


# ---------------------------------------------------------------------------
# 3D flocks: explicit radius identity
# ---------------------------------------------------------------------------

def _radius_matrix(p: PotentialParams, a: float, R: float) -> np.ndarray:
    k, l = p.k, p.l
    sin_ra, cos_ra = math.sin(R * a), math.cos(R * a)
    return np.array([
        [k * k * a * l * cos_ra + k ** 3 * sin_ra,
         k * a * a * l * l * R + a * a * l ** 3 + l * k * k + k ** 3 * R],
        [k * k * a * cos_ra + k ** 3 * sin_ra,
         k * a * a * R + a * a + k * k + k ** 3 * R],
    ])


def flock_radius_3d(p: PotentialParams, r_max: Optional[float] = None,
                    subdivisions: int = 128) -> list:
    """All candidate 3D flock radii on (0, r_max] from the tangent identity.

    The support radius R of a 3D flock with A > 0 must satisfy

        tan(R a) = (a/k) (k^3 R - a^2 (l^2 + l + k l R))
                         / (k a^2 R + a^2 (l^2 + l + 1) + k^2),

    equivalently det M(R) = 0 for the 2x2 endpoint-matching matrix M.  Roots
    are bracketed between consecutive poles of tan(R a) and bisected; each
    root yields nullspace coefficients normalized to unit mass.  Candidates
    whose density turns negative are returned with valid=False.
    """
    if p.n != 3:
        raise ValueError("the radius identity applies to 3D flocks only")
    reg = regime(p)
    if reg.A <= 0.0:
        raise ValueError("the radius identity applies to the A > 0 regime only")
    a, k, l = reg.a, p.k, p.l
    r_max = 10.0 / k if r_max is None else r_max

    def rhs(R):
        return (a / k) * (k ** 3 * R - a * a * (l * l + l + k * l * R)) \
            / (k * a * a * R + a * a * (l * l + l + 1.0) + k * k)

    def g(R):
        return math.tan(R * a) - rhs(R)

    poles = [(0.5 * math.pi + m * math.pi) / a for m in range(int(r_max * a / math.pi) + 2)]
    edges = [0.0] + [q for q in poles if q < r_max] + [r_max]

    roots = []
    pad = 1e-9
    for lo, hi in zip(edges[:-1], edges[1:]):
        xs = np.linspace(lo + pad * (hi - lo) + 1e-12, hi - pad * (hi - lo), subdivisions)
        vals = np.array([g(x) for x in xs])
        sign_flip = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
        for idx in sign_flip:
            x0, x1 = xs[idx], xs[idx + 1]
            f0 = g(x0)
            for _ in range(200):
                xm = 0.5 * (x0 + x1)
                fm = g(xm)
                if f0 * fm <= 0.0:
                    x1 = xm
                else:
                    x0, f0 = xm, fm
                if x1 - x0 < 1e-10:
                    break
            roots.append(0.5 * (x0 + x1))

    certificates = []
    for R in sorted(roots):
        m = _radius_matrix(p, a, R)
        row = m[0] if np.linalg.norm(m[0]) >= np.linalg.norm(m[1]) else m[1]
        mu = np.array([-row[1], row[0]])
        mass = 4.0 * math.pi * (mu[0] * (math.sin(a * R) - a * R * math.cos(a * R)) / (a * a)
                                + mu[1] * R ** 3 / 3.0)
        if mass == 0.0:
            continue
        mu = mu / mass
        rr = np.linspace(0.0, R, 2001)
        rho = mu[0] * _sinc_like(a, hyperbolic=False)(rr) + mu[1]
        certificates.append(Flock3DCertificate(
            R=float(R),
            Lambda_Cl=float(m[0] @ mu),
            Lambda_11=float(m[1] @ mu),
            det=float(np.linalg.det(m)),
            mu=(float(mu[0]), float(mu[1])),
            valid=bool(rho.min() >= -NEGATIVE_SLACK),
        ))
    return certificates
