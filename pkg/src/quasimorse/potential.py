"""Morse and quasi-Morse potentials, regime classification, k-rescaling.

The quasi-Morse potential is U(r) = lam * (V(r) - C * V(r/l)) where V is the
radially symmetric solution of the n-dimensional screened Poisson equation
Delta u - k^2 u = delta_0 that vanishes at infinity:

    n = 1:  V(r) = -exp(-k r) / (2 k)
    n = 2:  V(r) = -K0(k r) / (2 pi)
    n = 3:  V(r) = -exp(-k r) / (4 pi r)

The n = 1 normalization carries 1/(2k), which is what the delta_0 source
requires; it satisfies the same scaling law V_k(r) = k^(n-2) V_1(k r) as the
other dimensions.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import specfun
from .errors import SingularPotentialError
from .params import PotentialParams

if TYPE_CHECKING:  # pragma: no cover
    from .steadystate import SteadyState

__all__ = [
    "Regime",
    "fundamental_v",
    "fundamental_dv",
    "quasi_morse_u",
    "quasi_morse_du",
    "morse_u",
    "regime",
    "locate_minimum",
    "fourier_diagnostic",
    "rescale_solution",
]

_TWO_PI = 2.0 * math.pi
_FOUR_PI = 4.0 * math.pi

# relative slack for detecting the exact separatrix C*l^n == 1 in floats
_SEPARATRIX_EPS = 8.0 * np.finfo(float).eps


def _check_radius(r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise ValueError("radius must be strictly positive")
    return r


def _as_input(out, r):
    return float(out) if np.ndim(r) == 0 else out


def fundamental_v(n: int, k: float, r):
    """Screened-Poisson kernel V(r) in dimension n with inverse length k.

    Satisfies the scaling identity V_k(r) = k^(n-2) * V_1(k*r).
    """
    ra = _check_radius(r)
    if n == 1:
        out = -np.exp(-k * ra) / (2.0 * k)
    elif n == 2:
        out = -specfun.k0(k * ra) / _TWO_PI
    elif n == 3:
        out = -np.exp(-k * ra) / (_FOUR_PI * ra)
    else:
        raise ValueError(f"dimension must be 1, 2 or 3, got {n}")
    return _as_input(out, r)


def fundamental_dv(n: int, k: float, r):
    """Radial derivative V'(r) of the screened-Poisson kernel."""
    ra = _check_radius(r)
    if n == 1:
        out = 0.5 * np.exp(-k * ra)
    elif n == 2:
        out = k * specfun.k1(k * ra) / _TWO_PI
    elif n == 3:
        out = np.exp(-k * ra) * (k * ra + 1.0) / (_FOUR_PI * ra * ra)
    else:
        raise ValueError(f"dimension must be 1, 2 or 3, got {n}")
    return _as_input(out, r)


def quasi_morse_u(p: PotentialParams, r):
    """Quasi-Morse potential U(r) = lam * (V(r) - C V(r/l))."""
    ra = _check_radius(r)
    out = p.lam * (fundamental_v(p.n, p.k, ra) - p.C * fundamental_v(p.n, p.k, ra / p.l))
    return _as_input(out, r)


def quasi_morse_du(p: PotentialParams, r):
    """Radial derivative U'(r) of the quasi-Morse potential."""
    ra = _check_radius(r)
    out = p.lam * (fundamental_dv(p.n, p.k, ra)
                   - (p.C / p.l) * fundamental_dv(p.n, p.k, ra / p.l))
    return _as_input(out, r)


def morse_u(C: float, l: float, strength: float, r):
    """Classical Morse potential strength * (-exp(-r) + C exp(-r/l)).

    Finite at r = 0; used for shape comparisons against the quasi-Morse form.
    """
    ra = np.asarray(r, dtype=float)
    if np.any(ra < 0.0):
        raise ValueError("radius must be nonnegative")
    out = strength * (-np.exp(-ra) + C * np.exp(-ra / l))
    return _as_input(out, r)


@dataclass(frozen=True)
class Regime:
    """Classification of a quasi-Morse parameter set.

    A        : structure constant k^2 (C l^n - 1) / (l^2 - C l^n); its sign
               selects the oscillatory (A > 0), polynomial (A = 0) or
               exponential (A < 0) steady-state basis
    a        : sqrt(|A|)
    unique_min   : the potential has a single strict minimum
    catastrophic : the n-dimensional integral of U is negative
    region   : "I", "II", "separatrix" or "not_biological"
    U_integral   : lam * (C l^n - 1) / k^2, the n-dimensional integral of U
    """

    A: float
    a: float
    unique_min: bool
    catastrophic: bool
    region: str
    U_integral: float


def regime(p: PotentialParams) -> Regime:
    """Classify the parameter set and compute the structure constant A."""
    cln = p.C * p.l ** p.n
    cln2 = p.C * p.l ** (p.n - 2)
    l2 = p.l * p.l

    numer = cln - 1.0
    denom = l2 - cln
    on_separatrix = abs(numer) <= _SEPARATRIX_EPS * max(1.0, cln)
    if not on_separatrix and denom == 0.0:
        raise SingularPotentialError(
            "regime constant undefined: l^2 == C*l^n for these parameters")

    A = 0.0 if on_separatrix else p.k * p.k * numer / denom
    biological = p.l < 1.0 and cln2 > 1.0
    if not biological:
        region = "not_biological"
    elif on_separatrix:
        region = "separatrix"
    elif cln < 1.0:
        region = "I"
    else:
        region = "II"

    return Regime(
        A=A,
        a=math.sqrt(abs(A)),
        unique_min=biological,
        catastrophic=numer < 0.0,
        region=region,
        U_integral=p.lam * numer / (p.k * p.k),
    )


def locate_minimum(p: PotentialParams, tol: float = 1e-10) -> float:
    """Radius of the potential minimum, by golden-section search.

    Valid in the unique-minimum regime (l < 1, C l^(n-2) > 1), where U is
    unimodal on (0, infinity); searches the bracket [1e-6, 50/k].
    """
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = 1e-6, 50.0 / p.k
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = quasi_morse_u(p, c), quasi_morse_u(p, d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = quasi_morse_u(p, c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = quasi_morse_u(p, d)
    return 0.5 * (lo + hi)


def fourier_diagnostic(p: PotentialParams, xi):
    """Fourier-side positivity diagnostic of U at the k = 1 normalization.

    Returns (C l^n - 1 + l^2 (C l^(n-2) - 1) |xi|^2) / ((1+|xi|^2)(1+l^2 |xi|^2)),
    which is positive for all xi exactly when C l^n > 1 and C l^(n-2) > 1.
    Positivity indicates (but does not prove) H-stability.
    """
    x2 = np.square(np.asarray(xi, dtype=float))
    cln = p.C * p.l ** p.n
    cln2 = p.C * p.l ** (p.n - 2)
    out = (cln - 1.0 + p.l * p.l * (cln2 - 1.0) * x2) \
        / ((1.0 + x2) * (1.0 + p.l * p.l * x2))
    return _as_input(out, xi)


def rescale_solution(sol: "SteadyState", pattern: str, k_new: float) -> "SteadyState":
    """Map a steady state solved at k = 1 to the potential rescaled to k_new.

    Flocks:  rho_new(x) = k_new^n * rho(k_new x), support radius / k_new.
    Mills:   rho_new(x) = k_new^2 * rho(k_new x), both radii / k_new
             (mills exist only for n = 2, so the factors coincide).
    Unit mass is preserved.  k_new = 1 returns an identical state.
    """
    if k_new <= 0.0:
        raise ValueError("k_new must be strictly positive")
    if pattern not in ("flock", "mill"):
        raise ValueError(f"unknown pattern {pattern!r}")
    if k_new == 1.0:
        return sol

    n = sol.grid.n if hasattr(sol.grid, "n") else 2
    factor = k_new ** n  # equals k_new^2 for (2D) mills

    grid = dataclasses.replace(
        sol.grid,
        r_min=sol.grid.r_min / k_new,
        r_max=sol.grid.r_max / k_new,
        dr=sol.grid.dr / k_new,
        nodes=sol.grid.nodes / k_new,
    )
    gamma = sol.gamma
    if pattern == "mill" and gamma is not None:
        gamma = gamma + sol.alpha_over_beta * math.log(k_new)
    return dataclasses.replace(
        sol,
        support=(sol.support[0] / k_new, sol.support[1] / k_new),
        mu=tuple(factor * m for m in sol.mu),
        gamma=gamma,
        rho=factor * sol.rho,
        grid=grid,
        A=k_new * k_new * sol.A,
    )
