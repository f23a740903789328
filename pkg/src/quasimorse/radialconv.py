"""Radial convolution kernel and its discretized operator.

Convolving a radial density with the radial potential W(x) = U(|x|) reduces to
a one-dimensional integral with kernel

    Psi(r, s) = s^(n-1) * integral of U(|r e1 - s omega|) over the unit sphere.

For the quasi-Morse potential this angular integral has a closed form in both
supported dimensions, because the screened-Poisson kernel separates over
circles and spheres:

    n = 2:  int_0^2pi K0(q sqrt(r^2+s^2-2 r s cos t)) dt = 2 pi I0(q r<) K0(q r>)
    n = 3:  the spherical average of exp(-q d)/d telescopes to
            2 exp(-q r>) sinh(q r<) / (q r s)

with r< = min(r, s), r> = max(r, s).  The closed forms are exact, fast to
vectorize, and numerically stable at the diagonal r = s (where the kernel is
continuous with only a derivative kink); the brute-force angular quadrature of
the defining integral survives in the test suite as the independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .errors import GridTooCoarseError
from .params import PotentialParams

__all__ = ["RadialGrid", "ConvolutionOperator", "make_grid", "psi_kernel",
           "build_operator", "radial_mass"]

_OMEGA = {2: 2.0 * np.pi, 3: 4.0 * np.pi}


@dataclass(frozen=True)
class RadialGrid:
    """Equidistant radial nodes r_min, r_min + dr, ..., r_max."""

    r_min: float
    r_max: float
    dr: float
    nodes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.r_min < 0.0 or self.r_max <= self.r_min or self.dr <= 0.0:
            raise ValueError("need 0 <= r_min < r_max and dr > 0")
        gaps = np.diff(self.nodes)
        if np.any(gaps <= 0.0) or np.max(np.abs(gaps - self.dr)) > 1e-12:
            raise ValueError("grid nodes must be uniform to 1e-12")

    def __len__(self):
        return len(self.nodes)

    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(len(self.nodes), self.dr)
        w[0] = w[-1] = 0.5 * self.dr
        return w


def make_grid(r_min: float, r_max: float, dr: float) -> RadialGrid:
    """Build the equidistant grid covering [r_min, r_max] with spacing dr."""
    count = int(round((r_max - r_min) / dr))
    nodes = r_min + dr * np.arange(count + 1)
    return RadialGrid(r_min=r_min, r_max=float(nodes[-1]), dr=dr, nodes=nodes)


def _psi_values(p: PotentialParams, r, s):
    """Kernel values for r, s >= 0 (limits applied on the axes)."""
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    r, s = np.broadcast_arrays(r, s)
    out = np.zeros(r.shape)
    interior = s > 0.0
    rr, ss = r[interior], s[interior]
    lo = np.minimum(rr, ss)
    hi = np.maximum(rr, ss)
    k, kl = p.k, p.k / p.l

    if p.n == 2:
        attract = specfun.i0(k * lo) * specfun.k0(k * hi)
        repel = specfun.i0(kl * lo) * specfun.k0(kl * hi)
        out[interior] = p.lam * ss * (p.C * repel - attract)
    elif p.n == 3:
        cl2 = p.C * p.l * p.l
        at_axis = rr == 0.0
        general = (p.lam * ss / (np.where(at_axis, 1.0, rr) * k)) * (
            cl2 * np.exp(-kl * hi) * np.sinh(kl * lo)
            - np.exp(-k * hi) * np.sinh(k * lo))
        limit = p.lam * ss * (p.C * p.l * np.exp(-kl * ss) - np.exp(-k * ss))
        out[interior] = np.where(at_axis, limit, general)
    else:
        raise ValueError("convolution kernel defined for n = 2 or 3 only")
    return out


def psi_kernel(p: PotentialParams, r, s):
    """Radial convolution kernel Psi(r, s) of the quasi-Morse potential.

    Requires r, s > 0 and n in {2, 3}; satisfies the symmetry
    r^(n-1) Psi(r, s) = s^(n-1) Psi(s, r).
    """
    ra = np.asarray(r, dtype=float)
    sa = np.asarray(s, dtype=float)
    if np.any(ra <= 0.0) or np.any(sa <= 0.0):
        raise ValueError("kernel arguments must be strictly positive")
    out = _psi_values(p, ra, sa)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class ConvolutionOperator:
    """Dense discretization H of the radial convolution on a grid.

    (H @ rho)[i] approximates the convolution (W * rho)(r_i) for a density
    sampled on the grid and supported on [r_min, r_max], using composite
    trapezoidal weights.  The unweighted kernel samples are kept so that
    operators for sub-supports can be sliced out without re-evaluating the
    kernel (the expensive part is computed once for the largest support).
    """

    grid: RadialGrid
    H: np.ndarray = field(repr=False)
    n: int
    params: PotentialParams
    kernel: np.ndarray = field(repr=False)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return self.H @ rho

    def restrict(self, i_lo: int, i_hi: int) -> "ConvolutionOperator":
        """Operator for the sub-support [nodes[i_lo], nodes[i_hi]]."""
        if i_hi - i_lo < 3:
            raise GridTooCoarseError("sub-support has fewer than 4 nodes")
        nodes = self.grid.nodes[i_lo:i_hi + 1]
        sub = RadialGrid(r_min=float(nodes[0]), r_max=float(nodes[-1]),
                         dr=self.grid.dr, nodes=nodes)
        ker = self.kernel[i_lo:i_hi + 1, i_lo:i_hi + 1]
        return ConvolutionOperator(grid=sub, H=ker * sub.trapezoid_weights(),
                                   n=self.n, params=self.params, kernel=ker)


def build_operator(p: PotentialParams, grid: RadialGrid) -> ConvolutionOperator:
    """Assemble the dense convolution operator for a support grid."""
    if len(grid) < 4:
        raise GridTooCoarseError("grid has fewer than 4 nodes")
    ker = _psi_values(p, grid.nodes[:, None], grid.nodes[None, :])
    return ConvolutionOperator(grid=grid, H=ker * grid.trapezoid_weights(),
                               n=p.n, params=p, kernel=ker)


def radial_mass(n: int, grid: RadialGrid, rho: np.ndarray) -> float:
    """Total mass of a radial density: omega_n * int rho(r) r^(n-1) dr."""
    if n not in _OMEGA:
        raise ValueError("mass quadrature defined for n = 2 or 3 only")
    return float(_OMEGA[n] * np.trapezoid(rho * grid.nodes ** (n - 1), dx=grid.dr))
