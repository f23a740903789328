"""Parameter records shared across the toolkit."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PotentialParams:
    """Shape parameters of an n-dimensional quasi-Morse potential.

    n    : space dimension, 1, 2 or 3
    C    : repulsion-to-attraction strength ratio
    l    : repulsion-to-attraction length-scale ratio
    k    : inverse length scale of the screened-Poisson kernel
    lam  : overall strength factor
    """

    n: int
    C: float
    l: float
    k: float = 1.0
    lam: float = 1.0

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.n}")
        for name in ("C", "l", "k", "lam"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class MotionParams:
    """Self-propulsion/friction pair; the balance fixes the cruise speed."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha <= 0.0 or self.beta <= 0.0:
            raise ValueError("alpha and beta must be strictly positive")

    @property
    def cruise_speed(self) -> float:
        return math.sqrt(self.alpha / self.beta)
