"""Dyadic Littlewood-Paley projector bank on a periodic grid.

The bank is built telescopically from one smooth radial low-pass profile
theta (1 for r <= 1/2, 0 for r >= 1): the mother bump is
psi(r) = theta(r/2) - theta(r), supported in the annulus [1/2, 2], and band
k >= 0 carries the symbol psi(2^-k |xi|).  By telescoping,

    theta(|xi|) + sum_{k=0..K} psi(2^-k |xi|) = theta(2^-(K+1) |xi|),

which equals 1 identically on the grid's frequency lattice once
2^K >= max |xi|; completeness is exact by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bumps import radial_transition
from .grid import Field, Grid, SpectralField, forward_transform, inverse_transform

LOW_PASS_BAND = -1


def low_pass_profile(r) -> np.ndarray:
    """Radial symbol of the low-frequency projector: 1 below 1/2, 0 above 1."""
    return radial_transition(r, 0.5, 1.0)


def mother_bump(r) -> np.ndarray:
    """Radial band profile psi(r) = theta(r/2) - theta(r), supported in [1/2, 2]."""
    r = np.asarray(r, dtype=float)
    return low_pass_profile(r / 2.0) - low_pass_profile(r)


@dataclass(frozen=True)
class LittlewoodPaleyBank:
    """Symbols P_{-1}, P_0, ..., P_{k_max} evaluated on a grid's dual lattice."""

    grid: Grid
    k_max: int

    @classmethod
    def for_grid(cls, grid: Grid) -> "LittlewoodPaleyBank":
        # smallest K with 2^K >= max |xi| closes the telescoped sum exactly
        xi_max = float(np.max(grid.frequency_norm))
        return cls(grid, max(0, math.ceil(math.log2(xi_max))))

    @cached_property
    def _symbols(self) -> dict:
        r = self.grid.frequency_norm
        table = {LOW_PASS_BAND: low_pass_profile(r)}
        for k in range(self.k_max + 1):
            table[k] = mother_bump(r / 2.0**k)
        return table

    @property
    def bands(self) -> list:
        return [LOW_PASS_BAND] + list(range(self.k_max + 1))

    def symbol(self, k: int) -> np.ndarray:
        if k not in self._symbols:
            raise ValueError(f"band {k} out of range [-1, {self.k_max}]")
        return self._symbols[k]

    def project(self, f: Field, k: int) -> Field:
        """Apply the band-k projector; real in, real out."""
        F = forward_transform(f)
        return inverse_transform(SpectralField(self.grid, self.symbol(k) * F.coefficients))

    def project_spectrum(self, F: SpectralField, k: int) -> SpectralField:
        return SpectralField(self.grid, self.symbol(k) * F.coefficients)

    def decompose(self, f: Field) -> dict:
        """All band pieces keyed by k; their sum reproduces f."""
        F = forward_transform(f)
        return {
            k: inverse_transform(self.project_spectrum(F, k)) for k in self.bands
        }

    def completeness_residual(self) -> float:
        """max |1 - sum of all band symbols| over the frequency lattice."""
        total = np.zeros(self.grid.shape)
        for k in self.bands:
            total += self.symbol(k)
        return float(np.max(np.abs(total - 1.0)))

    def band_support_bounds(self, k: int) -> tuple:
        """(lower, upper) radial support bounds of the band-k symbol."""
        if k == LOW_PASS_BAND:
            return (0.0, 1.0)
        return (2.0 ** (k - 1), 2.0 ** (k + 1))
