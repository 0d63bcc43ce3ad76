"""Reservoir spectral densities and the thermally balanced rate function.

A bath is a temperature T (k_B = 1) plus a spectral density J(omega)
defined for omega > 0.  The signed-frequency rate used by the jump-channel
builders is the standard thermal split

    gamma(+omega) = J(omega) (n(omega, T) + 1)      emission
    gamma(-omega) = J(omega)  n(omega, T)           absorption

which satisfies detailed balance gamma(-omega) = exp(-omega/T) gamma(omega)
by construction, and vanishes on the absorption side at T = 0.  The flat
spectrum is white noise; the Ohmic and Lorentzian forms cover structured
reservoirs.  There is no zero-frequency channel: rate() rejects omega = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np


def occupation(omega: float, temperature: float) -> float:
    """Mean thermal quantum number 1/(exp(omega/T) - 1); exactly 0 at T = 0."""
    if omega <= 0:
        raise ValueError(f"occupation needs omega > 0, got {omega}")
    if temperature < 0:
        raise ValueError(f"temperature must be nonnegative, got {temperature}")
    if temperature == 0:
        return 0.0
    # expm1 keeps full relative accuracy for omega << T
    return 1.0 / np.expm1(omega / temperature)


@dataclass(frozen=True)
class FlatSpectrum:
    """White noise: J(omega) = gamma0 for all omega > 0."""

    gamma0: float

    def __post_init__(self):
        if not self.gamma0 > 0:
            raise ValueError(f"gamma0 must be positive, got {self.gamma0}")

    def density(self, omega: float) -> float:
        return self.gamma0


@dataclass(frozen=True)
class OhmicSpectrum:
    """J(omega) = alpha * omega * exp(-omega/cutoff)."""

    alpha: float
    cutoff: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.cutoff > 0:
            raise ValueError(f"cutoff must be positive, got {self.cutoff}")

    def density(self, omega: float) -> float:
        return self.alpha * omega * np.exp(-omega / self.cutoff)


@dataclass(frozen=True)
class LorentzianSpectrum:
    """J(omega) = gamma0 * halfwidth^2 / ((omega - center)^2 + halfwidth^2)."""

    gamma0: float
    center: float
    halfwidth: float

    def __post_init__(self):
        if not self.gamma0 > 0:
            raise ValueError(f"gamma0 must be positive, got {self.gamma0}")
        if not self.center > 0:
            raise ValueError(f"center must be positive, got {self.center}")
        if not self.halfwidth > 0:
            raise ValueError(f"halfwidth must be positive, got {self.halfwidth}")

    def density(self, omega: float) -> float:
        return self.gamma0 * self.halfwidth**2 / ((omega - self.center) ** 2 + self.halfwidth**2)


Spectrum = Union[FlatSpectrum, OhmicSpectrum, LorentzianSpectrum]


@dataclass(frozen=True)
class BathSpec:
    """Reservoir description: temperature plus spectral density."""

    temperature: float
    spectrum: Spectrum

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError(f"temperature must be nonnegative, got {self.temperature}")


def rate(omega: float, bath: BathSpec) -> float:
    """Signed-frequency transition rate gamma(omega) for the given bath.

    Positive frequencies are emission into the bath, negative are thermal
    absorption from it.
    """
    if omega == 0:
        raise ValueError("gamma(0) is undefined: no zero-frequency channel exists")
    w = abs(omega)
    j = bath.spectrum.density(w)
    n = occupation(w, bath.temperature)
    return j * (n + 1.0) if omega > 0 else j * n
