"""Measured quantities and health diagnostics extracted from density matrices.

The named observables an experiment scenario can request:

    pop_0g, pop_1g, pop_0e   bare-state populations
    atomic_ground            sum_n <n,g|rho|n,g>   (ionization-style readout)
    atomic_excited           1 - atomic_ground, computed independently
    photon_number            <a†a>
    excitation_number        <a†a + (sigma_z+1)/2>
    trace_defect, herm_defect, min_eigenvalue    physicality diagnostics
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import DensityMatrix, StateSpace, excitation_number, ladder_operators
from .jcmodel import DressedState

_IMAG_TOL = 1e-12


def _real_diag(value: complex) -> float:
    if abs(value.imag) > _IMAG_TOL:
        raise AssertionError(f"population has imaginary part {value.imag:.3e}")
    return float(value.real)


def population(rho: DensityMatrix, label, space: StateSpace | None = None) -> float:
    """Diagonal matrix element of rho on a bare (n, s) label or a dressed state."""
    m = rho.matrix
    if isinstance(label, DressedState):
        v = label.coefficients
        return _real_diag(complex(v.conj() @ m @ v))
    n, s = label
    if space is None:
        space = StateSpace(m.shape[0] // 2 - 1)
    i = space.index(n, s)
    return _real_diag(complex(m[i, i]))


def atomic_ground_population(rho: DensityMatrix, space: StateSpace | None = None) -> float:
    """Total population of the atomic ground state, summed over photon number."""
    if space is None:
        space = StateSpace(rho.matrix.shape[0] // 2 - 1)
    return sum(population(rho, (n, "g"), space) for n in range(space.n_max + 1))


def atomic_excited_population(rho: DensityMatrix, space: StateSpace | None = None) -> float:
    if space is None:
        space = StateSpace(rho.matrix.shape[0] // 2 - 1)
    return sum(population(rho, (n, "e"), space) for n in range(space.n_max + 1))


def diagnostics(rho: DensityMatrix) -> tuple[float, float, float]:
    """(trace defect, hermiticity defect, min eigenvalue) of the state."""
    return rho.diagnostics()


def _expectation(op: np.ndarray, rho: DensityMatrix) -> float:
    return _real_diag(complex(np.trace(op @ rho.matrix)))


OBSERVABLE_NAMES = (
    "pop_0g",
    "pop_1g",
    "pop_0e",
    "atomic_ground",
    "atomic_excited",
    "photon_number",
    "excitation_number",
    "trace_defect",
    "herm_defect",
    "min_eigenvalue",
)


def evaluate(name: str, rho: DensityMatrix, space: StateSpace) -> float:
    """Evaluate one named observable on a state."""
    if name == "pop_0g":
        return population(rho, (0, "g"), space)
    if name == "pop_1g":
        return population(rho, (1, "g"), space)
    if name == "pop_0e":
        return population(rho, (0, "e"), space)
    if name == "atomic_ground":
        return atomic_ground_population(rho, space)
    if name == "atomic_excited":
        return atomic_excited_population(rho, space)
    if name == "photon_number":
        a, a_dag = ladder_operators(space)
        return _expectation(a_dag @ a, rho)
    if name == "excitation_number":
        return _expectation(excitation_number(space), rho)
    if name in ("trace_defect", "herm_defect", "min_eigenvalue"):
        return diagnostics(rho)[("trace_defect", "herm_defect", "min_eigenvalue").index(name)]
    raise ValueError(f"unknown observable {name!r}")


@dataclass(frozen=True)
class ObservableSet:
    """Validated, ordered selection of observable names."""

    names: tuple[str, ...]

    def __post_init__(self):
        if not self.names:
            raise ValueError("at least one observable must be selected")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate observable names in {self.names}")
        unknown = [n for n in self.names if n not in OBSERVABLE_NAMES]
        if unknown:
            raise ValueError(f"unknown observables {unknown}; valid: {OBSERVABLE_NAMES}")

    def evaluate(self, rho: DensityMatrix, space: StateSpace) -> dict[str, float]:
        return {name: evaluate(name, rho, space) for name in self.names}
