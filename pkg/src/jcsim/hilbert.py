"""Truncated atom-cavity Hilbert space and the elementary operators on it.

The space is the tensor product of a Fock ladder truncated at ``n_max``
photons and a two-level atom with states ``g`` (ground) and ``e``
(excited).  The basis ordering is frozen to ``i = 2*n + s`` with
``s(g) = 0`` and ``s(e) = 1``, so every file output and vectorized
superoperator built on top of this module is bit-reproducible.

Operators are plain dense complex ``numpy`` arrays of shape
``(dim, dim)``; the builders below are the only way they are created,
which keeps them square and attached to a single space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ATOM_LABELS = ("g", "e")


@dataclass(frozen=True)
class StateSpace:
    """Truncated Fock ⊗ qubit product space with a frozen index map."""

    n_max: int

    def __post_init__(self):
        if not isinstance(self.n_max, (int, np.integer)) or self.n_max < 0:
            raise ValueError(f"n_max must be a nonnegative integer, got {self.n_max!r}")

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)

    def index(self, n: int, s: str) -> int:
        """Flat index of the basis state with n photons and atom state s."""
        if s not in ATOM_LABELS:
            raise ValueError(f"atom label must be 'g' or 'e', got {s!r}")
        if not 0 <= n <= self.n_max:
            raise ValueError(f"photon number {n} outside [0, {self.n_max}]")
        return 2 * n + ATOM_LABELS.index(s)

    def label(self, i: int) -> tuple[int, str]:
        """Inverse of :meth:`index`."""
        if not 0 <= i < self.dim:
            raise ValueError(f"index {i} outside [0, {self.dim})")
        return i // 2, ATOM_LABELS[i % 2]

    def basis_state(self, n: int, s: str) -> np.ndarray:
        """Unit column vector for the bare basis state ``|n, s>``."""
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(n, s)] = 1.0
        return v


def build_space(n_max: int) -> StateSpace:
    """Build the truncated space with photon cutoff ``n_max`` (dim = 2(n_max+1))."""
    return StateSpace(n_max)


def ladder_operators(space: StateSpace) -> tuple[np.ndarray, np.ndarray]:
    """Photon annihilation/creation pair (a, a_dag) on the truncated space.

    The cutoff is hard: ``a_dag`` maps the top Fock level to the zero
    vector, so both operators are endomorphisms of the same space.
    """
    dim = space.dim
    a = np.zeros((dim, dim), dtype=complex)
    for n in range(1, space.n_max + 1):
        for s in ATOM_LABELS:
            a[space.index(n - 1, s), space.index(n, s)] = np.sqrt(n)
    return a, a.conj().T


def atomic_operators(space: StateSpace) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Atomic operators (sigma_minus, sigma_plus, sigma_z), identity on the mode."""
    dim = space.dim
    sm = np.zeros((dim, dim), dtype=complex)
    sz = np.zeros((dim, dim), dtype=complex)
    for n in range(space.n_max + 1):
        ig, ie = space.index(n, "g"), space.index(n, "e")
        sm[ig, ie] = 1.0
        sz[ie, ie] = 1.0
        sz[ig, ig] = -1.0
    return sm, sm.conj().T, sz


def excitation_number(space: StateSpace) -> np.ndarray:
    """Total excitation operator a†a + (sigma_z + 1)/2.

    Diagonal in the bare basis with integer eigenvalue n + s; it commutes
    with the resonant Hamiltonian, which is what makes the dressed
    manifolds well defined.
    """
    a, a_dag = ladder_operators(space)
    _, _, sz = atomic_operators(space)
    return a_dag @ a + (sz + np.eye(space.dim)) / 2.0


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator with testable slack.

    The tolerances are part of the value: :meth:`validate` raises as soon
    as one of the three defects exceeds its bound, and :meth:`diagnostics`
    returns the measured defects for reporting.
    """

    matrix: np.ndarray
    tol_herm: float = 1e-8
    tol_trace: float = 1e-8
    tol_pos: float = 1e-8

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def diagnostics(self) -> tuple[float, float, float]:
        """(trace defect, hermiticity defect, min eigenvalue)."""
        trace_defect = abs(self.matrix.trace() - 1.0)
        herm_defect = np.abs(self.matrix - self.matrix.conj().T).max()
        min_eig = float(np.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2.0)[0])
        return float(trace_defect), float(herm_defect), min_eig

    def validate(self) -> "DensityMatrix":
        trace_defect, herm_defect, min_eig = self.diagnostics()
        if herm_defect > self.tol_herm:
            raise ValueError(f"hermiticity defect {herm_defect:.3e} > {self.tol_herm:.3e}")
        if trace_defect > self.tol_trace:
            raise ValueError(f"trace defect {trace_defect:.3e} > {self.tol_trace:.3e}")
        if min_eig < -self.tol_pos:
            raise ValueError(f"min eigenvalue {min_eig:.3e} < -{self.tol_pos:.3e}")
        return self


def pure_state(vector: np.ndarray, **tolerances) -> DensityMatrix:
    """Projector |v><v| onto a (normalized) state vector."""
    v = np.asarray(vector, dtype=complex)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("cannot build a density matrix from the zero vector")
    v = v / norm
    return DensityMatrix(np.outer(v, v.conj()), **tolerances)
