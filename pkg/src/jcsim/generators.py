"""Builders for the Liouvillian superoperators of the lossy atom-cavity system.

Three generators share the commutator part -i[H, .] and differ in their
dissipators:

* ``phenomenological_generator`` damps the bare cavity mode with jump
  operators a and a† at thermally split rates;
* ``microscopic_generator`` expands the cavity quadrature a + a† over the
  Bohr frequencies of the dressed spectrum and attaches a bath rate to
  every jump channel, so it is the atom-cavity eigenstates that decay;
* ``dressed_approx_generator`` is the secular projection of the
  phenomenological generator in the dressed basis, the standard
  weak-damping approximation that the microscopic construction reproduces
  for a flat zero-temperature bath.

Superoperators are dense (dim^2 x dim^2) matrices acting on column-major
vectorized operators: vec(A X B) = (B^T kron A) vec(X).  The vectorization
order is frozen; every matrix literal in the tests relies on it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bath import BathSpec, rate
from .hilbert import StateSpace, ladder_operators
from .jcmodel import DressedState, JCParams, complete_eigensystem, hamiltonian


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-major (Fortran) vectorization of an operator."""
    return np.asarray(matrix, dtype=complex).reshape(-1, order="F")


def unvec(vector: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return np.asarray(vector, dtype=complex).reshape((dim, dim), order="F")


@dataclass(frozen=True)
class JumpChannel:
    """One Bohr-frequency-resolved jump: operator plus nonnegative rate."""

    bohr_frequency: float
    operator: np.ndarray
    rate: float

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError(f"jump rate must be nonnegative, got {self.rate}")


@dataclass(frozen=True)
class Superoperator:
    """Dense Liouvillian matrix on column-major vectorized operators."""

    matrix: np.ndarray
    space: StateSpace | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"superoperator matrix must be square, got {m.shape}")
        d = int(round(np.sqrt(m.shape[0])))
        if d * d != m.shape[0]:
            raise ValueError(f"superoperator size {m.shape[0]} is not a perfect square")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return int(round(np.sqrt(self.matrix.shape[0])))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Action on an operator: unvec(matrix @ vec(rho))."""
        return unvec(self.matrix @ vec(rho), self.dim)


def commutator_superoperator(h: np.ndarray) -> np.ndarray:
    """Matrix of rho -> -i [h, rho]."""
    idm = np.eye(h.shape[0], dtype=complex)
    return -1j * (np.kron(idm, h) - np.kron(h.T, idm))


def dissipator_superoperator(a: np.ndarray) -> np.ndarray:
    """Matrix of the unit-rate dissipator rho -> a rho a† - (1/2){a†a, rho}."""
    idm = np.eye(a.shape[0], dtype=complex)
    ada = a.conj().T @ a
    return np.kron(a.conj(), a) - 0.5 * np.kron(idm, ada) - 0.5 * np.kron(ada.T, idm)


def _dissipator_sum(operators: list[np.ndarray], rates: list[float]) -> np.ndarray:
    """sum_c rate_c * dissipator(op_c), assembled with one batched contraction.

    Equivalent to summing :func:`dissipator_superoperator` terms but avoids
    the per-channel dim^2 Kronecker products, which dominate the build time
    once the manifold count grows.
    """
    stack = np.array(operators, dtype=complex)
    g = np.asarray(rates, dtype=float)
    d = stack.shape[1]
    sandwich = np.einsum(
        "c,cij,ckl->ikjl", g, stack.conj(), stack, optimize=True
    ).reshape(d * d, d * d)
    weighted_ada = np.einsum("c,cij->ij", g, np.transpose(stack.conj(), (0, 2, 1)) @ stack)
    idm = np.eye(d, dtype=complex)
    return sandwich - 0.5 * np.kron(idm, weighted_ada) - 0.5 * np.kron(weighted_ada.T, idm)


def eigenoperators(
    a: np.ndarray,
    eigensystem: list[DressedState],
    freq_tol: float,
) -> list[tuple[float, np.ndarray]]:
    """Bohr-frequency decomposition of a coupling operator.

    Sandwiches ``a`` between eigenprojectors of the provided (orthonormal)
    eigensystem and groups the pieces by transition frequency (the energy
    lost to the bath in the jump), merging frequencies closer than
    ``freq_tol``.  Returns (omega, operator) channel skeletons sorted by
    frequency; rates are attached by the generator builders.

    The channels satisfy sum_omega A(omega) = P a P with P the projector
    onto the spanned subspace, and A(-omega) = A(omega)†.
    """
    if not freq_tol > 0:
        raise ValueError(f"freq_tol must be positive, got {freq_tol}")
    if not eigensystem:
        raise ValueError("empty eigensystem")
    v = np.column_stack([st.coefficients for st in eigensystem])
    gram = v.conj().T @ v
    ortho_defect = np.abs(gram - np.eye(v.shape[1])).max()
    if ortho_defect > 1e-10:
        raise ValueError(f"eigensystem is not orthonormal (defect {ortho_defect:.3e})")
    energies = np.array([st.energy for st in eigensystem])

    a_eig = v.conj().T @ a @ v  # matrix elements in the eigenbasis
    cut = 1e-13 * max(np.abs(a_eig).max(), 1e-300)
    entries = []  # (omega, row p, col q)
    for p in range(len(eigensystem)):
        for q in range(len(eigensystem)):
            if abs(a_eig[p, q]) > cut:
                entries.append((energies[q] - energies[p], p, q))
    entries.sort(key=lambda e: e[0])

    channels: list[tuple[float, np.ndarray]] = []
    i = 0
    while i < len(entries):
        j = i
        while j < len(entries) and entries[j][0] - entries[i][0] <= freq_tol:
            j += 1
        members = entries[i:j]
        omega = float(np.mean([m[0] for m in members]))
        op = np.zeros_like(a, dtype=complex)
        for _, p, q in members:
            op += a_eig[p, q] * np.outer(v[:, p], v[:, q].conj())
        channels.append((omega, op))
        i = j
    return channels


def _require_positive_rate(g: float, omega: float) -> float:
    if g < 0:
        raise ValueError(f"negative rate {g} at Bohr frequency {omega}")
    return g


def microscopic_channels(
    params: JCParams,
    space: StateSpace,
    bath: BathSpec,
    freq_tol: float | None = None,
) -> list[JumpChannel]:
    """Rate-carrying jump channels of the dressed-state master equation."""
    if space.n_max < 2:
        raise ValueError("microscopic generator needs n_max >= 2")
    if freq_tol is None:
        freq_tol = 1e-9 * params.omega0
    a, a_dag = ladder_operators(space)
    skeletons = eigenoperators(a + a_dag, complete_eigensystem(params, space), freq_tol)
    channels = []
    for omega, op in skeletons:
        if abs(omega) <= freq_tol:
            raise ValueError(f"zero-frequency jump channel at omega = {omega}")
        g = _require_positive_rate(rate(omega, bath), omega)
        channels.append(JumpChannel(omega, op, g))
    return channels


def microscopic_generator(
    params: JCParams,
    space: StateSpace,
    bath: BathSpec,
    freq_tol: float | None = None,
) -> Superoperator:
    """Liouvillian with dressed-transition jumps at bath-supplied rates.

    Emission channels (omega > 0) and thermal absorption channels
    (omega < 0) are both included; the detailed-balance relation between
    their rates makes the truncated thermal state of the Hamiltonian
    stationary.  No Lamb-shift correction is added to the commutator.
    """
    mat = commutator_superoperator(hamiltonian(params, space))
    active = [ch for ch in microscopic_channels(params, space, bath, freq_tol) if ch.rate != 0.0]
    if active:
        mat += _dissipator_sum([ch.operator for ch in active], [ch.rate for ch in active])
    return Superoperator(mat, space)


def phenomenological_generator(
    params: JCParams,
    space: StateSpace,
    gamma0: float,
    nbar: float,
) -> Superoperator:
    """Liouvillian with bare photon loss/gain at rates gamma0(nbar+1), gamma0*nbar."""
    if gamma0 < 0:
        raise ValueError(f"gamma0 must be nonnegative, got {gamma0}")
    if nbar < 0:
        raise ValueError(f"nbar must be nonnegative, got {nbar}")
    a, a_dag = ladder_operators(space)
    mat = commutator_superoperator(hamiltonian(params, space))
    if gamma0 > 0:
        mat = mat + gamma0 * (nbar + 1.0) * dissipator_superoperator(a)
        if nbar > 0:
            mat = mat + gamma0 * nbar * dissipator_superoperator(a_dag)
    return Superoperator(mat, space)


def dressed_approx_generator(
    params: JCParams,
    space: StateSpace,
    gamma0: float,
    nbar: float,
    freq_tol: float | None = None,
) -> Superoperator:
    """Secular projection of the phenomenological generator in the dressed basis.

    The dissipator is transformed to the eigenbasis of the Hamiltonian,
    every matrix element connecting vectorized entries whose free-evolution
    frequencies differ by more than ``freq_tol`` is zeroed, and the result
    is transformed back.  The commutator part is kept in full.
    """
    if freq_tol is None:
        freq_tol = 1e-9 * params.omega0
    full = phenomenological_generator(params, space, gamma0, nbar).matrix
    comm = commutator_superoperator(hamiltonian(params, space))
    dissipator = full - comm

    eigensystem = complete_eigensystem(params, space)
    v = np.column_stack([st.coefficients for st in eigensystem])
    energies = np.array([st.energy for st in eigensystem])
    # vec(V† X V) = (V^T kron V†) vec(X)
    to_dressed = np.kron(v.T, v.conj().T)
    to_bare = np.kron(v.conj(), v)
    d_dressed = to_dressed @ dissipator @ to_bare

    freq = vec(energies[:, None] - energies[None, :]).real
    keep = np.abs(freq[:, None] - freq[None, :]) <= freq_tol
    d_dressed *= keep

    mat = comm + to_bare @ d_dressed @ to_dressed
    return Superoperator(mat, space)


def dressed_approx_validity(params: JCParams, gamma0: float, n_max: int) -> tuple[bool, float]:
    """Diagnostic for the secular projection: gamma0 << rabi / (2 N^{3/2}).

    Evaluated at the largest retained manifold N = n_max with the same
    factor-of-10 reading of "much less than" as :func:`rwa_validity`;
    reported, never enforced.
    """
    if params.rabi == 0:
        return False, np.inf
    bound = params.rabi / (2.0 * n_max**1.5)
    ratio = gamma0 / bound
    return ratio <= 0.1, ratio


def single_excitation_generator(
    params: JCParams,
    gamma_a: float,
    gamma_b: float,
) -> Superoperator:
    """Generator restricted to span{ground, lower doublet, upper doublet}.

    Basis order is [ground, (1,-), (1,+)].  The two dressed states decay
    to the ground state with population rates gamma_a/2 and gamma_b/2,
    where gamma_a and gamma_b are the bath rates at the lower and upper
    transition frequencies omega0 -+ rabi.
    """
    for name, g in (("gamma_a", gamma_a), ("gamma_b", gamma_b)):
        if g < 0:
            raise ValueError(f"{name} must be nonnegative, got {g}")
    w0, om = params.omega0, params.rabi
    h = np.diag([-w0 / 2.0, w0 / 2.0 - om, w0 / 2.0 + om]).astype(complex)
    jump_minus = np.zeros((3, 3), dtype=complex)
    jump_minus[0, 1] = 1.0
    jump_plus = np.zeros((3, 3), dtype=complex)
    jump_plus[0, 2] = 1.0
    mat = commutator_superoperator(h) \
        + (gamma_a / 2.0) * dissipator_superoperator(jump_minus) \
        + (gamma_b / 2.0) * dissipator_superoperator(jump_plus)
    return Superoperator(mat)
