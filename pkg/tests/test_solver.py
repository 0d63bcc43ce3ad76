import numpy as np
import pytest

from jcsim.analytic import rabi_micro_density
from jcsim.bath import BathSpec, FlatSpectrum
from jcsim.generators import (
    Superoperator,
    microscopic_generator,
    phenomenological_generator,
    single_excitation_generator,
)
from jcsim.hilbert import DensityMatrix, build_space, pure_state
from jcsim.jcmodel import JCParams, dressed_states, hamiltonian
from jcsim.solver import (
    DampingBasisError,
    KernelMultiplicityError,
    StepSizeError,
    damping_basis,
    dominant_frequency,
    evolve_ode,
    evolve_spectral,
    expansion_coefficients,
    steady_state,
)

OMEGA0 = 1.0
RABI = 0.2
PARAMS = JCParams(OMEGA0, RABI)
GAMMA_A, GAMMA_B = 0.08, 0.12


def _sector_state_excited_atom() -> DensityMatrix:
    # |0,e> in the sector basis [ground, (1,-), (1,+)]
    return pure_state(np.array([0.0, -1.0, 1.0], dtype=complex) / np.sqrt(2.0))


def _expected_sector_eigenvalues(gamma_a, gamma_b):
    lower, upper = OMEGA0 - RABI, OMEGA0 + RABI
    return np.array([
        0.0,
        -gamma_a / 2.0,
        -gamma_b / 2.0,
        1j * lower - gamma_a / 4.0,
        -1j * lower - gamma_a / 4.0,
        1j * upper - gamma_b / 4.0,
        -1j * upper - gamma_b / 4.0,
        2j * RABI - (gamma_a + gamma_b) / 4.0,
        -2j * RABI - (gamma_a + gamma_b) / 4.0,
    ])


@pytest.mark.parametrize("rates", [(GAMMA_A, GAMMA_B), (0.1, 0.1)])
def test_sector_spectrum_closed_form(rates):
    modes = damping_basis(single_excitation_generator(PARAMS, *rates))
    got = np.array([m.eigenvalue for m in modes])
    expected = _expected_sector_eigenvalues(*rates)
    order = np.lexsort((expected.imag, -expected.real))
    assert np.abs(got - expected[order]).max() < 1e-10


def test_damping_basis_biorthonormality_and_sorting():
    modes = damping_basis(single_excitation_generator(PARAMS, GAMMA_A, GAMMA_B))
    gram = np.array([[np.trace(mi.left @ mj.right) for mj in modes] for mi in modes])
    assert np.abs(gram - np.eye(len(modes))).max() < 1e-10
    reals = [m.eigenvalue.real for m in modes]
    assert reals == sorted(reals, reverse=True)


def test_zero_mode_pair():
    modes = damping_basis(single_excitation_generator(PARAMS, GAMMA_A, GAMMA_B))
    zero = next(m for m in modes if abs(m.eigenvalue) < 1e-12)
    assert np.abs(zero.left - np.eye(3)).max() < 1e-12
    assert np.abs(zero.right - np.diag([1.0, 0.0, 0.0])).max() < 1e-12


def test_damping_modes_satisfy_eigenproblems():
    liouvillian = microscopic_generator(PARAMS, build_space(2), BathSpec(0.0, FlatSpectrum(0.04)))
    from jcsim.generators import vec

    for mode in damping_basis(liouvillian):
        right_res = np.abs(liouvillian.matrix @ vec(mode.right)
                           - mode.eigenvalue * vec(mode.right)).max()
        left_res = np.abs(vec(mode.left.T) @ liouvillian.matrix
                          - mode.eigenvalue * vec(mode.left.T)).max()
        assert right_res < 1e-10
        assert left_res < 1e-10


def test_contractivity_of_built_generators():
    cases = [
        single_excitation_generator(PARAMS, GAMMA_A, GAMMA_B),
        microscopic_generator(PARAMS, build_space(2), BathSpec(0.25, FlatSpectrum(0.04))),
        phenomenological_generator(PARAMS, build_space(2), 0.04, 0.3),
    ]
    for liouvillian in cases:
        assert max(m.eigenvalue.real for m in damping_basis(liouvillian)) <= 1e-10


def test_spectral_reproduces_initial_state():
    liouvillian = single_excitation_generator(PARAMS, GAMMA_A, GAMMA_B)
    rho0 = _sector_state_excited_atom()
    series = evolve_spectral(liouvillian, rho0, np.array([0.0, 1.0]))
    assert np.abs(series.states[0] - rho0.matrix).max() < 1e-12


def test_spectral_matches_closed_form_density():
    liouvillian = single_excitation_generator(PARAMS, GAMMA_A, GAMMA_B)
    times = np.linspace(0.0, 30.0, 40)
    series = evolve_spectral(liouvillian, _sector_state_excited_atom(), times)
    for k, t in enumerate(times):
        oracle = rabi_micro_density(t, GAMMA_A, GAMMA_B, RABI, OMEGA0).matrix
        assert np.abs(series.states[k] - oracle).max() < 1e-10


def test_spectral_bell_decay_has_two_modes_only():
    liouvillian = single_excitation_generator(PARAMS, GAMMA_A, GAMMA_B)
    rho0 = pure_state(np.array([0.0, 0.0, 1.0], dtype=complex))
    times = np.linspace(0.0, 50.0, 60)
    series = evolve_spectral(liouvillian, rho0, times)
    for k, t in enumerate(times):
        decay = np.exp(-GAMMA_B * t / 2.0)
        expected = np.diag([1.0 - decay, 0.0, decay]).astype(complex)
        assert np.abs(series.states[k] - expected).max() < 1e-12


def test_expansion_completeness_random_states():
    liouvillian = microscopic_generator(PARAMS, build_space(2), BathSpec(0.0, FlatSpectrum(0.04)))
    modes = damping_basis(liouvillian)
    rng = np.random.default_rng(11)
    dim = liouvillian.dim
    for _ in range(5):
        x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        rho = x @ x.conj().T
        rho /= np.trace(rho)
        coeff = expansion_coefficients(modes, rho)
        recon = sum(c * m.right for c, m in zip(coeff, modes))
        assert np.abs(recon - rho).max() < 1e-9


def test_ode_matches_spectral():
    space = build_space(2)
    liouvillian = microscopic_generator(PARAMS, space, BathSpec(0.0, FlatSpectrum(0.04)))
    rho0 = pure_state(space.basis_state(0, "e"))
    times = np.linspace(0.0, 40.0, 80)
    spectral = evolve_spectral(liouvillian, rho0, times)
    ode = evolve_ode(liouvillian, rho0, times, dt=2e-3)
    assert np.abs(spectral.states - ode.states).max() < 1e-8


def test_ode_unitary_limit_keeps_populations():
    space = build_space(2)
    liouvillian = phenomenological_generator(PARAMS, space, 0.0, 0.0)
    states = dressed_states(PARAMS, space)
    plus = next(s for s in states if s.label == (1, +1))
    rho0 = pure_state(plus.coefficients)
    times = np.linspace(0.0, 20.0, 30)
    series = evolve_ode(liouvillian, rho0, times, dt=2e-3)
    populations = [
        (plus.coefficients.conj() @ series.states[k] @ plus.coefficients).real
        for k in range(times.size)
    ]
    assert np.abs(np.array(populations) - 1.0).max() < 1e-10


def test_ode_trace_conservation():
    space = build_space(3)
    liouvillian = phenomenological_generator(PARAMS, space, 0.08, 0.0)
    states = dressed_states(PARAMS, space)
    plus = next(s for s in states if s.label == (1, +1))
    series = evolve_ode(liouvillian, pure_state(plus.coefficients),
                        np.linspace(0.0, 60.0, 50), dt=2e-3)
    assert abs(np.trace(series.states[-1]) - 1.0) < 1e-10


def test_ode_step_size_guard():
    liouvillian = single_excitation_generator(PARAMS, GAMMA_A, GAMMA_B)
    with pytest.raises(StepSizeError):
        evolve_ode(liouvillian, _sector_state_excited_atom(), np.array([0.0, 1.0]), dt=0.5)


def test_ode_rejects_bad_grid():
    liouvillian = single_excitation_generator(PARAMS, GAMMA_A, GAMMA_B)
    with pytest.raises(ValueError):
        evolve_ode(liouvillian, _sector_state_excited_atom(), np.array([1.0, 0.5]), dt=1e-3)


def test_steady_state_cold_bath_is_ground_projector():
    space = build_space(2)
    liouvillian = microscopic_generator(PARAMS, space, BathSpec(0.0, FlatSpectrum(0.04)))
    rho = steady_state(liouvillian)
    expected = np.outer(space.basis_state(0, "g"), space.basis_state(0, "g").conj())
    assert np.abs(rho.matrix - expected).max() < 1e-10


def test_steady_state_thermal_matches_gibbs():
    params = JCParams(1.0, 0.15)
    space = build_space(8)
    temperature = 0.25
    liouvillian = microscopic_generator(params, space, BathSpec(temperature, FlatSpectrum(0.02)))
    rho = steady_state(liouvillian)
    evals, evecs = np.linalg.eigh(hamiltonian(params, space))
    weights = np.exp(-(evals - evals.min()) / temperature)
    weights /= weights.sum()
    gibbs = (evecs * weights) @ evecs.conj().T
    assert 0.5 * np.abs(np.linalg.eigvalsh(rho.matrix - gibbs)).sum() < 1e-8


def test_steady_state_multiplicity_error_for_unitary_generator():
    liouvillian = phenomenological_generator(PARAMS, build_space(2), 0.0, 0.0)
    with pytest.raises(KernelMultiplicityError):
        steady_state(liouvillian)


def test_defective_liouvillian_raises_with_cluster():
    matrix = np.zeros((4, 4), dtype=complex)
    matrix[0, 1] = 1.0  # Jordan block: eigenvalue 0 with a single eigenvector
    with pytest.raises(DampingBasisError, match="cluster"):
        damping_basis(Superoperator(matrix))


def test_dominant_frequency_selects_excited_mode():
    liouvillian = single_excitation_generator(PARAMS, GAMMA_A, GAMMA_B)
    # excited bare atom beats at twice the coupling
    assert dominant_frequency(liouvillian, _sector_state_excited_atom()) == pytest.approx(
        2.0 * RABI, abs=1e-12
    )
    # the pure upper doublet state excites no oscillating mode at all
    bell = pure_state(np.array([0.0, 0.0, 1.0], dtype=complex))
    assert dominant_frequency(liouvillian, bell) == 0.0


def test_trajectory_states_validated():
    liouvillian = single_excitation_generator(PARAMS, GAMMA_A, GAMMA_B)
    series = evolve_spectral(liouvillian, _sector_state_excited_atom(),
                             np.linspace(0.0, 10.0, 20))
    series.validate_states(1e-8)
