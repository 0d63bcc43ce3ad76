import numpy as np
import pytest

from jcsim.analytic import rabi_micro
from jcsim.bath import BathSpec, FlatSpectrum
from jcsim.generators import microscopic_generator
from jcsim.hilbert import DensityMatrix, build_space, pure_state
from jcsim.jcmodel import JCParams, dressed_states
from jcsim.observables import (
    ObservableSet,
    atomic_excited_population,
    atomic_ground_population,
    diagnostics,
    evaluate,
    population,
)
from jcsim.solver import evolve_spectral


def _doublet_plus(space, params):
    return next(s for s in dressed_states(params, space) if s.label == (1, +1))


def test_population_bare_labels():
    space = build_space(1)
    rho = pure_state(space.basis_state(0, "g"))
    assert population(rho, (0, "g"), space) == 1.0
    assert population(rho, (1, "g"), space) == 0.0
    mixed = DensityMatrix(np.eye(4, dtype=complex) / 4.0)
    for n in range(2):
        for s in "ge":
            assert population(mixed, (n, s), space) == pytest.approx(0.25)


def test_population_of_doublet_state():
    space = build_space(2)
    params = JCParams(1.0, 0.2)
    plus = _doublet_plus(space, params)
    rho = pure_state(plus.coefficients)
    assert population(rho, (1, "g"), space) == pytest.approx(0.5)
    assert population(rho, plus) == pytest.approx(1.0)


def test_population_rejects_bad_label():
    space = build_space(1)
    rho = pure_state(space.basis_state(0, "g"))
    with pytest.raises(ValueError):
        population(rho, (5, "g"), space)


def test_atomic_ground_population():
    space = build_space(2)
    params = JCParams(1.0, 0.2)
    assert atomic_ground_population(pure_state(space.basis_state(0, "e")), space) == 0.0
    plus = _doublet_plus(space, params)
    assert atomic_ground_population(pure_state(plus.coefficients), space) == pytest.approx(0.5)


def test_atomic_ground_at_half_rabi_period():
    # the full excitation has swapped onto the photon at 2 rabi t = pi
    params = JCParams(1.0, 0.2)
    space = build_space(2)
    gamma0 = 0.04
    liouvillian = microscopic_generator(params, space, BathSpec(0.0, FlatSpectrum(gamma0)))
    t_half = np.pi / (2.0 * params.rabi)
    series = evolve_spectral(liouvillian, pure_state(space.basis_state(0, "e")),
                             np.array([0.0, t_half]))
    got = atomic_ground_population(DensityMatrix(series.states[1]), space)
    _, _, pg = rabi_micro(t_half, gamma0, gamma0, params.rabi)
    assert got == pytest.approx(float(pg), abs=1e-12)
    assert got == pytest.approx(1.0, abs=1e-12)


def test_ground_plus_excited_is_unity():
    space = build_space(2)
    rng = np.random.default_rng(3)
    for _ in range(5):
        x = rng.standard_normal((space.dim, space.dim)) + 1j * rng.standard_normal(
            (space.dim, space.dim)
        )
        rho = DensityMatrix((x @ x.conj().T) / np.trace(x @ x.conj().T))
        total = atomic_ground_population(rho, space) + atomic_excited_population(rho, space)
        assert total == pytest.approx(1.0, abs=1e-12)


def test_population_sums_to_trace():
    space = build_space(2)
    rho = DensityMatrix(np.eye(space.dim, dtype=complex) / space.dim)
    total = sum(
        population(rho, (n, s), space) for n in range(space.n_max + 1) for s in "ge"
    )
    assert total == pytest.approx(np.trace(rho.matrix).real)


def test_diagnostics_examples():
    space = build_space(1)
    rho = pure_state(space.basis_state(1, "e"))
    trace_defect, herm_defect, min_eig = diagnostics(rho)
    assert trace_defect < 1e-14 and herm_defect < 1e-14 and abs(min_eig) < 1e-14
    scaled = DensityMatrix(1.01 * rho.matrix)
    assert diagnostics(scaled)[0] == pytest.approx(0.01)


def test_evaluate_named_observables():
    space = build_space(2)
    rho = pure_state(space.basis_state(2, "e"))
    assert evaluate("photon_number", rho, space) == pytest.approx(2.0)
    assert evaluate("excitation_number", rho, space) == pytest.approx(3.0)
    assert evaluate("pop_0e", rho, space) == 0.0
    assert evaluate("atomic_excited", rho, space) == pytest.approx(1.0)
    assert evaluate("trace_defect", rho, space) < 1e-14
    assert evaluate("min_eigenvalue", rho, space) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(ValueError):
        evaluate("nonsense", rho, space)


def test_observable_set_validation():
    names = ObservableSet(("pop_0g", "atomic_ground"))
    assert names.names == ("pop_0g", "atomic_ground")
    with pytest.raises(ValueError):
        ObservableSet(())
    with pytest.raises(ValueError):
        ObservableSet(("pop_0g", "pop_0g"))
    with pytest.raises(ValueError):
        ObservableSet(("pop_0g", "bogus"))
