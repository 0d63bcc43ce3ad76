"""Declarative experiment descriptions and the line-oriented config format.

A scenario names one model (``micro``, ``phen``, ``dressed``, or the
three-level ``single`` sector generator used for spectra), the system
parameters, a bath or loss-rate description, an initial state, a time
grid in the dimensionless units tau = 2 * rabi * t, and the observables
to record.

Config files are flat ``key = value`` text: ``#`` starts a comment,
bath parameters use dotted keys (``bath.kind``, ``bath.gamma0``, ...),
and parsing then re-serializing a file is idempotent.  Example::

    model = micro
    omega0 = 1.0
    rabi = 0.41
    nmax = 2
    bath.kind = flat
    bath.temperature = 0.0
    bath.gamma0 = 0.082
    initial = fock:0,e
    tau_max = 100.0
    steps = 2000
    observables = pop_0g,atomic_ground
    solver = spectral
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .bath import BathSpec, FlatSpectrum, LorentzianSpectrum, OhmicSpectrum, rate
from .generators import (
    Superoperator,
    dressed_approx_generator,
    microscopic_generator,
    phenomenological_generator,
    single_excitation_generator,
)
from .hilbert import DensityMatrix, StateSpace, build_space, pure_state
from .jcmodel import JCParams, dressed_states
from .observables import ObservableSet

MODELS = ("micro", "phen", "dressed", "single")
SOLVERS = ("spectral", "ode")


class ConfigError(ValueError):
    """Invalid scenario configuration (CLI exit code 1)."""


@dataclass(frozen=True)
class Scenario:
    model: str
    omega0: float
    rabi: float
    n_max: int
    initial: tuple
    tau_max: float
    steps: int
    observables: ObservableSet
    solver: str = "spectral"
    dt: float | None = None
    bath: BathSpec | None = None
    gamma0: float | None = None
    nbar: float | None = None
    freq_tol: float | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.omega0 <= 0:
            raise ConfigError(f"omega0 must be positive, got {self.omega0}")
        if self.rabi < 0:
            raise ConfigError(f"rabi must be nonnegative, got {self.rabi}")
        if self.solver not in SOLVERS:
            raise ConfigError(f"solver must be one of {SOLVERS}, got {self.solver!r}")
        if self.solver == "ode":
            if self.dt is None or self.dt <= 0:
                raise ConfigError("solver = ode requires a positive dt")
        if self.steps < 2:
            raise ConfigError(f"time grid needs at least 2 points, got steps = {self.steps}")
        if self.tau_max <= 0:
            raise ConfigError(f"tau_max must be positive, got {self.tau_max}")
        if self.model in ("micro", "single"):
            if self.bath is None:
                raise ConfigError(f"model = {self.model} requires a bath.* block")
        else:
            if self.gamma0 is None or self.gamma0 < 0:
                raise ConfigError(f"model = {self.model} requires gamma0 >= 0")
            if self.nbar is None or self.nbar < 0:
                raise ConfigError(f"model = {self.model} requires nbar >= 0")
        headroom = self.n_max - self._initial_photons()
        if headroom < 2:
            raise ConfigError(
                f"nmax = {self.n_max} leaves {headroom} spare photon levels above the "
                f"initial state; at least 2 are required so the cutoff is never reached"
            )
        self._initial_vector(build_space(self.n_max))  # validates the label

    def _initial_photons(self) -> int:
        kind = self.initial[0]
        if kind == "ground":
            return 0
        if kind == "fock":
            return self.initial[1]
        if kind == "dressed":
            return self.initial[1]
        raise ConfigError(f"unknown initial state kind {self.initial[0]!r}")

    def _initial_vector(self, space: StateSpace) -> np.ndarray:
        kind = self.initial[0]
        if kind == "ground":
            return space.basis_state(0, "g")
        if kind == "fock":
            _, n, s = self.initial
            try:
                return space.basis_state(n, s)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        _, n, branch = self.initial
        params = JCParams(self.omega0, self.rabi)
        for st in dressed_states(params, space):
            if st.label == (n, branch):
                return st.coefficients
        raise ConfigError(f"dressed state ({n}, {branch:+d}) outside the space")

    @property
    def params(self) -> JCParams:
        return JCParams(self.omega0, self.rabi)

    def space(self) -> StateSpace:
        return build_space(self.n_max)

    def tau_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.tau_max, self.steps)

    def time_grid(self) -> np.ndarray:
        if self.rabi == 0:
            raise ConfigError("tau = 2*rabi*t is degenerate at rabi = 0; no time axis")
        return self.tau_grid() / (2.0 * self.rabi)

    def generator(self) -> Superoperator:
        if self.model == "micro":
            return microscopic_generator(self.params, self.space(), self.bath, self.freq_tol)
        if self.model == "phen":
            return phenomenological_generator(self.params, self.space(), self.gamma0, self.nbar)
        if self.model == "dressed":
            return dressed_approx_generator(
                self.params, self.space(), self.gamma0, self.nbar, self.freq_tol
            )
        gamma_a = rate(self.omega0 - self.rabi, self.bath)
        gamma_b = rate(self.omega0 + self.rabi, self.bath)
        return single_excitation_generator(self.params, gamma_a, gamma_b)

    def initial_state(self) -> DensityMatrix:
        if self.model == "single":
            raise ConfigError("model = single supports only the spectrum subcommand")
        return pure_state(self._initial_vector(self.space()))

    def with_model(self, model: str) -> "Scenario":
        return replace(self, model=model)


_BATH_KEYS = {
    "flat": ("gamma0",),
    "ohmic": ("alpha", "cutoff"),
    "lorentzian": ("gamma0", "center", "halfwidth"),
}

_KNOWN_KEYS = {
    "model", "omega0", "rabi", "nmax", "initial", "tau_max", "steps",
    "observables", "solver", "dt", "gamma0", "nbar", "freq_tol",
    "bath.kind", "bath.temperature", "bath.gamma0", "bath.alpha",
    "bath.cutoff", "bath.center", "bath.halfwidth",
}


def parse_config(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines into an ordered mapping of raw strings."""
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value in {raw!r}")
        if key in mapping:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        mapping[key] = value
    return mapping


def serialize_config(mapping: dict[str, str]) -> str:
    """Canonical text form of a parsed config; parse(serialize(m)) == m."""
    return "".join(f"{key} = {value}\n" for key, value in mapping.items())


def _get(mapping: dict[str, str], key: str, convert, default=None):
    if key not in mapping:
        return default
    try:
        return convert(mapping[key])
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad value for {key!r}: {mapping[key]!r}") from exc


def _parse_initial(text: str) -> tuple:
    if text == "ground":
        return ("ground",)
    kind, _, rest = text.partition(":")
    parts = [p.strip() for p in rest.split(",")]
    if kind == "fock" and len(parts) == 2 and parts[1] in ("g", "e"):
        return ("fock", int(parts[0]), parts[1])
    if kind == "dressed" and len(parts) == 2 and parts[1] in ("+", "-"):
        return ("dressed", int(parts[0]), +1 if parts[1] == "+" else -1)
    raise ConfigError(
        f"initial must be 'ground', 'fock:<n>,<g|e>' or 'dressed:<N>,<+|->', got {text!r}"
    )


def _parse_bath(mapping: dict[str, str]) -> BathSpec | None:
    if "bath.kind" not in mapping:
        return None
    kind = mapping["bath.kind"]
    if kind not in _BATH_KEYS:
        raise ConfigError(f"bath.kind must be one of {sorted(_BATH_KEYS)}, got {kind!r}")
    temperature = _get(mapping, "bath.temperature", float, 0.0)
    try:
        if kind == "flat":
            spectrum = FlatSpectrum(_get(mapping, "bath.gamma0", float))
        elif kind == "ohmic":
            spectrum = OhmicSpectrum(
                _get(mapping, "bath.alpha", float), _get(mapping, "bath.cutoff", float)
            )
        else:
            spectrum = LorentzianSpectrum(
                _get(mapping, "bath.gamma0", float),
                _get(mapping, "bath.center", float),
                _get(mapping, "bath.halfwidth", float),
            )
        return BathSpec(temperature, spectrum)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid bath block: {exc}") from exc


def scenario_from_mapping(mapping: dict[str, str]) -> Scenario:
    unknown = sorted(set(mapping) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys {unknown}")
    for key in ("model", "omega0", "rabi", "nmax", "initial", "tau_max", "steps"):
        if key not in mapping:
            raise ConfigError(f"missing required key {key!r}")
    names = _get(mapping, "observables", str, "pop_0g,atomic_ground")
    try:
        observables = ObservableSet(tuple(n.strip() for n in names.split(",")))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return Scenario(
        model=mapping["model"],
        omega0=_get(mapping, "omega0", float),
        rabi=_get(mapping, "rabi", float),
        n_max=_get(mapping, "nmax", int),
        initial=_parse_initial(mapping["initial"]),
        tau_max=_get(mapping, "tau_max", float),
        steps=_get(mapping, "steps", int),
        observables=observables,
        solver=_get(mapping, "solver", str, "spectral"),
        dt=_get(mapping, "dt", float),
        bath=_parse_bath(mapping),
        gamma0=_get(mapping, "gamma0", float),
        nbar=_get(mapping, "nbar", float),
        freq_tol=_get(mapping, "freq_tol", float),
    )


def scenario_from_config(text: str) -> Scenario:
    return scenario_from_mapping(parse_config(text))
