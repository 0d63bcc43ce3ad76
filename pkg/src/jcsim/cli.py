"""Command-line front end: evolve, compare, steady, spectrum, verify.

All numeric output goes through the shortest round-trip decimal
representation (up to 17 significant digits), CSV files are written
atomically (temp file + rename) with LF line endings, and repeated runs
produce byte-identical files.

Exit codes: 0 success, 1 configuration error, 2 numerical or
verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

import numpy as np

from .acceptance import run_all_criteria
from .hilbert import DensityMatrix
from .jcmodel import rwa_validity
from .observables import evaluate
from .scenario import ConfigError, Scenario, scenario_from_config
from .solver import (
    DampingBasisError,
    KernelMultiplicityError,
    StepSizeError,
    TimeSeries,
    damping_basis,
    dominant_frequency,
    evolve_ode,
    evolve_spectral,
    steady_state,
)


def _fmt(value: float) -> str:
    """Shortest decimal that round-trips the float (17 significant digits max)."""
    return repr(float(value))


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".jcsim-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(header: list[str], rows: list[list[float]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def run_trajectory(scenario: Scenario) -> TimeSeries:
    """Solve the scenario with its configured solver and attach observables."""
    liouvillian = scenario.generator()
    rho0 = scenario.initial_state()
    times = scenario.time_grid()
    if scenario.solver == "ode":
        series = evolve_ode(liouvillian, rho0, times, scenario.dt)
    else:
        series = evolve_spectral(liouvillian, rho0, times)
    space = scenario.space()
    values = {name: np.empty(times.size) for name in scenario.observables.names}
    for k in range(times.size):
        state = DensityMatrix(series.states[k])
        for name in scenario.observables.names:
            values[name][k] = evaluate(name, state, space)
    series.observables = values
    return series


def run_evolve(scenario: Scenario, out_path: str) -> None:
    """Write 'tau,<observables>' CSV for one scenario."""
    series = run_trajectory(scenario)
    tau = scenario.tau_grid()
    header = ["tau"] + list(scenario.observables.names)
    rows = [
        [tau[k]] + [series.observables[n][k] for n in scenario.observables.names]
        for k in range(tau.size)
    ]
    _write_atomic(out_path, _csv(header, rows))


def run_compare(scenario_a: Scenario, scenario_b: Scenario, out_path: str) -> dict:
    """Run two scenarios differing only in model; CSV plus a summary block."""
    for field in ("omega0", "rabi", "n_max", "initial", "tau_max", "steps", "solver", "dt"):
        if getattr(scenario_a, field) != getattr(scenario_b, field):
            raise ConfigError(f"compare scenarios differ in {field}, not only in model")
    if scenario_a.observables.names != scenario_b.observables.names:
        raise ConfigError("compare scenarios differ in observables, not only in model")

    series_a = run_trajectory(scenario_a)
    series_b = run_trajectory(scenario_b)
    tau = scenario_a.tau_grid()
    names = scenario_a.observables.names
    header = ["tau"]
    for name in names:
        header += [f"{name}_{scenario_a.model}", f"{name}_{scenario_b.model}", f"delta_{name}"]
    rows = []
    for k in range(tau.size):
        row = [tau[k]]
        for name in names:
            va = series_a.observables[name][k]
            vb = series_b.observables[name][k]
            row += [va, vb, va - vb]
        rows.append(row)
    _write_atomic(out_path, _csv(header, rows))

    freq_a = dominant_frequency(scenario_a.generator(), scenario_a.initial_state())
    freq_b = dominant_frequency(scenario_b.generator(), scenario_b.initial_state())
    shift = abs(freq_a - freq_b)
    reference = max(abs(freq_a), abs(freq_b))
    summary = {
        "max_abs_delta": {
            name: float(np.abs(series_a.observables[name] - series_b.observables[name]).max())
            for name in names
        },
        f"frequency_{scenario_a.model}": freq_a,
        f"frequency_{scenario_b.model}": freq_b,
        "frequency_shift": shift,
        "relative_frequency_shift": shift / reference if reference > 0 else 0.0,
    }
    return summary


def run_spectrum(scenario: Scenario, out_path: str) -> None:
    """Write 're,im' CSV of Liouvillian eigenvalues, (Re desc, Im asc)."""
    modes = damping_basis(scenario.generator())
    rows = [[m.eigenvalue.real, m.eigenvalue.imag] for m in modes]
    _write_atomic(out_path, _csv(["re", "im"], rows))


def run_steady(scenario: Scenario, out_path: str) -> None:
    """Write the stationary density matrix as 'row,col,re,im' CSV."""
    rho = steady_state(scenario.generator())
    rows = []
    for j in range(rho.dim):
        for i in range(rho.dim):
            rows.append([i, j, rho.matrix[i, j].real, rho.matrix[i, j].imag])
    _write_atomic(out_path, _csv(["row", "col", "re", "im"], rows))


def run_verify(tolerance_scale: float = 1.0, stream=None) -> int:
    """Run the acceptance suite, print one line per criterion, return exit code."""
    stream = stream or sys.stdout
    results = run_all_criteria(tolerance_scale=tolerance_scale)
    failed = [r for r in results if not r.passed]
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status}  criterion {result.number}: {result.name}", file=stream)
        for line in result.lines:
            print(f"      {line}", file=stream)
    if failed:
        first = failed[0]
        print(f"FAILED at criterion {first.number}: {first.name}", file=stream)
        return 2
    print(f"all {len(results)} criteria passed", file=stream)
    return 0


def _load_scenario(args: argparse.Namespace) -> Scenario:
    if not args.config:
        raise ConfigError("--config is required")
    try:
        with open(args.config, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    scenario = scenario_from_config(text)
    overrides = {}
    if args.model and "," in args.model and args.command != "compare":
        raise ConfigError(f"--model takes a pair only with compare, got {args.model!r}")
    if args.model and "," not in args.model:
        overrides["model"] = args.model
    if args.nmax is not None:
        overrides["n_max"] = args.nmax
    if args.tau_max is not None:
        overrides["tau_max"] = args.tau_max
    if args.steps is not None:
        overrides["steps"] = args.steps
    if args.solver is not None:
        overrides["solver"] = args.solver
    if args.dt is not None:
        overrides["dt"] = args.dt
    if overrides:
        from dataclasses import replace

        scenario = replace(scenario, **overrides)
    return scenario


def _print_advisories(scenario: Scenario, stream) -> None:
    if scenario.model in ("micro", "single") and scenario.bath is not None:
        from .bath import rate as bath_rate

        gamma_max = max(
            bath_rate(scenario.omega0 - scenario.rabi, scenario.bath),
            bath_rate(scenario.omega0 + scenario.rabi, scenario.bath),
        )
        check = rwa_validity(scenario.params, gamma_max)
        print(
            f"# secular-approximation ratio gamma_max/(2*rabi) = {_fmt(check.ratio)}"
            f" ({'ok' if check.valid else 'NOT satisfied'})",
            file=stream,
        )
    if scenario.model == "dressed":
        from .generators import dressed_approx_validity

        valid, ratio = dressed_approx_validity(scenario.params, scenario.gamma0, scenario.n_max)
        print(
            f"# dressed-projection ratio gamma0/(rabi/(2 nmax^1.5)) = {_fmt(ratio)}"
            f" ({'ok' if valid else 'NOT satisfied'})",
            file=stream,
        )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="jcsim",
        description="Lossy atom-cavity dynamics: evolve, compare, steady, spectrum, verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("evolve", "compare", "steady", "spectrum"):
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="path to key=value config file")
        cmd.add_argument("--out", required=True, help="output CSV path")
        cmd.add_argument("--model", help="override model (compare: pair 'a,b')")
        cmd.add_argument("--nmax", type=int)
        cmd.add_argument("--tau-max", dest="tau_max", type=float)
        cmd.add_argument("--steps", type=int)
        cmd.add_argument("--solver", choices=("spectral", "ode"))
        cmd.add_argument("--dt", type=float)
    verify = sub.add_parser("verify")
    verify.add_argument(
        "--tolerance-scale",
        dest="tolerance_scale",
        type=float,
        default=1.0,
        help="test hook: scale every acceptance threshold by this factor",
    )

    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return run_verify(tolerance_scale=args.tolerance_scale)
        scenario = _load_scenario(args)
        if args.command == "evolve":
            _print_advisories(scenario, sys.stdout)
            run_evolve(scenario, args.out)
        elif args.command == "compare":
            if not args.model or "," not in args.model:
                raise ConfigError("compare needs --model <model_a>,<model_b>")
            model_a, model_b = (m.strip() for m in args.model.split(",", 1))
            summary = run_compare(
                scenario.with_model(model_a), scenario.with_model(model_b), args.out
            )
            for key, value in summary.items():
                if isinstance(value, dict):
                    for name, v in value.items():
                        print(f"{key} {name} = {_fmt(v)}")
                else:
                    print(f"{key} = {_fmt(value)}")
        elif args.command == "steady":
            run_steady(scenario, args.out)
        elif args.command == "spectrum":
            run_spectrum(scenario, args.out)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (DampingBasisError, KernelMultiplicityError, StepSizeError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
