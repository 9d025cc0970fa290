"""Command-line front end: JSON problem configs, solve/convergence runs,
operational-matrix dumps, and the built-in problem catalog.

Commands and file formats:

    solve        --config FILE | --example ID [--variant V] --N K
                 writes solution JSON {N, legendre_coeffs, condition_estimate,
                 problem_digest} to --out or stdout
    convergence  --N-sweep FROM:TO:STEP, writes CSV `N,l2_error,max_error`
                 to --csv or stdout (empty error fields for truncations
                 whose solve failed)
    opmatrix     --alpha A --N K, row-major CSV dump of the operational matrix
    examples     lists the catalog with variants and discrepancy notes

All numbers are written with 17 significant digits, '.' decimal separator,
LF line endings; identical invocations produce byte-identical output.
Exit codes: 0 success, 2 configuration or argument error, 3 solver error.

Config schema (JSON object): name (text), n (integer >= 1), a (n+1 reals),
alpha (real > 0), kernel (expression in t and s), exactly one of forcing
(expression in t) or mms_exact (list of [coefficient, exponent] monomial
terms for the exact solution, from which the forcing is rebuilt), ics
(n reals), optional N (integer), optional N_sweep {"from", "to", "step"},
optional kernel_s_power (integer >= 1, see FIDEProblem).

The problem digest is the SHA-256 of the canonical problem fields (name,
n, a, alpha, kernel, forcing or mms_exact, ics, kernel_s_power), so it
identifies the problem independently of the truncation being solved.
"""

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import exprlang
from .fracderiv import operational_matrix
from .orthopoly import MonomialSeries
from .solver import (
    FIDEProblem,
    SolverError,
    builtin_example,
    builtin_example_ids,
    convergence_study,
    example_config,
    l2_error,
    max_error,
    mms_forcing,
    solve_fide,
)

__all__ = ["ProblemConfig", "main", "console_main"]

_CONFIG_KEYS = ("name", "n", "a", "alpha", "kernel", "forcing", "mms_exact",
                "ics", "N", "N_sweep", "kernel_s_power")
_SWEEP_KEYS = ("from", "to", "step")


class _ConfigError(ValueError):
    pass


def _format_number(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"cannot serialize non-finite number {value!r}")
    return format(value, ".17g")


def _dumps_json(value) -> str:
    """Deterministic JSON: insertion-ordered keys, 17-significant-digit
    floats, no locale dependence."""
    if isinstance(value, dict):
        inner = ", ".join(f"{json.dumps(k)}: {_dumps_json(v)}" for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_dumps_json(v) for v in value) + "]"
    if isinstance(value, str):
        return json.dumps(value)
    if value is None:
        return "null"
    return _format_number(value)


def _require(condition: bool, message: str):
    if not condition:
        raise _ConfigError(message)


def _as_real(value, what: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool),
             f"{what} must be a number, got {value!r}")
    _require(math.isfinite(float(value)), f"{what} must be finite, got {value!r}")
    return float(value)


def _as_int(value, what: str) -> int:
    _require(isinstance(value, int) and not isinstance(value, bool),
             f"{what} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class ProblemConfig:
    """Validated problem configuration (see the module docstring schema)."""

    name: str
    n: int
    a: tuple[float, ...]
    alpha: float
    kernel: str
    forcing: str | None
    mms_exact: tuple[tuple[float, float], ...] | None
    ics: tuple[float, ...]
    truncation: int | None
    sweep: tuple[int, int, int] | None
    kernel_s_power: int

    @staticmethod
    def from_dict(raw: dict) -> "ProblemConfig":
        _require(isinstance(raw, dict), "config must be a JSON object")
        for key in raw:
            _require(key in _CONFIG_KEYS, f"unknown config key {key!r}")
        name = raw.get("name", "")
        _require(isinstance(name, str), "name must be text")
        n = _as_int(raw.get("n"), "n")
        _require(n >= 1, f"n must be >= 1, got {n}")
        a_raw = raw.get("a")
        _require(isinstance(a_raw, list) and len(a_raw) == n + 1,
                 f"a must be a list of {n + 1} numbers")
        a = tuple(_as_real(v, "a entry") for v in a_raw)
        alpha = _as_real(raw.get("alpha"), "alpha")
        kernel = raw.get("kernel")
        _require(isinstance(kernel, str), "kernel must be expression text")
        forcing = raw.get("forcing")
        mms_raw = raw.get("mms_exact")
        _require((forcing is None) != (mms_raw is None),
                 "config needs exactly one of forcing / mms_exact")
        mms_exact = None
        if mms_raw is not None:
            _require(isinstance(mms_raw, list) and mms_raw, "mms_exact must be a non-empty list")
            terms = []
            for item in mms_raw:
                _require(isinstance(item, list) and len(item) == 2,
                         "mms_exact terms must be [coefficient, exponent] pairs")
                terms.append((_as_real(item[0], "mms_exact coefficient"),
                              _as_real(item[1], "mms_exact exponent")))
            mms_exact = tuple(terms)
        else:
            _require(isinstance(forcing, str), "forcing must be expression text")
        ics_raw = raw.get("ics")
        _require(isinstance(ics_raw, list) and len(ics_raw) == n,
                 f"ics must be a list of {n} numbers")
        ics = tuple(_as_real(v, "ics entry") for v in ics_raw)
        truncation = None
        if "N" in raw:
            truncation = _as_int(raw["N"], "N")
        sweep = None
        if "N_sweep" in raw:
            sweep_raw = raw["N_sweep"]
            _require(isinstance(sweep_raw, dict) and tuple(sorted(sweep_raw)) == tuple(sorted(_SWEEP_KEYS)),
                     'N_sweep must be an object with keys "from", "to", "step"')
            sweep = tuple(_as_int(sweep_raw[k], f"N_sweep {k}") for k in _SWEEP_KEYS)
        s_power = 1
        if "kernel_s_power" in raw:
            s_power = _as_int(raw["kernel_s_power"], "kernel_s_power")
            _require(s_power >= 1, "kernel_s_power must be >= 1")
        return ProblemConfig(name, n, a, alpha, kernel, forcing, mms_exact,
                             ics, truncation, sweep, s_power)

    def to_dict(self, with_resolution: bool = True) -> dict:
        out = {"name": self.name, "n": self.n, "a": list(self.a),
               "alpha": self.alpha, "kernel": self.kernel}
        if self.forcing is not None:
            out["forcing"] = self.forcing
        else:
            out["mms_exact"] = [[q, p] for q, p in self.mms_exact]
        out["ics"] = list(self.ics)
        out["kernel_s_power"] = self.kernel_s_power
        if with_resolution and self.truncation is not None:
            out["N"] = self.truncation
        if with_resolution and self.sweep is not None:
            out["N_sweep"] = dict(zip(_SWEEP_KEYS, self.sweep))
        return out

    def digest(self) -> str:
        return hashlib.sha256(
            _dumps_json(self.to_dict(with_resolution=False)).encode()).hexdigest()

    def _compile(self, source: str, allowed: set[str], what: str):
        try:
            tree = exprlang.parse(source)
        except exprlang.ParseError as exc:
            raise _ConfigError(f"{what} does not parse: {exc}") from None
        free = exprlang.free_variables(tree)
        _require(free <= allowed,
                 f"{what} may use only {sorted(allowed)}, found {sorted(free - allowed)}")
        return tree

    def build(self) -> tuple[FIDEProblem, object]:
        """Compile expressions and construct the problem.

        Returns (problem, exact) where exact is the manufactured solution
        callable for mms_exact configs and None otherwise.
        """
        kernel_tree = self._compile(self.kernel, {"t", "s"}, "kernel")
        kernel = np.vectorize(
            lambda tv, sv: exprlang.evaluate(kernel_tree, t=tv, s=sv), otypes=[float])
        exact = None
        if self.forcing is not None:
            forcing_tree = self._compile(self.forcing, {"t"}, "forcing")
            forcing = np.vectorize(
                lambda tv: exprlang.evaluate(forcing_tree, t=tv), otypes=[float])
        else:
            exact = MonomialSeries(self.mms_exact)
            forcing = mms_forcing(exact, self.n, self.a, self.alpha, kernel)
        problem = FIDEProblem(n=self.n, a=self.a, order=self.alpha,
                              kernel=kernel, forcing=forcing, ics=self.ics,
                              kernel_s_power=self.kernel_s_power)
        return problem, exact


def _load_config_file(path: str) -> ProblemConfig:
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise _ConfigError(f"cannot read config {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise _ConfigError(f"config {path!r} is not valid JSON: {exc}") from None
    return ProblemConfig.from_dict(raw)


def _resolve_problem(args) -> tuple[ProblemConfig, FIDEProblem, object]:
    """Turn --config/--example flags into (config, problem, exact)."""
    if (args.config is None) == (args.example is None):
        raise _ConfigError("need exactly one of --config PATH or --example ID")
    if args.example is not None:
        try:
            ex = builtin_example(args.example, args.variant)
        except (KeyError, ValueError) as exc:
            message = exc.args[0] if exc.args else str(exc)
            raise _ConfigError(message) from None
        if ex.note is not None:
            print(f"note ({ex.example_id}, {args.variant} forcing): {ex.note}",
                  file=sys.stderr)
        config = ProblemConfig.from_dict(example_config(args.example, args.variant))
        return config, ex.problem, ex.exact
    if args.variant != "corrected":
        raise _ConfigError("--variant applies only to --example")
    config = _load_config_file(args.config)
    try:
        problem, exact = config.build()
    except (ValueError, TypeError) as exc:
        raise _ConfigError(str(exc)) from None
    return config, problem, exact


def _write_text(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _parse_sweep(text: str) -> tuple[int, int, int]:
    parts = text.split(":")
    _require(len(parts) == 3, f"sweep must be FROM:TO:STEP, got {text!r}")
    try:
        start, stop, step = (int(p) for p in parts)
    except ValueError:
        raise _ConfigError(f"sweep must be three integers, got {text!r}") from None
    return start, stop, step


def _sweep_truncations(sweep: tuple[int, int, int]) -> list[int]:
    start, stop, step = sweep
    _require(step >= 1, f"sweep step must be >= 1, got {step}")
    truncations = list(range(start, stop + 1, step))
    _require(bool(truncations), f"sweep {start}:{stop}:{step} is empty")
    return truncations


def cmd_solve(args) -> int:
    config, problem, exact = _resolve_problem(args)
    truncation = args.N if args.N is not None else config.truncation
    _require(truncation is not None, "no truncation: pass --N or put N in the config")
    if args.emit_config is not None:
        emitted = config.to_dict()
        if args.N is not None:
            emitted["N"] = args.N
        _write_text(args.emit_config, _dumps_json(emitted) + "\n")
    try:
        solution = solve_fide(problem, truncation)
    except ValueError as exc:
        raise _ConfigError(str(exc)) from None
    payload = {
        "N": solution.truncation,
        "legendre_coeffs": list(solution.coeffs.coeffs),
        "condition_estimate": solution.condition_estimate,
        "problem_digest": config.digest(),
    }
    _write_text(args.out, _dumps_json(payload) + "\n")
    summary = (f"solved {config.name or 'problem'} at N={solution.truncation}, "
               f"condition_estimate={solution.condition_estimate:.6e}")
    if exact is not None:
        summary += (f", l2_error={l2_error(solution, exact):.6e}"
                    f", max_error={max_error(solution, exact):.6e}")
    print(summary, file=sys.stderr)
    return 0


def cmd_convergence(args) -> int:
    config, problem, exact = _resolve_problem(args)
    _require(exact is not None,
             "convergence needs a known exact solution: use --example or an mms_exact config")
    sweep = _parse_sweep(args.N_sweep) if args.N_sweep is not None else config.sweep
    _require(sweep is not None, "no sweep: pass --N-sweep FROM:TO:STEP or put N_sweep in the config")
    truncations = _sweep_truncations(sweep)
    try:
        report = convergence_study(problem, exact, truncations)
    except ValueError as exc:
        raise _ConfigError(str(exc)) from None
    lines = ["N,l2_error,max_error"]
    for entry in report.entries:
        if entry.failure is not None:
            lines.append(f"{entry.truncation},,")
        else:
            lines.append(f"{entry.truncation},{_format_number(entry.l2_error)},"
                         f"{_format_number(entry.max_error)}")
    _write_text(args.csv, "\n".join(lines) + "\n")
    fit = report.fitted_decay
    if fit.kind == "stagnated":
        print("fitted decay: stagnated", file=sys.stderr)
    else:
        print(f"fitted decay: {fit.kind} (rate {fit.rate:.6g}, "
              f"R^2 {fit.r_squared:.6g})", file=sys.stderr)
    for entry in report.entries:
        if entry.failure is not None:
            print(f"N={entry.truncation} failed: {entry.failure}", file=sys.stderr)
    if all(entry.failure is not None for entry in report.entries):
        raise SolverError("every truncation in the sweep failed")
    return 0


def cmd_opmatrix(args) -> int:
    try:
        matrix = operational_matrix(args.alpha, args.N).entries
    except ValueError as exc:
        raise _ConfigError(str(exc)) from None
    lines = [",".join(_format_number(v) for v in row) for row in matrix]
    _write_text(args.csv, "\n".join(lines) + "\n")
    return 0


def cmd_examples(args) -> int:
    lines = []
    for example_id in builtin_example_ids():
        ex = builtin_example(example_id, "printed")
        lines.append(f"{example_id}  {ex.description}")
        if ex.note is None:
            lines.append("     variants: printed == corrected (transcribed forcing is consistent)")
        else:
            lines.append(f"     variants: printed, corrected (default); {ex.note}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cltau",
        description="Spectral tau solver for linear Fredholm fractional "
                    "integro-differential equations on [0, 1].")
    commands = parser.add_subparsers(dest="command", required=True)

    def add_problem_flags(sub):
        sub.add_argument("--config", help="problem config JSON path")
        sub.add_argument("--example", help="built-in problem id (see `examples`)")
        sub.add_argument("--variant", choices=("printed", "corrected"),
                         default="corrected",
                         help="forcing variant for --example (default corrected)")

    solve = commands.add_parser("solve", help="solve at one truncation")
    add_problem_flags(solve)
    solve.add_argument("--N", type=int, help="truncation (overrides config N)")
    solve.add_argument("--out", help="solution JSON path (default stdout)")
    solve.add_argument("--emit-config", dest="emit_config",
                       help="also write the resolved problem config JSON here")
    solve.set_defaults(handler=cmd_solve)

    conv = commands.add_parser("convergence", help="error sweep over truncations")
    add_problem_flags(conv)
    conv.add_argument("--N-sweep", dest="N_sweep",
                      help="FROM:TO:STEP inclusive sweep (overrides config N_sweep)")
    conv.add_argument("--csv", help="CSV output path (default stdout)")
    conv.set_defaults(handler=cmd_convergence)

    opmat = commands.add_parser("opmatrix", help="dump an operational matrix")
    opmat.add_argument("--alpha", type=float, required=True, help="derivative order > 0")
    opmat.add_argument("--N", type=int, required=True, help="matrix truncation >= 0")
    opmat.add_argument("--csv", help="CSV output path (default stdout)")
    opmat.set_defaults(handler=cmd_opmatrix)

    examples = commands.add_parser("examples", help="list the built-in problem catalog")
    examples.set_defaults(handler=cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.handler(args)
    except _ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, exprlang.EvalError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
