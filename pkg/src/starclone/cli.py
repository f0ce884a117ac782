"""Command-line surface: fidelity evaluation, search, verification, scans.

All times and fields are dimensionless (exchange coupling = 1).  Every
subcommand accepts ``--config FILE`` holding either flat ``key=value``
lines or a JSON object (for example a previously saved ``--format json``
output); explicit flags win over config values.  Exit codes: 0 success,
1 failed verification checks, 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .cloning import (
    fidelity_closed_form,
    make_clone_report,
    pcc_fidelity,
    preset_ancilla_free,
    preset_k_equals_m,
    preset_optimal,
    universal_preset,
)
from .dynamics import amplitudes_from_brute_force, evolve_analytic
from .errors import CapacityError
from .optimizer import (
    SearchBox,
    grid_scan,
    reproduce_table1,
    scan_and_refine,
)
from .star_model import DEFAULT_MAX_QUBITS, ModelParams
from .verify import SUITE_NAMES, run_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

_MODELS = ("xx", "heisenberg", "xxz")
_METHODS = ("analytic", "closed-form", "brute")
_SWEEP_AXES = ("t", "b", "lambda")


def _parse_bool(raw) -> bool:
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


@dataclass(frozen=True)
class _Opt:
    """One option: flag spelling, config key, converter and default."""

    key: str
    flag: str
    convert: object = str
    default: object = None
    required: bool = False
    choices: tuple | None = None
    nargs: object = None
    boolean: bool = False
    append: bool = False
    help: str = ""


_COMMON_OUT = (
    _Opt("format", "--format", str, "human", choices=("human", "json"),
         help="output format"),
    _Opt("output", "--output", str, None, help="write output to this file"),
)

_MODEL_OPTS = (
    _Opt("model", "--model", str, "xxz", choices=_MODELS,
         help="model shorthand; xx fixes lambda=0, heisenberg fixes lambda=1"),
    _Opt("lambda", "--lambda", float, None,
         help="anisotropy (z-coupling relative to the exchange coupling)"),
)

_OPTIONS: dict[str, tuple[_Opt, ...]] = {
    "fidelity": (
        _Opt("m", "--m", int, None, required=True, help="number of outer spins"),
        _Opt("k", "--k", int, None, required=True,
             help="initial |0> count of the outer register"),
        *_MODEL_OPTS,
        _Opt("b", "--b", float, 0.0, help="magnetic field"),
        _Opt("t", "--t", float, None, required=True, help="evolution time"),
        _Opt("method", "--method", str, "analytic", choices=_METHODS,
             help="evaluation route"),
        _Opt("theta", "--theta", float, math.pi / 2.0,
             help="input-state polar angle (default: equatorial)"),
        _Opt("phi", "--phi", float, 0.0, help="input-state azimuthal angle"),
        _Opt("max_qubits", "--max-qubits", int, DEFAULT_MAX_QUBITS,
             help="dense-evolution size cap (total spins)"),
        *_COMMON_OUT,
    ),
    "optimize": (
        _Opt("m", "--m", int, None, required=True, help="number of outer spins"),
        _Opt("k", "--k", int, None, nargs="*",
             help="k values to scan (default: all of 0..M)"),
        *_MODEL_OPTS,
        _Opt("b_range", "--b-range", float, (0.01, 1.0), nargs=2,
             help="field box: LO HI"),
        _Opt("t_range", "--t-range", float, (0.0, 300.0), nargs=2,
             help="time box: LO HI"),
        _Opt("n_b", "--n-b", int, 201, help="field grid points"),
        _Opt("n_t", "--n-t", int, 30001, help="time grid points"),
        _Opt("refine", "--refine", _parse_bool, True, boolean=True,
             help="refine leading basins with a local simplex"),
        _Opt("refine_iters", "--refine-iters", int, 400,
             help="refinement iteration cap"),
        _Opt("refine_tol", "--refine-tol", float, 1e-8,
             help="refinement parameter tolerance"),
        _Opt("candidates", "--candidates", int, 8,
             help="basins to refine per (k, lambda)"),
        *_COMMON_OUT,
    ),
    "table1": (
        _Opt("m", "--m", int, None, nargs="*",
             help="network sizes (default: 2..8)"),
        _Opt("n_b", "--n-b", int, 201, help="field grid points"),
        _Opt("n_t", "--n-t", int, 30001, help="time grid points"),
        _Opt("refine", "--refine", _parse_bool, True, boolean=True,
             help="refine leading basins with a local simplex"),
        *_COMMON_OUT,
    ),
    "verify": (
        _Opt("seed", "--seed", int, 0, help="seed for randomized sweeps"),
        _Opt("trials", "--trials", int, None,
             help="override the sample count of randomized suites"),
        *_COMMON_OUT,
    ),
    "scan": (
        _Opt("m", "--m", int, None, required=True, help="number of outer spins"),
        _Opt("k", "--k", int, None, required=True,
             help="initial |0> count of the outer register"),
        *_MODEL_OPTS,
        _Opt("b", "--b", float, 0.0, help="fixed field (unless swept)"),
        _Opt("t", "--t", float, 0.0, help="fixed time (unless swept)"),
        _Opt("sweep", "--sweep", str, None, append=True,
             help="sweep axis AXIS=LO:HI:N with AXIS in {t, b, lambda}; "
                  "repeat for a second axis (first axis is the outer one)"),
        _Opt("method", "--method", str, "analytic", choices=_METHODS,
             help="evaluation route"),
        _Opt("max_qubits", "--max-qubits", int, DEFAULT_MAX_QUBITS,
             help="dense-evolution size cap (total spins)"),
        _Opt("output", "--output", str, None, help="write CSV to this file"),
    ),
    "presets": (
        _Opt("m", "--m", int, None, required=True, help="number of outer spins"),
        *_COMMON_OUT,
    ),
}

_HELP = {
    "fidelity": "evaluate cloning fidelities at one parameter point",
    "optimize": "maximize the equatorial fidelity over a (B, t) box",
    "table1": "run the constrained XX-model search for M = 2..8",
    "verify": "run a named verification suite",
    "scan": "emit a CSV fidelity scan over one or two axes",
    "presets": "print the optimal parameter sets for a given M",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starclone",
        description="Spin-star cloning by free evolution: simulate, verify, optimize.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command, opts in _OPTIONS.items():
        sub = subparsers.add_parser(command, help=_HELP[command])
        if command == "verify":
            sub.add_argument("suite", choices=SUITE_NAMES,
                             help="verification suite to run")
        sub.add_argument("--config", dest="config", default=None,
                         help="key=value or JSON config file; flags win")
        for opt in opts:
            kwargs: dict = {"dest": opt.key, "default": argparse.SUPPRESS,
                            "help": opt.help}
            if opt.boolean:
                sub.add_argument(opt.flag, action=argparse.BooleanOptionalAction,
                                 **kwargs)
            elif opt.append:
                sub.add_argument(opt.flag, action="append", type=opt.convert,
                                 **kwargs)
            else:
                if opt.choices:
                    kwargs["choices"] = opt.choices
                if opt.nargs is not None:
                    kwargs["nargs"] = opt.nargs
                sub.add_argument(opt.flag, type=opt.convert, **kwargs)
    return parser


def _load_config(path: str, parser: argparse.ArgumentParser) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        parser.error(f"cannot read config {path!r}: {exc}")
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            parser.error(f"config {path!r} is not valid JSON: {exc}")
        if not isinstance(data, dict):
            parser.error(f"config {path!r} must hold a JSON object")
        return data
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            parser.error(f"config {path!r} line {lineno}: expected key=value")
        key, _, raw = line.partition("=")
        values[key.strip()] = raw.strip()
    return values


def _convert_config_value(opt: _Opt, raw, parser: argparse.ArgumentParser):
    try:
        if raw is None:
            return None
        if opt.append:
            items = raw if isinstance(raw, list) else str(raw).split(",")
            return [opt.convert(item) for item in items]
        if opt.nargs is not None:
            items = raw if isinstance(raw, (list, tuple)) else str(raw).replace(",", " ").split()
            return [opt.convert(item) for item in items]
        value = opt.convert(raw)
        if opt.choices and value not in opt.choices:
            raise ValueError(f"must be one of {', '.join(opt.choices)}")
        return value
    except (TypeError, ValueError) as exc:
        parser.error(f"config key {opt.key!r}: {exc}")


def _resolve_values(command: str, args: argparse.Namespace,
                    parser: argparse.ArgumentParser) -> dict:
    """defaults <- config file <- explicit flags, then required checks."""
    opts = _OPTIONS[command]
    merged = {opt.key: opt.default for opt in opts}
    config_path = getattr(args, "config", None)
    if config_path:
        config = _load_config(config_path, parser)
        for opt in opts:
            if opt.key in config:
                merged[opt.key] = _convert_config_value(opt, config[opt.key], parser)
    given = {k: v for k, v in vars(args).items() if k not in ("command", "config", "suite")}
    merged.update(given)
    for opt in opts:
        if opt.required and merged.get(opt.key) is None:
            parser.error(f"missing required option {opt.flag} (or config key {opt.key!r})")
    return merged


def _resolve_lambda(values: dict, parser: argparse.ArgumentParser) -> float:
    model = values.get("model") or "xxz"
    lam = values.get("lambda")
    if model == "xx":
        if lam is not None and lam != 0.0:
            parser.error("model 'xx' fixes lambda = 0; conflicting --lambda given")
        return 0.0
    if model == "heisenberg":
        if lam is not None and lam != 1.0:
            parser.error("model 'heisenberg' fixes lambda = 1; conflicting --lambda given")
        return 1.0
    return 0.0 if lam is None else float(lam)


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text + "\n")
    else:
        print(text)


def _complex_json(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def cmd_fidelity(values: dict, parser: argparse.ArgumentParser) -> int:
    lam = _resolve_lambda(values, parser)
    if values["method"] == "brute" and values["m"] + 1 > values["max_qubits"]:
        parser.error(
            f"method 'brute' needs 2**{values['m'] + 1} dense states, beyond the "
            f"cap of 2**{values['max_qubits']}"
        )
    try:
        params = ModelParams(values["m"], lam, values["b"])
        report = make_clone_report(
            params, values["k"], values["t"], theta=values["theta"],
            phi=values["phi"], method=values["method"],
            max_qubits=values["max_qubits"],
        )
    except (ValueError, CapacityError) as exc:
        parser.error(str(exc))
    amp = report.amplitudes
    if values["format"] == "json":
        payload = {
            "command": "fidelity",
            "m": values["m"],
            "k": values["k"],
            "model": values.get("model") or "xxz",
            "lambda": lam,
            "b": params.B,
            "t": report.t,
            "theta": report.theta,
            "phi": report.phi,
            "method": report.method,
            "max_qubits": values["max_qubits"],
            "fidelity": report.input_fidelity,
            "equatorial_fidelity": report.equatorial_fidelity,
            "per_qubit_fidelities": list(report.per_qubit_fidelities),
            "amplitudes": {
                "f1": _complex_json(amp.f1),
                "f2": _complex_json(amp.f2),
                "g1": _complex_json(amp.g1),
                "g2": _complex_json(amp.g2),
            },
        }
        _emit(json.dumps(payload, indent=2), values["output"])
        return EXIT_OK
    lines = [
        f"M = {values['m']}  k = {values['k']}  lambda = {_fmt(lam)}  "
        f"B = {_fmt(params.B)}  t = {_fmt(report.t)}",
        f"method = {report.method}  theta = {_fmt(report.theta)}  "
        f"phi = {_fmt(report.phi)}",
        f"fidelity (input state)  = {_fmt(report.input_fidelity)}",
        f"fidelity (equatorial)   = {_fmt(report.equatorial_fidelity)}",
        "per-qubit fidelities:",
    ]
    for q, f in enumerate(report.per_qubit_fidelities):
        role = "central" if q == 0 else f"outer {q}"
        lines.append(f"  qubit {q} ({role}): {_fmt(f)}")
    lines.append(
        "amplitudes: "
        f"f1 = {amp.f1:.12g}, f2 = {amp.f2:.12g}, "
        f"g1 = {amp.g1:.12g}, g2 = {amp.g2:.12g}"
    )
    _emit("\n".join(lines), values["output"])
    return EXIT_OK


def cmd_optimize(values: dict, parser: argparse.ArgumentParser) -> int:
    lam = _resolve_lambda(values, parser)
    m = values["m"]
    ks = values["k"]
    if ks is None or ks == []:
        ks = tuple(range(m + 1))
    else:
        ks = tuple(int(k) for k in ks)
        if any(not 0 <= k <= m for k in ks):
            parser.error(f"k values must lie in [0, {m}]")
    try:
        box = SearchBox(
            b_range=tuple(values["b_range"]),
            t_range=tuple(values["t_range"]),
            lam=lam,
            k_candidates=ks,
            n_b=values["n_b"],
            n_t=values["n_t"],
            refine_iters=values["refine_iters"],
            refine_tol=values["refine_tol"],
        )
    except ValueError as exc:
        parser.error(str(exc))

    def objective(k, lam_, b, t):
        return fidelity_closed_form(m, k, lam_, b, t)

    if values["refine"]:
        result = scan_and_refine(objective, box, m=m,
                                 n_candidates=values["candidates"])
    else:
        result = grid_scan(objective, box, m=m)
    best = result.best
    if values["format"] == "json":
        payload = {
            "command": "optimize",
            "m": m,
            "k": list(ks),
            "model": values.get("model") or "xxz",
            "lambda": lam,
            "b_range": list(box.b_range),
            "t_range": list(box.t_range),
            "n_b": box.n_b,
            "n_t": box.n_t,
            "refine": values["refine"],
            "refine_iters": box.refine_iters,
            "refine_tol": box.refine_tol,
            "candidates": values["candidates"],
            "best": {
                "m": best.M,
                "k": best.k,
                "lambda": best.lam,
                "b": best.B,
                "t": best.t,
                "fidelity": best.F,
            },
            "evaluations": result.evaluations,
            "refined": result.refined,
            "runner_up_gap": result.runner_up_gap,
        }
        _emit(json.dumps(payload, indent=2), values["output"])
        return EXIT_OK
    lines = [
        f"searched {result.evaluations} grid points "
        f"(refined basins: {'yes' if result.refined else 'no'})",
        f"best: M = {best.M}  k = {best.k}  lambda = {_fmt(best.lam)}  "
        f"B = {_fmt(best.B)}  t = {_fmt(best.t)}",
        f"fidelity = {_fmt(best.F)}",
        f"runner-up gap = {_fmt(result.runner_up_gap)}",
    ]
    _emit("\n".join(lines), values["output"])
    return EXIT_OK


def cmd_table1(values: dict, parser: argparse.ArgumentParser) -> int:
    ms = values["m"]
    ms = tuple(range(2, 9)) if not ms else tuple(int(m) for m in ms)
    try:
        rows = reproduce_table1(ms=ms, n_b=values["n_b"], n_t=values["n_t"],
                                refine=values["refine"])
    except ValueError as exc:
        parser.error(str(exc))
    if values["format"] == "json":
        payload = {
            "command": "table1",
            "m": list(ms),
            "n_b": values["n_b"],
            "n_t": values["n_t"],
            "refine": values["refine"],
            "rows": [
                {
                    "m": row.M,
                    "k": row.k,
                    "b": row.B,
                    "t": row.t,
                    "f_max": row.f_max,
                    "f_optimal": row.f_optimal,
                    "f_reference": row.f_reference,
                    "deviation": row.deviation,
                    "flagged": row.flagged,
                }
                for row in rows
            ],
        }
        _emit(json.dumps(payload, indent=2), values["output"])
        return EXIT_OK
    header = (
        f"{'M':>2} {'F_optimal':>11} {'F_max':>11} {'t':>12} {'B':>11} "
        f"{'k':>2} {'F_reference':>12} {'status':>8}"
    )
    lines = [header, "-" * len(header)]
    for row in rows:
        status = "flagged" if row.flagged else "ok"
        lines.append(
            f"{row.M:>2} {row.f_optimal:>11.6f} {row.f_max:>11.6f} "
            f"{row.t:>12.5f} {row.B:>11.7f} {row.k:>2} "
            f"{row.f_reference:>12.6f} {status:>8}"
        )
    lines.append(
        "flagged = found maximum differs from the stored reference by more "
        "than 1e-4"
    )
    _emit("\n".join(lines), values["output"])
    return EXIT_OK


def cmd_verify(values: dict, parser: argparse.ArgumentParser, suite: str) -> int:
    result = run_suite(suite, seed=values["seed"], trials=values["trials"])
    if values["format"] == "json":
        payload = {
            "command": "verify",
            "suite": suite,
            "seed": values["seed"],
            "trials": values["trials"],
            "passed": result.passed,
            "checks": [
                {
                    "label": check.label,
                    "residual": check.residual,
                    "tolerance": check.tolerance,
                    "passed": check.passed,
                }
                for check in result.checks
            ],
        }
        _emit(json.dumps(payload, indent=2), values["output"])
        return EXIT_OK if result.passed else EXIT_CHECK_FAILED
    lines = []
    for check in result.checks:
        marker = "PASS" if check.passed else "FAIL"
        lines.append(
            f"[{marker}] {check.label}: residual = {check.residual:.3e} "
            f"(tolerance {check.tolerance:.1e})"
        )
    verdict = "all checks passed" if result.passed else (
        f"{len(result.failures())} of {len(result.checks)} checks FAILED"
    )
    lines.append(f"suite '{suite}' (seed {values['seed']}): {verdict}")
    _emit("\n".join(lines), values["output"])
    return EXIT_OK if result.passed else EXIT_CHECK_FAILED


def _parse_sweep(text: str, parser: argparse.ArgumentParser):
    try:
        axis, _, rest = text.partition("=")
        lo, hi, count = rest.split(":")
        axis = axis.strip().lower()
        values = np.linspace(float(lo), float(hi), int(count))
    except ValueError:
        parser.error(f"bad sweep axis {text!r}; expected AXIS=LO:HI:N")
    if axis not in _SWEEP_AXES:
        parser.error(f"sweep axis must be one of {_SWEEP_AXES}, got {axis!r}")
    if int(count) < 1:
        parser.error("sweep point count must be >= 1")
    return axis, values


def cmd_scan(values: dict, parser: argparse.ArgumentParser) -> int:
    lam = _resolve_lambda(values, parser)
    sweeps_raw = values["sweep"] or []
    if not 1 <= len(sweeps_raw) <= 2:
        parser.error("scan needs one or two --sweep axes")
    sweeps = [_parse_sweep(entry, parser) for entry in sweeps_raw]
    if len(sweeps) == 2 and sweeps[0][0] == sweeps[1][0]:
        parser.error("the two sweep axes must differ")
    if any(axis == "lambda" for axis, _ in sweeps) and values.get("model") in (
        "xx", "heisenberg",
    ):
        parser.error("cannot sweep lambda while the model shorthand fixes it")
    if values["method"] == "brute" and values["m"] + 1 > values["max_qubits"]:
        parser.error(
            f"method 'brute' needs 2**{values['m'] + 1} dense states, beyond the "
            f"cap of 2**{values['max_qubits']}"
        )
    m, k, method = values["m"], values["k"], values["method"]

    def fidelity_at(lam_: float, b: float, t: float) -> float:
        params = ModelParams(m, lam_, b)
        if method == "closed-form":
            return float(fidelity_closed_form(m, k, lam_, b, t))
        if method == "brute":
            return pcc_fidelity(
                amplitudes_from_brute_force(params, k, t, values["max_qubits"])
            )
        return pcc_fidelity(evolve_analytic(params, k, t))

    fixed = {"lambda": lam, "b": values["b"], "t": values["t"]}
    axes = [s[0] for s in sweeps]
    grids = [s[1] for s in sweeps]
    if len(grids) == 1:
        combos = ((v,) for v in grids[0])
    else:
        combos = ((u, v) for u in grids[0] for v in grids[1])
    lines = ["M,k,lambda,B,t,fidelity,method"]
    try:
        for combo in combos:
            point = dict(fixed)
            for axis, value in zip(axes, combo):
                point[axis] = float(value)
            f = fidelity_at(point["lambda"], point["b"], point["t"])
            lines.append(
                f"{m},{k},{point['lambda']:.12g},{point['b']:.12g},"
                f"{point['t']:.12g},{f:.12g},{method}"
            )
    except (ValueError, CapacityError) as exc:
        parser.error(str(exc))
    _emit("\n".join(lines), values["output"])
    return EXIT_OK


def cmd_presets(values: dict, parser: argparse.ArgumentParser) -> int:
    m = values["m"]
    if m < 2:
        parser.error("presets need M >= 2")
    presets = [preset_optimal(m)]
    if m % 2 == 0:
        presets.append(preset_ancilla_free(m))
    presets.append(preset_k_equals_m(m))
    presets.append(universal_preset())
    if values["format"] == "json":
        payload = {
            "command": "presets",
            "m": m,
            "presets": [
                {
                    "name": preset.name,
                    "m": preset.M,
                    "k": preset.k,
                    "lambda": preset.lam,
                    "b": preset.B,
                    "t": preset.t,
                    "fidelity": preset.fidelity,
                    "copies": preset.copies,
                }
                for preset in presets
            ],
        }
        _emit(json.dumps(payload, indent=2), values["output"])
        return EXIT_OK
    lines = []
    for preset in presets:
        lines.append(
            f"{preset.name}: M = {preset.M}, k = {preset.k}, "
            f"lambda = {_fmt(preset.lam)}, B = {_fmt(preset.B)}, "
            f"t = {_fmt(preset.t)}, fidelity = {_fmt(preset.fidelity)}, "
            f"copies = {preset.copies}"
        )
    _emit("\n".join(lines), values["output"])
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    values = _resolve_values(args.command, args, parser)
    if args.command == "fidelity":
        return cmd_fidelity(values, parser)
    if args.command == "optimize":
        return cmd_optimize(values, parser)
    if args.command == "table1":
        return cmd_table1(values, parser)
    if args.command == "verify":
        return cmd_verify(values, parser, args.suite)
    if args.command == "scan":
        return cmd_scan(values, parser)
    if args.command == "presets":
        return cmd_presets(values, parser)
    parser.error(f"unknown command {args.command!r}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
