"""Command-line front end.

Subcommands:
  compute   full correlation report for a state file
  sweep     CSV over a one-parameter state family
  oracle    brute-force minimum conditional entropy for a state file
  validate  density-matrix validity check with exit code

Exit codes: 0 success, 1 input error, 2 optimizer non-convergence.
Flag values override the optional JSON config file (path from --config
or the QDISCORD_CONFIG environment variable), which overrides defaults.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, fields, replace

from .correlations import quantum_discord
from .linalg import von_neumann_entropy
from .measurement import conditional_entropy_fn
from .optimizer import OptimizerConfig, grid_oracle
from .states import (DensityMatrix, bell_diagonal, load_state,
                     mixed_bell_family, werner)

CONFIG_ENV_VAR = "QDISCORD_CONFIG"

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NOT_CONVERGED = 2

CSV_COLUMNS = ("param", "mutual_information", "classical_correlation",
               "discord", "min_conditional_entropy",
               "oracle_min_conditional_entropy", "iterations", "converged")


@dataclass(frozen=True)
class RunConfig:
    optimizer: OptimizerConfig
    oracle_resolution: int = 200
    output_path: str | None = None
    emit_plot_script: bool = False
    use_oracle: bool = False
    input_tolerance: float = 1e-6


def _load_config_file(path) -> dict:
    try:
        with open(path) as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc


def _build_run_config(args) -> RunConfig:
    file_cfg: dict = {}
    path = args.config or os.environ.get(CONFIG_ENV_VAR)
    if path:
        file_cfg = _load_config_file(path)

    opt_cfg = dict(file_cfg.get("optimizer", {}))
    defaults = OptimizerConfig()
    for name, flag in (("method", "method"), ("eta", "eta"), ("tol", "tol"),
                       ("max_iter", "max_iter"), ("restarts", "restarts"),
                       ("seed", "seed")):
        value = getattr(args, flag, None)
        if value is not None:
            opt_cfg[name] = value
    known = {f.name for f in fields(OptimizerConfig)}
    unknown = set(opt_cfg) - known
    if unknown:
        raise ValueError(f"unknown optimizer config keys: {sorted(unknown)}")
    optimizer = replace(defaults, **opt_cfg)

    def pick(flag, key, fallback):
        value = getattr(args, flag, None)
        if value is not None:
            return value
        return file_cfg.get(key, fallback)

    return RunConfig(
        optimizer=optimizer,
        oracle_resolution=int(pick("oracle_resolution", "oracle_resolution", 200)),
        output_path=pick("out", "output_path", None),
        emit_plot_script=bool(pick("plot_script", "emit_plot_script", False)),
        use_oracle=bool(getattr(args, "oracle", False)),
        input_tolerance=float(pick("tolerance_input", "input_tolerance", 1e-6)),
    )


def _fmt(x: float) -> str:
    return f"{x:.10f}"


def _report_dict(report) -> dict:
    stats = report.optimizer_stats
    meas = report.optimal_measurement
    return {
        "mutual_information": report.mutual_information,
        "classical_correlation": report.classical_correlation,
        "discord": report.discord,
        "min_conditional_entropy": report.min_conditional_entropy,
        "optimal_measurement": {"r": meas.r, "y": list(meas.y)},
        "optimizer_stats": {
            "method": stats.method,
            "iterations": stats.iterations,
            "restarts": stats.restarts,
            "converged": stats.converged,
            "used_bell_fast_path": stats.used_bell_fast_path,
            "clamped_values": list(stats.clamped_values),
            "oracle_gap": stats.oracle_gap,
        },
    }


def cmd_compute(args) -> int:
    cfg = _build_run_config(args)
    rho = load_state(args.state, cfg.input_tolerance)
    report = quantum_discord(
        rho, cfg.optimizer,
        oracle_resolution=cfg.oracle_resolution if cfg.use_oracle else None)
    print(f"mutual information      {_fmt(report.mutual_information)} bits")
    print(f"classical correlation   {_fmt(report.classical_correlation)} bits")
    print(f"quantum discord         {_fmt(report.discord)} bits")
    print(f"min conditional entropy {_fmt(report.min_conditional_entropy)} bits")
    meas = report.optimal_measurement
    print(f"optimal measurement     r={meas.r:+.6f} y=({meas.y[0]:+.6f}, "
          f"{meas.y[1]:+.6f}, {meas.y[2]:+.6f})")
    stats = report.optimizer_stats
    print(f"optimizer               {stats.method}, {stats.iterations} iterations, "
          f"converged={stats.converged}")
    if stats.oracle_gap is not None:
        print(f"oracle gap              {stats.oracle_gap:+.3e}")
    if cfg.output_path:
        with open(cfg.output_path, "w") as f:
            json.dump(_report_dict(report), f, indent=1)
            f.write("\n")
    return EXIT_OK if stats.converged else EXIT_NOT_CONVERGED


_SAFE_EVAL_NAMES = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan, "sqrt": math.sqrt,
    "exp": math.exp, "log": math.log, "pi": math.pi, "abs": abs,
}


def _omega_at(exprs, a: float):
    return tuple(
        float(eval(e, {"__builtins__": {}}, dict(_SAFE_EVAL_NAMES, a=a)))
        for e in exprs
    )


def _family_state(family: str, a: float, omega_exprs) -> DensityMatrix:
    if family == "werner":
        return werner(a)
    if family == "mixed_bell":
        return mixed_bell_family(a)
    if family == "bell_diagonal":
        if not omega_exprs:
            raise ValueError("bell_diagonal sweep needs --omega")
        return bell_diagonal(_omega_at(omega_exprs, a))
    raise ValueError(f"unknown family {family!r}")


def _sweep_params(start: float, end: float, step: float):
    if step <= 0:
        raise ValueError("step must be positive")
    if start > end:
        raise ValueError("start must not exceed end")
    out = []
    k = 0
    while True:
        a = start + k * step
        if a > end + 1e-12:
            break
        out.append(min(a, end))
        k += 1
    return out


def cmd_sweep(args) -> int:
    cfg = _build_run_config(args)
    omega_exprs = args.omega.split(",") if args.omega else None
    params = _sweep_params(args.start, args.end, args.step)
    all_converged = True
    lines = [",".join(CSV_COLUMNS)]
    for a in params:
        try:
            rho = _family_state(args.family, a, omega_exprs)
        except ValueError as exc:
            raise ValueError(f"invalid state at parameter {a}: {exc}") from exc
        report = quantum_discord(rho, cfg.optimizer)
        if cfg.use_oracle:
            oracle_val, _ = grid_oracle(conditional_entropy_fn(rho),
                                        cfg.oracle_resolution)
            oracle_field = _fmt(oracle_val)
        else:
            oracle_field = ""
        stats = report.optimizer_stats
        all_converged = all_converged and stats.converged
        lines.append(",".join([
            _fmt(a),
            _fmt(report.mutual_information),
            _fmt(report.classical_correlation),
            _fmt(report.discord),
            _fmt(report.min_conditional_entropy),
            oracle_field,
            str(stats.iterations),
            "true" if stats.converged else "false",
        ]))
    csv_text = "\n".join(lines) + "\n"
    out_path = cfg.output_path or "sweep.csv"
    with open(out_path, "w") as f:
        f.write(csv_text)
    print(f"wrote {len(params)} rows to {out_path}")
    if cfg.emit_plot_script:
        script_path = out_path + ".gp"
        with open(script_path, "w") as f:
            f.write(_plot_script(os.path.basename(out_path)))
        print(f"wrote plot script to {script_path}")
    return EXIT_OK if all_converged else EXIT_NOT_CONVERGED


def _plot_script(csv_name: str) -> str:
    return (
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        "set xlabel 'family parameter'\n"
        "set ylabel 'bits'\n"
        f"plot '{csv_name}' using 1:3 with linespoints title 'classical correlation', \\\n"
        f"     '{csv_name}' using 1:4 with linespoints title 'quantum discord'\n"
    )


def cmd_oracle(args) -> int:
    cfg = _build_run_config(args)
    rho = load_state(args.state, cfg.input_tolerance)
    value, meas = grid_oracle(conditional_entropy_fn(rho),
                              cfg.oracle_resolution)
    direction = meas.bloch_direction()
    print(f"grid minimum conditional entropy {_fmt(value)} bits "
          f"(resolution {cfg.oracle_resolution}, refined)")
    print(f"optimal projector direction      ({direction[0]:+.6f}, "
          f"{direction[1]:+.6f}, {direction[2]:+.6f})")
    print(f"marginal entropy S(rho_A)        "
          f"{_fmt(von_neumann_entropy(rho.marginal('A')))} bits")
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = _build_run_config(args)
    try:
        with open(args.state) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot parse {args.state}: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    import numpy as np

    try:
        m, n = (int(x) for x in data["dims"])
        mat = np.array(data["re"], dtype=float) + 1j * np.array(data["im"],
                                                                dtype=float)
        rho = DensityMatrix((m, n), mat)
    except (KeyError, TypeError, ValueError) as exc:
        print(f"malformed state file: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    report = rho.validity(cfg.input_tolerance)
    print(f"hermiticity defect {report.hermiticity_defect:.6e}")
    print(f"trace defect       {report.trace_defect:.6e}")
    print(f"min eigenvalue     {report.min_eigenvalue:.6e}")
    print(f"valid at tol {report.tol:.1e}: {report.valid}")
    return EXIT_OK if report.valid else EXIT_INPUT_ERROR


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=("gradient_descent", "nelder_mead",
                                        "grid_then_polish"))
    p.add_argument("--eta", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", dest="max_iter", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--oracle-resolution", dest="oracle_resolution", type=int)
    p.add_argument("--oracle", action="store_true", default=False)
    p.add_argument("--out", dest="out")
    p.add_argument("--plot-script", dest="plot_script", action="store_true",
                   default=None)
    p.add_argument("--tolerance-input", dest="tolerance_input", type=float)
    p.add_argument("--config")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdiscord",
        description="Classical correlation and quantum discord of bipartite "
                    "states via measurement optimization.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="full report for a state file")
    p.add_argument("--state", required=True)
    _add_common_flags(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="CSV sweep over a state family")
    p.add_argument("--family", required=True,
                   choices=("werner", "mixed_bell", "bell_diagonal"))
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--end", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--omega",
                   help="three comma-separated expressions in 'a' "
                        "(bell_diagonal only)")
    _add_common_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="brute-force minimum for a state file")
    p.add_argument("--state", required=True)
    _add_common_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("validate", help="validity report for a state file")
    p.add_argument("--state", required=True)
    _add_common_flags(p)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
