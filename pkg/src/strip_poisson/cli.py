"""Command line entry point: ``strip-poisson run CONFIG`` and ``strip-poisson verify SUITE``.

Exit status: 0 success, 1 verification failure, 2 invalid configuration,
3 numerical guard tripped, 4 I/O failure. Errors are written to standard
error as one JSON object.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import math
import os
import sys
from importlib import metadata
from pathlib import Path

import numpy as np
import scipy
from pydantic import ValidationError

from . import diagnostics as dg
from .config import OUTPUT_ENV, ScenarioConfig, load_config
from .mft import horizontal_transform, mode_slice_norms, parseval_check
from .presets import get_preset
from .solver import (CostGuard, MomentViolation, SolveReport, UndeclaredGrowth,
                     solve_constructive, solve_green_quadrature, solve_per_mode)
from .stripfield import NonIntegrableError, StripField, read_table, sample, write_table
from .weightspaces import WeightSpec

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, status: int, code: str, message: str, **details):
        super().__init__(message)
        self.status, self.code, self.details = status, code, details


def _finite(x):
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {k: _finite(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_finite(v) for v in x]
    if isinstance(x, np.generic):
        return _finite(x.item())
    return x


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def _load_source(cfg: ScenarioConfig, grid) -> StripField:
    src = cfg.source
    if hasattr(src, "preset"):
        f = sample(src.preset, grid, **src.params)
    else:
        try:
            f = read_table(src.table, grid, src.decay_class)
        except OSError as e:
            raise CliError(EXIT_IO, "IO_ERROR", f"cannot read table: {e}") from e
        except ValueError as e:
            raise CliError(EXIT_CONFIG, "TABLE_MISMATCH", str(e)) from e
    # the solvers work with -Lap u = f; Lap u = f is the same problem for -f
    return -f if cfg.sign_convention == "delta" else f


def _solve(cfg: ScenarioConfig, f: StripField, threads: int | None) -> SolveReport:
    try:
        if cfg.method == "per_mode":
            return solve_per_mode(f, cfg.moment_policy, cfg.tol_moment, cfg.normalize, workers=threads)
        if cfg.method == "green_quadrature":
            return solve_green_quadrature(f, cfg.tol_moment, cfg.max_nodes, normalize=cfg.normalize)
        return solve_constructive(f, cfg.R)
    except MomentViolation as e:
        raise CliError(EXIT_NUMERIC, "MOMENT_VIOLATION", str(e),
                       moments={"f_1": e.moments[0], "f_y2": e.moments[1]}, tol_moment=e.tol) from e
    except CostGuard as e:
        raise CliError(EXIT_NUMERIC, "COST_GUARD", str(e)) from e
    except UndeclaredGrowth as e:
        raise CliError(EXIT_NUMERIC, "UNDECLARED_GROWTH", str(e)) from e
    except ValueError as e:
        raise CliError(EXIT_CONFIG, "INVALID_INPUT", str(e)) from e


def _norm(u: StripField, spec) -> dict:
    if spec.p is not None:
        return {"m": spec.m, "alpha": spec.alpha, "p": spec.p,
                "value": dg.x_space_norm(u, spec.m, spec.alpha, spec.p)}
    nv = dg.weighted_norm(u, WeightSpec(spec.m, spec.alpha))
    return {"m": spec.m, "alpha": spec.alpha, "value": nv.value, "tail": nv.tail}


def _diagnostics(cfg: ScenarioConfig, f: StripField, rep: SolveReport) -> dict:
    out: dict = {}
    u = rep.u
    grid = u.grid
    for name in cfg.diagnostics:
        if name == "moments":
            out[name] = {"f_1": rep.moments[0], "f_y2": rep.moments[1]}
        elif name == "residual":
            out[name] = {"relative_l2": dg.residual_error(u, f)}
        elif name == "exact_error":
            src = cfg.source
            preset = get_preset(src.preset) if hasattr(src, "preset") else None
            if preset is None or preset.exact_u is None:
                out[name] = None
                continue
            Y1, Y2 = grid.mesh()
            exact = preset.exact_u(Y1, Y2)
            if cfg.sign_convention == "delta":
                exact = -exact
            out[name] = {"relative_error": dg.relative_error_modulo(u, exact, 1),
                         "modulo": "span{1,y2}"}
        elif name == "decay_fit":
            window = cfg.decay_window or (min(2.0, grid.L / 2), grid.L - 1.0)
            rate, r2 = dg.decay_fit(u, "exp", window)
            out[name] = {"model": "exp", "window": list(window), "rate": rate, "r2": r2}
        elif name == "parseval":
            lhs, rhs = parseval_check(f, 0.0)
            out[name] = {"lhs": lhs, "rhs": rhs}
        elif name == "poincare_wirtinger":
            res = dg.poincare_wirtinger_check(u.with_values(u.values, "schwartz"), 0.0)
            out[name] = {"lhs": res.lhs, "rhs": res.rhs, "d1_only": res.d1_only}
        elif name == "jumps":
            j = rep.extra["jumps"]
            out[name] = {"R": j.R, "hbar_plus": j.hbar_plus, "hbar_minus": j.hbar_minus,
                         "sum": j.hbar_plus + j.hbar_minus}
    return out


def _write_slices(path: Path, f: StripField, u: StripField) -> None:
    grid = u.grid
    norms = mode_slice_norms(horizontal_transform(u))
    col = grid.n1 // 4  # y1 = 0.25
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["y2"] + [f"mode_{k}" for k in range(norms.shape[0])] + ["u_y1_0.25", "f_y1_0.25"])
        for j, y in enumerate(grid.y2):
            w.writerow([repr(float(y))] + [repr(float(v)) for v in norms[:, j]]
                       + [repr(float(u.values[col, j])), repr(float(f.values[col, j]))])


def run(config_path, output: str | None = None, threads: int | None = None) -> int:
    try:
        cfg = load_config(config_path)
    except OSError as e:
        raise CliError(EXIT_IO, "IO_ERROR", f"cannot read config: {e}") from e
    except json.JSONDecodeError as e:
        raise CliError(EXIT_CONFIG, "CONFIG_INVALID", f"config is not valid JSON: {e}") from e
    except ValidationError as e:
        raise CliError(EXIT_CONFIG, "CONFIG_INVALID", "config failed validation",
                       errors=json.loads(e.json(include_url=False, include_context=False))) from e
    grid = cfg.grid.build()
    f = _load_source(cfg, grid)
    rep = _solve(cfg, f, threads)
    try:
        norms = [_norm(rep.u, s) for s in cfg.weight_specs]
        if cfg.norm_ratio is not None:
            top = _norm(rep.u, cfg.norm_ratio.target)["value"]
            bottom = _norm(f, cfg.norm_ratio.source)["value"]
            rep.norm_ratio = top / bottom if bottom > 0 else None
        diag = _diagnostics(cfg, f, rep)
    except NonIntegrableError as e:
        raise CliError(EXIT_NUMERIC, "NON_INTEGRABLE", str(e)) from e
    report = {
        "config": json.loads(cfg.model_dump_json()),
        "grid": {"n1": grid.n1, "L": grid.L, "n2": grid.n2, "h2": grid.h2},
        "solve": rep.summary(),
        "norms": norms,
        "diagnostics": diag,
        "versions": {"artifact": _version(), "numpy": np.__version__, "scipy": scipy.__version__},
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }
    outdir = Path(output or os.environ.get(OUTPUT_ENV) or cfg.output)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "report.json").write_text(
            json.dumps(_finite(report), indent=2, sort_keys=True, allow_nan=False) + "\n")
        _write_slices(outdir / "slices.csv", f, rep.u)
        write_table(rep.u, outdir / "solution.csv")
    except OSError as e:
        raise CliError(EXIT_IO, "IO_ERROR", f"cannot write outputs: {e}") from e
    print(f"wrote {outdir / 'report.json'}")
    return EXIT_OK


def verify(suite: str) -> int:
    from .verify import SUITES, run_suite

    if suite not in SUITES:
        raise CliError(EXIT_CONFIG, "UNKNOWN_SUITE", f"unknown suite {suite!r}", known=sorted(SUITES))
    ok, _ = run_suite(suite)
    return EXIT_OK if ok else EXIT_FAIL


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="cap on worker threads")
    common.add_argument("--output", default=argparse.SUPPRESS,
                        help=f"output directory (overrides ${OUTPUT_ENV} and the config)")
    p = argparse.ArgumentParser(prog="strip-poisson", parents=[common],
                                description="Poisson problems on the periodic infinite strip")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", parents=[common], help="run a scenario from a JSON config")
    r.add_argument("config")
    v = sub.add_parser("verify", parents=[common], help="run an acceptance bundle")
    v.add_argument("suite")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    threads = getattr(args, "threads", None)
    output = getattr(args, "output", None)
    if threads is not None and threads < 1:
        print(json.dumps({"error": "CONFIG_INVALID", "message": "--threads must be >= 1"}), file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "run":
            return run(args.config, output, threads)
        return verify(args.suite)
    except CliError as e:
        payload = {"error": e.code, "message": str(e), **_finite(e.details)}
        print(json.dumps(payload, sort_keys=True), file=sys.stderr)
        return e.status


if __name__ == "__main__":
    sys.exit(main())
