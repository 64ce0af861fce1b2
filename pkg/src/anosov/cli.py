"""Command-line front end.

Subcommands: certify, srb, variance, rate, lambda-curve, ulam.  Options can
be preloaded from a JSON config file (--config); explicit flags win over the
file.  Every run writes a JSON summary with the scalar results, residuals
and provenance (config echo, config hash, versions, backend, wall time).
Grids are dumped in the GRID binary format, tables as CSV.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import time

import numpy as np
import scipy

from . import __version__, backend
from .certificate import certify
from .grids import GridSpec, write_grid, write_grid_csv
from .kernels import BumpKernel, FejerKernel, match_epsilon
from .operators import assemble, set_fft_workers, write_opmat
from .stats import (
    NumericalError,
    lambda_curve,
    rate_function,
    srb_density,
    variance,
)
from .torus import LinearToral, PerturbedCat, TrigPolynomial, standard_observable
from .ulam import build_ulam, ulam_srb, ulam_variance


class ConfigError(ValueError):
    pass


def _parse_range(text: str) -> list:
    """Parse 'a:step:b' (inclusive ends) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range must be start:step:stop, got {text!r}")
        a, h, b = (float(p) for p in parts)
        if h <= 0:
            raise ConfigError("range step must be positive")
        count = int(round((b - a) / h))
        vals = [a + i * h for i in range(count + 1)]
        return [v for v in vals if v <= b + 1e-12]
    return [float(p) for p in text.split(",") if p.strip()]


def _make_map(args):
    name = args.map
    if name in ("cat", "linear"):
        return LinearToral(2, 1, 1, 1)
    if name == "perturbed-cat":
        return PerturbedCat(delta=args.delta, form=args.form)
    raise ConfigError(f"unknown map {name!r}")


def _make_observable(args):
    spec = getattr(args, "observable", "standard") or "standard"
    if spec == "standard":
        return standard_observable()
    try:
        modes = json.loads(spec)
        parsed = tuple(
            ((int(j1), int(j2)), complex(re, im)) for (j1, j2, re, im) in modes
        )
        return TrigPolynomial(parsed)
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad observable spec {spec!r}: {exc}") from None


def _make_kernel(args, grid: GridSpec):
    matched = {"epsilon": None, "matching_residual": None}
    if args.scheme == "fejer":
        kern = FejerKernel()
    elif args.scheme == "bump":
        eps = args.epsilon
        if eps is None:
            eps, residual = match_epsilon(grid.n, grid, full_output=True)
            matched["matching_residual"] = residual
        matched["epsilon"] = eps
        kern = BumpKernel(eps)
    else:
        raise ConfigError(f"scheme {args.scheme!r} is not a Fourier scheme")
    return kern, matched


def _out_dir(args) -> str:
    d = args.out_dir or os.environ.get("ANOSOV_OUT", ".")
    os.makedirs(d, exist_ok=True)
    return d


def _write_summary(args, task: str, payload: dict, started: float) -> str:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    blob = json.dumps(config, sort_keys=True, default=str)
    summary = {
        "task": task,
        "results": payload,
        "config": config,
        "config_sha256": hashlib.sha256(blob.encode()).hexdigest(),
        "versions": {
            "anosov_spectral": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "backend": backend.backend_name(),
        },
        "wall_time_s": time.perf_counter() - started,
    }
    path = os.path.join(_out_dir(args), args.json_name or f"{task}_summary.json")
    with open(path, "w") as f:
        json.dump(summary, f, indent=2, default=str)
    print(json.dumps(summary["results"], indent=2, default=str))
    print(f"summary written to {path}")
    return path


def _cmd_certify(args, started):
    report = certify(args.delta, args.alpha)
    _write_summary(args, "certify", report.to_dict(), started)
    return 0


def _cmd_variance(args, started):
    g = _make_observable(args)
    if args.scheme == "ulam":
        res = ulam_variance(_make_map(args), args.boxes, args.samples, g)
        payload = res.to_dict()
    else:
        grid = GridSpec(args.n, args.fine)
        kern, matched = _make_kernel(args, grid)
        res = variance(_make_map(args), kern, g, grid)
        payload = res.to_dict()
        payload.update(matched)
    _write_summary(args, "variance", payload, started)
    return 0


def _cmd_srb(args, started):
    grid = GridSpec(args.n, args.fine)
    kern, matched = _make_kernel(args, grid)
    g = _make_observable(args)
    M0 = assemble(_make_map(args), kern, g, 0.0, grid)
    srb = srb_density(M0, grid)
    out = _out_dir(args)
    grid_path = os.path.join(out, "srb_density.grid")
    write_grid(grid_path, srb.density)
    if args.csv:
        write_grid_csv(os.path.join(out, "srb_density.csv"), srb.density)
    payload = {
        "leading_eigenvalue": srb.eigen.lam,
        "eigen_residual": srb.eigen.residual,
        "imag_discard_max": srb.imag_max,
        "density_file": grid_path,
    }
    if args.dump_operator:
        op_path = os.path.join(out, "operator.opmat")
        write_opmat(op_path, M0)
        payload["operator_file"] = op_path
    payload.update(matched)
    _write_summary(args, "srb", payload, started)
    return 0


def _cmd_rate(args, started):
    grid = GridSpec(args.n, args.fine)
    kern, matched = _make_kernel(args, grid)
    g = _make_observable(args)
    s_values = _parse_range(args.s)
    bracket = tuple(float(x) for x in args.z_bracket.split(","))
    table = rate_function(_make_map(args), kern, g, grid, s_values, bracket)
    out = _out_dir(args)
    csv_path = os.path.join(out, "rate_table.csv")
    with open(csv_path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["s", "z_star", "r", "iterations", "boundary_flag"])
        for row in table.to_rows():
            writer.writerow(row)
    payload = {
        "rows": len(table.rows),
        "sigma2": table.sigma2,
        "mean_shift": table.shift,
        "z_bracket": list(table.z_bracket),
        "bracket_expanded": table.bracket_expanded,
        "table_file": csv_path,
    }
    payload.update(matched)
    _write_summary(args, "rate", payload, started)
    return 0


def _cmd_lambda_curve(args, started):
    grid = GridSpec(args.n, args.fine)
    kern, matched = _make_kernel(args, grid)
    g = _make_observable(args)
    zs = _parse_range(args.z)
    points = lambda_curve(_make_map(args), kern, g, grid, zs)
    out = _out_dir(args)
    csv_path = os.path.join(out, "lambda_curve.csv")
    with open(csv_path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["z", "lambda_re", "lambda_im", "log_abs_lambda"])
        for p in points:
            writer.writerow([p.z, p.lam.real, p.lam.imag, np.log(abs(p.lam))])
    payload = {
        "points": [{"z": p.z, "lambda": p.lam} for p in points],
        "table_file": csv_path,
    }
    payload.update(matched)
    _write_summary(args, "lambda-curve", payload, started)
    return 0


def _cmd_ulam(args, started):
    U = build_ulam(_make_map(args), args.boxes, args.samples)
    density = ulam_srb(U)
    out = _out_dir(args)
    grid_path = os.path.join(out, "ulam_density.grid")
    write_grid(grid_path, density.reshape(args.boxes, args.boxes))
    payload = {
        "boxes": args.boxes,
        "samples_per_box": args.samples,
        "density_min": float(density.min()),
        "density_file": grid_path,
    }
    if args.variance:
        res = ulam_variance(_make_map(args), args.boxes, args.samples, _make_observable(args))
        payload["sigma2"] = res.sigma2
        payload["mean_shift"] = res.shift
    _write_summary(args, "ulam", payload, started)
    return 0


def _add_common(p):
    p.add_argument("--map", default="perturbed-cat", help="cat | perturbed-cat")
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--form", default="section7", help="section7 | appendix")
    p.add_argument(
        "--observable",
        default="standard",
        help='"standard" or a JSON list of [j1, j2, re, im] modes',
    )
    p.add_argument("--scheme", default="fejer", help="fejer | bump | ulam")
    p.add_argument("--n", type=int, default=32, help="coarse order")
    p.add_argument("--fine", "--N", dest="fine", type=int, default=512, help="fine order N")
    p.add_argument("--epsilon", type=float, default=None, help="bump width (else matched)")
    p.add_argument("--boxes", type=int, default=64, help="Ulam boxes per side")
    p.add_argument("--samples", type=int, default=1600, help="Ulam samples per box")
    p.add_argument("--out-dir", default=None, help="output directory (env ANOSOV_OUT)")
    p.add_argument("--json-name", default=None, help="summary file name")
    p.add_argument("--config", default=None, help="JSON config file; flags override")
    p.add_argument(
        "--workers",
        type=int,
        default=1,
        help="FFT worker threads during assembly; does not change results",
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="anosov",
        description="Spectral and Ulam approximation of statistical data of torus maps",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="closed-form hyperbolicity certificate")
    _add_common(p)
    p.add_argument("--alpha", type=float, default=0.11872)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("variance", help="CLT variance")
    _add_common(p)
    p.set_defaults(func=_cmd_variance)

    p = sub.add_parser("srb", help="invariant density on the fine grid")
    _add_common(p)
    p.add_argument("--csv", action="store_true", help="also write CSV")
    p.add_argument("--dump-operator", action="store_true", help="write the OPMAT dump")
    p.set_defaults(func=_cmd_srb)

    p = sub.add_parser("rate", help="large-deviations rate function")
    _add_common(p)
    p.add_argument("--s", default="0:0.1:1.8", help="s grid, start:step:stop")
    p.add_argument("--z-bracket", default="-4,4")
    p.set_defaults(func=_cmd_rate)

    p = sub.add_parser("lambda-curve", help="leading eigenvalue along real twists")
    _add_common(p)
    p.add_argument("--z", default="-1:0.1:1", help="z grid, start:step:stop or list")
    p.set_defaults(func=_cmd_lambda_curve)

    p = sub.add_parser("ulam", help="Ulam transition matrix and invariant density")
    _add_common(p)
    p.add_argument("--variance", action="store_true", help="also compute sigma^2")
    p.set_defaults(func=_cmd_ulam)
    return ap


def _apply_config_file(args, argv):
    if not args.config:
        return args
    try:
        with open(args.config) as f:
            loaded = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config!r}: {exc}") from None
    explicit = {
        a.lstrip("-").split("=")[0].replace("-", "_") for a in argv if a.startswith("--")
    }
    for key, value in loaded.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ConfigError(f"unknown config key {key!r}")
        if attr not in explicit:
            setattr(args, attr, value)
    return args


def main(argv=None) -> int:
    parser = build_parser()
    started = time.perf_counter()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(argv)
        args = _apply_config_file(args, argv)
        set_fft_workers(getattr(args, "workers", 1))
        return args.func(args, started)
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, OverflowError, MemoryError) as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(diag, indent=2), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
