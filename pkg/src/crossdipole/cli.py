"""Command-line front end.

    crossdipole analyze  --config PATH [--freq HZ] [--segments N] [--swap-elements] --out DIR
    crossdipole sweep    --config PATH --f-start HZ --f-stop HZ --points N --out DIR
    crossdipole optimize --config PATH --ga PATH --out DIR
    crossdipole limits   --config PATH --out DIR

Exit codes: 0 ok, 2 configuration error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import (ConfigError, config_hash, design_from_config, design_to_config,
                     load_design_config, load_ga_config)
from .farfield import write_pattern_csv
from .geometry import DEFAULT_SEGMENTS, MeshError, build_model, min_enclosing_sphere
from .metrics import (analyze, band_report, common_band, extract_band, harrington_limit, sweep,
                      write_sweep_csv)
from .mom import NumericalError
from .optimizer import GAConfig, SearchSpace, run_ga

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

log = logging.getLogger("crossdipole")


def _write_json(path, obj):
    path.write_text(json.dumps(obj, indent=2) + "\n")


def _manifest(out, command, cfg, segments, seed=None, extra=None):
    data = {
        "tool": "crossdipole",
        "version": __version__,
        "command": command,
        "config_sha256": config_hash(cfg),
        "config": cfg,
        "seed": seed,
        "mesh": {"segments_per_dipole": segments, "basis": "triangle", "testing": "galerkin"},
    }
    data.update(extra or {})
    _write_json(out / "manifest.json", data)


def _load(args):
    cfg = load_design_config(args.config)
    design = design_from_config(cfg)
    segments = cfg.get("segments_per_dipole", DEFAULT_SEGMENTS)
    z0 = cfg.get("reference_impedance_ohm", 50.0)
    return cfg, design, segments, z0


def _outdir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_analyze(args):
    cfg, design, segments, z0 = _load(args)
    if args.segments is not None:
        segments = args.segments
    if args.freq is not None:
        if not args.freq > 0:
            raise ConfigError("--freq must be positive")
        design = replace(design, frequency=args.freq)
    if args.swap_elements:
        design = design.swapped_elements()
    try:
        build_model(design, segments)
    except MeshError as exc:
        raise ConfigError(str(exc)) from None
    report, grid = analyze(design, segments, z0)
    out = _outdir(args)
    _write_json(out / "report.json", report.to_json())
    write_pattern_csv(grid, out / "pattern.csv")
    _manifest(out, "analyze", cfg, segments,
              extra={"overrides": {"freq": args.freq, "segments": args.segments,
                                   "swap_elements": args.swap_elements}})
    print(json.dumps(report.to_json(), indent=2))


def cmd_sweep(args):
    cfg, design, segments, z0 = _load(args)
    if args.points < 2:
        raise ConfigError("--points must be at least 2")
    if not 0 < args.f_start < args.f_stop:
        raise ConfigError("need 0 < --f-start < --f-stop")
    try:
        build_model(design, segments)
    except MeshError as exc:
        raise ConfigError(str(exc)) from None
    records = sweep(design, args.f_start, args.f_stop, args.points, segments, z0)
    out = _outdir(args)
    write_sweep_csv(records, out / "sweep.csv")
    s11_bands = extract_band(records, "s11", -10.0)
    ar_bands = extract_band(records, "ar", 3.0)
    bands = {
        "s11": band_report("s11", -10.0, s11_bands),
        "ar": band_report("ar", 3.0, ar_bands),
        "common": band_report("common", None, common_band(s11_bands, ar_bands)),
    }
    _write_json(out / "bands.json", bands)
    _manifest(out, "sweep", cfg, segments,
              extra={"sweep": {"f_start_hz": args.f_start, "f_stop_hz": args.f_stop,
                               "points": args.points}})
    print(json.dumps(bands, indent=2))


def cmd_optimize(args):
    cfg, design, segments, z0 = _load(args)
    ga = load_ga_config(args.ga)
    space = SearchSpace(f0=ga.get("f0_hz", design.frequency),
                        search_spacing=ga.get("search_spacing", False))
    try:
        config = GAConfig(population=ga.get("population", 40),
                          generations=ga.get("generations", 60),
                          rng_seed=ga.get("seed", 0), segments=segments,
                          reference_impedance=z0)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    run = run_ga(space, config)
    best, fitness = run.final_best
    best_cfg = design_to_config(best, segments, z0)
    out = _outdir(args)
    _write_json(out / "best_design.json", best_cfg)
    _write_json(out / "optimize.json", {
        "seed": run.seed,
        "evaluations": run.evaluations,
        "best_fitness_db": fitness,
        "best_per_generation_db": [f for f, _ in run.best_per_generation],
        "best_design": best_cfg,
    })
    _manifest(out, "optimize", cfg, segments, seed=run.seed, extra={"ga": ga})
    print(f"best LHCP realized gain {fitness:.4f} dB after {run.evaluations} evaluations")


def cmd_limits(args):
    cfg, design, segments, _ = _load(args)
    try:
        sphere = min_enclosing_sphere(build_model(design, segments))
    except MeshError as exc:
        raise ConfigError(str(exc)) from None
    limits = {"a_m": sphere.radius_a, "ka": sphere.ka, "d_max_dbi": harrington_limit(sphere.ka)}
    out = _outdir(args)
    _write_json(out / "limits.json", limits)
    _manifest(out, "limits", cfg, segments)
    print(json.dumps(limits, indent=2))


def build_parser():
    parser = argparse.ArgumentParser(prog="crossdipole", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="solve one design at one frequency")
    p.add_argument("--config", required=True)
    p.add_argument("--freq", type=float)
    p.add_argument("--segments", type=int)
    p.add_argument("--swap-elements", action="store_true",
                   help="exchange driven and parasitic element dimensions")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="frequency sweep with band extraction")
    p.add_argument("--config", required=True)
    p.add_argument("--f-start", type=float, required=True)
    p.add_argument("--f-stop", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="genetic-algorithm design search")
    p.add_argument("--config", required=True)
    p.add_argument("--ga", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("limits", help="enclosing sphere and Harrington bound")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_limits)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
