"""Command-line driver: ``python -m semantic_som <command>``.

Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 numeric error.

Config files are JSON objects with any of these top-level keys::

    {
      "domain_shape": [20, 20],
      "image_shape": [20, 20],
      "stimuli": "glyphs.csv",
      "schedule": {"rho0": 0.5, "beta": 0.9995, "sigma0": 10, "alpha": 0.9995,
                   "steps": 10000, "presentation": "uniform-random", "seed": 0},
      "modulation": {"theta": 0.999, "noise_p": 0.1, "trials": 100, "seed": 0},
      "experiment": {"probe": 1, "seeds": [0, 1, 2],
                     "sweep_thetas": [0.999, 0.9995], "sweep_noises": [0, 0.1, 1.7, 2]},
      "thresholds": {"baseline": "region", "creative_min_count": 3},
      "render": {"scale": 8, "overlay_mark": "@"}
    }

Flags override file values.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import fields, replace
from pathlib import Path

from . import experiments, io, render
from .errors import (
    ConfigError,
    DegenerateActivationError,
    DimensionError,
    InvalidInputError,
    InvalidParameterError,
    InvalidShapeError,
    NetworkFormatError,
    NotFoundError,
    PaletteError,
    StimulusFileError,
)
from .modulation import ModulationParams
from .som import GridShape, TrainingSchedule, label_map
from .stimuli import builtin_glyph_set, check_dimension, load_stimuli

log = logging.getLogger("semantic_som")

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3

_CONFIG_ERRORS = (ConfigError, InvalidParameterError, InvalidShapeError, NotFoundError,
                  StimulusFileError, DimensionError, PaletteError)
_NUMERIC_ERRORS = (DegenerateActivationError, InvalidInputError, ArithmeticError)
_TOP_KEYS = {"domain_shape", "image_shape", "stimuli", "schedule", "modulation",
             "experiment", "thresholds", "render"}


def _floats(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    return values


def _section(cls, data, name):
    allowed = {f.name for f in fields(cls)}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown {name} keys: {', '.join(sorted(unknown))}")
    return data


def load_config_file(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def _shape(value, name):
    try:
        rows, cols = value
        return GridShape(int(rows), int(cols))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be [rows, cols]: {exc}") from None


def build_config(raw: dict, args) -> experiments.ExperimentConfig:
    """Merge file values with command-line overrides and re-validate."""
    schedule = dict(_section(TrainingSchedule, raw.get("schedule", {}), "schedule"))
    modulation = dict(_section(ModulationParams, raw.get("modulation", {}), "modulation"))
    exp = dict(raw.get("experiment", {}))
    unknown = set(exp) - {"probe", "seeds", "sweep_thetas", "sweep_noises"}
    if unknown:
        raise ConfigError(f"unknown experiment keys: {', '.join(sorted(unknown))}")
    thresholds = _section(experiments.RegimeThresholds, raw.get("thresholds", {}), "thresholds")

    seed = getattr(args, "seed", None)
    if seed is not None:
        schedule["seed"] = seed
        modulation["seed"] = seed
    for flag, key in (("steps", "steps"),):
        if getattr(args, flag, None) is not None:
            schedule[key] = getattr(args, flag)
    for flag, key in (("theta", "theta"), ("noise_p", "noise_p"), ("trials", "trials")):
        if getattr(args, flag, None) is not None:
            modulation[key] = getattr(args, flag)
    if getattr(args, "probe", None) is not None:
        exp["probe"] = args.probe
    if getattr(args, "thetas", None) is not None:
        exp["sweep_thetas"] = args.thetas
    if getattr(args, "noises", None) is not None:
        exp["sweep_noises"] = args.noises
    if getattr(args, "seeds", None) is not None:
        if args.seeds < 1:
            raise ConfigError("--seeds must be at least 1")
        base = args.seed if args.seed is not None else 0
        exp["seeds"] = list(range(base, base + args.seeds))
    elif seed is not None and "seeds" not in exp:
        exp["seeds"] = list(range(seed, seed + 10))

    for name, values in (("sweep_thetas", exp.get("sweep_thetas")),
                         ("sweep_noises", exp.get("sweep_noises"))):
        if values is not None and len(values) == 0:
            raise ConfigError(f"{name} must not be empty")
    try:
        kwargs = dict(
            schedule=TrainingSchedule(**schedule),
            modulation=ModulationParams(**modulation),
            thresholds=experiments.RegimeThresholds(**thresholds),
            domain_shape=_shape(raw.get("domain_shape", [20, 20]), "domain_shape"),
            image_shape=_shape(raw.get("image_shape", [20, 20]), "image_shape"),
        )
        if "probe" in exp:
            kwargs["probe_stimulus_id"] = int(exp["probe"])
        if "seeds" in exp:
            kwargs["seeds"] = exp["seeds"]
        for key in ("sweep_thetas", "sweep_noises"):
            if key in exp:
                kwargs[key] = sorted(float(v) for v in exp[key])
        return experiments.ExperimentConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _stimuli(raw, args, domain_shape):
    path = getattr(args, "stimuli", None) or raw.get("stimuli")
    if path:
        if not Path(path).exists():
            raise ConfigError(f"stimulus file {path} not found")
        stimuli = load_stimuli(path)
    else:
        stimuli = builtin_glyph_set(domain_shape)
    check_dimension(stimuli, domain_shape.size)
    return stimuli


def _style(raw, args, stimuli):
    opts = dict(raw.get("render", {}))
    unknown = set(opts) - {"scale", "overlay_mark"}
    if unknown:
        raise ConfigError(f"unknown render keys: {', '.join(sorted(unknown))}")
    if getattr(args, "scale", None) is not None:
        opts["scale"] = args.scale
    return render.default_style(stimuli, opts.get("overlay_mark", "@"), opts.get("scale", 8))


def _load_map(raw, args):
    """Load a trained map plus the stimuli and labeling that go with it."""
    network = io.load_network(args.map)
    stimuli = _stimuli(raw, args, network.domain_shape)
    try:
        meta = io.load_meta(args.map)
    except FileNotFoundError:
        meta = {}
    recorded = meta.get("stimulus_checksum")
    if recorded and recorded != stimuli.checksum():
        raise ConfigError(f"stimuli do not match the set {args.map} was trained on")
    return network, stimuli, label_map(network, stimuli)


def cmd_train(args) -> int:
    raw = load_config_file(args.config)
    config = build_config(raw, args)
    stimuli = _stimuli(raw, args, config.domain_shape)
    style = _style(raw, args, stimuli)
    network, labeling = experiments.run_reference(config, stimuli)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    io.save_network(network, out)
    io.save_meta(out, config.schedule, stimuli)
    (out.parent / "labelmap.txt").write_text(render.render_label_text(labeling, style),
                                              encoding="utf-8")
    render.render_label_image(labeling, style, out.parent / "labelmap.pgm")
    log.info("wrote %s", out)
    return EXIT_OK


def cmd_recall(args) -> int:
    raw = load_config_file(args.config)
    config = build_config(raw, args)
    network, stimuli, labeling = _load_map(raw, args)
    report = experiments.run_recall(network, labeling, stimuli, config)
    experiments.write_report(args.out_dir, report, _style(raw, args, stimuli))
    log.info("regime %s: %d labels over %d neurons", report.regime, report.association_count,
             report.excited_area)
    return EXIT_OK


def cmd_sweep(args) -> int:
    raw = load_config_file(args.config)
    config = build_config(raw, args)
    network, stimuli, labeling = _load_map(raw, args)
    table = experiments.run_continuum_sweep(network, labeling, stimuli, config)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    table.write_csv(out)
    log.info("wrote %d rows to %s", len(table), out)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    raw = load_config_file(args.config)
    config = build_config(raw, args)
    stimuli = _stimuli(raw, args, config.domain_shape)
    experiments.reproduce(args.out_dir, config, stimuli, _style(raw, args, stimuli))
    log.info("wrote fig1..fig5 and fig6.csv under %s", args.out_dir)
    return EXIT_OK


def cmd_render(args) -> int:
    raw = load_config_file(args.config)
    network, stimuli, labeling = _load_map(raw, args)
    style = _style(raw, args, stimuli)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "labelmap.txt").write_text(render.render_label_text(labeling, style), encoding="utf-8")
    render.render_label_image(labeling, style, out / "labelmap.pgm")
    log.info("wrote label map renders under %s", out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semantic-som", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--stimuli", help="stimulus CSV (default: builtin glyphs)")
        if seed:
            p.add_argument("--seed", type=int)

    p = sub.add_parser("train", help="train a reference map")
    common(p)
    p.add_argument("--out", required=True)
    p.add_argument("--steps", type=int)
    p.add_argument("--scale", type=int)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("recall", help="probe a trained map at one (theta, p)")
    common(p)
    p.add_argument("--map", required=True)
    p.add_argument("--probe", type=int)
    p.add_argument("--theta", type=float)
    p.add_argument("--noise-p", dest="noise_p", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--scale", type=int)
    p.set_defaults(func=cmd_recall)

    p = sub.add_parser("sweep", help="run the (theta, p, seed) continuum sweep")
    common(p)
    p.add_argument("--map", required=True)
    p.add_argument("--probe", type=int)
    p.add_argument("--thetas", type=_floats)
    p.add_argument("--noises", type=_floats)
    p.add_argument("--seeds", type=int, help="number of seeds, counting up from --seed")
    p.add_argument("--trials", type=int)
    p.add_argument("--out", default="sweep.csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reproduce", help="run all five simulations and the sweep")
    common(p)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--scale", type=int)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("render", help="render the label map of a trained network")
    common(p, seed=False)
    p.add_argument("--map", required=True)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--scale", type=int)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; those are configuration errors here
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        return args.func(args)
    except _CONFIG_ERRORS as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except (OSError, NetworkFormatError) as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO
    except _NUMERIC_ERRORS as exc:
        log.error("numeric error: %s", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
