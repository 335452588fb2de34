"""Command-line entry point: ``solar-markov {fit,test,generate,sample,evaluate}``.

Exit codes: 0 success, 1 model or computation error, 2 bad input
(missing/unparsable file, invalid config), 3 trace grid mismatch.
Statistical outcomes (independence not rejected, non-stationarity) are
report fields and never change the exit code.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .config import FIT_MODES, RunConfig, apply_overrides, dump_config, load_config
from .discretize import SolarState, discretize_day, discretize_days
from .errors import ConfigError, DataError, GridMismatchError, SolarMarkovError
from .evaluation import compare, read_trace_csv, trace_diff, write_overlay_csv, write_trace_csv
from .generator import CARRY_MODES, PLAN_PRESETS, SegmentedModel, fit_segmented, generate, sample
from .ingest import daily_windows, parse_csv, representative_day
from .markov import read_matrix, write_matrix
from .stats import dependency_test, stationarity_check

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_GRID = 3

MODEL_FILE = "model.json"
OBSERVED_FILE = "observed_states.csv"
TRACE_FILE = "trace.csv"


class InputError(SolarMarkovError):
    """A required input file is missing."""


def _require_file(path, what):
    if path is None:
        raise InputError(f"no {what} given")
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{what} not found: {p}")
    return p


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def fit_from_data(cfg):
    """Ingest, discretize and fit according to ``cfg``.

    Returns the fitted model, the observed representative-day trace and the
    list of empty-segment warnings.
    """
    series = parse_csv(_require_file(cfg.data, "data file"), cfg.slot_minutes)
    plan = cfg.plan
    days = daily_windows(series, plan.window_start, plan.window_end)
    if not days:
        raise DataError("no day in the data covers the plan window")
    repday = representative_day(series, plan.window_start, plan.window_end)
    observed = discretize_day(repday, cfg.thresholds)
    if cfg.fit_on == "repday":
        fit_days = [observed]
    else:
        fit_days = discretize_days(days, plan.slot_minutes, plan.window_start, cfg.thresholds)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        model = fit_segmented(fit_days, plan, cfg.thresholds, cfg.smoothing)
    notes = [str(w.message) for w in caught]
    return model, observed, len(days), notes


def load_model(model_dir):
    path = _require_file(Path(model_dir) / MODEL_FILE, "model")
    with open(path, encoding="utf-8") as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: {exc}") from None
    return SegmentedModel.from_dict(d["model"] if "model" in d else d), d


def cmd_fit(cfg, args):
    model, observed, day_count, notes = fit_from_data(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for s, (counts, P) in enumerate(zip(model.counts, model.matrices), start=1):
        write_matrix(out / f"counts_s{s}.txt", counts)
        write_matrix(out / f"matrix_s{s}.txt", P)
    write_trace_csv(out / OBSERVED_FILE, observed)
    manifest = {
        "data": str(cfg.data),
        "fit_on": cfg.fit_on,
        "day_count": day_count,
        "initial_state": observed[0].label,
        "warnings": notes,
        "model": model.to_dict(),
    }
    _write_json(out / MODEL_FILE, manifest)
    for note in notes:
        print(f"warning: {note}", file=sys.stderr)
    print(f"fitted {len(model.matrices)} segment matrices from {day_count} day(s) ({cfg.fit_on}) -> {out}")
    if args.emit_matrices:
        for s, P in enumerate(model.matrices, start=1):
            print(f"# segment {s}")
            np.savetxt(sys.stdout, P, fmt="%.6f")
    return EXIT_OK


def cmd_test(cfg, args):
    counts = None
    if args.matrices:
        mats = [read_matrix(_require_file(p, "matrix file")) for p in args.matrices]
    elif cfg.data is not None and cfg.model is None:
        model, _, _, _ = fit_from_data(cfg)
        mats, counts = list(model.matrices), model.total_counts
    else:
        model, _ = load_model(cfg.model_dir)
        mats = list(model.matrices)
        counts = model.total_counts if model.counts else None

    results = {}
    if counts is not None:
        results["dependency_test.json"] = dependency_test(counts, cfg.significance).to_dict()
    if len(mats) >= 2:
        results["stationarity.json"] = stationarity_check(mats, cfg.stationarity_threshold).to_dict()
    if not results:
        raise DataError("nothing to test: need transition counts or at least two matrices")

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, report in results.items():
        _write_json(out / name, report)
    if "dependency_test.json" in results:
        r = results["dependency_test.json"]
        print(
            f"alpha = {r['alpha']:.4f}, chi2({r['dof']}) critical = {r['critical_value']:.4f}, "
            f"reject independence: {r['reject_independence']}"
        )
    if "stationarity.json" in results:
        r = results["stationarity.json"]
        print(f"max segment distance = {r['max_distance']:.4f}, stationary: {r['stationary']}")
    return EXIT_OK


def _initial(cfg, manifest):
    if cfg.initial_state is not None:
        return cfg.initial_state
    if "initial_state" in manifest:
        return SolarState.parse(manifest["initial_state"])
    return SolarState.LOW


def cmd_generate(cfg, args):
    model, manifest = load_model(cfg.model_dir)
    initial = _initial(cfg, manifest)
    result = generate(model, initial, carry=cfg.carry, strict_alg1=cfg.strict_alg1)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    result.write_csv(out / TRACE_FILE)
    summary = {
        "initial_state": initial.label,
        "carry": cfg.carry,
        "strict_alg1": cfg.strict_alg1,
        "slots": len(result.states),
        "fallback_count": len(result.fallback_slots),
        "fallback_slots": list(result.fallback_slots),
        "fallback_times": [result.states.times()[k] for k in result.fallback_slots],
    }
    _write_json(out / "generation.json", summary)
    print(f"generated {len(result.states)} slots, {len(result.fallback_slots)} dead-row fallback(s) -> {out / TRACE_FILE}")
    if args.diff_modes:
        other = generate(model, initial, carry=cfg.carry, strict_alg1=not cfg.strict_alg1)
        default, strict = (other, result) if cfg.strict_alg1 else (result, other)
        diff = trace_diff(default.states, strict.states)
        times = default.states.times()
        _write_json(
            out / "mode_diff.json",
            {
                "carry": cfg.carry,
                "differing_slots": diff,
                "differing_times": [times[k] for k in diff],
                "count": len(diff),
                "single_step": [SolarState(int(c)).label for c in default.states.codes],
                "strict_alg1": [SolarState(int(c)).label for c in strict.states.codes],
            },
        )
        other.write_csv(out / ("trace_single_step.csv" if cfg.strict_alg1 else "trace_strict_alg1.csv"))
        print(f"single-step and strict-alg1 traces differ at {len(diff)} slot(s)")
    return EXIT_OK


def cmd_sample(cfg, args):
    model, manifest = load_model(cfg.model_dir)
    initial = _initial(cfg, manifest)
    seq = sample(model, initial, cfg.seed)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    write_trace_csv(out / "sample.csv", seq)
    print(f"sampled {len(seq)} slots with seed {cfg.seed} -> {out / 'sample.csv'}")
    return EXIT_OK


def cmd_evaluate(cfg, args):
    real_path = _require_file(args.real or Path(cfg.model_dir) / OBSERVED_FILE, "observed trace")
    synth_path = _require_file(args.synth or Path(cfg.out) / TRACE_FILE, "synthetic trace")
    real = read_trace_csv(real_path)
    synth = read_trace_csv(synth_path)
    report = compare(real, synth)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "evaluation.json", report.to_dict())
    write_overlay_csv(out / "overlay.csv", real, synth)
    print(
        f"sigma real = {report.sigma_real:.4f}, sigma synthetic = {report.sigma_synth:.4f}, "
        f"match = {report.match_fraction:.3f} over {report.length} slots"
    )
    return EXIT_OK


COMMANDS = {
    "fit": cmd_fit,
    "test": cmd_test,
    "generate": cmd_generate,
    "sample": cmd_sample,
    "evaluate": cmd_evaluate,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="plain-text key = value config file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--dump-config", action="store_true", help="print the effective config and exit")
    common.add_argument("--preset", choices=sorted(PLAN_PRESETS), help="named segmentation plan")
    common.add_argument("--segments", help="inline plan boundaries, e.g. 06:00,09:00,12:00")
    common.add_argument("--slot-minutes", type=int)
    common.add_argument("--lr", type=float, help="Low/Medium threshold, W/m^2")
    common.add_argument("--mr", type=float, help="Medium/High threshold, W/m^2")
    common.add_argument("--max", type=float, help="High/VeryHigh threshold, W/m^2")

    parser = argparse.ArgumentParser(prog="solar-markov", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[common], help="fit per-segment transition matrices")
    p.add_argument("data", nargs="?", help="irradiance CSV")
    p.add_argument("--fit-on", choices=FIT_MODES)
    p.add_argument("--smoothing", type=float, help="additive pseudo-count (default 0)")
    p.add_argument("--emit-matrices", action="store_true", help="also print the matrices")

    p = sub.add_parser("test", parents=[common], help="state-dependency and stationarity tests")
    p.add_argument("data", nargs="?", help="irradiance CSV (otherwise a fitted model is used)")
    p.add_argument("--model", help="directory holding model.json")
    p.add_argument("--matrices", nargs="+", help="plain-text matrix files (stationarity only)")
    p.add_argument("--fit-on", choices=FIT_MODES)
    p.add_argument("--significance", type=float)
    p.add_argument("--stationarity-threshold", type=float)

    p = sub.add_parser("generate", parents=[common], help="argmax state trajectory")
    p.add_argument("--model", help="directory holding model.json (default: --out)")
    p.add_argument("--carry", choices=CARRY_MODES)
    p.add_argument("--strict-alg1", action="store_true", default=None,
                   help="use the literal x[t-1] @ P**t update")
    p.add_argument("--initial", help="initial state (L, M, H, VH)")
    p.add_argument("--diff-modes", action="store_true", help="also run the other update rule and diff")

    p = sub.add_parser("sample", parents=[common], help="seeded Monte-Carlo state path")
    p.add_argument("--model", help="directory holding model.json (default: --out)")
    p.add_argument("--seed", type=int)
    p.add_argument("--initial", help="initial state (L, M, H, VH)")

    p = sub.add_parser("evaluate", parents=[common], help="compare synthetic against observed states")
    p.add_argument("real", nargs="?", help="observed trace CSV (default: <model>/observed_states.csv)")
    p.add_argument("synth", nargs="?", help="synthetic trace CSV (default: <out>/trace.csv)")
    p.add_argument("--model", help="directory holding the observed trace")
    return parser


_FLAG_KEYS = {
    "data": "data",
    "out": "out",
    "model": "model",
    "lr": "threshold.lr",
    "mr": "threshold.mr",
    "max": "threshold.max",
    "preset": "plan.preset",
    "segments": "plan.boundaries",
    "slot_minutes": "plan.slot_minutes",
    "fit_on": "fit.on",
    "smoothing": "fit.smoothing",
    "carry": "generate.carry",
    "strict_alg1": "generate.strict_alg1",
    "initial": "generate.initial",
    "significance": "test.significance",
    "stationarity_threshold": "test.stationarity_threshold",
    "seed": "sample.seed",
}


def resolve_config(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.preset is not None and args.segments is not None:
        raise ConfigError("--preset and --segments are mutually exclusive")
    raw = {}
    for attr, key in _FLAG_KEYS.items():
        value = getattr(args, attr, None)
        if value is not None:
            raw[key] = str(value)
    return apply_overrides(cfg, raw)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.dump_config:
            sys.stdout.write(dump_config(cfg))
            return EXIT_OK
        return COMMANDS[args.command](cfg, args)
    except GridMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GRID
    except (InputError, DataError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SolarMarkovError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
