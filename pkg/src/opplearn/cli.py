"""Command-line harness: dataset generation, mining, training, prediction, experiments.

Exit codes: 0 success, 2 usage or validation problem, 3 data degeneracy,
4 internal numeric failure (a non-finite value in emitted results).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import replace
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .benchmarks import (
    OPT_FUNCTION_IDS,
    TEST_FUNCTION_IDS,
    get_opt_function,
    get_test_function,
)
from .errors import (
    ConfigError,
    DegenerateRangeError,
    DomainError,
    InsufficientDataError,
    InversionError,
    OppLearnError,
    SchemeMismatchError,
)
from .fuzzy import TrainConfig, build_fis, load_model, predict_batch, save_model
from .mining import SampleSet, mine_opposites, mining_dataset
from .opposition import Bounds, OppositionScheme
from .experiments import (
    ExperimentConfig,
    run_series1,
    run_series2,
    run_series3,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_NUMERIC = 4

RESULT_COLUMNS = ("series", "function", "scheme", "opposite_type", "run", "mean_error", "std_error")


class _CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _fmt(v) -> str:
    v = float(v)
    if not math.isfinite(v):
        raise _CliError(f"non-finite value {v!r} in results", EXIT_NUMERIC)
    return repr(v)


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([c if isinstance(c, str) else _fmt(c) for c in row])


def _write_manifest(path: str, command: str, config: dict, output_paths: list[str]) -> None:
    payload = {
        "command": command,
        "config": config,
        "started_at": datetime.now(timezone.utc).isoformat(),
        "tool_version": __version__,
        "output_paths": output_paths,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _parse_domain(raw: str) -> Bounds:
    parts = raw.split(":")
    if len(parts) != 2:
        raise _CliError(f"--domain expects LO:HI, got {raw!r}", EXIT_USAGE)
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise _CliError(f"--domain expects numeric LO:HI, got {raw!r}", EXIT_USAGE) from None
    try:
        return Bounds(lo, hi)
    except DomainError as exc:
        raise _CliError(str(exc), EXIT_USAGE) from None


def _read_sample_csv(path: str) -> tuple[list[str], np.ndarray]:
    """Read a numeric CSV with header; returns (header, data matrix)."""
    try:
        fh = open(path, "r", newline="", encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"cannot read {path}: {exc}", EXIT_USAGE) from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise _CliError(f"{path}: empty file, expected a header row", EXIT_USAGE) from None
        header = [h.strip() for h in header]
        rows = []
        for r, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise _CliError(
                    f"{path}: row {r} has {len(row)} fields, header has {len(header)}",
                    EXIT_USAGE,
                )
            parsed = []
            for c, cell in enumerate(row, start=1):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise _CliError(
                        f"{path}: row {r}, column {c}: {cell!r} is not numeric",
                        EXIT_USAGE,
                    ) from None
            rows.append(parsed)
    if not rows:
        raise _CliError(f"{path}: no data rows after the header", EXIT_USAGE)
    return header, np.asarray(rows, dtype=float)


def _mining_header(n: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n)] + ["y"]


def _column_bounds(data: np.ndarray) -> list[Bounds]:
    bounds = []
    for d in range(data.shape[1]):
        lo, hi = float(data[:, d].min()), float(data[:, d].max())
        if lo == hi:
            lo, hi = lo - 0.5, hi + 0.5  # constant column: widen so bounds stay valid
        bounds.append(Bounds(lo, hi))
    return bounds


def _train_config(args) -> TrainConfig:
    return TrainConfig(n_clusters=args.clusters, seed=args.seed)


def _config_dict(cfg: ExperimentConfig) -> dict:
    return {
        "function_id": cfg.function_id,
        "scheme": cfg.scheme.value,
        "n_samples": cfg.n_samples,
        "n_runs": cfg.n_runs,
        "seed": cfg.seed,
        "test_fraction": cfg.test_fraction,
        "train_config": {
            "n_clusters": cfg.train_config.n_clusters,
            "fuzzy_exponent_m": cfg.train_config.fuzzy_exponent_m,
            "max_iter": cfg.train_config.max_iter,
            "epsilon": cfg.train_config.epsilon,
            "seed": cfg.train_config.seed,
        },
    }


def _cmd_generate(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.function in TEST_FUNCTION_IDS:
        domain = _parse_domain(args.domain) if args.domain else None
        f = get_test_function(args.function, domain=domain)
        xs = rng.uniform(f.domain.lo, f.domain.hi, size=args.samples)
        ys = np.asarray(f.forward(xs), dtype=float)
        header = ["x1", "y"]
        rows = [(x, y) for x, y in zip(xs, ys)]
    elif args.function in OPT_FUNCTION_IDS:
        if args.domain:
            raise _CliError("--domain only applies to the 1-D test functions", EXIT_USAGE)
        g = get_opt_function(args.function)
        x1 = rng.uniform(g.domain[0].lo, g.domain[0].hi, size=args.samples)
        x2 = rng.uniform(g.domain[1].lo, g.domain[1].hi, size=args.samples)
        ys = np.asarray(g.evaluate(x1, x2), dtype=float)
        header = ["x1", "x2", "y"]
        rows = [(a, b, y) for a, b, y in zip(x1, x2, ys)]
    else:
        raise _CliError(f"unknown function {args.function!r}", EXIT_USAGE)
    _write_csv(args.output, header, rows)
    _write_manifest(
        args.output + ".manifest.json",
        "generate",
        {"function": args.function, "samples": args.samples, "seed": args.seed},
        [args.output],
    )
    return EXIT_OK


def _cmd_mine(args) -> int:
    header, data = _read_sample_csv(args.input)
    n = len(header) - 1
    if n < 1 or header != _mining_header(n):
        raise _CliError(
            f"{args.input}: expected header x1..xn,y, got {','.join(header)}", EXIT_USAGE
        )
    inputs, outputs = data[:, :n], data[:, n]
    samples = SampleSet.from_arrays(inputs, outputs, _column_bounds(inputs))
    pairs = mine_opposites(samples, OppositionScheme.parse(args.scheme))
    out_header = _mining_header(n) + [f"ox{i + 1}" for i in range(n)] + ["match_error"]
    rows = [
        tuple(p.inputs) + (p.output,) + tuple(p.opposite_inputs) + (p.match_error,)
        for p in pairs
    ]
    _write_csv(args.output, out_header, rows)
    _write_manifest(
        args.output + ".manifest.json",
        "mine",
        {"input": args.input, "scheme": args.scheme},
        [args.output],
    )
    return EXIT_OK


def _cmd_train(args) -> int:
    header, data = _read_sample_csv(args.input)
    n = (len(header) - 1) // 2  # x1..xn, y, ox1..oxn[, match_error]
    expected = _mining_header(n) + [f"ox{i + 1}" for i in range(n)]
    if header[: len(expected)] != expected:
        raise _CliError(
            f"{args.input}: expected mined-pairs header x1..xn,y,ox1..oxn, got {','.join(header)}",
            EXIT_USAGE,
        )
    inputs = data[:, : n + 1]
    targets = data[:, n + 1 : 2 * n + 1]
    model = build_fis(inputs, targets, _train_config(args))
    save_model(model, args.output)
    _write_manifest(
        args.output + ".manifest.json",
        "train",
        {"input": args.input, "clusters": args.clusters, "seed": args.seed},
        [args.output],
    )
    return EXIT_OK


def _cmd_predict(args) -> int:
    model = load_model(args.model)
    header, data = _read_sample_csv(args.input)
    if data.shape[1] != model.n_inputs:
        raise _CliError(
            f"{args.input}: model takes {model.n_inputs} columns, file has {data.shape[1]}",
            EXIT_USAGE,
        )
    preds = predict_batch(model, data)
    out_header = [f"ox{i + 1}" for i in range(model.n_outputs)]
    _write_csv(args.output, out_header, [tuple(row) for row in preds])
    _write_manifest(
        args.output + ".manifest.json",
        "predict",
        {"model": args.model, "input": args.input},
        [args.output],
    )
    return EXIT_OK


def _experiment_config(args) -> ExperimentConfig:
    defaults = {1: (100, 30), 2: (100, 3), 3: (1000, 5)}
    samples, runs = defaults[args.series]
    if args.samples is not None:
        samples = args.samples
    if args.runs is not None:
        runs = args.runs
    if args.series == 2 and args.initial is not None:
        samples = max(samples, args.initial)
    try:
        return ExperimentConfig(
            function_id=args.function,
            scheme=OppositionScheme.parse(args.scheme),
            n_samples=samples,
            n_runs=runs,
            seed=args.seed,
            train_config=TrainConfig(n_clusters=args.clusters, seed=args.seed),
        )
    except ConfigError as exc:
        raise _CliError(str(exc), EXIT_USAGE) from None


def _cmd_experiment(args) -> int:
    if args.series in (1, 2) and args.function not in TEST_FUNCTION_IDS:
        raise _CliError(
            f"series {args.series} needs one of {', '.join(TEST_FUNCTION_IDS)}; "
            f"got {args.function!r}",
            EXIT_USAGE,
        )
    if args.series == 3 and args.function not in OPT_FUNCTION_IDS:
        raise _CliError(
            f"series 3 needs one of {', '.join(OPT_FUNCTION_IDS)}; got {args.function!r}",
            EXIT_USAGE,
        )
    if args.domain and args.series == 3:
        raise _CliError("--domain only applies to the 1-D test functions", EXIT_USAGE)

    cfg = _experiment_config(args)
    os.makedirs(args.output, exist_ok=True)
    results_path = os.path.join(args.output, "results.csv")
    manifest_path = os.path.join(args.output, "manifest.json")
    outputs = [results_path]
    function = None
    if args.domain:
        function = get_test_function(args.function, domain=_parse_domain(args.domain))

    rows = []
    if args.series == 1:
        result = run_series1(cfg, function=function)
        for r in result.runs:
            rows.append((
                "1", cfg.function_id, cfg.scheme.value, "type1", str(r.run),
                r.type1_mean, r.type1_std,
            ))
            rows.append((
                "1", cfg.function_id, cfg.scheme.value, "type2", str(r.run),
                r.type2_mean, r.type2_std,
            ))
        summary = {
            "type1": {"mean": result.type1.mean, "std": result.type1.std},
            "type2": {"mean": result.type2.mean, "std": result.type2.std},
        }
    elif args.series == 2:
        initial = args.initial if args.initial is not None else 100
        final = args.final if args.final is not None else 200
        curves = []
        for r in range(cfg.n_runs):
            run_cfg = replace(cfg, seed=cfg.seed + r)
            curve = run_series2(run_cfg, initial, final, function=function)
            curves.append(curve)
            means = [pt.stats.mean for pt in curve]
            rows.append((
                "2", cfg.function_id, cfg.scheme.value, "type2", str(r),
                float(np.mean(means)), float(np.std(means, ddof=1)) if len(means) > 1 else 0.0,
            ))
        plot_path = os.path.join(args.output, "evolution.csv")
        plot_rows = []
        for i, pt in enumerate(curves[0]):
            step_means = [c[i].stats.mean for c in curves]
            spread = float(np.std(step_means, ddof=1)) if len(step_means) > 1 else 0.0
            plot_rows.append((str(pt.n_seen), float(np.mean(step_means)), spread))
        _write_csv(plot_path, ("n_seen", "mean", "std"), plot_rows)
        outputs.append(plot_path)
        summary = {"initial_n": initial, "final_n": final}
    else:
        result = run_series3(cfg)
        for r in result.runs:
            rows.append((
                "3", cfg.function_id, cfg.scheme.value, "random", str(r.run),
                r.random_mean, r.random_std,
            ))
            rows.append((
                "3", cfg.function_id, cfg.scheme.value, "type2", str(r.run),
                r.type2_mean, r.type2_std,
            ))
            rows.append((
                "3", cfg.function_id, cfg.scheme.value, "type1", str(r.run),
                r.type1_mean, r.type1_std,
            ))
        summary = {
            "random": {"mean": result.random.mean, "std": result.random.std},
            "type2": {"mean": result.type2.mean, "std": result.type2.std},
            "type1": {"mean": result.type1.mean, "std": result.type1.std},
        }

    _write_csv(results_path, RESULT_COLUMNS, rows)
    config = _config_dict(cfg)
    config["series"] = args.series
    config["summary"] = summary
    _write_manifest(manifest_path, "experiment", config, outputs)
    print(f"wrote {results_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opplearn",
        description="Learn true (type-II) opposites from sampled data with evolving fuzzy rules.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="sample a benchmark function into a CSV dataset")
    gen.add_argument("--function", required=True)
    gen.add_argument("--samples", type=int, default=100)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--domain", default=None, metavar="LO:HI")
    gen.add_argument("--output", required=True)
    gen.set_defaults(func=_cmd_generate)

    mine = sub.add_parser("mine", help="mine opposite pairs from a sample CSV")
    mine.add_argument("--input", required=True)
    mine.add_argument("--scheme", choices=["t1", "t2", "t3"], default="t1")
    mine.add_argument("--output", required=True)
    mine.set_defaults(func=_cmd_mine)

    train = sub.add_parser("train", help="fit an opposite model from mined pairs")
    train.add_argument("--input", required=True)
    train.add_argument("--clusters", type=int, default=30)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--output", required=True)
    train.set_defaults(func=_cmd_train)

    pred = sub.add_parser("predict", help="predict opposites with a saved model")
    pred.add_argument("--model", required=True)
    pred.add_argument("--input", required=True)
    pred.add_argument("--output", required=True)
    pred.set_defaults(func=_cmd_predict)

    import_exp = sub.add_parser("experiment", help="run one of the three benchmark series")
    import_exp.add_argument("--series", type=int, choices=[1, 2, 3], required=True)
    import_exp.add_argument("--function", required=True)
    import_exp.add_argument("--scheme", choices=["t1", "t2", "t3"], default="t1")
    import_exp.add_argument("--samples", type=int, default=None)
    import_exp.add_argument("--clusters", type=int, default=30)
    import_exp.add_argument("--runs", type=int, default=None)
    import_exp.add_argument("--seed", type=int, default=0)
    import_exp.add_argument("--initial", type=int, default=None)
    import_exp.add_argument("--final", type=int, default=None)
    import_exp.add_argument("--domain", default=None, metavar="LO:HI")
    import_exp.add_argument("--output", required=True)
    import_exp.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DegenerateRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except SchemeMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (InversionError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, InsufficientDataError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OppLearnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
