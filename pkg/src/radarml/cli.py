"""Command line front end: generate datasets, run experiments, report.

Subcommands:
  generate  synthesize the planned datasets and write train/test pairs
  run       tune and evaluate estimators on previously generated pairs
  report    rank estimators per dataset and rewrite the aggregate table

Exit codes: 0 success, 2 configuration error, 3 missing input,
4 estimator failure. All outputs are written atomically and reruns with
the same seed reproduce dataset files and the aggregate table byte for
byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import yaml

from .config import (
    ConfigError,
    ExperimentConfig,
    build_plan,
    parse_config,
)
from .dataset import (
    DATA_TYPES,
    LabeledDataset,
    load_dataset,
    save_dataset,
    write_atomic,
)
from .estimators import KINDS
from .labeling import N_CLASSES
from .modelsel import evaluate_kinds, stratified_split
from .seeding import derive_seed
from .sigproc import derive_dataset, standardize_dataset
from .synth import generate_dataset

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MISSING = 3
EXIT_ESTIMATOR = 4

_GEN_KEY = 301
_SPLIT_KEY = 302
_RUN_KEY = 303

_SCHEME_ORDER = ("simple4", "grid10")


class MissingInputError(FileNotFoundError):
    pass


def _dataset_paths(out_dir, dataset_id):
    base = os.path.join(out_dir, "datasets")
    return (
        os.path.join(base, f"{dataset_id}-train.rds"),
        os.path.join(base, f"{dataset_id}-test.rds"),
    )


def _entry_keys(config: ExperimentConfig, entry):
    """Stable integer keys for seed derivation, independent of filters."""
    si = [s.scenario_id for s in config.scenarios].index(entry.scenario.scenario_id)
    schi = _SCHEME_ORDER.index(entry.scheme)
    dti = DATA_TYPES.index(entry.data_type)
    return si, schi, dti


def _sidecar(ds: LabeledDataset, entry, config: ExperimentConfig, role, counterpart):
    counts = np.bincount(ds.labels, minlength=N_CLASSES[ds.scheme])
    meta = {
        "format": "RDS1",
        "version": 1,
        "dataset_id": ds.dataset_id,
        "role": role,
        "counterpart": counterpart,
        "scheme": ds.scheme,
        "data_type": ds.data_type,
        "n_examples": int(ds.n_examples),
        "n_bins": int(ds.n_bins),
        "n_dropped": int(ds.n_dropped),
        "class_counts": {int(c): int(n) for c, n in enumerate(counts)},
        "scenario": {
            "scenario_id": entry.scenario.scenario_id,
            "environment": entry.scenario.environment,
            "n_bins": entry.scenario.n_bins,
            "bin_duration_ps": entry.scenario.bin_duration_ps,
            "clutter_amplitude": entry.scenario.clutter_amplitude,
            "clutter_path_count": entry.scenario.clutter_path_count,
            "noise_sigma": entry.scenario.noise_sigma,
            "direct_path_amplitude": entry.scenario.direct_path_amplitude,
            "seed": entry.scenario.seed,
            "pulse_center_freq_hz": entry.scenario.pulse_center_freq_hz,
            "pulse_sigma_ps": entry.scenario.pulse_sigma_ps,
            "amplitude_exponent": entry.scenario.amplitude_exponent,
        },
        "target": {
            "reflectivity": config.target.reflectivity,
            "jitter_sigma": config.target.jitter_sigma,
            "min_range": config.target.min_range,
        },
        "experiment_seed": config.seed,
    }
    return yaml.safe_dump(meta, sort_keys=True).encode("utf-8")


def _generate_group(config: ExperimentConfig, scenario, scheme, data_types, out_dir):
    """Synthesize one (scenario, scheme) raw set and write its splits."""
    written = []
    si = [s.scenario_id for s in config.scenarios].index(scenario.scenario_id)
    schi = _SCHEME_ORDER.index(scheme)
    raw = generate_dataset(
        scenario,
        config.scheme_object(scheme),
        config.n_per_class,
        derive_seed(config.seed, _GEN_KEY, si, schi),
        reflectivity=config.target.reflectivity,
        jitter_sigma=config.target.jitter_sigma,
        min_range=config.target.min_range,
    )
    plan = build_plan(config, out_dir, data_types)
    for entry in plan.entries:
        if entry.scenario.scenario_id != scenario.scenario_id or entry.scheme != scheme:
            continue
        _, _, dti = _entry_keys(config, entry)
        derived = standardize_dataset(derive_dataset(raw, entry.data_type))
        split_seed = derive_seed(config.seed, _SPLIT_KEY, si, schi, dti)
        tr_idx, te_idx = stratified_split(derived.labels, config.train_fraction, split_seed)
        train_path, test_path = _dataset_paths(out_dir, entry.dataset_id)
        os.makedirs(os.path.dirname(train_path), exist_ok=True)
        for ds_part, path, role, other in (
            (derived.take(tr_idx), train_path, "train", os.path.basename(test_path)),
            (derived.take(te_idx), test_path, "test", os.path.basename(train_path)),
        ):
            save_dataset(ds_part, path)
            write_atomic(path + ".meta.yaml", _sidecar(ds_part, entry, config, role, other))
            written.append(path)
    return written


def _generate_group_star(args):
    return _generate_group(*args)


def cmd_generate(config: ExperimentConfig, out_dir, data_types, jobs) -> int:
    groups = [
        (config, scenario, scheme, data_types, out_dir)
        for scenario in config.scenarios
        for scheme in config.schemes
    ]
    if jobs > 1 and len(groups) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_generate_group_star, groups))
    else:
        results = [_generate_group(*g) for g in groups]
    for written in results:
        for path in written:
            print(f"wrote {path}")
    return EXIT_OK


def _run_entry(config: ExperimentConfig, entry, estimators, out_dir):
    train_path, test_path = _dataset_paths(out_dir, entry.dataset_id)
    train = load_dataset(train_path)
    test = load_dataset(test_path)
    si, schi, dti = _entry_keys(config, entry)
    result = evaluate_kinds(
        train.scans,
        train.labels,
        test.scans,
        test.labels,
        dataset_id=entry.dataset_id,
        kinds=estimators,
        seed=derive_seed(config.seed, _RUN_KEY, si, schi, dti),
        n_folds=config.n_folds,
    )
    return entry.dataset_id, result


def _run_entry_star(args):
    return _run_entry(*args)


def _report_payload(dataset_id, result):
    return {
        "dataset_id": dataset_id,
        "estimators": {k: r.to_dict() for k, r in sorted(result.reports.items())},
        "errors": dict(sorted(result.errors.items())),
    }


def aggregate_rows(payloads, estimators):
    """CSV lines: dataset rows x estimator columns of test accuracy.

    Accuracies are rendered with repr so parsing a cell returns the
    report value exactly; failed entries are left empty.
    """
    lines = ["dataset_id," + ",".join(estimators)]
    for payload in sorted(payloads, key=lambda p: p["dataset_id"]):
        cells = [payload["dataset_id"]]
        for kind in estimators:
            report = payload["estimators"].get(kind)
            cells.append("" if report is None else repr(report["test_accuracy"]))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def cmd_run(config: ExperimentConfig, out_dir, data_types, estimators, jobs) -> int:
    plan = build_plan(config, out_dir, data_types)
    for entry in plan.entries:
        for path in _dataset_paths(out_dir, entry.dataset_id):
            if not os.path.exists(path):
                raise MissingInputError(f"dataset file not found: {path}")
    tasks = [(config, entry, estimators, out_dir) for entry in plan.entries]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_entry_star, tasks))
    else:
        outcomes = [_run_entry(*t) for t in tasks]
    reports_dir = os.path.join(out_dir, "reports")
    os.makedirs(reports_dir, exist_ok=True)
    payloads = []
    failed = False
    for dataset_id, result in outcomes:
        payload = _report_payload(dataset_id, result)
        payloads.append(payload)
        path = os.path.join(reports_dir, f"{dataset_id}.json")
        write_atomic(path, json.dumps(payload, indent=2, sort_keys=True).encode("utf-8"))
        print(f"wrote {path}")
        for kind, report in payload["estimators"].items():
            print(
                f"  {dataset_id} {kind}: validation={report['validation_accuracy']:.2f}% "
                f"test={report['test_accuracy']:.2f}%"
            )
        for kind, message in payload["errors"].items():
            failed = True
            print(f"  {dataset_id} {kind}: FAILED ({message})", file=sys.stderr)
    aggregate_path = os.path.join(reports_dir, "aggregate.csv")
    write_atomic(aggregate_path, aggregate_rows(payloads, estimators).encode("utf-8"))
    print(f"wrote {aggregate_path}")
    return EXIT_ESTIMATOR if failed else EXIT_OK


def cmd_report(out_dir) -> int:
    reports_dir = os.path.join(out_dir, "reports")
    try:
        names = sorted(
            n for n in os.listdir(reports_dir) if n.endswith(".json")
        )
    except FileNotFoundError:
        raise MissingInputError(f"no reports directory at {reports_dir}") from None
    if not names:
        raise MissingInputError(f"no report files in {reports_dir}")
    payloads = []
    estimators_seen = []
    for name in names:
        with open(os.path.join(reports_dir, name), "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        payloads.append(payload)
        for kind in payload["estimators"]:
            if kind not in estimators_seen:
                estimators_seen.append(kind)
    estimators = [k for k in KINDS if k in estimators_seen]
    for payload in sorted(payloads, key=lambda p: p["dataset_id"]):
        print(f"{payload['dataset_id']}:")
        ranked = sorted(
            payload["estimators"].items(),
            key=lambda item: (-item[1]["test_accuracy"], KINDS.index(item[0])),
        )
        for rank, (kind, report) in enumerate(ranked, start=1):
            print(
                f"  {rank}. {kind:20s} test={report['test_accuracy']:6.2f}% "
                f"validation={report['validation_accuracy']:6.2f}% "
                f"params={json.dumps(report['best_params'], sort_keys=True)}"
            )
        for kind, message in payload.get("errors", {}).items():
            print(f"  -  {kind:20s} FAILED ({message})")
    aggregate_path = os.path.join(reports_dir, "aggregate.csv")
    write_atomic(aggregate_path, aggregate_rows(payloads, estimators).encode("utf-8"))
    print(f"wrote {aggregate_path}")
    return EXIT_OK


def _parse_estimators(value):
    if value is None:
        return None
    requested = []
    for token in value.split(","):
        name = token.strip().lower().replace("-", "_")
        if not name:
            continue
        if name not in KINDS:
            raise ConfigError(f"--estimators: unknown estimator {token.strip()!r}; expected one of {KINDS}")
        if name not in requested:
            requested.append(name)
    if not requested:
        raise ConfigError("--estimators: empty list")
    return tuple(requested)


def _load(args) -> ExperimentConfig:
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                raw = yaml.safe_load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse config {args.config}: {exc}") from exc
        raw = {} if raw is None else raw
    else:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be a mapping")
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed: must be nonnegative")
        raw = {**raw, "seed": args.seed}
    return parse_config(raw)


def _data_type_filter(value):
    return None if value in (None, "all") else (value,)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radarml",
        description="Synthetic radar obstacle-detection experiments: "
        "dataset generation, estimator tuning, and reporting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="YAML experiment config (defaults used when omitted)")
        p.add_argument("--out", default="radarml_out", help="output directory (default: %(default)s)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument(
            "--data-type",
            choices=list(DATA_TYPES) + ["all"],
            default="all",
            help="restrict the plan to one data type",
        )
        p.add_argument("--jobs", type=int, default=1, help="parallel dataset runs (default: %(default)s)")

    gen = sub.add_parser("generate", help="synthesize train/test dataset pairs")
    common(gen)

    run = sub.add_parser("run", help="tune and evaluate estimators on generated datasets")
    common(run)
    run.add_argument(
        "--estimators",
        default=None,
        help="comma-separated estimator kinds (default: all from config)",
    )

    rep = sub.add_parser("report", help="rank estimators from an existing run directory")
    rep.add_argument("--out", default="radarml_out", help="run directory holding reports/")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            config = _load(args)
            if args.jobs < 1:
                raise ConfigError("--jobs: must be at least 1")
            return cmd_generate(config, args.out, _data_type_filter(args.data_type), args.jobs)
        if args.command == "run":
            config = _load(args)
            if args.jobs < 1:
                raise ConfigError("--jobs: must be at least 1")
            estimators = _parse_estimators(args.estimators) or config.estimators
            return cmd_run(config, args.out, _data_type_filter(args.data_type), estimators, args.jobs)
        if args.command == "report":
            return cmd_report(args.out)
        raise AssertionError(args.command)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MissingInputError as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return EXIT_MISSING


if __name__ == "__main__":
    sys.exit(main())
