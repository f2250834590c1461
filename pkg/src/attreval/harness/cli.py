"""Command-line entry point.

Exit codes: 0 success, 1 usage/validation error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from ..datasets import (
    DatasetError,
    fetch_dataset,
    generate_synthetic,
    load_manifest,
)
from ..datasets.synthetic import SynthConfig
from ..explainers import ExplainerConfigError
from ..metrics import MetricError
from ..models import accuracy, save_model
from .config import OUTPUT_FORMATS, ConfigError, load_config, parse_config
from .leaderboard import parse_json, render_csv, render_markdown
from .runner import (
    _compute_explanations,
    _train_model,
    build_dataset,
    run_benchmark,
)

_VALIDATION_ERRORS = (ConfigError, DatasetError, ExplainerConfigError, MetricError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's 2
        raise UsageError(f"{message}\n{self.format_usage()}")


def _fmt17(x: float) -> str:
    return format(float(x), ".17g")


def _add_common(p: _Parser) -> None:
    p.add_argument("--config", help="benchmark config JSON")
    p.add_argument("--seed", type=int, help="override the master seed")
    p.add_argument("--out", help="output directory")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers over instances (default: config value or 1)")
    p.add_argument(
        "--format",
        action="append",
        choices=OUTPUT_FORMATS,
        help="leaderboard formats (repeatable)",
    )


def _workers(args, cfg) -> int:
    if args.workers is not None:
        return args.workers
    return int(cfg.raw.get("workers", 1))


def _overrides(args) -> dict:
    return {
        "seed": args.seed,
        "out": args.out,
        "formats": args.format,
    }


def _load_cfg(args, require_config: bool = True):
    if args.config:
        return load_config(args.config, _overrides(args))
    if require_config:
        raise UsageError("--config is required for this command")
    doc = {"dataset": {"type": "synthetic"}}
    for key, value in _overrides(args).items():
        if value is not None:
            doc[key] = value
    return parse_config(doc)


def _cmd_generate(args) -> int:
    if args.config:
        doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        body = doc.get("dataset", doc)
        body = {k: v for k, v in body.items() if k in SynthConfig.__dataclass_fields__}
    else:
        body = {}
    if args.seed is not None:
        body["seed"] = args.seed
    synth = SynthConfig(**body)
    split, truth = generate_synthetic(synth)
    out = Path(args.out or "synthetic-out")
    out.mkdir(parents=True, exist_ok=True)

    def write_xy(path, X, y, ids):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["instance_id"] + split.feature_names + ["label"])
            for i, iid in enumerate(ids):
                writer.writerow([int(iid)] + [_fmt17(v) for v in X[i]] + [int(y[i])])

    write_xy(out / "train.csv", split.train_X, split.train_y, split.train_ids)
    write_xy(out / "test.csv", split.test_X, split.test_y, split.test_ids)
    with open(out / "ground_truth.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["instance_id", "cluster"] + split.feature_names)
        for iid in range(truth.importance.shape[0]):
            writer.writerow(
                [iid, int(truth.cluster_index[iid])]
                + [_fmt17(v) for v in truth.importance[iid]]
            )
    (out / "dataset_meta.json").write_text(
        json.dumps({"generator": "synthetic", "config": synth.__dict__}, indent=1, sort_keys=True),
        encoding="utf-8",
    )
    print(f"wrote synthetic dataset to {out}")
    return 0


def _cmd_fetch(args) -> int:
    entries = load_manifest(args.manifest)
    if args.name:
        entries = [e for e in entries if e.name == args.name]
        if not entries:
            raise ConfigError(f"manifest has no entry named {args.name!r}")
    for entry in entries:
        path = fetch_dataset(entry, args.cache)
        print(f"{entry.name}: {path}")
    return 0


def _cmd_train(args) -> int:
    cfg = _load_cfg(args)
    out = Path(cfg.out)
    cache = out / "cache" / cfg.fingerprint()[:16]
    cache.mkdir(parents=True, exist_ok=True)
    split, _ = build_dataset(cfg)
    for family in cfg.models:
        model, _ = _train_model(cfg, family, split, cache)
        dest = save_model(model, out / "models" / f"{family}.json")
        acc = accuracy(model, split.test_X, split.test_y)
        print(f"{family}: test accuracy {acc:.3f} -> {dest}")
    return 0


def _cmd_explain(args) -> int:
    cfg = _load_cfg(args)
    out = Path(cfg.out)
    cache = out / "cache" / cfg.fingerprint()[:16]
    cache.mkdir(parents=True, exist_ok=True)
    split, _ = build_dataset(cfg)
    workers = _workers(args, cfg)
    path = out / "explanations.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["model", "method", "instance_id", "seed"] + split.feature_names)
        for family in cfg.models:
            model, _ = _train_model(cfg, family, split, cache)
            for method in cfg.explainers:
                A, seeds, _ = _compute_explanations(
                    cfg, family, method, model, split, cache, workers
                )
                for i, iid in enumerate(split.test_ids):
                    writer.writerow(
                        [family, method, int(iid), int(seeds[i])] + [_fmt17(v) for v in A[i]]
                    )
                print(f"explained {family}/{method}")
    print(f"wrote {path}")
    return 0


def _cmd_evaluate(args) -> int:
    cfg = _load_cfg(args)
    run_benchmark(cfg, workers=_workers(args, cfg), log=print, report=False)
    print(f"wrote metrics to {Path(cfg.out) / 'metrics.csv'}")
    return 0


def _cmd_benchmark(args) -> int:
    cfg = _load_cfg(args)
    artifacts = run_benchmark(cfg, workers=_workers(args, cfg), log=print)
    for name in sorted(p.name for p in artifacts.out_dir.glob("leaderboard.*")):
        print(f"wrote {artifacts.out_dir / name}")
    return 0


def _cmd_leaderboard(args) -> int:
    src = Path(args.source)
    if src.is_dir():
        src = src / "leaderboard.json"
    if not src.exists():
        raise ConfigError(f"no leaderboard JSON at {src}")
    tables = parse_json(src.read_text(encoding="utf-8"))
    out = Path(args.out or src.parent)
    out.mkdir(parents=True, exist_ok=True)
    formats = args.format or ["markdown"]
    if "markdown" in formats:
        md = "# Leaderboard\n\n" + "\n".join(render_markdown(tb) for tb in tables)
        (out / "leaderboard.md").write_text(md, encoding="utf-8")
        print(f"wrote {out / 'leaderboard.md'}")
    if "csv" in formats:
        (out / "leaderboard.csv").write_text(render_csv(tables), encoding="utf-8")
        print(f"wrote {out / 'leaderboard.csv'}")
    if "json" in formats:
        from .leaderboard import render_json

        (out / "leaderboard.json").write_text(render_json(tables), encoding="utf-8")
        print(f"wrote {out / 'leaderboard.json'}")
    from .figures import render_figures

    for p in render_figures(tables, out / "figures"):
        print(f"wrote {p}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="attreval", description="Feature-attribution benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate the synthetic dataset")
    p.add_argument("--config", help="config JSON (benchmark config or bare generator settings)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("fetch", help="download manifest datasets into the cache")
    p.add_argument("--manifest", required=True)
    p.add_argument("--name", help="fetch a single entry")
    p.add_argument("--cache", default="dataset-cache")
    p.set_defaults(fn=_cmd_fetch)

    for name, fn, blurb in (
        ("train", _cmd_train, "train the configured models"),
        ("explain", _cmd_explain, "compute explanations for the test set"),
        ("evaluate", _cmd_evaluate, "compute metrics without leaderboard rendering"),
        ("benchmark", _cmd_benchmark, "full run: train, explain, evaluate, render"),
    ):
        p = sub.add_parser(name, help=blurb)
        _add_common(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("leaderboard", help="re-render tables from leaderboard.json")
    p.add_argument("source", help="out directory or leaderboard.json path")
    p.add_argument("--out")
    p.add_argument("--format", action="append", choices=OUTPUT_FORMATS)
    p.set_defaults(fn=_cmd_leaderboard)
    return parser


def cli_dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 2
    except Exception as exc:  # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
