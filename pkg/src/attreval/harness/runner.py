"""Config-driven benchmark: data -> models -> explanations -> metrics -> tables.

Every stochastic step draws from a stream keyed on (master seed, stage,
instance id), so a run is a pure function of its config; worker count
only changes wall time. Explanation and score artifacts are cached under
a config-fingerprint directory and reused verbatim on re-runs.
"""

from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .. import __version__ as _pkg_version
from ..datasets import (
    DatasetSplit,
    fetch_dataset,
    generate_synthetic,
    load_csv,
    load_manifest,
    standardize,
)
from ..datasets.schema import DISCRETE_BINARY
from ..explainers import make_explainer
from ..metrics import (
    BASE_METRICS,
    MetricError,
    MetricResult,
    aggregate,
    auc_over_k,
    pairwise_rank_agreement,
    prediction_gap_curve,
    rank_correlation,
    relative_stability_all,
    subgroup_disparity,
    topk_agreement,
)
from ..models import accuracy, load_model, save_model, train_logistic, train_mlp
from ..rng import derive_seed
from .config import BenchmarkConfig
from .leaderboard import LeaderboardTable, render_csv, render_json, render_markdown

AGREEMENT_KINDS = ("FA", "RA", "SA", "SRA")


class StageError(RuntimeError):
    """A benchmark stage failed; carries stage name and instance context."""

    def __init__(self, stage: str, message: str, instance_id: Optional[int] = None):
        ctx = f"stage {stage!r}"
        if instance_id is not None:
            ctx += f", instance {instance_id}"
        super().__init__(f"{ctx}: {message}")
        self.stage = stage
        self.instance_id = instance_id


@dataclass
class RunArtifacts:
    tables: list[LeaderboardTable]
    out_dir: Path
    fingerprint: str
    metadata: dict


def _fmt17(x: float) -> str:
    return format(float(x), ".17g")


def _pmap(fn: Callable, items, workers: int) -> list:
    # capped at the core count: extra threads only fight the BLAS pool
    workers = min(workers, os.cpu_count() or 1)
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _mark_protected(split: DatasetSplit, protected: Optional[str]) -> DatasetSplit:
    if protected is None:
        return split
    names = split.feature_names
    if protected not in names:
        raise StageError("dataset", f"protected feature {protected!r} not in schema")
    schema = [replace(f, protected=(f.name == protected)) for f in split.schema]
    return split.with_arrays(schema=schema)


def build_dataset(cfg: BenchmarkConfig):
    """Materialize (split, ground_truth-or-None) from the dataset spec."""
    spec = cfg.dataset
    truth = None
    if spec.type == "synthetic":
        split, truth = generate_synthetic(spec.synth)
        if spec.scale:
            split = standardize(split)
        split = _mark_protected(split, spec.protected)
    elif spec.type == "csv":
        split = load_csv(
            spec.path,
            target=spec.target,
            kinds=spec.kinds or None,
            protected=spec.protected,
            ratio=spec.ratio,
            seed=derive_seed(cfg.seed, "csv-split"),
            scale=True if spec.scale is None else spec.scale,
        )
    else:  # manifest
        entries = {e.name: e for e in load_manifest(spec.manifest)}
        if spec.name not in entries:
            raise StageError("dataset", f"manifest has no entry named {spec.name!r}")
        entry = entries[spec.name]
        path = fetch_dataset(entry, spec.cache_dir)
        split = load_csv(
            path,
            target=entry.target,
            kinds={**entry.kinds, **(spec.kinds or {})} or None,
            protected=spec.protected or entry.protected,
            ratio=spec.ratio,
            seed=derive_seed(cfg.seed, "csv-split"),
            scale=True if spec.scale is None else spec.scale,
            name=entry.name,
        )
    if cfg.max_test_instances is not None and split.test_X.shape[0] > cfg.max_test_instances:
        m = cfg.max_test_instances
        split = split.with_arrays(
            test_X=split.test_X[:m], test_y=split.test_y[:m], test_ids=split.test_ids[:m]
        )
    return split, truth


def _binary_protected(split: DatasetSplit) -> tuple[Optional[np.ndarray], Optional[str]]:
    """Test-set subgroup labels from the protected feature.

    Binary features are used as-is; continuous ones are thresholded at
    the train median (rule recorded in run metadata).
    """
    j = split.protected_index()
    if j is None:
        return None, None
    col = split.test_X[:, j]
    if split.schema[j].kind == DISCRETE_BINARY:
        return col.astype(np.int64), "values"
    thr = float(np.median(split.train_X[:, j]))
    return (col > thr).astype(np.int64), f"train-median split at {thr:.6g}"


def _ground_truth_for(cfg: BenchmarkConfig, family: str, truth, split, model) -> tuple[Optional[np.ndarray], str]:
    """(per-test-instance ground truth matrix or None, source label)."""
    mode = cfg.ground_truth
    if mode == "auto":
        mode = "data" if truth is not None else "model"
    if mode == "data":
        if truth is None:
            return None, "unavailable (no data ground truth)"
        return truth.for_ids(split.test_ids), "data"
    if family == "logistic":
        coef = model.coefficients()
        return np.tile(coef, (split.test_X.shape[0], 1)), "model coefficients"
    return None, "unavailable (model coefficients only defined for logistic)"


def _train_model(cfg: BenchmarkConfig, family: str, split: DatasetSplit, cache: Path):
    path = cache / f"model_{family}.json"
    if path.exists():
        return load_model(path), True
    tcfg = replace(cfg.train, seed=derive_seed(cfg.train.seed, "train", family))
    try:
        model = train_logistic(split, tcfg) if family == "logistic" else train_mlp(split, tcfg)
    except Exception as exc:
        raise StageError("train", f"{family}: {exc}") from exc
    model.meta["train_accuracy"] = accuracy(model, split.train_X, split.train_y)
    model.meta["test_accuracy"] = accuracy(model, split.test_X, split.test_y)
    save_model(model, path)
    return model, False


def _explanations_path(cache: Path, family: str, method: str) -> Path:
    return cache / f"explanations_{family}_{method}.csv"


def _write_explanations(path: Path, method: str, ids, seeds, A, feature_names) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["instance_id", "method", "seed"] + list(feature_names))
        for i, iid in enumerate(ids):
            writer.writerow([int(iid), method, int(seeds[i])] + [_fmt17(v) for v in A[i]])


def _read_explanations(path: Path, d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if len(header) != d + 3:
            raise StageError("explain", f"cached file {path} has wrong width")
        ids, seeds, rows = [], [], []
        for row in reader:
            ids.append(int(row[0]))
            seeds.append(int(row[2]))
            rows.append([float(v) for v in row[3:]])
    return np.array(ids), np.array(seeds), np.array(rows)


def _compute_explanations(cfg, family, method, model, split, cache, workers):
    """Per-test-instance attributions, cached as CSV."""
    path = _explanations_path(cache, family, method)
    n, d = split.test_X.shape
    if path.exists():
        ids, seeds, A = _read_explanations(path, d)
        if A.shape == (n, d):
            return A, seeds, True
    explain = make_explainer(method, cfg.explain, split.train_X)
    ids = split.test_ids
    seeds = np.array(
        [derive_seed(cfg.seed, family, method, "explain", int(iid)) for iid in ids]
    )

    def one(i: int) -> np.ndarray:
        try:
            return explain(model, split.test_X[i], int(seeds[i]), int(ids[i])).attributions
        except Exception as exc:
            raise StageError("explain", f"{family}/{method}: {exc}", int(ids[i])) from exc

    A = np.array(_pmap(one, range(n), workers))
    _write_explanations(path, method, ids, seeds, A, split.feature_names)
    return A, seeds, False


def _needed_bases(metrics: list[str]) -> list[str]:
    bases = []
    for m in BASE_METRICS:
        if m in metrics or f"{m}_disp" in metrics:
            bases.append(m)
    return bases


def _scores_path(cache: Path, family: str, method: str) -> Path:
    return cache / f"scores_{family}_{method}.json"


def _compute_scores(cfg, family, method, model, split, gt, A, cache, workers):
    """Per-instance values for every needed base metric; cached as JSON."""
    path = _scores_path(cache, family, method)
    bases = _needed_bases(cfg.metrics)
    if path.exists():
        doc = json.loads(path.read_text(encoding="utf-8"))
        if set(bases) <= set(doc["metrics"]):
            scores = {
                m: np.array([np.nan if v is None else v for v in doc["metrics"][m]])
                for m in bases
            }
            return scores, doc.get("stability_excluded", 0), True

    n, d = split.test_X.shape
    ids = split.test_ids
    schema = split.schema
    agreement = [m for m in bases if m in AGREEMENT_KINDS]
    want_rc = "RC" in bases
    want_pra = "PRA" in bases
    gaps = [m for m in bases if m in ("PGI", "PGU")]
    stab = [m for m in bases if m in ("RIS", "RRS", "ROS")]

    explain = make_explainer(method, cfg.explain, split.train_X)

    def one(i: int) -> dict:
        iid = int(ids[i])
        x = split.test_X[i]
        e = A[i]
        out: dict = {}
        try:
            if gt is not None:
                g = gt[i]
                for mode in agreement:
                    curve = [topk_agreement(e, g, k, mode) for k in range(1, d + 1)]
                    out[mode] = auc_over_k(np.array(curve))
                if want_rc:
                    out["RC"] = rank_correlation(e, g)
                if want_pra:
                    out["PRA"] = pairwise_rank_agreement(e, g)
            for mode in gaps:
                seed = derive_seed(cfg.seed, family, method, "gap", iid)
                out[mode] = auc_over_k(
                    prediction_gap_curve(model, x, e, mode, schema, cfg.perturbation, seed)
                )
            if stab:
                def explain_at(pt, draw):
                    if draw < 0:
                        return e
                    s = derive_seed(cfg.seed, family, method, "stability", iid, draw)
                    return explain(model, pt, s, iid).attributions

                values, kept = relative_stability_all(
                    model, x, explain_at, schema, cfg.stability, cfg.perturbation,
                    derive_seed(cfg.seed, family, "stability", iid),
                )
                for mode in stab:
                    out[mode] = values[mode]
                out["_excluded"] = cfg.stability.n_neighbors - kept
        except StageError:
            raise
        except Exception as exc:
            raise StageError("metrics", f"{family}/{method}: {exc}", iid) from exc
        return out

    per_instance = _pmap(one, range(n), workers)
    scores = {}
    for m in bases:
        if m in AGREEMENT_KINDS or m in ("RC", "PRA"):
            if gt is None:
                scores[m] = np.full(n, np.nan)
                continue
        scores[m] = np.array([rec.get(m, np.nan) for rec in per_instance])
    excluded = int(sum(rec.get("_excluded", 0) for rec in per_instance))

    doc = {
        "metrics": {
            m: [None if np.isnan(v) else float(v) for v in scores[m]] for m in scores
        },
        "stability_excluded": excluded,
        "n": n,
    }
    path.write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")
    return scores, excluded, False


def _cell_from_result(res: MetricResult) -> dict:
    if not res.defined:
        return {"undefined": "all per-instance values undefined", "n_undefined": res.n_undefined}
    return {
        "mean": res.mean,
        "stderr": res.stderr,
        "n": res.n,
        "n_undefined": res.n_undefined,
    }


def _fairness_cell(values: np.ndarray, protected: Optional[np.ndarray]) -> dict:
    if protected is None:
        return {"undefined": "dataset has no protected attribute"}
    if np.isnan(values).all():
        return {"undefined": "base metric undefined for every instance"}
    try:
        mean_major, mean_minor, disp = subgroup_disparity(values, protected)
    except MetricError as exc:
        return {"undefined": str(exc)}
    return {
        "mean": disp,
        "stderr": None,
        "mean_major": mean_major,
        "mean_minor": mean_minor,
        "n": int(np.sum(~np.isnan(values))),
        "n_undefined": int(np.isnan(values).sum()),
    }


def run_benchmark(
    cfg: BenchmarkConfig,
    workers: int = 1,
    log: Optional[Callable[[str], None]] = None,
    report: bool = True,
) -> RunArtifacts:
    """Execute the full benchmark described by `cfg` and emit all outputs.

    With report=False only the delimited artifacts (explanations.csv,
    metrics.csv, run_metadata.json) are written; leaderboard renderings
    and figures are skipped.
    """
    say = log or (lambda msg: None)
    t0 = time.perf_counter()
    out_dir = Path(cfg.out)
    fingerprint = cfg.fingerprint()
    cache = out_dir / "cache" / fingerprint[:16]
    cache.mkdir(parents=True, exist_ok=True)
    timings: dict[str, float] = {}

    t = time.perf_counter()
    try:
        split, truth = build_dataset(cfg)
    except StageError:
        raise
    except Exception as exc:
        raise StageError("dataset", str(exc)) from exc
    protected, protected_rule = _binary_protected(split)
    timings["dataset"] = time.perf_counter() - t
    say(f"dataset ready: {split.name} d={split.dim} train={split.train_X.shape[0]} test={split.test_X.shape[0]}")

    tables: list[LeaderboardTable] = []
    model_info: dict[str, dict] = {}
    exclusions: dict[str, dict[str, int]] = {}
    cache_hits: list[str] = []
    for family in cfg.models:
        t = time.perf_counter()
        model, hit = _train_model(cfg, family, split, cache)
        timings[f"train/{family}"] = time.perf_counter() - t
        if hit:
            cache_hits.append(f"model_{family}")
        model_info[family] = {
            "test_accuracy": model.meta.get("test_accuracy"),
            "train_accuracy": model.meta.get("train_accuracy"),
        }
        say(f"model {family}: test acc {model.meta.get('test_accuracy')}")

        gt, gt_source = _ground_truth_for(cfg, family, truth, split, model)
        model_info[family]["ground_truth"] = gt_source

        table = LeaderboardTable(
            dataset=split.name,
            model=family,
            methods=list(cfg.explainers),
            metrics=list(cfg.metrics),
            metadata={"fingerprint": fingerprint, "seed": cfg.seed, "version": _pkg_version},
        )
        exclusions[family] = {}
        for method in cfg.explainers:
            t = time.perf_counter()
            A, seeds, ehit = _compute_explanations(cfg, family, method, model, split, cache, workers)
            timings[f"explain/{family}/{method}"] = time.perf_counter() - t
            t = time.perf_counter()
            scores, excluded, shit = _compute_scores(
                cfg, family, method, model, split, gt, A, cache, workers
            )
            timings[f"metrics/{family}/{method}"] = time.perf_counter() - t
            if ehit:
                cache_hits.append(f"explanations_{family}_{method}")
            if shit:
                cache_hits.append(f"scores_{family}_{method}")
            exclusions[family][method] = excluded
            for metric in cfg.metrics:
                if metric in BASE_METRICS:
                    values = scores.get(metric)
                    if values is None or np.isnan(values).all():
                        reason = (
                            f"ground truth {gt_source}"
                            if metric in ("FA", "RA", "SA", "SRA", "RC", "PRA") and gt is None
                            else "undefined for every instance"
                        )
                        table.set_cell(method, metric, {"undefined": reason})
                    else:
                        table.set_cell(method, metric, _cell_from_result(aggregate(values)))
                else:
                    base = metric[: -len("_disp")]
                    table.set_cell(method, metric, _fairness_cell(scores[base], protected))
            say(f"scored {family}/{method}")
        table.validate()
        tables.append(table)

    t = time.perf_counter()
    paths = _emit_outputs(cfg, split, tables, cache, out_dir, report=report)
    timings["emit"] = time.perf_counter() - t

    metadata = {
        "fingerprint": fingerprint,
        "seed": cfg.seed,
        "version": _pkg_version,
        "dataset": {
            "name": split.name,
            "dim": split.dim,
            "n_train": int(split.train_X.shape[0]),
            "n_test": int(split.test_X.shape[0]),
            "standardized": split.scaler is not None,
            "protected_rule": protected_rule,
        },
        "models": model_info,
        "stability_excluded_neighbors": exclusions,
        "cache_hits": sorted(cache_hits),
        "config": cfg.raw,
        "timings_sec": {k: round(v, 3) for k, v in timings.items()},
        "total_sec": round(time.perf_counter() - t0, 3),
        "finished_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    meta_path = out_dir / "run_metadata.json"
    meta_path.write_text(json.dumps(metadata, indent=1, sort_keys=True), encoding="utf-8")
    say(f"wrote {meta_path}")
    return RunArtifacts(tables=tables, out_dir=out_dir, fingerprint=fingerprint, metadata=metadata)


def _emit_outputs(cfg, split, tables, cache: Path, out_dir: Path, report: bool = True) -> dict[str, Path]:
    paths: dict[str, Path] = {}
    if report and "markdown" in cfg.formats:
        md = "# Leaderboard\n\n" + "\n".join(render_markdown(tb) for tb in tables)
        paths["leaderboard.md"] = out_dir / "leaderboard.md"
        paths["leaderboard.md"].write_text(md, encoding="utf-8")
    if report and "csv" in cfg.formats:
        paths["leaderboard.csv"] = out_dir / "leaderboard.csv"
        paths["leaderboard.csv"].write_text(render_csv(tables), encoding="utf-8")
    if report and "json" in cfg.formats:
        paths["leaderboard.json"] = out_dir / "leaderboard.json"
        paths["leaderboard.json"].write_text(render_json(tables), encoding="utf-8")

    # consolidated explanations across models and methods
    expl_path = out_dir / "explanations.csv"
    with open(expl_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["model", "method", "instance_id", "seed"] + split.feature_names)
        for family in cfg.models:
            for method in cfg.explainers:
                src = _explanations_path(cache, family, method)
                ids, seeds, A = _read_explanations(src, split.dim)
                for i, iid in enumerate(ids):
                    writer.writerow(
                        [family, method, int(iid), int(seeds[i])] + [_fmt17(v) for v in A[i]]
                    )
    paths["explanations.csv"] = expl_path

    metrics_path = out_dir / "metrics.csv"
    fingerprint = tables[0].metadata["fingerprint"] if tables else ""
    with open(metrics_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["dataset", "model", "method", "metric", "mean", "stderr", "n", "n_undefined",
             "mean_major", "mean_minor", "undefined_reason", "fingerprint"]
        )
        for tb in tables:
            for method in tb.methods:
                for metric in tb.metrics:
                    cell = tb.cell(method, metric) or {}
                    und = cell.get("undefined", "")
                    row = [tb.dataset, tb.model, method, metric]
                    if und:
                        row += ["", "", "", cell.get("n_undefined", ""), "", "", und, fingerprint]
                    else:
                        row += [
                            _fmt17(cell["mean"]),
                            _fmt17(cell["stderr"]) if cell.get("stderr") is not None else "",
                            cell.get("n", ""),
                            cell.get("n_undefined", ""),
                            _fmt17(cell["mean_major"]) if cell.get("mean_major") is not None else "",
                            _fmt17(cell["mean_minor"]) if cell.get("mean_minor") is not None else "",
                            "",
                            fingerprint,
                        ]
                    writer.writerow(row)
    paths["metrics.csv"] = metrics_path

    if report:
        from .figures import render_figures

        for p in render_figures(tables, out_dir / "figures"):
            paths[str(Path("figures") / p.name)] = p
    return paths
