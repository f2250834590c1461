"""Benchmark run configuration: one JSON document in, validated objects out."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from ..datasets.synthetic import SynthConfig
from ..explainers import METHODS
from ..explainers.config import (
    ExplainerConfig,
    GradConfig,
    IntegratedGradientsConfig,
    KernelShapConfig,
    LimeConfig,
    SmoothGradConfig,
)
from ..metrics import ALL_METRICS, PerturbationConfig, StabilityConfig, TopKConfig
from ..models.training import TrainConfig

MODEL_FAMILIES = ("logistic", "mlp")
OUTPUT_FORMATS = ("markdown", "csv", "json")


class ConfigError(ValueError):
    """Invalid benchmark configuration; maps to CLI exit code 1."""


def _take(src: dict, allowed: set[str], context: str) -> dict:
    unknown = set(src) - allowed
    if unknown:
        raise ConfigError(f"unknown {context} keys: {sorted(unknown)}")
    return dict(src)


def _build(cls, src: dict, context: str, **extra):
    fields = {f for f in cls.__dataclass_fields__}
    try:
        return cls(**_take(src, fields, context), **extra)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad {context} section: {exc}") from exc


@dataclass
class DatasetSpec:
    type: str  # "synthetic" | "csv" | "manifest"
    synth: Optional[SynthConfig] = None
    path: Optional[str] = None
    target: Optional[str] = None
    protected: Optional[str] = None
    kinds: dict[str, str] = field(default_factory=dict)
    ratio: float = 0.7
    scale: Optional[bool] = None  # None = family default (csv on, synthetic off)
    manifest: Optional[str] = None
    name: Optional[str] = None
    cache_dir: str = "dataset-cache"


@dataclass
class BenchmarkConfig:
    dataset: DatasetSpec
    models: list[str]
    explainers: list[str]
    metrics: list[str]
    train: TrainConfig
    explain: ExplainerConfig
    topk: TopKConfig
    perturbation: PerturbationConfig
    stability: StabilityConfig
    ground_truth: str  # "auto" | "data" | "model"
    seed: int
    out: str
    formats: list[str]
    max_test_instances: Optional[int]
    raw: dict = field(repr=False, default_factory=dict)

    def fingerprint(self) -> str:
        """sha256 over the canonicalized config; output-only knobs excluded."""
        doc = {k: v for k, v in self.raw.items() if k not in ("out", "formats", "workers")}
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _parse_dataset(raw: dict) -> DatasetSpec:
    if not isinstance(raw, dict) or "type" not in raw:
        raise ConfigError("dataset section must be an object with a 'type'")
    kind = raw["type"]
    if kind == "synthetic":
        body = _take(
            raw,
            {"type", "protected", "scale"} | set(SynthConfig.__dataclass_fields__),
            "dataset",
        )
        protected = body.pop("protected", None)
        scale = body.pop("scale", None)
        body.pop("type")
        try:
            synth = SynthConfig(**body)
        except ValueError as exc:
            raise ConfigError(f"bad synthetic dataset config: {exc}") from exc
        return DatasetSpec(type=kind, synth=synth, protected=protected, scale=scale)
    if kind == "csv":
        body = _take(raw, {"type", "path", "target", "protected", "kinds", "ratio", "scale"}, "dataset")
        if not body.get("path") or not body.get("target"):
            raise ConfigError("csv dataset needs 'path' and 'target'")
        if not Path(body["path"]).exists():
            raise ConfigError(f"csv dataset file {body['path']} does not exist")
        body.pop("type")
        return DatasetSpec(type=kind, **body)
    if kind == "manifest":
        body = _take(
            raw,
            {"type", "manifest", "name", "cache_dir", "protected", "kinds", "ratio", "scale"},
            "dataset",
        )
        if not body.get("manifest") or not body.get("name"):
            raise ConfigError("manifest dataset needs 'manifest' and 'name'")
        if not Path(body["manifest"]).exists():
            raise ConfigError(f"manifest file {body['manifest']} does not exist")
        body.pop("type")
        return DatasetSpec(type=kind, **body)
    raise ConfigError(f"unknown dataset type {kind!r}")


def _parse_explainer_section(raw: dict, seed: int) -> ExplainerConfig:
    body = _take(raw, {"grad", "smoothgrad", "ig", "lime", "shap"}, "explain")
    return ExplainerConfig(
        grad=_build(GradConfig, body.get("grad", {}), "explain.grad"),
        smoothgrad=_build(SmoothGradConfig, body.get("smoothgrad", {}), "explain.smoothgrad"),
        ig=_build(IntegratedGradientsConfig, body.get("ig", {}), "explain.ig"),
        lime=_build(LimeConfig, body.get("lime", {}), "explain.lime"),
        shap=_build(KernelShapConfig, body.get("shap", {}), "explain.shap"),
        seed=seed,
    )


def parse_config(doc: dict) -> BenchmarkConfig:
    """Validate a raw JSON object into a BenchmarkConfig."""
    if not isinstance(doc, dict):
        raise ConfigError("benchmark config must be a JSON object")
    allowed = {
        "dataset",
        "models",
        "explainers",
        "metrics",
        "train",
        "explain",
        "topk",
        "perturbation",
        "stability",
        "ground_truth",
        "seed",
        "out",
        "formats",
        "max_test_instances",
        "workers",
    }
    body = _take(doc, allowed, "config")
    if "dataset" not in body:
        raise ConfigError("config needs a 'dataset' section")
    seed = int(body.get("seed", 0))

    models = body.get("models", list(MODEL_FAMILIES))
    if not models or not isinstance(models, list):
        raise ConfigError("'models' must be a non-empty list")
    for m in models:
        if m not in MODEL_FAMILIES:
            raise ConfigError(f"unknown model family {m!r}; expected one of {MODEL_FAMILIES}")

    explainers = body.get("explainers", "all")
    if explainers == "all":
        explainers = list(METHODS)
    if not explainers or not isinstance(explainers, list):
        raise ConfigError("'explainers' must be a non-empty list or 'all'")
    for e in explainers:
        if e not in METHODS:
            raise ConfigError(f"unknown explainer {e!r}; expected one of {METHODS}")

    metrics = body.get("metrics", "all")
    if metrics == "all":
        metrics = list(ALL_METRICS)
    if not metrics or not isinstance(metrics, list):
        raise ConfigError("'metrics' must be a non-empty list or 'all'")
    for m in metrics:
        if m not in ALL_METRICS:
            raise ConfigError(f"unknown metric {m!r}; expected one of {ALL_METRICS}")

    ground_truth = body.get("ground_truth", "auto")
    if ground_truth not in ("auto", "data", "model"):
        raise ConfigError("'ground_truth' must be auto, data, or model")

    formats = body.get("formats", list(OUTPUT_FORMATS))
    for f in formats:
        if f not in OUTPUT_FORMATS:
            raise ConfigError(f"unknown output format {f!r}")

    max_test = body.get("max_test_instances")
    if max_test is not None and int(max_test) < 1:
        raise ConfigError("max_test_instances must be >= 1")

    train_body = dict(body.get("train", {}))
    train_body.setdefault("seed", seed)

    return BenchmarkConfig(
        dataset=_parse_dataset(body["dataset"]),
        models=list(models),
        explainers=list(explainers),
        metrics=list(metrics),
        train=_build(TrainConfig, train_body, "train"),
        explain=_parse_explainer_section(body.get("explain", {}), seed),
        topk=_build(TopKConfig, body.get("topk", {}), "topk"),
        perturbation=_build(PerturbationConfig, body.get("perturbation", {}), "perturbation"),
        stability=_build(StabilityConfig, body.get("stability", {}), "stability"),
        ground_truth=ground_truth,
        seed=seed,
        out=str(body.get("out", "benchmark-out")),
        formats=list(formats),
        max_test_instances=None if max_test is None else int(max_test),
        raw=doc,
    )


def load_config(path, overrides: Optional[dict[str, Any]] = None) -> BenchmarkConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    for key, value in (overrides or {}).items():
        if value is not None:
            doc[key] = value
    return parse_config(doc)
