from .loaders import load_csv, split_rows, standardize, unstandardize
from .manifest import ChecksumError, DatasetManifestEntry, FetchError, fetch_dataset, load_manifest
from .schema import (
    CONTINUOUS,
    DISCRETE_BINARY,
    DatasetError,
    DatasetSplit,
    FeatureSchema,
    GroundTruth,
)
from .synthetic import SynthConfig, generate_synthetic, place_cluster_centers

__all__ = [
    "CONTINUOUS",
    "DISCRETE_BINARY",
    "ChecksumError",
    "DatasetError",
    "DatasetManifestEntry",
    "DatasetSplit",
    "FeatureSchema",
    "FetchError",
    "GroundTruth",
    "SynthConfig",
    "fetch_dataset",
    "generate_synthetic",
    "load_csv",
    "load_manifest",
    "place_cluster_centers",
    "split_rows",
    "standardize",
    "unstandardize",
]
