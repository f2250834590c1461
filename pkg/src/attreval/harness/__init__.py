from .cli import cli_dispatch, main
from .config import BenchmarkConfig, ConfigError, load_config, parse_config
from .leaderboard import (
    LeaderboardTable,
    emit_leaderboard,
    metric_direction,
    parse_json,
    render_csv,
    render_json,
    render_markdown,
)
from .runner import RunArtifacts, StageError, build_dataset, run_benchmark

__all__ = [
    "BenchmarkConfig",
    "ConfigError",
    "LeaderboardTable",
    "RunArtifacts",
    "StageError",
    "build_dataset",
    "cli_dispatch",
    "emit_leaderboard",
    "load_config",
    "main",
    "metric_direction",
    "parse_config",
    "parse_json",
    "render_csv",
    "render_json",
    "render_markdown",
    "run_benchmark",
]
