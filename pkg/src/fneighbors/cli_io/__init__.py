"""Pipeline orchestration, generators, exports, and the sampling oracle."""

from .generators import (GeneratorError, generate_instance, generate_map,
                         random_hull_mesh)
from .oracle import OracleReport, oracle_check
from .pipeline import (ConfigError, RunConfig, RunReport, StageError,
                       parse_delta, run_pipeline)

__all__ = [
    "ConfigError",
    "GeneratorError",
    "OracleReport",
    "RunConfig",
    "RunReport",
    "StageError",
    "generate_instance",
    "generate_map",
    "oracle_check",
    "parse_delta",
    "random_hull_mesh",
    "run_pipeline",
]
