"""Versioned experiment configuration (JSON) and its conversion to a QpeConfig"""
import hashlib
import json
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.config.logger import setup_logger
from src.config.settings import settings
from src.hamiltonian.discretization import QueryConfig
from src.hamiltonian.grid import build_grid
from src.hamiltonian.potentials import PotentialFactory
from src.phase_estimation.state import InitialState, PropagatorMode, QpeConfig, StepPolicy
from src.safety.guards import ConfigError

logger = setup_logger(__name__)

SCHEMA_VERSION = 1


class PotentialConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: str = "zero"
    params: List[float] = Field(default_factory=list)

    @field_validator("family")
    @classmethod
    def known_family(cls, value: str) -> str:
        PotentialFactory.get_family(value)
        return value.lower().strip()


class ProblemConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    d: int = Field(1, ge=1)
    q: int = Field(3, ge=1)
    potential: PotentialConfig = Field(default_factory=PotentialConfig)


class AlgorithmConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    b: Optional[int] = Field(None, ge=1)  # None: b = q
    mode: PropagatorMode = PropagatorMode.EXACT
    k: Optional[int] = Field(None, ge=1)  # None: integer choice around k*
    step_policy: StepPolicy = StepPolicy.EMPIRICAL
    steps: Optional[int] = Field(None, ge=1)
    query_bits: Optional[int] = Field(None, ge=1)  # None: q + offset
    initial_state: InitialState = InitialState.SINE


class OutputConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    directory: Optional[str] = None
    top_k: int = Field(default_factory=lambda: settings.default_top_k, ge=1)
    summary_csv: str = "summary.csv"


class SweepPoint(BaseModel):
    model_config = ConfigDict(extra="forbid")

    d: int = Field(..., ge=1)
    q: int = Field(..., ge=1)
    b: int = Field(..., ge=1)


class ExperimentConfig(BaseModel):
    """One experiment: problem, algorithm, outputs, seed and an optional (d, q, b) sweep"""
    model_config = ConfigDict(extra="forbid")

    schema_version: int = SCHEMA_VERSION
    name: str = "experiment"
    problem: ProblemConfig = Field(default_factory=ProblemConfig)
    algorithm: AlgorithmConfig = Field(default_factory=AlgorithmConfig)
    outputs: OutputConfig = Field(default_factory=OutputConfig)
    seed: int = 0
    sweep: List[SweepPoint] = Field(default_factory=list)

    @field_validator("schema_version")
    @classmethod
    def supported_version(cls, value: int) -> int:
        if value != SCHEMA_VERSION:
            raise ValueError(f"Unsupported schema_version {value}; expected {SCHEMA_VERSION}")
        return value

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()

    def at_point(self, point: SweepPoint) -> "ExperimentConfig":
        """Copy with (d, q, b) replaced by a sweep point and no nested sweep"""
        problem = self.problem.model_copy(update={"d": point.d, "q": point.q})
        algorithm = self.algorithm.model_copy(update={"b": point.b})
        return self.model_copy(update={
            "name": f"{self.name}-d{point.d}-q{point.q}-b{point.b}",
            "problem": problem,
            "algorithm": algorithm,
            "sweep": [],
        })

    def to_qpe_config(self) -> QpeConfig:
        """Validate against the simulator and build the run configuration"""
        problem, algorithm = self.problem, self.algorithm
        grid = build_grid(problem.d, problem.q)
        potential = PotentialFactory.create(problem.potential.family, problem.potential.params, problem.d)
        query = QueryConfig(bits=algorithm.query_bits) if algorithm.query_bits is not None else None
        return QpeConfig(
            grid=grid,
            potential=potential,
            b=algorithm.b if algorithm.b is not None else problem.q,
            k=algorithm.k,
            mode=algorithm.mode,
            step_policy=algorithm.step_policy,
            steps=algorithm.steps,
            initial_state=algorithm.initial_state,
            query=query,
        )


def parse_config(text: str) -> ExperimentConfig:
    """Parse JSON text; any parse or validation failure becomes a ConfigError"""
    try:
        return ExperimentConfig.model_validate_json(text)
    except ValidationError as e:
        raise ConfigError(f"Invalid experiment config: {e}") from e


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {path}")
    config = parse_config(path.read_text(encoding="utf-8"))
    logger.info(f"Loaded config '{config.name}' from {path} (hash {config.config_hash()[:12]})")
    return config


def save_config(config: ExperimentConfig, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(config.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path
