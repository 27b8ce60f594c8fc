from enum import Enum
from pathlib import Path
from typing import Literal, Optional, Tuple
import re

from loguru import logger
from pydantic import BaseModel, Field, field_validator, model_validator


class LoggingConfig(BaseModel):
    """Logging settings."""
    level: Literal["debug", "info", "warning", "error", "critical"] = Field(
        default="info",
        description="Logging level"
    )
    file: Optional[Path] = Field(default=None, description="Optional JSON-lines log file")
    rotation: str = Field(default="200mb", description="Log rotation size")

    @model_validator(mode='after')
    def validate_rotation(self) -> 'LoggingConfig':
        """Validate log rotation format (e.g., '200mb', '1gb')."""
        if not re.match(r'^\d+[kmg]?b$', self.rotation.lower()):
            raise ValueError("Log rotation must be specified in bytes (e.g., '200mb', '1gb')")
        self.rotation = self.rotation.lower()
        return self

    @property
    def loguru_rotation(self) -> str:
        """Rotation in the "200 MB" spelling loguru expects."""
        number, unit = re.match(r'^(\d+)([kmg]?b)$', self.rotation).groups()
        return f"{number} {unit.upper()}"


class ComputeConfig(BaseModel):
    """Limits and resources for the computations."""
    parallelism: int = Field(default=1, gt=0, description="Worker processes for matrix columns")
    cache_dir: Optional[Path] = Field(default=None, description="Directory for SZCM matrix caches")
    enumerate_cap: int = Field(default=10 ** 6, gt=0, description="Most final types eo-enumerate lists")
    max_matrix_m: int = Field(default=4, ge=1, description="Largest m for matrix commands without override")
    oracle_max_m: int = Field(default=2, ge=1, description="Largest m verified against the oracle by default")
    point_bits_limit: int = Field(default=24, gt=0, le=24, description="Largest field size in bits for naive counts")


class ConfigModel(BaseModel):
    """Root configuration model; every section is optional."""
    logging: LoggingConfig = Field(default_factory=LoggingConfig, description="Logging settings")
    compute: ComputeConfig = Field(default_factory=ComputeConfig, description="Computation settings")


class Command(str, Enum):
    """Commands of the command-line surface."""
    PARAMS = "params"
    A_NUMBER = "a-number"
    BASIS = "basis"
    MATRIX = "matrix"
    RANK_PROFILE = "rank-profile"
    EO_CONSTRAINTS = "eo-constraints"
    EO_ENUMERATE = "eo-enumerate"
    POINTS = "points"
    VERIFY = "verify"
    ALL = "all"

    @property
    def needs_matrix(self) -> bool:
        return self in MATRIX_COMMANDS

    @property
    def runs_verification(self) -> bool:
        return self in (Command.VERIFY, Command.ALL)


MATRIX_COMMANDS = frozenset({
    Command.A_NUMBER,
    Command.MATRIX,
    Command.RANK_PROFILE,
    Command.EO_CONSTRAINTS,
    Command.EO_ENUMERATE,
    Command.VERIFY,
    Command.ALL,
})


class OutputFormat(str, Enum):
    """Report formats."""
    PRETTY = "pretty"
    JSON = "json"
    CSV = "csv"


class RunConfig(BaseModel):
    """One invocation: command-line flags layered over the file configuration."""
    m: int = Field(ge=1, description="Curve parameter")
    command: Command = Field(description="Command to run")
    format: OutputFormat = Field(default=OutputFormat.PRETTY, description="Report format")
    cache_dir: Optional[Path] = Field(default=None, description="Resolved cache directory")
    verify_oracle: bool = Field(default=True, description="Compare against the oracle matrix in verify")
    force_oracle: bool = Field(default=False, description="Keep oracle verification for large m")
    allow_large_m: bool = Field(default=False, description="Lift the matrix-family bound on m")
    parallelism: Optional[int] = Field(default=None, gt=0, description="Worker processes, overrides the file")
    ks: Tuple[int, ...] = Field(default=(1, 2, 4), description="Extension degrees for points")
    naive: bool = Field(default=False, description="Add brute-force point counts")
    cap: Optional[int] = Field(default=None, gt=0, description="Enumeration cap, overrides the file")
    compute: ComputeConfig = Field(default_factory=ComputeConfig, description="Computation settings")

    @field_validator('ks')
    @classmethod
    def validate_ks(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        """Extension degrees are positive; duplicates are dropped."""
        if not v or any(k < 1 for k in v):
            raise ValueError("Extension degrees k must be positive integers")
        return tuple(sorted(set(v)))

    @model_validator(mode='after')
    def validate_matrix_bound(self) -> 'RunConfig':
        """Matrix commands stay within max_matrix_m unless overridden."""
        if self.command.needs_matrix and self.m > self.compute.max_matrix_m and not self.allow_large_m:
            raise ValueError(
                f"m = {self.m} exceeds the matrix bound {self.compute.max_matrix_m}; pass --allow-large-m to override"
            )
        return self

    @model_validator(mode='after')
    def validate_oracle(self) -> 'RunConfig':
        """Oracle verification is switched off for large m unless forced."""
        if not self.command.runs_verification:
            return self
        if self.verify_oracle and self.m > self.compute.oracle_max_m and not self.force_oracle:
            logger.warning(
                "Oracle verification disabled for large m; pass --force-oracle to keep it",
                m=self.m,
                oracle_max_m=self.compute.oracle_max_m
            )
            self.verify_oracle = False
        return self

    @property
    def workers(self) -> int:
        return self.parallelism or self.compute.parallelism

    @property
    def enumerate_cap(self) -> int:
        return self.cap or self.compute.enumerate_cap
