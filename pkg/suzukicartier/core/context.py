from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, Optional
from uuid import UUID, uuid4

from ..utils.logging_utils import log_stage


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Stage-specific Context Dataclasses
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

@dataclass
class MatrixContext:
    """Tracks how the Cartier matrix of a run was obtained."""
    path: Optional[str] = None
    source: Optional[str] = None
    cache_file: Optional[str] = None
    workers: int = 1
    elapsed_ms: Optional[float] = None


@dataclass
class VerificationContext:
    """Tracks verification progress for a run."""
    checks_run: int = 0
    checks_failed: int = 0
    oracle_compared: bool = False
    first_differing_column: Optional[int] = None


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Full Run Context Dataclass
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

@dataclass
class RunContext:
    """
    Tracks one command invocation through the pipeline.

    Nothing here reaches the report on standard output, which must not depend
    on run ids or clocks.

    Attributes:
        m: Curve parameter of the run
        run_id: Unique identifier for the run
        timestamp: When the run started
        metadata: Additional run-specific data
        completed_stages: Which stages have finished, and when
    """
    m: int
    run_id: UUID = field(default_factory=uuid4)
    timestamp: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    metadata: Dict[str, Any] = field(default_factory=dict)
    completed_stages: Dict[str, datetime] = field(default_factory=dict)
    matrix: MatrixContext = field(default_factory=MatrixContext)
    verification: VerificationContext = field(default_factory=VerificationContext)

    def mark_stage(self, stage_name: str, **fields: Any) -> None:
        """Mark a stage as completed and log its key figures."""
        self.completed_stages[stage_name] = datetime.now(timezone.utc)
        log_stage(str(self.run_id), stage_name, m=self.m, **fields)

    def add_metadata(self, key: str, value: Any) -> None:
        self.metadata[key] = value

    def to_dict(self) -> Dict[str, Any]:
        """Convert context to dictionary for serialization."""
        return {
            "run_id": str(self.run_id),
            "m": self.m,
            "timestamp": self.timestamp.isoformat(),
            "metadata": self.metadata,
            "completed_stages": {
                k: v.isoformat() for k, v in self.completed_stages.items()
            },
            "matrix": {
                "path": self.matrix.path,
                "source": self.matrix.source,
                "cache_file": self.matrix.cache_file,
                "workers": self.matrix.workers,
                "elapsed_ms": self.matrix.elapsed_ms
            },
            "verification": {
                "checks_run": self.verification.checks_run,
                "checks_failed": self.verification.checks_failed,
                "oracle_compared": self.verification.oracle_compared,
                "first_differing_column": self.verification.first_differing_column
            }
        }
