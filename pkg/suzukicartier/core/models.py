import json
from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from ..utils.errors import InconsistentProfileError


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class ComputationStage(Enum):
    """Enum representing the stages of a run."""
    PARAMS = auto()
    BASIS = auto()
    MATRIX = auto()
    RANK_PROFILE = auto()
    FINAL_TYPES = auto()
    POINTS = auto()
    VERIFICATION = auto()
    COMPLETE = auto()


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Computation Results
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

@dataclass(frozen=True)
class RankProfile:
    """
    Ranks r_k = rank(M^k) of the Cartier matrix.

    Attributes:
        g: Dimension of the space of regular 1-forms
        ranks: r_1 > r_2 > ... ; ends in 0 when the matrix is nilpotent
        nilpotency: Smallest t with r_t = 0, None if the rank stabilises above 0
    """
    g: int
    ranks: Tuple[int, ...]
    nilpotency: Optional[int] = None

    def __post_init__(self) -> None:
        previous = self.g
        for k, r in enumerate(self.ranks, start=1):
            if r < 0 or r > previous or (k > 1 and r == previous):
                raise InconsistentProfileError(
                    "Rank profile is not strictly decreasing within [0, g]",
                    context={"g": self.g, "ranks": list(self.ranks)}
                )
            previous = r
        if self.nilpotency is not None and (not self.ranks or self.ranks[-1] != 0 or self.nilpotency != len(self.ranks)):
            raise InconsistentProfileError(
                "Nilpotency index does not match the rank sequence",
                context={"ranks": list(self.ranks), "nilpotency": self.nilpotency}
            )

    @property
    def a_number(self) -> int:
        """g - r_1."""
        return self.g - (self.ranks[0] if self.ranks else self.g)

    @property
    def is_nilpotent(self) -> bool:
        return self.nilpotency is not None

    @property
    def p_rank(self) -> int:
        """Rank of the stable image; 0 for a nilpotent matrix."""
        return 0 if self.is_nilpotent or not self.ranks else self.ranks[-1]


@dataclass
class FinalTypeConstraints:
    """
    What a rank profile says about a final type nu_1..nu_g.

    Attributes:
        g: Length of the sequence
        fixed: Index -> value for every determined entry, anchors and forced values alike
        anchors: The values read off the rank profile before propagation
        lower: lower[i] is the smallest admissible nu_i (index 0 unused)
        upper: upper[i] is the largest admissible nu_i (index 0 unused)
        heuristic: True when the inference rule is applied beyond the worked m = 1 case
    """
    g: int
    fixed: Dict[int, int]
    anchors: Dict[int, int] = field(default_factory=dict)
    lower: Tuple[int, ...] = ()
    upper: Tuple[int, ...] = ()
    heuristic: bool = False

    def is_fixed(self, i: int) -> bool:
        return i in self.fixed

    def free_count(self) -> int:
        return self.g - len(self.fixed)


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Report Models
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class CheckResult(BaseModel):
    """Outcome of a single verification check."""

    name: str = Field(..., description="Check identifier")
    passed: bool = Field(..., description="Whether the check passed")
    detail: Optional[str] = Field(None, description="Expected/actual values or the first difference")


class VerificationSummary(BaseModel):
    """All checks run by verify."""

    checks: List[CheckResult] = Field(default_factory=list, description="Checks in execution order")
    first_differing_column: Optional[int] = Field(
        None, description="First column where structured and oracle matrices differ"
    )

    @property
    def verified(self) -> bool:
        return all(check.passed for check in self.checks)

    def add(self, name: str, passed: bool, detail: Optional[str] = None) -> None:
        self.checks.append(CheckResult(name=name, passed=passed, detail=detail))


class FinalTypeSummary(BaseModel):
    """Final-type constraints in report form."""

    nu_fixed: Dict[str, int] = Field(..., description="Index -> value for every determined entry")
    heuristic: bool = Field(..., description="Inference rule applied beyond the worked case")
    free_gaps: int = Field(..., description="Number of undetermined indices")
    compatible_count: int = Field(..., description="Number of compatible final types")

    @classmethod
    def from_constraints(cls, constraints: FinalTypeConstraints, count: int) -> 'FinalTypeSummary':
        """Create FinalTypeSummary from FinalTypeConstraints.

        Args:
            constraints: Derived constraints
            count: Number of compatible sequences

        Returns:
            FinalTypeSummary for the report
        """
        return cls(
            nu_fixed={str(i): v for i, v in sorted(constraints.fixed.items())},
            heuristic=constraints.heuristic,
            free_gaps=constraints.free_count(),
            compatible_count=count
        )


class RunReport(BaseModel):
    """Report printed on standard output: curve constants plus a command payload."""

    m: int = Field(..., description="Curve parameter")
    q0: int = Field(..., description="2^m")
    q: int = Field(..., description="2^(2m+1)")
    g: int = Field(..., description="Genus")
    command: str = Field(..., description="Command that produced the report")
    payload: Dict[str, Any] = Field(default_factory=dict, description="Command-specific results")
    rows: List[Dict[str, Any]] = Field(default_factory=list, description="Records for CSV output")

    def to_dict(self) -> Dict[str, Any]:
        """Header keys m, q0, q, g merged with the payload."""
        return {"m": self.m, "q0": self.q0, "q": self.q, "g": self.g, **self.payload}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)
