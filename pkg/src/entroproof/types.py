from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional


class StatementKind(str, Enum):
    OBJECTIVE_INEQUALITY = "objective-inequality"
    OBJECTIVE_IDENTITY = "objective-identity"
    CONSTRAINT_EQUALITY = "constraint-equality"
    CONSTRAINT_INEQUALITY = "constraint-inequality"

    @property
    def is_objective(self) -> bool:
        return self in (StatementKind.OBJECTIVE_INEQUALITY, StatementKind.OBJECTIVE_IDENTITY)

    @property
    def is_equality(self) -> bool:
        return self in (StatementKind.OBJECTIVE_IDENTITY, StatementKind.CONSTRAINT_EQUALITY)


class VerdictStatus(str, Enum):
    PROVED = "Proved"
    NOT_PROVABLE = "NotProvable"


class CertificateKind(str, Enum):
    INEQUALITY = "inequality"
    IDENTITY = "identity"


class LPStatus(str, Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    POSITIVE = "positive"
    ZERO_ONLY = "zero-only"


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


@dataclass(frozen=True)
class ProblemSize:
    variables: int
    equalities: int
    inequalities: int

    @property
    def constraints(self) -> int:
        return self.equalities + self.inequalities

    def to_dict(self) -> dict[str, int]:
        return {
            "variables": self.variables,
            "equalities": self.equalities,
            "inequalities": self.inequalities,
        }


@dataclass(frozen=True)
class ProblemStats:
    """Problem sizes before reduction, after it, and in the residual LP."""

    p1: ProblemSize
    p2: ProblemSize
    p3: Optional[ProblemSize] = None

    def chain(self) -> list[ProblemSize]:
        return [size for size in (self.p1, self.p2, self.p3) if size is not None]

    def monotone(self) -> bool:
        sizes = self.chain()
        for left, right in zip(sizes, sizes[1:]):
            if left.variables < right.variables or left.constraints < right.constraints:
                return False
        return True

    def to_dict(self) -> dict[str, Any]:
        return {
            "P1": self.p1.to_dict(),
            "P2": self.p2.to_dict(),
            "P3": self.p3.to_dict() if self.p3 is not None else None,
            "monotone": self.monotone(),
        }
