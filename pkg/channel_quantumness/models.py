import logging
import math
import os
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi
DEFAULT_GRID_POINTS = 24
RESULT_RANGE_TOL = 1e-10


def reduce_angle(value: float) -> float:
    """Maps a finite angle onto [0, 2π)."""
    if not math.isfinite(value):
        raise ValueError("angles must be finite")
    reduced = value % TWO_PI
    return 0.0 if reduced >= TWO_PI else reduced


# --- Enums ---


class ClosedFormKind(str, Enum):
    EXACT = "exact"
    # Attained at a particular probe pair, so the true maximum can only be larger.
    LOWER_BOUND = "lower_bound"
    UNVERIFIED = "unverified"


# --- State parameters ---


class StatePairParams(BaseModel):
    """Angles of the pure pair cos(x/2)|0> + e^{-iφ} sin(x/2)|1>, and likewise (y, ξ)."""

    model_config = ConfigDict(frozen=True)

    x: float
    phi: float
    y: float
    xi: float

    @field_validator("x", "phi", "y", "xi")
    @classmethod
    def wrap(cls, value: float) -> float:
        return reduce_angle(value)


# --- Configuration Models ---


def default_grid_points() -> int:
    raw = os.getenv("QCHAN_DEFAULT_GRID")
    if not raw:
        return DEFAULT_GRID_POINTS
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer QCHAN_DEFAULT_GRID={raw!r}.")
        return DEFAULT_GRID_POINTS


class OptimizerConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    grid_points_per_angle: int = Field(default_factory=default_grid_points, ge=8)
    refinement_iterations: int = Field(default=200, gt=0)
    refinement_tolerance: float = Field(default=1e-10, gt=0)
    include_mixed_diagnostic: bool = False
    mixed_samples: int = Field(default=2000, gt=0)
    seed: int = Field(default=0, ge=0, lt=2**64)


# --- Result Models ---


class ClosedForm(BaseModel):
    """A tabulated quantumness value together with how far it can be trusted."""

    label: str
    value: float
    kind: ClosedFormKind
    branches: dict[str, float] = Field(default_factory=dict)


class QuantumnessResult(BaseModel):
    channel_label: str
    channel_params: dict[str, float] = Field(default_factory=dict)
    mu: float
    argmax_params: StatePairParams
    grid_mu: float
    closed_form: float | None = None
    closed_form_kind: ClosedFormKind | None = None
    abs_error: float | None = None
    evaluations: int
    converged: bool
    mixed_diagnostic: float | None = None

    @field_validator("mu")
    @classmethod
    def clip_mu(cls, value: float) -> float:
        if not -RESULT_RANGE_TOL <= value <= 1 + RESULT_RANGE_TOL:
            raise ValueError(f"mu={value} lies outside [0, 1]")
        return min(max(value, 0.0), 1.0)

    @model_validator(mode="after")
    def error_needs_reference(self) -> "QuantumnessResult":
        if (self.abs_error is None) != (self.closed_form is None):
            raise ValueError("abs_error must be present exactly when closed_form is")
        return self


class VisibilityPair(BaseModel):
    v1: float  # Tr[ρ²σ²]
    v2: float  # Tr[(ρσ)²]

    @model_validator(mode="after")
    def in_range(self) -> "VisibilityPair":
        m = self.incompatibility
        if not -RESULT_RANGE_TOL <= m <= 1 + RESULT_RANGE_TOL:
            raise ValueError(f"4(v1 - v2) = {m} lies outside [0, 1]")
        return self

    @computed_field
    @property
    def incompatibility(self) -> float:
        return 4 * (self.v1 - self.v2)


class OuterInequalityResult(BaseModel):
    lhs: float
    rhs: float
    slack: float
    holds: bool


# --- Sweep and validation Models ---


class SweepSpec(BaseModel):
    channel_label: str
    fixed_params: dict[str, float] = Field(default_factory=dict)
    sweep_param: str
    start: float
    stop: float
    step: float
    kernel_choice: str | None = None

    @model_validator(mode="after")
    def check_range(self) -> "SweepSpec":
        if not all(math.isfinite(v) for v in (self.start, self.stop, self.step)):
            raise ValueError("sweep bounds must be finite")
        if self.step <= 0:
            raise ValueError("sweep step must be positive")
        if self.start > self.stop:
            raise ValueError("sweep start must not exceed stop")
        if self.sweep_param in self.fixed_params:
            raise ValueError(f"'{self.sweep_param}' is both swept and fixed")
        return self

    def values(self) -> list[float]:
        count = math.floor((self.stop - self.start) / self.step + 1e-9) + 1
        return [round(self.start + i * self.step, 12) for i in range(count)]


class ValidationRow(BaseModel):
    channel_label: str
    params: dict[str, float]
    mu_numeric: float
    mu_closed_form: float
    abs_error: float
    kind: ClosedFormKind
    passed: bool | None  # None for informational rows

    @property
    def asserted(self) -> bool:
        return self.passed is not None


class ValidationReport(BaseModel):
    rows: list[ValidationRow] = Field(default_factory=list)
    tolerance: float

    @computed_field
    @property
    def overall_pass(self) -> bool:
        return all(row.passed for row in self.rows if row.asserted)

    def summary(self) -> dict[str, Any]:
        asserted = [r for r in self.rows if r.asserted]
        return {
            "rows": len(self.rows),
            "asserted": len(asserted),
            "failed": sum(1 for r in asserted if not r.passed),
        }
