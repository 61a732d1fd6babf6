"""Data models for hermblock reports, configs and JSON documents."""
import math
from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


# --- Concave function catalog ---

class ConcaveFunctionName(str, Enum):
    """Closed catalog of concave functions on R+ with f(0) >= 0."""
    SQRT = "sqrt"
    LOG1P = "log1p"
    POWER = "power"
    RATIONAL = "rational"
    CLAMP = "clamp"
    AFFINE = "affine"


_PARAMETER_COUNT = {
    ConcaveFunctionName.SQRT: 0,
    ConcaveFunctionName.LOG1P: 0,
    ConcaveFunctionName.POWER: 1,
    ConcaveFunctionName.RATIONAL: 0,
    ConcaveFunctionName.CLAMP: 1,
    ConcaveFunctionName.AFFINE: 2,
}


class ConcaveFunctionSpec(BaseModel):
    """A catalog entry f with its parameters; evaluation is elementwise."""
    model_config = ConfigDict(frozen=True)

    name: ConcaveFunctionName
    parameters: List[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_catalog(self) -> "ConcaveFunctionSpec":
        expected = _PARAMETER_COUNT[self.name]
        if len(self.parameters) != expected:
            raise ValueError(f"{self.name.value} takes {expected} parameter(s), got {len(self.parameters)}")
        if self.name is ConcaveFunctionName.POWER and not 0.0 < self.parameters[0] <= 1.0:
            raise ValueError("power exponent q must satisfy 0 < q <= 1")
        if self.name is ConcaveFunctionName.CLAMP and not self.parameters[0] > 0.0:
            raise ValueError("clamp level c must be positive")
        if self.name is ConcaveFunctionName.AFFINE and not self.parameters[0] >= 0.0:
            raise ValueError("affine intercept a must be nonnegative")
        return self

    @classmethod
    def parse(cls, text: str) -> "ConcaveFunctionSpec":
        """Parse the CLI form ``name`` or ``name:p1,p2``."""
        name, _, params = text.partition(":")
        values = [float(p) for p in params.split(",") if p.strip()] if params else []
        return cls(name=name.strip(), parameters=values)

    @property
    def label(self) -> str:
        if not self.parameters:
            return self.name.value
        return f"{self.name.value}:{','.join(repr(p) for p in self.parameters)}"

    @property
    def value_at_zero(self) -> float:
        return float(self(np.zeros(1))[0])

    def __call__(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.name is ConcaveFunctionName.SQRT:
            return np.sqrt(t)
        if self.name is ConcaveFunctionName.LOG1P:
            return np.log1p(t)
        if self.name is ConcaveFunctionName.POWER:
            return np.power(t, self.parameters[0])
        if self.name is ConcaveFunctionName.RATIONAL:
            return t / (1.0 + t)
        if self.name is ConcaveFunctionName.CLAMP:
            return np.minimum(t, self.parameters[0])
        a, b = self.parameters
        return a + b * t


def concave_catalog() -> List[ConcaveFunctionSpec]:
    """One representative of every catalog entry."""
    return [
        ConcaveFunctionSpec(name="sqrt"),
        ConcaveFunctionSpec(name="log1p"),
        ConcaveFunctionSpec(name="power", parameters=[0.3]),
        ConcaveFunctionSpec(name="rational"),
        ConcaveFunctionSpec(name="clamp", parameters=[0.5]),
        ConcaveFunctionSpec(name="affine", parameters=[0.0, 1.0]),
    ]


# --- Certificates ---

class CertificateItem(BaseModel):
    """One compared pair: margin = rhs - lhs."""
    label: str
    lhs: float
    rhs: float
    margin: float
    requires_hypothesis: bool = Field(default=True, description="False for items valid without the Hermitian-block hypothesis")


class CertificateReport(BaseModel):
    """Named inequality with per-index margins and the pass decision."""
    name: str
    tolerance: float
    passed: bool
    hypothesis_violated: bool = False
    items: List[CertificateItem] = Field(default_factory=list)
    context: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_passed(self) -> "CertificateReport":
        expected = self.min_margin >= -self.tolerance
        if self.passed != expected:
            raise ValueError("passed must equal (min margin >= -tolerance)")
        return self

    @property
    def min_margin(self) -> float:
        if not self.items:
            return math.inf
        return min(item.margin for item in self.items)

    @classmethod
    def build(
        cls,
        name: str,
        items: List[CertificateItem],
        tolerance: float,
        context: Optional[Dict[str, Any]] = None,
        hypothesis_violated: bool = False,
    ) -> "CertificateReport":
        min_margin = min((item.margin for item in items), default=math.inf)
        return cls(
            name=name,
            tolerance=tolerance,
            passed=bool(min_margin >= -tolerance),
            hypothesis_violated=hypothesis_violated,
            items=items,
            context=context or {},
        )

    def failing_items(self) -> List[CertificateItem]:
        return [item for item in self.items if item.margin < -self.tolerance]


def make_item(label: str, lhs: float, rhs: float, requires_hypothesis: bool = True) -> CertificateItem:
    """Build an item with margin rhs - lhs."""
    lhs, rhs = float(lhs), float(rhs)
    return CertificateItem(label=label, lhs=lhs, rhs=rhs, margin=rhs - lhs, requires_hypothesis=requires_hypothesis)


class VerifyOptions(BaseModel):
    """Flags shared by every ``verify`` check."""
    model_config = ConfigDict(frozen=True)

    force: bool = False
    tol: Optional[float] = Field(default=None, gt=0.0)
    function: Optional[ConcaveFunctionSpec] = None
    p: float = Field(default=math.inf, ge=1.0)
    k: Optional[int] = Field(default=None, ge=0)
    splits: Optional[List[int]] = None
    mode: Literal["norms", "eigensteps"] = "norms"


# --- Generator configuration ---

class GeneratorMethod(str, Enum):
    SEPARABLE = "separable"
    GRAM = "gram"
    PROJECTED = "projected"
    COMMUTING = "commuting"
    SEPARABLE_STATE = "separable-state"


class GeneratorConfig(BaseModel):
    """Seeded generator request; identical configs give identical output."""
    model_config = ConfigDict(frozen=True)

    seed: int = Field(ge=0, lt=2**64)
    beta: int = Field(default=2, ge=1, description="Block count (alpha or beta); n_H for separable states")
    n: int = Field(default=2, ge=1, description="Block side; n_F for separable states")
    method: GeneratorMethod = GeneratorMethod.SEPARABLE
    k: int = Field(default=2, ge=1, description="Number of tensor terms")
    normalize: bool = False
    max_iter: Optional[int] = Field(default=None, ge=1, description="Projection iteration cap")
    budget: int = Field(default=0, ge=0, description="Search restarts")
    steps: Optional[int] = Field(default=None, ge=0, description="Hill-climb steps per restart")
    hermitian_only: bool = False

    def provenance(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", exclude_none=True)


# --- JSON matrix documents ---

class MatrixPayload(BaseModel):
    """Row-major complex matrix as [[re, im], ...]."""
    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    data: List[Tuple[float, float]]

    @model_validator(mode="after")
    def _check_data(self) -> "MatrixPayload":
        if len(self.data) != self.rows * self.cols:
            raise ValueError(f"data length {len(self.data)} != rows*cols = {self.rows * self.cols}")
        if not all(math.isfinite(re) and math.isfinite(im) for re, im in self.data):
            raise ValueError("matrix entries must be finite")
        return self

    def to_array(self) -> np.ndarray:
        values = np.array(self.data, dtype=float).reshape(self.rows * self.cols, 2)
        return (values[:, 0] + 1j * values[:, 1]).reshape(self.rows, self.cols)

    @classmethod
    def from_array(cls, a: np.ndarray) -> "MatrixPayload":
        a = np.atleast_2d(np.asarray(a, dtype=complex))
        flat = a.reshape(-1)
        return cls(
            rows=a.shape[0],
            cols=a.shape[1],
            data=[(float(z.real), float(z.imag)) for z in flat],
        )


class BlockMatrixFile(BaseModel):
    """Block form document: {"beta", "n", "matrix"}."""
    beta: int = Field(ge=1)
    n: int = Field(ge=1)
    matrix: MatrixPayload
    provenance: Optional[Dict[str, Any]] = None

    @model_validator(mode="after")
    def _check_shape(self) -> "BlockMatrixFile":
        side = self.beta * self.n
        if self.matrix.rows != side or self.matrix.cols != side:
            raise ValueError(f"block form requires rows = cols = beta*n = {side}")
        return self


class SeparableTermPayload(BaseModel):
    A: MatrixPayload
    B: MatrixPayload


class SeparableStateFile(BaseModel):
    terms: List[SeparableTermPayload]
    normalized: bool = False
    provenance: Optional[Dict[str, Any]] = None

    @field_validator("terms")
    @classmethod
    def _non_empty(cls, terms: List[SeparableTermPayload]) -> List[SeparableTermPayload]:
        if not terms:
            raise ValueError("a separable state needs at least one term")
        return terms


class CommutingFamilyFile(BaseModel):
    members: List[MatrixPayload]
    T: Optional[MatrixPayload] = None
    witness_basis: Optional[MatrixPayload] = None
    provenance: Optional[Dict[str, Any]] = None


class StructuredPayload(BaseModel):
    """Data from which lazy Clifford isometries are rebuilt, plus their stage layout."""
    sqrt_h: MatrixPayload
    delta: MatrixPayload
    stages: List[Dict[str, Any]] = Field(default_factory=list)


class DecompositionFile(BaseModel):
    """Emitted decomposition: weight * sum_k V_k core_k V_k*."""
    kind: Literal["pinch", "two-block", "clifford"]
    beta: int = Field(ge=1)
    n: int = Field(ge=1)
    m: int = Field(default=1, ge=1)
    weight: float = Field(gt=0.0)
    materialized: bool = True
    padded_from: Optional[int] = None
    summand: Optional[MatrixPayload] = None
    per_summand: Optional[List[MatrixPayload]] = None
    isometries: Optional[List[MatrixPayload]] = None
    structured: Optional[StructuredPayload] = None

    @model_validator(mode="after")
    def _check_body(self) -> "DecompositionFile":
        if self.materialized and not self.isometries:
            raise ValueError("materialized decompositions must list their isometries")
        if not self.materialized and self.structured is None:
            raise ValueError("structured decompositions need the structured payload")
        if self.summand is None and self.per_summand is None and self.structured is None:
            raise ValueError("a summand or per-summand cores are required")
        return self


# --- Run reports ---

class DecompositionSummary(BaseModel):
    """Residuals recomputed from an emitted decomposition."""
    kind: Literal["pinch", "two-block", "clifford"]
    beta: int
    n: int
    m: int = 1
    weight: float
    residual: float
    residual_kind: Literal["dense", "probe"] = "dense"
    isometry_defects: List[float] = Field(
        default_factory=list, description="||V*V - I||_F per isometry; a probe estimate when residual_kind is probe"
    )
    materialized: bool = True
    padded_from: Optional[int] = None


class RunReport(BaseModel):
    """Everything one CLI command produced."""
    command: str
    arguments: Dict[str, Any] = Field(default_factory=dict)
    input_digests: Dict[str, str] = Field(default_factory=dict)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    certificates: List[CertificateReport] = Field(default_factory=list)
    decompositions: List[DecompositionSummary] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    wall_time: Optional[float] = Field(default=None, description="Seconds; omitted from report files")

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.certificates)
