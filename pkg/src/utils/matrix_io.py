"""Reading and writing JSON matrix documents."""
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from src.certify.rearrangement import CommutingFamily
from src.certify.separability import SeparableState
from src.core.blocks import BlockMatrix, partition
from src.core.decompose import WeightedIsometryDecomposition, structured_isometries
from src.core.exceptions import MatrixFileError
from src.core.models import (
    BlockMatrixFile,
    CommutingFamilyFile,
    DecompositionFile,
    MatrixPayload,
    SeparableStateFile,
    SeparableTermPayload,
    StructuredPayload,
)
from src.core.structured import KroneckerStage, describe

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


def digest(a: np.ndarray) -> str:
    """sha256 of the complex128 row-major bytes."""
    return hashlib.sha256(np.ascontiguousarray(a, dtype=np.complex128).tobytes()).hexdigest()


def read_json(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise MatrixFileError(f"cannot read {path}: {e}") from e


def write_json(path: Path, payload: Dict[str, Any]) -> Path:
    """Write with shortest round-trip float representation; output is deterministic."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, allow_nan=False)
        f.write("\n")
    return path


def _parse(model: Type[ModelT], data: Dict[str, Any], path: Path) -> ModelT:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise MatrixFileError(f"{path} is not a valid {model.__name__}: {e.errors()[0]['msg']}", {"errors": str(e)}) from e


# --- Block matrices ---

def load_block_matrix(path: Path, beta: Optional[int] = None, n: Optional[int] = None) -> BlockMatrix:
    """
    Load a block-form document, or a plain matrix document together with beta and n.

    Raises:
        MatrixFileError: unreadable or invalid document
        NotPSDError: the matrix is not PSD within tolerance
    """
    data = read_json(path)
    if "beta" in data:
        doc = _parse(BlockMatrixFile, data, path)
        return partition(doc.matrix.to_array(), doc.beta, doc.n)
    matrix = _parse(MatrixPayload, data, path)
    if beta is None and n is None:
        raise MatrixFileError(f"{path} has no block layout; pass --beta or --n")
    if beta is None:
        beta = matrix.rows // n
    if n is None:
        n = matrix.rows // beta
    return partition(matrix.to_array(), beta, n)


def save_block_matrix(path: Path, h: BlockMatrix, provenance: Optional[Dict[str, Any]] = None) -> Path:
    doc = BlockMatrixFile(beta=h.beta, n=h.n, matrix=MatrixPayload.from_array(h.carrier), provenance=provenance)
    return write_json(path, doc.model_dump(mode="json", exclude_none=True))


# --- Commuting families ---

def load_commuting_family(path: Path) -> Tuple[CommutingFamily, Optional[np.ndarray]]:
    doc = _parse(CommutingFamilyFile, read_json(path), path)
    if not doc.members:
        raise MatrixFileError(f"{path} lists no family members")
    family = CommutingFamily(
        members=[m.to_array() for m in doc.members],
        witness_basis=doc.witness_basis.to_array() if doc.witness_basis else None,
    )
    return family, doc.T.to_array() if doc.T else None


def save_commuting_family(
    path: Path,
    family: CommutingFamily,
    t: Optional[np.ndarray] = None,
    provenance: Optional[Dict[str, Any]] = None,
) -> Path:
    doc = CommutingFamilyFile(
        members=[MatrixPayload.from_array(s) for s in family.members],
        T=MatrixPayload.from_array(t) if t is not None else None,
        witness_basis=MatrixPayload.from_array(family.witness_basis) if family.witness_basis is not None else None,
        provenance=provenance,
    )
    return write_json(path, doc.model_dump(mode="json", exclude_none=True))


# --- Separable states ---

def load_separable_state(path: Path) -> SeparableState:
    doc = _parse(SeparableStateFile, read_json(path), path)
    terms = [(t.A.to_array(), t.B.to_array()) for t in doc.terms]
    return SeparableState(terms, normalized=doc.normalized)


def save_separable_state(path: Path, state: SeparableState, provenance: Optional[Dict[str, Any]] = None) -> Path:
    doc = SeparableStateFile(
        terms=[SeparableTermPayload(A=MatrixPayload.from_array(a), B=MatrixPayload.from_array(b)) for a, b in state.terms],
        normalized=state.normalized,
        provenance=provenance,
    )
    return write_json(path, doc.model_dump(mode="json", exclude_none=True))


# --- Decompositions ---

def decomposition_document(
    decomposition: WeightedIsometryDecomposition,
    sqrt_h: Optional[np.ndarray] = None,
    delta: Optional[np.ndarray] = None,
    padded_from: Optional[int] = None,
) -> DecompositionFile:
    """Dense isometries when materialized, otherwise the data that rebuilds them."""
    materialized = decomposition.materialized
    structured = None
    summand = None
    if materialized:
        if decomposition.summand is not None:
            summand = MatrixPayload.from_array(decomposition.summand)
    else:
        if sqrt_h is None or delta is None:
            raise MatrixFileError("structured decompositions are saved with H^{1/2} and Delta")
        structured = StructuredPayload(
            sqrt_h=MatrixPayload.from_array(sqrt_h),
            delta=MatrixPayload.from_array(delta),
            stages=[describe(v) for v in decomposition.isometries[:1]],
        )
    return DecompositionFile(
        kind=decomposition.kind,
        beta=decomposition.beta,
        n=decomposition.n,
        m=decomposition.m,
        weight=decomposition.weight,
        materialized=materialized,
        padded_from=padded_from,
        summand=summand,
        per_summand=[MatrixPayload.from_array(a) for a in decomposition.per_summand] if decomposition.per_summand else None,
        isometries=[MatrixPayload.from_array(v) for v in decomposition.isometries] if materialized else None,
        structured=structured,
    )


def save_decomposition(path: Path, document: DecompositionFile) -> Path:
    return write_json(path, document.model_dump(mode="json", exclude_none=True))


def load_decomposition(path: Path) -> WeightedIsometryDecomposition:
    doc = _parse(DecompositionFile, read_json(path), path)
    if doc.materialized:
        isometries = [v.to_array() for v in doc.isometries]
        summand = doc.summand.to_array() if doc.summand else None
    else:
        delta = doc.structured.delta.to_array()
        isometries = structured_isometries(doc.structured.sqrt_h.to_array(), delta, doc.beta, doc.n)
        summand = KroneckerStage([doc.m, delta])
    target_dim = isometries[0].shape[0]
    return WeightedIsometryDecomposition(
        kind=doc.kind,
        target_dim=target_dim,
        weight=doc.weight,
        isometries=isometries,
        summand=summand,
        per_summand=[a.to_array() for a in doc.per_summand] if doc.per_summand else None,
        beta=doc.beta,
        n=doc.n,
        m=doc.m,
    )
