"""Output file management for hermblock runs."""
from pathlib import Path
from typing import Dict, Optional

import numpy as np

from src.core.blocks import BlockMatrix
from src.core.decompose import WeightedIsometryDecomposition
from src.core.models import DecompositionFile, RunReport
from src.utils.matrix_io import decomposition_document, save_block_matrix, save_decomposition, write_json


class OutputManager:
    """Manages saving output files."""

    def __init__(self, output_dir: Path):
        """
        Initialize output manager.

        Args:
            output_dir: Directory for output files
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def resolve(self, name_or_path: Optional[Path], default_name: str) -> Path:
        """Explicit paths are used as given; otherwise the default name under output_dir."""
        if name_or_path is None:
            return self.output_dir / default_name
        return Path(name_or_path)

    def save_report(self, report: RunReport, path: Optional[Path] = None) -> Path:
        """
        Save a run report to JSON. Wall time is left out so seeded runs are byte-identical.

        Args:
            report: RunReport to save
            path: target file (default: <output_dir>/<command>_report.json)

        Returns:
            Path to saved file
        """
        file_path = self.resolve(path, f"{report.command}_report.json")
        payload = report.model_dump(mode="json", exclude={"wall_time"})
        return write_json(file_path, payload)

    def save_decomposition(
        self,
        decomposition: WeightedIsometryDecomposition,
        path: Optional[Path] = None,
        sqrt_h: Optional[np.ndarray] = None,
        delta: Optional[np.ndarray] = None,
        padded_from: Optional[int] = None,
    ) -> Dict[str, object]:
        """Save a decomposition; returns the written path and the document."""
        document: DecompositionFile = decomposition_document(decomposition, sqrt_h, delta, padded_from)
        file_path = save_decomposition(self.resolve(path, f"{decomposition.kind}_decomposition.json"), document)
        return {"path": file_path, "document": document}

    def save_instance(self, h: BlockMatrix, path: Optional[Path] = None, provenance: Optional[dict] = None) -> Path:
        return save_block_matrix(self.resolve(path, "instance.json"), h, provenance)
