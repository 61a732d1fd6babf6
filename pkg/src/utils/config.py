"""Configuration settings for hermblock."""
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv


class Config:
    """Application configuration loaded from config.yaml."""

    _config_data: dict = None
    _config_path: Path = None

    # Tolerances
    TOL_EIG: float = 1e-9
    TOL_ISO: float = 1e-10
    TOL_CERT: float = 1e-8
    RANK_RTOL: float = 1e-12

    # Eigensolver
    EIG_METHOD: str = "lapack"
    JACOBI_MAX_SWEEPS: int = 100
    JACOBI_OFF_RTOL: float = 1e-13

    # Resource limits
    MAX_DENSE_DIM: int = 4096
    MAX_MATERIALIZED_BETA: int = 4
    MAX_STRUCTURED_BETA: int = 8

    # Generators
    DYKSTRA_MAX_ITER: int = 5000
    DYKSTRA_TOL: float = 1e-10

    # Counterexample search
    SEARCH_STEPS_PER_RESTART: int = 8

    # Default paths
    DEFAULT_OUTPUT_DIR: Path = Path("output")

    @classmethod
    def load_config(cls, config_path: Optional[Path] = None) -> None:
        """
        Load configuration from YAML file and environment.

        Args:
            config_path: Path to config file (default: config.yaml in the working directory)
        """
        load_dotenv()
        if config_path is None:
            config_path = Path.cwd() / "config.yaml"

        cls._config_path = Path(config_path)

        if cls._config_path.exists():
            with open(cls._config_path, "r", encoding="utf-8") as f:
                cls._config_data = yaml.safe_load(f) or {}
            cls._apply(cls._config_data)

        cls._load_from_env()

    @classmethod
    def _apply(cls, data: Dict[str, Any]) -> None:
        tolerances = data.get("tolerances", {})
        cls.TOL_EIG = float(tolerances.get("eig", cls.TOL_EIG))
        cls.TOL_ISO = float(tolerances.get("iso", cls.TOL_ISO))
        cls.TOL_CERT = float(tolerances.get("cert", cls.TOL_CERT))
        cls.RANK_RTOL = float(tolerances.get("rank", cls.RANK_RTOL))

        eig = data.get("eigensolver", {})
        cls.EIG_METHOD = eig.get("method", cls.EIG_METHOD)
        cls.JACOBI_MAX_SWEEPS = int(eig.get("max_sweeps", cls.JACOBI_MAX_SWEEPS))
        cls.JACOBI_OFF_RTOL = float(eig.get("off_rtol", cls.JACOBI_OFF_RTOL))

        limits = data.get("limits", {})
        cls.MAX_DENSE_DIM = int(limits.get("max_dense_dim", cls.MAX_DENSE_DIM))
        cls.MAX_MATERIALIZED_BETA = int(limits.get("max_materialized_beta", cls.MAX_MATERIALIZED_BETA))
        cls.MAX_STRUCTURED_BETA = int(limits.get("max_structured_beta", cls.MAX_STRUCTURED_BETA))

        generate = data.get("generate", {})
        cls.DYKSTRA_MAX_ITER = int(generate.get("dykstra_max_iter", cls.DYKSTRA_MAX_ITER))
        cls.DYKSTRA_TOL = float(generate.get("dykstra_tol", cls.DYKSTRA_TOL))

        search = data.get("search", {})
        cls.SEARCH_STEPS_PER_RESTART = int(search.get("steps_per_restart", cls.SEARCH_STEPS_PER_RESTART))

        app = data.get("app", {})
        if app.get("default_output_dir"):
            cls.DEFAULT_OUTPUT_DIR = Path(app["default_output_dir"])

    @classmethod
    def _load_from_env(cls) -> None:
        """Environment overrides."""
        max_dim = os.getenv("HERMBLOCK_MAX_DIM")
        if max_dim:
            cls.MAX_DENSE_DIM = int(max_dim)
        tol_cert = os.getenv("HERMBLOCK_TOL_CERT")
        if tol_cert:
            cls.TOL_CERT = float(tol_cert)
        cls.EIG_METHOD = os.getenv("HERMBLOCK_EIG_METHOD", cls.EIG_METHOD)
        output_dir = os.getenv("HERMBLOCK_OUTPUT_DIR")
        if output_dir:
            cls.DEFAULT_OUTPUT_DIR = Path(output_dir)

    @classmethod
    def max_dense_dim(cls) -> int:
        """Dense-size cap, honoring HERMBLOCK_MAX_DIM set after load_config."""
        max_dim = os.getenv("HERMBLOCK_MAX_DIM")
        return int(max_dim) if max_dim else cls.MAX_DENSE_DIM

    @classmethod
    def tolerances(cls) -> Dict[str, float]:
        """Tolerances echoed in every report."""
        return {
            "tol_eig": cls.TOL_EIG,
            "tol_iso": cls.TOL_ISO,
            "tol_cert": cls.TOL_CERT,
        }
