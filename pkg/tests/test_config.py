"""Tests for Config loading from YAML and environment."""
import os
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from src.utils.config import Config

SAVED = ["TOL_EIG", "TOL_CERT", "EIG_METHOD", "MAX_DENSE_DIM", "MAX_STRUCTURED_BETA", "DEFAULT_OUTPUT_DIR"]


class TestConfig(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)
        self._saved = patch.multiple(Config, **{name: getattr(Config, name) for name in SAVED})
        self._saved.start()

    def tearDown(self):
        self._saved.stop()
        self._tmp.cleanup()

    def test_yaml_sections(self):
        print("\n>>> Testing config.yaml sections...")
        path = self.tmp / "config.yaml"
        path.write_text(
            "tolerances:\n  eig: 1.0e-7\n  cert: 1.0e-6\n"
            "eigensolver:\n  method: jacobi\n"
            "limits:\n  max_structured_beta: 4\n"
        )
        with patch.dict(os.environ, {}, clear=True):
            Config.load_config(path)
        self.assertEqual(Config.TOL_EIG, 1e-7)
        self.assertEqual(Config.TOL_CERT, 1e-6)
        self.assertEqual(Config.EIG_METHOD, "jacobi")
        self.assertEqual(Config.MAX_STRUCTURED_BETA, 4)
        self.assertEqual(Config.tolerances()["tol_cert"], 1e-6)

    def test_missing_file_keeps_defaults(self):
        with patch.dict(os.environ, {}, clear=True):
            Config.load_config(self.tmp / "absent.yaml")
        self.assertEqual(Config.TOL_CERT, 1e-8)
        self.assertEqual(Config.EIG_METHOD, "lapack")

    def test_environment_overrides(self):
        print("\n>>> Testing HERMBLOCK_* overrides...")
        env = {
            "HERMBLOCK_MAX_DIM": "64",
            "HERMBLOCK_TOL_CERT": "1e-5",
            "HERMBLOCK_EIG_METHOD": "jacobi",
            "HERMBLOCK_OUTPUT_DIR": str(self.tmp / "reports"),
        }
        with patch.dict(os.environ, env, clear=True):
            Config.load_config(self.tmp / "absent.yaml")
            self.assertEqual(Config.max_dense_dim(), 64)
        self.assertEqual(Config.MAX_DENSE_DIM, 64)
        self.assertEqual(Config.TOL_CERT, 1e-5)
        self.assertEqual(Config.EIG_METHOD, "jacobi")
        self.assertEqual(Config.DEFAULT_OUTPUT_DIR, self.tmp / "reports")


if __name__ == "__main__":
    unittest.main()
