"""Utility modules - config, CLI, matrix I/O, output."""
from .config import Config

__all__ = ["Config"]
