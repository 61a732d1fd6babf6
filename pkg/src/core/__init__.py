"""Core modules - models, linear algebra, block model, decompositions."""
from .exceptions import HermblockError
from .models import CertificateItem, CertificateReport, ConcaveFunctionSpec, GeneratorConfig, RunReport

# Orchestrator imported separately to avoid circular imports

__all__ = [
    "HermblockError",
    "CertificateItem", "CertificateReport", "ConcaveFunctionSpec", "GeneratorConfig", "RunReport",
]
