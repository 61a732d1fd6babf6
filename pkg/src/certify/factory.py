"""Factory for creating inequality checks."""
from typing import Dict, List, Type

from src.certify.base_checks import InequalityCheck
from src.certify.majorization import EigenAveragedCheck, EigenStepCheck, HiroshimaCheck, NormBoundCheck
from src.certify.rearrangement import RearrangementCheck
from src.certify.separability import NielsenKempeCheck
from src.certify.trace import DeterminantCheck, ScalarSandwichCheck, TraceConcaveCheck
from src.core.exceptions import ParameterError


class CheckFactory:
    """Maps ``verify`` check names to check implementations."""

    _registry: Dict[str, Type[InequalityCheck]] = {
        cls.name: cls
        for cls in (
            HiroshimaCheck,
            EigenStepCheck,
            EigenAveragedCheck,
            RearrangementCheck,
            TraceConcaveCheck,
            ScalarSandwichCheck,
            DeterminantCheck,
            NielsenKempeCheck,
            NormBoundCheck,
        )
    }

    @classmethod
    def available_checks(cls) -> List[str]:
        return list(cls._registry)

    def create(self, name: str) -> InequalityCheck:
        try:
            return self._registry[name]()
        except KeyError:
            raise ParameterError(f"unknown check '{name}'; choose from {', '.join(self._registry)}") from None
