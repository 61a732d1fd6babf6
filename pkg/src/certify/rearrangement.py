"""Rearrangement comparison for commuting Hermitian families."""
import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from src.certify.base_checks import InequalityCheck, eigen_step_items, hypothesis_status, ky_fan_items, report
from src.core.blocks import smallest_dyadic
from src.core.exceptions import ParameterError, ShapeError
from src.core.linalg import cert_tolerance, frobenius, hermitian, require_psd, spectrum
from src.core.models import CertificateReport, VerifyOptions
from src.utils.config import Config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommutingFamily:
    """Hermitian S_1..S_alpha of common side n, expected to commute pairwise."""
    members: List[np.ndarray]
    witness_basis: Optional[np.ndarray] = None

    def __post_init__(self):
        if not self.members:
            raise ParameterError("a commuting family needs at least one member")
        members = [hermitian(s) for s in self.members]
        if len({s.shape for s in members}) != 1:
            raise ShapeError("family members must share one dimension")
        object.__setattr__(self, "members", members)

    @property
    def alpha(self) -> int:
        return len(self.members)

    @property
    def n(self) -> int:
        return self.members[0].shape[0]

    def max_commutator_ratio(self) -> float:
        """max over pairs of ||S_i S_j - S_j S_i||_F / (1 + ||S_i||_F ||S_j||_F)."""
        worst = 0.0
        for a, b in itertools.combinations(self.members, 2):
            worst = max(worst, frobenius(a @ b - b @ a) / (1.0 + frobenius(a) * frobenius(b)))
        return worst

    def is_commuting(self, tol: Optional[float] = None) -> bool:
        tol = Config.TOL_EIG if tol is None else tol
        return self.max_commutator_ratio() <= tol


def rearrangement_sums(family: CommutingFamily, t: np.ndarray) -> tuple:
    """(sum_i S_i T^2 S_i, sum_i T S_i^2 T)."""
    t2 = t @ t
    left = sum(s @ t2 @ s for s in family.members)
    right = sum(t @ s @ s @ t for s in family.members)
    return hermitian(left), hermitian(right)


def check_rearrangement(
    family: CommutingFamily,
    t,
    mode: str = "norms",
    force: bool = False,
    tol: Optional[float] = None,
) -> CertificateReport:
    """
    Compare sum S_i T^2 S_i against sum T S_i^2 T.

    ``norms`` reports Ky Fan prefix sums; ``eigensteps`` reports
    lambda_{1+beta k}(left) <= lambda_{1+k}(right) with beta the smallest
    power of two >= alpha.
    """
    t = hermitian(t)
    if t.shape[0] != family.n:
        raise ShapeError(f"T has side {t.shape[0]}, family members have side {family.n}")
    require_psd(t)
    violated = hypothesis_status(family.is_commuting(), force, "family members do not commute")
    left, right = rearrangement_sums(family, t)
    lhs, rhs = spectrum(left), spectrum(right)
    context = {"alpha": family.alpha, "n": family.n, "mode": mode}
    if mode == "norms":
        items = ky_fan_items(lhs, rhs, family.n, "sum S T^2 S", "sum T S^2 T")
    elif mode == "eigensteps":
        beta = smallest_dyadic(family.alpha)
        context["beta"] = beta
        items = eigen_step_items(lhs, rhs, beta, family.n, "sum S T^2 S", "sum T S^2 T")
    else:
        raise ParameterError(f"unknown rearrangement mode '{mode}'")
    return report(
        "rearrange",
        items,
        cert_tolerance(tol, left, right),
        context=context,
        hypothesis_violated=violated,
    )


class RearrangementCheck(InequalityCheck):
    name = "rearrange"
    input_kind = "family"

    def certify(self, document: tuple, options: VerifyOptions) -> List[CertificateReport]:
        family, t = document
        if t is None:
            raise ParameterError("rearrangement input needs a PSD matrix T")
        return [check_rearrangement(family, t, options.mode, options.force, options.tol)]
