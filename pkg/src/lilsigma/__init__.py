"""Exact LIL discrepancy constants for geometric progressions with rational ratio."""

from .certify import Certificate, certify_supremum, find_defect, recheck
from .constants import (
    Provenance,
    SigmaConstant,
    ThetaSpec,
    UnknownConstant,
    search_candidates,
    sigma_constant,
)
from .exact import RatioPair, V, mult_order, signed_order
from .sigma import (
    Interval,
    local_quadratic,
    sigma2_enclosure,
    sigma2_exact,
    sigma2_exact_periodic,
    sigma2_partial,
)
from .simulator import discrepancy, lil_trace, orbit

__all__ = [
    "Certificate", "certify_supremum", "find_defect", "recheck",
    "Provenance", "SigmaConstant", "ThetaSpec", "UnknownConstant",
    "search_candidates", "sigma_constant",
    "RatioPair", "V", "mult_order", "signed_order",
    "Interval", "local_quadratic", "sigma2_enclosure", "sigma2_exact",
    "sigma2_exact_periodic", "sigma2_partial",
    "discrepancy", "lil_trace", "orbit",
]
