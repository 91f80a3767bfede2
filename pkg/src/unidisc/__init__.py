"""Geometric properties of normalized Bessel, Struve and Lommel functions.

Series evaluation, zero tables, the zero-sum starlikeness/convexity
criterion with certified tail bounds, critical Bessel orders, and
unit-disk probes of the underlying functionals.
"""

from .core_series import EvalOptions, Family, FunctionId, SeriesValue, eval_normalized, eval_raw
from .critical_params import CriticalId, CriticalParameter, solve_critical, threshold_consistency
from .disk_probe import Functional, ProbeReport, probe
from .errors import UnidiscError
from .st_criterion import (
    Certificate,
    CriterionResult,
    Decision,
    Mode,
    bessel_sum_closed_form,
    certify,
    dini_sum_closed_form,
    rayleigh_sum,
    st_sum,
)
from .zero_finder import ZeroFamily, ZeroTable, bessel_zeros, dini_zeros, lommel_zeros, struve_zeros

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CriterionResult",
    "CriticalId",
    "CriticalParameter",
    "Decision",
    "EvalOptions",
    "Family",
    "FunctionId",
    "Functional",
    "Mode",
    "ProbeReport",
    "SeriesValue",
    "UnidiscError",
    "ZeroFamily",
    "ZeroTable",
    "bessel_sum_closed_form",
    "bessel_zeros",
    "certify",
    "dini_sum_closed_form",
    "dini_zeros",
    "eval_normalized",
    "eval_raw",
    "lommel_zeros",
    "probe",
    "rayleigh_sum",
    "solve_critical",
    "st_sum",
    "struve_zeros",
    "threshold_consistency",
]
