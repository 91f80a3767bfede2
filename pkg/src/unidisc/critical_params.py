"""Critical Bessel orders nu*, nu0 and nu1 by bracketed root-finding in nu.

    nu_star:  f_nu(1) = 0
    nu0:      f_nu'(1) = 0
    nu1:      3 J_nu(1) + 2 (nu - 2) J_{nu+1}(1) = 0

Each defining function is monotone on its bracket; a 20-point sign scan
confirms a single sign change before bisecting.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

from .core_series import EvalOptions, Family, FunctionId, eval_normalized, eval_raw
from .errors import BracketError, DomainError, InsufficientNError
from .st_criterion import CertFamily, Certificate, Decision, Mode, certify

_OPTS = EvalOptions(tolerance=1e-16)
RESIDUAL_LIMIT = 1e-10


class CriticalId(str, Enum):
    NU_STAR = "nu_star"
    NU0 = "nu0"
    NU1 = "nu1"


BRACKETS = {
    CriticalId.NU_STAR: (-0.9, -0.6),
    CriticalId.NU0: (-0.7, -0.4),
    CriticalId.NU1: (-0.3, 0.0),
}


def _f_at_one(nu: float) -> float:
    return eval_normalized(FunctionId(Family.BESSEL_F, nu), 1.0, 0, _OPTS).value


def _df_at_one(nu: float) -> float:
    return eval_normalized(FunctionId(Family.BESSEL_F, nu), 1.0, 1, _OPTS).value


def _dini_threshold(nu: float) -> float:
    j0 = eval_raw(FunctionId(Family.RAW_BESSEL_J, nu), 1.0, 0, _OPTS).value
    j1 = eval_raw(FunctionId(Family.RAW_BESSEL_J, nu + 1.0), 1.0, 0, _OPTS).value
    return 3.0 * j0 + 2.0 * (nu - 2.0) * j1


def defining_function(cid: CriticalId | str) -> Callable[[float], float]:
    return {
        CriticalId.NU_STAR: _f_at_one,
        CriticalId.NU0: _df_at_one,
        CriticalId.NU1: _dini_threshold,
    }[CriticalId(cid)]


@dataclass(frozen=True)
class CriticalParameter:
    id: CriticalId
    value: float
    residual: float
    bracket: tuple[float, float]
    tol: float

    def to_dict(self) -> dict:
        return {
            "id": self.id.value,
            "value": self.value,
            "residual": self.residual,
            "bracket": list(self.bracket),
            "tol": self.tol,
        }


def _sign_scan(g: Callable[[float], float], lo: float, hi: float, points: int = 20) -> tuple[float, float]:
    """Narrow ``[lo, hi]`` to the single sub-interval of a ``points``-grid with a sign change."""
    grid = [lo + (hi - lo) * i / (points - 1) for i in range(points)]
    values = [g(x) for x in grid]
    changes = [i for i in range(points - 1) if (values[i] > 0) != (values[i + 1] > 0)]
    if len(changes) != 1:
        raise BracketError(f"expected one sign change on [{lo}, {hi}], found {len(changes)}")
    i = changes[0]
    return grid[i], grid[i + 1]


def solve_critical(cid: CriticalId | str, tol: float = 1e-12, method: str = "bisection") -> CriticalParameter:
    """Solve the defining equation of ``cid`` in its fixed initial bracket.

    ``method`` is ``"bisection"`` (certified path) or ``"secant"``, which
    replaces midpoints by regula-falsi points (Illinois variant) inside the
    same shrinking bracket.
    """
    cid = CriticalId(cid)
    if not tol >= 1e-13:
        raise DomainError(f"tol must be at least 1e-13, got {tol}")
    if method not in ("bisection", "secant"):
        raise DomainError(f"unknown method {method!r}")
    g = defining_function(cid)
    lo, hi = _sign_scan(g, *BRACKETS[cid])
    g_lo, g_hi = g(lo), g(hi)
    side = 0
    for _ in range(400):
        if hi - lo <= 2.0 * tol:
            break
        if method == "secant":
            x = hi - g_hi * (hi - lo) / (g_hi - g_lo)
            if not lo < x < hi:
                x = 0.5 * (lo + hi)
        else:
            x = 0.5 * (lo + hi)
        gx = g(x)
        if gx == 0.0:
            lo = hi = x
            break
        if (gx > 0) == (g_lo > 0):
            lo, g_lo = x, gx
            if side == -1 and method == "secant":
                g_hi *= 0.5
            side = -1
        else:
            hi, g_hi = x, gx
            if side == 1 and method == "secant":
                g_lo *= 0.5
            side = 1
    value = 0.5 * (lo + hi)
    residual = g(value)
    if abs(residual) > RESIDUAL_LIMIT:
        raise BracketError(f"{cid.value}: residual {residual!r} exceeds {RESIDUAL_LIMIT}")
    return CriticalParameter(cid, value, residual, BRACKETS[cid], tol)


@dataclass(frozen=True)
class ThresholdReport:
    id: CriticalId
    value: float
    delta: float
    above: Certificate
    below: Certificate

    @property
    def consistent(self) -> bool:
        return self.above.decision is Decision.HOLDS and self.below.decision is Decision.FAILS

    def to_dict(self) -> dict:
        return {
            "id": self.id.value,
            "value": self.value,
            "delta": self.delta,
            "above": self.above.decision.value,
            "below": self.below.decision.value,
            "consistent": self.consistent,
        }


def threshold_consistency(cid: CriticalId | str, delta: float, n: int = 100) -> ThresholdReport:
    """Certify at ``value + delta`` and ``value - delta`` and compare decisions.

    Only nu0 (starlike_ctc) and nu1 (convex_all_derivatives) carry a
    certificate threshold. Raises InsufficientNError when both probes come
    back inconclusive.
    """
    cid = CriticalId(cid)
    if cid is CriticalId.NU_STAR:
        raise DomainError("nu_star is not a certificate threshold")
    if not 1e-3 <= delta <= 0.2:
        raise DomainError(f"delta must lie in [1e-3, 0.2], got {delta}")
    mode = Mode.STARLIKE_CTC if cid is CriticalId.NU0 else Mode.CONVEX_ALL_DERIVATIVES
    value = solve_critical(cid).value
    above = certify(CertFamily.BESSEL, value + delta, mode, n)
    below = certify(CertFamily.BESSEL, value - delta, mode, n)
    if above.decision is Decision.INCONCLUSIVE and below.decision is Decision.INCONCLUSIVE:
        raise InsufficientNError(f"{cid.value} +/- {delta}: both probes inconclusive at N = {n}")
    return ThresholdReport(cid, value, delta, above, below)
