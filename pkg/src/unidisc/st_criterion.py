"""Zero-sum criterion for starlikeness and convexity, with certified tails.

For a normalized entire function ``z * prod(1 - z / w_n)`` with real zeros
``w_n = x_n**2 > 1`` the criterion sum is ``sum 1/(x_n**2 - 1)``; the function
is starlike with every derivative close-to-convex exactly when the sum over
the zeros of ``f`` is at most 1, and it and all derivatives are convex
exactly when the sum over the zeros of ``f'`` is at most 1.

Only finitely many zeros are ever computed. The remainder is bounded with
the Rayleigh sum ``sum 1/x_n**2``, known in closed form from the ``z**2``
coefficient of each series:

    sum_{n>N} 1/(x_n**2 - 1) <= C * (R - sum_{n<=N} 1/x_n**2),
    C = x_N**2 / (x_N**2 - 1),

because ``t / (t - 1)`` decreases for ``t > 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .core_series import (
    EvalOptions,
    Family,
    FunctionId,
    eval_normalized,
    eval_raw,
    substituted_integral,
)
from .errors import (
    ConsistencyError,
    CriterionInapplicableError,
    DomainError,
    NearPoleError,
    UnsupportedError,
)
from .zero_finder import ZeroFamily, ZeroTable, bessel_zeros, dini_zeros, lommel_zeros, struve_zeros

# f_nu(1) = 0 at this order; below it j_{nu,1} < 1
NU_STAR_APPROX = -0.7745645128439622
DEFAULT_ZEROS = 100


class Decision(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


class Mode(str, Enum):
    STARLIKE_CTC = "starlike_ctc"
    CONVEX_ALL_DERIVATIVES = "convex_all_derivatives"


class CertFamily(str, Enum):
    BESSEL = "bessel"
    STRUVE = "struve"
    LOMMEL = "lommel"


def decide(partial_sum: float, tail_bound: float) -> Decision:
    if partial_sum > 1.0:
        return Decision.FAILS
    if partial_sum + tail_bound <= 1.0:
        return Decision.HOLDS
    return Decision.INCONCLUSIVE


@dataclass(frozen=True)
class CriterionResult:
    partial_sum: float
    tail_bound: float
    n_used: int
    decision: Decision

    def __post_init__(self):
        object.__setattr__(self, "decision", Decision(self.decision))
        if not (self.tail_bound >= 0.0 and math.isfinite(self.tail_bound)):
            raise ValueError(f"tail_bound must be finite and non-negative, got {self.tail_bound}")
        expected = decide(self.partial_sum, self.tail_bound)
        if self.decision is not expected:
            raise ValueError(
                f"decision {self.decision.value!r} inconsistent with partial_sum="
                f"{self.partial_sum!r}, tail_bound={self.tail_bound!r} (expected {expected.value!r})"
            )


def rayleigh_sum(family: ZeroFamily | str, param: float) -> float:
    """Closed form of ``sum 1/x_n**2`` over the positive zeros of the family.

    Bessel ``1/(4(nu+1))``, Dini ``1/(2(nu+1))``, Struve ``1/(3(2nu+3))``,
    ``phi_0`` ``1/((mu+2)(mu+3))``, ``phi_1`` ``1/((mu+1)(mu+2))``: minus the
    ``z**2`` coefficient of the corresponding normalized series (for Dini,
    minus the ``z`` coefficient of ``f_nu'``).
    """
    family = ZeroFamily(family)
    if family in (ZeroFamily.BESSEL, ZeroFamily.DINI):
        if not param > -1.0:
            raise DomainError(f"{family.value} Rayleigh sum needs nu > -1, got {param}")
        return 1.0 / (4.0 * (param + 1.0)) if family is ZeroFamily.BESSEL else 1.0 / (2.0 * (param + 1.0))
    if family is ZeroFamily.STRUVE:
        if not abs(param) <= 0.5:
            raise DomainError(f"Struve Rayleigh sum needs |nu| <= 1/2, got {param}")
        return 1.0 / (3.0 * (2.0 * param + 3.0))
    if not 0.0 < param < 1.0:
        raise DomainError(f"{family.value} Rayleigh sum needs mu in (0, 1), got {param}")
    if family is ZeroFamily.PHI0:
        return 1.0 / ((param + 2.0) * (param + 3.0))
    return 1.0 / ((param + 1.0) * (param + 2.0))


def st_sum(table: ZeroTable) -> CriterionResult:
    """Criterion sum over the table's zeros plus a certified tail bound."""
    if table.count < 5:
        raise DomainError(f"st_sum needs at least 5 zeros, got {table.count}")
    for i, x in enumerate(table.zeros, start=1):
        if not x > 1.0:
            raise CriterionInapplicableError(
                f"{table.family.value}({table.param}) zero #{i} = {x!r} is not above 1"
            )
    squares = [x * x for x in table.zeros]
    partial = math.fsum(1.0 / (s - 1.0) for s in squares)
    inverse = math.fsum(1.0 / s for s in squares)
    last = squares[-1]
    remainder = max(rayleigh_sum(table.family, table.param) - inverse, 0.0)
    tail = last / (last - 1.0) * remainder
    return CriterionResult(partial, tail, table.count, decide(partial, tail))


def bessel_sum_closed_form(nu: float, opts: EvalOptions | None = None) -> float:
    """``sum 1/(j_{nu,n}**2 - 1) = 1 - f_nu'(1)/f_nu(1)``."""
    if not nu > -1.0:
        raise DomainError(f"needs nu > -1, got {nu}")
    fid = FunctionId(Family.BESSEL_F, nu)
    f = eval_normalized(fid, 1.0, 0, opts).value
    if abs(f) < 1e-12:
        raise NearPoleError(f"f_nu(1) = {f!r} vanishes at nu = {nu}")
    if f < 0.0:
        raise DomainError(f"nu = {nu} lies below the f_nu(1) = 0 threshold")
    return 1.0 - eval_normalized(fid, 1.0, 1, opts).value / f


def dini_sum_closed_form(nu: float, opts: EvalOptions | None = None) -> float:
    """``sum 1/(beta_{nu,n}**2 - 1)`` as ``(J_nu(1) + 2(1-nu) J_{nu+1}(1)) / (2 (2 J_nu(1) - J_{nu+1}(1)))``."""
    if not nu > -1.0:
        raise DomainError(f"needs nu > -1, got {nu}")
    j0 = eval_raw(FunctionId(Family.RAW_BESSEL_J, nu), 1.0, 0, opts).value
    j1 = eval_raw(FunctionId(Family.RAW_BESSEL_J, nu + 1.0), 1.0, 0, opts).value
    denom = 2.0 * j0 - j1
    if abs(denom) <= 1e-12:
        raise NearPoleError(f"2 J_nu(1) - J_nu+1(1) = {denom!r} vanishes at nu = {nu}")
    return 0.5 * (j0 + 2.0 * (1.0 - nu) * j1) / denom


def normalized_sum_closed_form(family: CertFamily | str, param: float) -> float:
    """``1 - g'(1)/g(1)`` for the normalized function of the family."""
    family = CertFamily(family)
    fam = {
        CertFamily.BESSEL: Family.BESSEL_F,
        CertFamily.STRUVE: Family.STRUVE_H,
        CertFamily.LOMMEL: Family.LOMMEL_L,
    }[family]
    fid = FunctionId(fam, param)
    g = eval_normalized(fid, 1.0, 0).value
    if abs(g) < 1e-12:
        raise NearPoleError(f"{fam.value}(1) vanishes at parameter {param}")
    return 1.0 - eval_normalized(fid, 1.0, 1).value / g


def struve_derivative_bracket(nu: float) -> float:
    """``(1 - 2nu) H_nu(1) + H_{nu-1}(1)``.

    Multiplied by ``sqrt(pi) 2**nu Gamma(nu + 3/2)`` this gives
    ``2 h_nu'(1)``, from differentiating ``h_nu(z**2)`` at ``z = 1``.
    """
    h = eval_raw(FunctionId(Family.RAW_STRUVE_H, nu), 1.0).value
    h_prev = eval_raw(FunctionId(Family.RAW_STRUVE_H, nu - 1.0), 1.0).value
    return (1.0 - 2.0 * nu) * h + h_prev


def struve_h_prime_at_one(nu: float) -> float:
    """``h_nu'(1)`` through the Struve recurrence (independent of the z-series)."""
    return 0.5 * math.sqrt(math.pi) * 2.0**nu * math.gamma(nu + 1.5) * struve_derivative_bracket(nu)


def lommel_positivity_integrals(mu: float) -> tuple[float, float]:
    """``(2 l_mu'(1), 2 l_{mu-1}'(1))`` from their integral representations, mu in (0, 1)."""
    first = (mu + 1.0) * substituted_integral(mu, lambda t: math.cos(t) + (1.0 - mu) * math.sin(t))
    second = substituted_integral(mu, lommel_integrand)
    return first, second


@dataclass(frozen=True)
class Certificate:
    """Outcome of the zero-sum criterion for one function, with provenance."""

    family: CertFamily
    param: float
    mode: Mode
    criterion: CriterionResult
    zero_family: ZeroFamily
    zero_param: float
    zero_count: int
    refine_tol: float
    closed_form: float | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def decision(self) -> Decision:
        return self.criterion.decision

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "param": self.param,
            "mode": self.mode.value,
            "decision": self.decision.value,
            "criterion": {
                "partial_sum": self.criterion.partial_sum,
                "tail_bound": self.criterion.tail_bound,
                "n_used": self.criterion.n_used,
                "decision": self.criterion.decision.value,
            },
            "zeros": {
                "family": self.zero_family.value,
                "param": self.zero_param,
                "count": self.zero_count,
                "refine_tol": self.refine_tol,
            },
            "closed_form": self.closed_form,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        """Rebuild a certificate; the criterion invariant is re-validated."""
        crit = data["criterion"]
        criterion = CriterionResult(
            float(crit["partial_sum"]), float(crit["tail_bound"]), int(crit["n_used"]), crit["decision"]
        )
        if Decision(data["decision"]) is not criterion.decision:
            raise ValueError("certificate decision disagrees with its criterion")
        zeros = data["zeros"]
        closed = data.get("closed_form")
        return cls(
            family=CertFamily(data["family"]),
            param=float(data["param"]),
            mode=Mode(data["mode"]),
            criterion=criterion,
            zero_family=ZeroFamily(zeros["family"]),
            zero_param=float(zeros["param"]),
            zero_count=int(zeros["count"]),
            refine_tol=float(zeros["refine_tol"]),
            closed_form=None if closed is None else float(closed),
            notes=list(data.get("notes", [])),
        )


def _certified_table(family: CertFamily, param: float, mode: Mode, n: int) -> tuple[ZeroTable, float | None]:
    if family is CertFamily.BESSEL:
        if not param > -1.0:
            raise DomainError(f"Bessel certificates need nu > -1, got {param}")
        if mode is Mode.CONVEX_ALL_DERIVATIVES:
            return dini_zeros(param, n), dini_sum_closed_form(param)
        closed = bessel_sum_closed_form(param) if param > NU_STAR_APPROX + 1e-9 else None
        return bessel_zeros(param, n), closed
    if mode is not Mode.STARLIKE_CTC:
        raise UnsupportedError(f"{family.value} supports only the starlike_ctc mode")
    if family is CertFamily.STRUVE:
        if not abs(param) <= 0.5:
            raise DomainError(f"Struve certificates need |nu| <= 1/2, got {param}")
        return struve_zeros(param, n), normalized_sum_closed_form(family, param)
    if not -1.0 < param < 1.0 or param == 0.0:
        raise DomainError(f"Lommel certificates need mu in (-1, 1) minus 0, got {param}")
    closed = normalized_sum_closed_form(family, param)
    if param > 0.0:
        return lommel_zeros(param, 0, n), closed
    return lommel_zeros(param + 1.0, 1, n), closed


def certify(
    family: CertFamily | str,
    param: float,
    mode: Mode | str = Mode.STARLIKE_CTC,
    n: int = DEFAULT_ZEROS,
) -> Certificate:
    """Run the zero-sum criterion for ``family`` at ``param``.

    ``starlike_ctc`` sums over the zeros of the function itself (Bessel,
    Struve, Lommel). ``convex_all_derivatives`` sums over the zeros of its
    derivative and is only available for Bessel, through the Dini zeros.
    Lommel parameters in (-1, 0) use the zeros of ``phi_1`` at ``mu + 1``.
    """
    family, mode = CertFamily(family), Mode(mode)
    table, closed = _certified_table(family, float(param), mode, n)
    notes = []
    if family is CertFamily.LOMMEL and param < 0.0:
        notes.append(f"zeros of phi_1 at shifted parameter {table.param!r}")
    return Certificate(
        family=family,
        param=float(param),
        mode=mode,
        criterion=st_sum(table),
        zero_family=table.family,
        zero_param=table.param,
        zero_count=table.count,
        refine_tol=table.refine_tol,
        closed_form=closed,
        notes=notes,
    )


def lommel_integrand(t: float) -> float:
    """``2 cos t - t sin t``, the integrand of ``2 l_{mu-1}'(1)``."""
    return 2.0 * math.cos(t) - t * math.sin(t)


def lommel_integrand_floor(points: int = 1001) -> float:
    """Minimum of ``2 cos t - t sin t`` on [0, 1], checking it is attained at t = 1.

    The integrand decreases on [0, 1], so its floor is ``2 cos 1 - sin 1`` and
    the integral defining ``2 l_{mu-1}'(1)`` is positive for every mu in (0, 1).
    """
    values = [lommel_integrand(i / (points - 1)) for i in range(points)]
    if any(b >= a for a, b in zip(values, values[1:])):
        raise ConsistencyError("2 cos t - t sin t is not decreasing on the sample grid")
    return values[-1]
