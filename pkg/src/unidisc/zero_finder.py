"""Positive zeros of J_nu, the Dini function, H_nu, phi_0 and phi_1.

Zeros are bracketed by a sign scan with step pi/8 (preceded by a few finer
points near the origin) and refined by Halley's method safeguarded by the
bracket. Scan state is cached per (family, parameter, tolerance), so asking
for more zeros of a table already computed only scans the new range.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from enum import Enum

from .core_series import EvalOptions, Family, FunctionId, dini_value, eval_raw, eval_raw_many
from .errors import ConsistencyError, DomainError, ScanExhaustedError

SCAN_STEP = math.pi / 8
MAX_ZEROS = 500
DEFAULT_TOL = 1e-12
_NEAR_ORIGIN = 4  # scan points at step/16, step/8, step/4, step/2
_CUBIC_ACCEPT = 1e-6


class ZeroFamily(str, Enum):
    BESSEL = "bessel"
    DINI = "dini"
    STRUVE = "struve"
    PHI0 = "phi0"
    PHI1 = "phi1"


@dataclass(frozen=True)
class ZeroTable:
    """The first ``count`` positive zeros of one function at one parameter."""

    family: ZeroFamily
    param: float
    zeros: tuple[float, ...]
    refine_tol: float

    @property
    def count(self) -> int:
        return len(self.zeros)

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "param": self.param,
            "count": self.count,
            "refine_tol": self.refine_tol,
            "zeros": list(self.zeros),
        }


_OPTS = EvalOptions(tolerance=1e-15)


def _value(family: ZeroFamily, param: float, x: float) -> float:
    if family is ZeroFamily.DINI:
        return dini_value(param, x, _OPTS).value
    return eval_raw(_raw_id(family, param), x, 0, _OPTS).value


def value_and_slope(family: ZeroFamily, param: float, x: float) -> tuple[float, float]:
    """The function whose zeros ``family`` tabulates, and its x-derivative, at ``x``."""
    f, df, _ = _derivatives(family, param, x)
    return f, df


def _derivatives(family: ZeroFamily, param: float, x: float) -> tuple[float, float, float]:
    if family is ZeroFamily.DINI:
        # F = 2 J_nu - x J_{nu+1}
        j = eval_raw_many(FunctionId(Family.RAW_BESSEL_J, param), x, (0, 1, 2), _OPTS)
        i = eval_raw_many(FunctionId(Family.RAW_BESSEL_J, param + 1.0), x, (0, 1, 2), _OPTS)
        return (
            2.0 * j[0].value - x * i[0].value,
            2.0 * j[1].value - i[0].value - x * i[1].value,
            2.0 * j[2].value - 2.0 * i[1].value - x * i[2].value,
        )
    f, df, d2f = eval_raw_many(_raw_id(family, param), x, (0, 1, 2), _OPTS)
    return f.value, df.value, d2f.value


def _raw_id(family: ZeroFamily, param: float) -> FunctionId:
    return FunctionId(
        {
            ZeroFamily.BESSEL: Family.RAW_BESSEL_J,
            ZeroFamily.STRUVE: Family.RAW_STRUVE_H,
            ZeroFamily.PHI0: Family.PHI0,
            ZeroFamily.PHI1: Family.PHI1,
        }[family],
        param,
    )


def _grid_point(i: int) -> float:
    # snapped to multiples of 2**-10: short dyadic arguments keep the exact
    # large-x series evaluation cheap, and only signs are needed here
    if i < _NEAR_ORIGIN:
        x = SCAN_STEP * 2.0 ** (i - _NEAR_ORIGIN)
    else:
        x = SCAN_STEP * (i - _NEAR_ORIGIN + 1)
    return round(x * 1024.0) / 1024.0


def refine(
    family: ZeroFamily,
    param: float,
    lo: float,
    hi: float,
    f_lo: float,
    f_hi: float,
    tol: float,
) -> float:
    """Locate the zero inside the sign-change bracket ``[lo, hi]``.

    Starts from the secant point of the bracket and iterates Halley's method;
    any step leaving the (shrinking) bracket is replaced by bisection.
    Accepts once a step is shorter than ``tol``, or shorter than 1e-6 while
    staying in the bracket: Halley's method is cubically convergent at a
    simple zero, so the remaining error is then far below ``tol``.
    """
    sign_lo = math.copysign(1.0, f_lo)
    x = lo - f_lo * (hi - lo) / (f_hi - f_lo)
    if not lo < x < hi:
        x = 0.5 * (lo + hi)
    for _ in range(200):
        f, df, d2f = _derivatives(family, param, x)
        if f == 0.0:
            return x
        if math.copysign(1.0, f) == sign_lo:
            lo = x
        else:
            hi = x
        denom = 2.0 * df * df - f * d2f
        step = 2.0 * f * df / denom if denom != 0.0 else math.inf
        x_new = x - step
        # cubic convergence: after a step this short the error is ~step**3
        if abs(step) < tol or (abs(step) < _CUBIC_ACCEPT and lo < x_new < hi):
            return x_new
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if hi - lo < tol:
            return x_new
        x = x_new
    raise ConsistencyError(f"{family.value} zero refinement did not settle in [{lo}, {hi}]")


@dataclass
class _Scan:
    index: int = 0
    last: float = 0.0
    zeros: list[float] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def position(self) -> float:
        return _grid_point(self.index - 1) if self.index else 0.0


_SCANS: dict[tuple, _Scan] = {}
_SCANS_LOCK = threading.Lock()


def _scan_state(family: ZeroFamily, param: float, tol: float) -> _Scan:
    key = (family, param, tol)
    with _SCANS_LOCK:
        return _SCANS.setdefault(key, _Scan())


def _advance(family: ZeroFamily, param: float, tol: float, state: _Scan, want: int, upper: float) -> None:
    """Scan until ``want`` zeros are known or the scan passes ``upper``."""
    while len(state.zeros) < want:
        x = _grid_point(state.index)
        if x > upper:
            return
        f = _value(family, param, x)
        if state.index == 0:
            if f == 0.0:
                raise ConsistencyError(f"{family.value}({param}) vanishes at the first scan point {x}")
        elif f == 0.0:
            # exact hit: keep the previous magnitude as a stand-in of flipped sign
            state.zeros.append(x)
            f = -state.last
        elif (f > 0.0) != (state.last > 0.0):
            lo = _grid_point(state.index - 1)
            state.zeros.append(refine(family, param, lo, x, state.last, f, tol))
        state.last = f
        state.index += 1


def _table(family: ZeroFamily, param: float, n: int, tol: float, upper: float) -> ZeroTable:
    if not 1 <= n <= MAX_ZEROS:
        raise DomainError(f"number of zeros must be in [1, {MAX_ZEROS}], got {n}")
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    state = _scan_state(family, param, tol)
    with state.lock:
        _advance(family, param, tol, state, n, upper)
        found = state.zeros[:n]
    if len(found) < n:
        raise ScanExhaustedError(
            f"only {len(found)} zeros of {family.value}({param}) found below {upper:.6g}; {n} requested"
        )
    return ZeroTable(family, float(param), tuple(found), tol)


def zeros_below(family: ZeroFamily | str, param: float, upper: float, tol: float = DEFAULT_TOL) -> list[float]:
    """All zeros detected by the scan on ``(0, upper]``."""
    family = ZeroFamily(family)
    state = _scan_state(family, float(param), tol)
    with state.lock:
        _advance(family, float(param), tol, state, 10**9, upper)
        return [z for z in state.zeros if z <= upper]


def _check_order(nu: float) -> None:
    if not nu > -1.0:
        raise DomainError(f"order must exceed -1, got {nu}")


def bessel_zeros(nu: float, n: int, tol: float = DEFAULT_TOL) -> ZeroTable:
    """First ``n`` positive zeros ``j_{nu,k}`` of ``J_nu``."""
    _check_order(nu)
    return _table(ZeroFamily.BESSEL, nu, n, tol, (n + 2) * math.pi + 10.0)


def dini_zeros(nu: float, n: int, tol: float = DEFAULT_TOL) -> ZeroTable:
    """First ``n`` positive zeros ``beta_{nu,k}`` of ``(2 - nu) J_nu(x) + x J_nu'(x)``."""
    _check_order(nu)
    return _table(ZeroFamily.DINI, nu, n, tol, (n + 2) * math.pi + 10.0)


def check_interlacing(struve: ZeroTable, bessel: ZeroTable, strict: bool = True) -> None:
    """Raise ConsistencyError unless j_1 < h_1 < j_2 < h_2 < ... < h_N < j_{N+1}.

    With ``strict=False`` the inner inequalities may be equalities (up to the
    refinement tolerance), which is the degenerate case nu = 1/2 where
    h-zeros are double and sit on j-zeros.
    """
    h, j = struve.zeros, bessel.zeros
    if len(j) < len(h) + 1:
        raise DomainError("interlacing check needs one more Bessel zero than Struve zeros")

    slack = 0.0 if strict else 4.0 * max(struve.refine_tol, bessel.refine_tol)

    def below(a: float, b: float) -> bool:
        return a < b if strict else a <= b + slack * max(1.0, abs(b))

    if not 0.0 < j[0] < h[0]:
        raise ConsistencyError(f"no Bessel zero in (0, h_1): j_1={j[0]!r}, h_1={h[0]!r}")
    for i, hz in enumerate(h):
        if not (below(j[i], hz) and below(hz, j[i + 1])):
            raise ConsistencyError(
                f"Struve/Bessel interlacing fails at n={i + 1}: h={hz!r} not in [{j[i]!r}, {j[i + 1]!r}]"
            )
    if not j[len(h)] > h[-1]:
        raise ConsistencyError(f"no Bessel zero above h_{len(h)}")


_STRUVE_CACHE: dict[tuple[float, float], list[float]] = {}
_STRUVE_LOCK = threading.Lock()


def struve_zeros(nu: float, n: int, tol: float = DEFAULT_TOL) -> ZeroTable:
    """First ``n`` positive zeros ``h_{nu,k}`` of ``H_nu`` for ``|nu| <= 1/2``.

    Close to nu = 1/2 the zeros come in pairs straddling every other Bessel
    zero and closer than any fixed scan step, so brackets are taken from the
    Bessel zeros themselves: ``H_nu`` must change sign on each
    ``(j_k, j_{k+1})``, and a missing sign change is an interlacing failure
    (ConsistencyError). The positive sign on ``(0, j_1]`` is checked on the
    scan grid. At nu = 1/2 exactly, ``H_{1/2}(x)`` is proportional to
    ``1 - cos x`` and the zeros ``2 pi k`` are double; each is listed twice.
    """
    if not abs(nu) <= 0.5:
        raise DomainError(f"struve_zeros needs |nu| <= 1/2, got {nu}")
    if not 1 <= n <= MAX_ZEROS:
        raise DomainError(f"number of zeros must be in [1, {MAX_ZEROS}], got {n}")
    nu = float(nu)
    bessel = bessel_zeros(nu, n + 1, tol)
    if nu == 0.5:
        table = ZeroTable(ZeroFamily.STRUVE, nu, tuple(2.0 * math.pi * ((i + 2) // 2) for i in range(n)), tol)
        check_interlacing(table, bessel, strict=False)
        return table

    key = (nu, tol)
    with _STRUVE_LOCK:
        found = _STRUVE_CACHE.setdefault(key, [])
        if not found:
            i = 0
            while _grid_point(i) <= bessel.zeros[0]:
                if not _value(ZeroFamily.STRUVE, nu, _grid_point(i)) > 0.0:
                    raise ConsistencyError(f"H_{nu} not positive at {_grid_point(i)!r} below j_1")
                i += 1
        edges = bessel.zeros
        if len(found) < n:
            f_lo = _value(ZeroFamily.STRUVE, nu, edges[len(found)])
            if len(found) == 0 and not f_lo > 0.0:
                raise ConsistencyError(f"H_{nu}(j_1) = {f_lo!r} is not positive")
        while len(found) < n:
            k = len(found)
            lo, hi = edges[k], edges[k + 1]
            f_hi = _value(ZeroFamily.STRUVE, nu, hi)
            if (f_lo > 0.0) == (f_hi > 0.0) or f_lo == 0.0 or f_hi == 0.0:
                raise ConsistencyError(
                    f"H_{nu} has no sign change on (j_{k + 1}, j_{k + 2}) = ({lo!r}, {hi!r})"
                )
            found.append(refine(ZeroFamily.STRUVE, nu, lo, hi, f_lo, f_hi, tol))
            f_lo = f_hi
        table = ZeroTable(ZeroFamily.STRUVE, nu, tuple(found[:n]), tol)
    check_interlacing(table, bessel)
    return table


def lommel_interval(k: int, i: int) -> tuple[float, float]:
    """Localization interval of the ``i``-th zero (1-based) of ``phi_k``.

    For ``phi_0`` this is ``(i pi, (i+1) pi)``. For ``phi_1`` and ``i >= 2`` it
    is ``((2i-1) pi/2, (2i+1) pi/2)``; the first zero of ``phi_1`` is only known
    to exceed ``pi/2``.
    """
    if k == 0:
        return i * math.pi, (i + 1) * math.pi
    if i == 1:
        return math.pi / 2, math.inf
    return (2 * i - 1) * math.pi / 2, (2 * i + 1) * math.pi / 2


def lommel_zeros(mu: float, k: int, n: int, tol: float = DEFAULT_TOL) -> ZeroTable:
    """First ``n`` positive zeros of ``phi_k`` (``xi`` for k=0, ``zeta`` for k=1).

    Only ``mu`` in (0, 1) is accepted; ``l_mu`` with ``mu`` in (-1, 0) is
    reached through ``k = 1`` at ``mu + 1``.
    """
    if not 0.0 < mu < 1.0:
        raise DomainError(f"lommel_zeros needs mu in (0, 1), got {mu}")
    if k not in (0, 1):
        raise DomainError(f"lommel_zeros needs k in {{0, 1}}, got {k}")
    family = ZeroFamily.PHI0 if k == 0 else ZeroFamily.PHI1
    table = _table(family, mu, n, tol, (n + 2) * math.pi)
    for i, z in enumerate(table.zeros, start=1):
        lo, hi = lommel_interval(k, i)
        if not lo < z < hi:
            raise ConsistencyError(f"phi_{k}({mu}) zero #{i} = {z!r} outside ({lo!r}, {hi!r})")
    return table
