"""Power-series evaluation of Bessel, Struve and Lommel type functions.

Every function handled here is a ``1F2``-like series whose coefficients obey

    c[n+1] / c[n] = -1 / (4 (n + a) (n + b))

for a pair of shape constants ``(a, b)``. The normalized functions ``f_nu``,
``h_nu`` and ``l_mu`` are such series in ``z`` (times ``z``), with leading
coefficient 1. The raw functions ``J_nu``, ``H_nu`` and ``phi_k`` are
``pref * x**p`` times such a series in ``x**2``.

Normalized functions live on ``|z| <= 1.25`` where double precision is ample.
Raw functions are needed out to several hundred, where the alternating terms
reach ``e**x`` before cancelling down to O(1); those sums are carried out in
exact fixed-point integer arithmetic sized from a magnitude estimate, so the
result keeps its absolute accuracy at any argument.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import DomainError, TruncationError
from .quadrature import adaptive_simpson

_EPS = 2.0**-52
_LN2 = math.log(2.0)
MAX_DERIVATIVE = 20
NORMALIZED_RADIUS = 1.25


class Family(str, Enum):
    BESSEL_F = "bessel_f"
    STRUVE_H = "struve_h"
    LOMMEL_L = "lommel_l"
    RAW_BESSEL_J = "raw_bessel_j"
    RAW_STRUVE_H = "raw_struve_H"
    PHI0 = "phi0"
    PHI1 = "phi1"


NORMALIZED = frozenset({Family.BESSEL_F, Family.STRUVE_H, Family.LOMMEL_L})
RAW = frozenset({Family.RAW_BESSEL_J, Family.RAW_STRUVE_H, Family.PHI0, Family.PHI1})


@dataclass(frozen=True)
class FunctionId:
    """A function family together with its order (nu) or Lommel parameter (mu)."""

    family: Family
    param: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "param", float(self.param))


def _default_max_terms() -> int:
    return int(os.environ.get("UNIDISC_MAX_TERMS", "200"))


@dataclass(frozen=True)
class EvalOptions:
    tolerance: float = 1e-14
    max_terms: int = field(default_factory=_default_max_terms)

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_terms < 8:
            raise DomainError(f"max_terms must be at least 8, got {self.max_terms}")


@dataclass(frozen=True)
class SeriesValue:
    """A computed value with an absolute bound on its truncation/rounding error."""

    value: complex | float
    error_bound: float
    terms_used: int


def check_domain(fid: FunctionId) -> None:
    """Raise DomainError if ``fid.param`` is outside the family's domain."""
    fam, p = fid.family, fid.param
    if not math.isfinite(p):
        raise DomainError(f"{fam.value}: parameter must be finite")
    if fam in (Family.BESSEL_F, Family.RAW_BESSEL_J):
        if p <= -1.0:
            raise DomainError(f"{fam.value}: order must exceed -1, got {p}")
    elif fam is Family.STRUVE_H:
        if p <= -1.5:
            raise DomainError(f"struve_h: order must exceed -3/2, got {p}")
    elif fam is Family.RAW_STRUVE_H:
        if p < -1.5:
            raise DomainError(f"raw_struve_H: order must be at least -3/2, got {p}")
    else:
        if not -1.0 < p < 1.0 or p == 0.0:
            raise DomainError(f"{fam.value}: parameter must lie in (-1, 1) minus 0, got {p}")


def _normalized_shape(fid: FunctionId) -> tuple[float, float]:
    p = fid.param
    if fid.family is Family.BESSEL_F:
        return 1.0, p + 1.0
    if fid.family is Family.STRUVE_H:
        return 1.5, p + 1.5
    return (p + 2.0) / 2.0, (p + 3.0) / 2.0


def _raw_shape(fid: FunctionId) -> tuple[float, float, float, float]:
    """Return ``(pref, p, a, b)`` with f(x) = pref * x**p * sum c[n] x**(2n)."""
    nu = fid.param
    if fid.family is Family.RAW_BESSEL_J:
        return 2.0**-nu / math.gamma(nu + 1.0), nu, 1.0, nu + 1.0
    if fid.family is Family.RAW_STRUVE_H:
        if nu == -1.5:
            # the n = 0 term carries 1/Gamma(0) = 0; re-index from n = 1
            return -(2.0**-1.5) / math.gamma(2.5), 1.5, 2.5, 1.0
        return 2.0 ** -(nu + 1.0) / (math.gamma(1.5) * math.gamma(nu + 1.5)), nu + 1.0, 1.5, nu + 1.5
    k = 0 if fid.family is Family.PHI0 else 1
    return 1.0, 0.0, (nu - k + 2.0) / 2.0, (nu - k + 3.0) / 2.0


def term_ratio(fid: FunctionId, n: int) -> float:
    """Closed-form ratio c[n+1]/c[n] of successive series coefficients."""
    if fid.family in NORMALIZED:
        a, b = _normalized_shape(fid)
    else:
        _, _, a, b = _raw_shape(fid)
    return -1.0 / (4.0 * (n + a) * (n + b))


def _falling(x, k: int):
    out = 1
    for j in range(k):
        out *= x - j
    return out


def _accumulate(terms, tol: float, max_terms: int) -> SeriesValue:
    """Sum a term stream until the tail is provably below tolerance.

    Stops at the first term that is below ``tol * max(1, |partial|)``, no
    larger than its predecessor, and followed by a smaller term. The tail
    bound is ``|t| / (1 - rho)`` with ``rho`` the ratio of the two first
    omitted terms; past the peak the term ratios of these series are
    non-increasing, so this dominates the whole remainder.
    """
    total = 0.0
    abs_sum = 0.0
    prev = math.inf
    used = 0
    pending = next(terms)
    while True:
        nxt = next(terms)
        mag, mag_next = abs(pending), abs(nxt)
        if mag < tol * max(1.0, abs(total)) and mag <= prev and mag_next <= mag:
            if mag == 0.0:
                tail = 0.0
            elif mag_next < mag:
                tail = mag / (1.0 - mag_next / mag)
            else:
                tail = math.inf
            if math.isfinite(tail):
                rounding = 4.0 * _EPS * (used + 1) * abs_sum
                return SeriesValue(total, tail + rounding, max(used, 1))
        total += pending
        abs_sum += mag
        prev = mag
        pending = nxt
        used += 1
        if used >= max_terms:
            ratio = abs(nxt) / mag if mag else 0.0
            tail = abs(pending) / (1.0 - ratio) if ratio < 1.0 else math.inf
            raise TruncationError(
                f"series did not reach tolerance {tol} within {max_terms} terms",
                total,
                tail,
                used,
            )


def eval_normalized(
    fid: FunctionId, z: complex, k: int = 0, opts: EvalOptions | None = None
) -> SeriesValue:
    """k-th derivative of ``f_nu``, ``h_nu`` or ``l_mu`` at ``z``.

    The series is differentiated term by term: the term ``a[n] z**(n+1)``
    contributes ``a[n] (n+1)!/(n+1-k)! z**(n+1-k)``.
    """
    opts = opts or EvalOptions()
    if fid.family not in NORMALIZED:
        raise DomainError(f"eval_normalized does not handle {fid.family.value}")
    check_domain(fid)
    if not 0 <= k <= MAX_DERIVATIVE:
        raise DomainError(f"derivative order must be in [0, {MAX_DERIVATIVE}], got {k}")
    if abs(z) > NORMALIZED_RADIUS:
        raise DomainError(f"|z| must be at most {NORMALIZED_RADIUS}, got {abs(z)}")
    a, b = _normalized_shape(fid)

    def terms():
        coef = 1.0
        n = 0
        while n + 1 < k:
            coef *= -1.0 / (4.0 * (n + a) * (n + b))
            n += 1
        power = z ** (n + 1 - k)
        while True:
            yield coef * _falling(n + 1, k) * power
            coef *= -1.0 / (4.0 * (n + a) * (n + b))
            power *= z
            n += 1

    return _accumulate(terms(), opts.tolerance, opts.max_terms)


def _log2_abs(n: int) -> float:
    if n == 0:
        return -math.inf
    n = abs(n)
    shift = n.bit_length() - 60
    if shift > 0:
        return math.log2(n >> shift) + shift
    return math.log2(n)


def _int_to_float(n: int, bits: int) -> float:
    """``n * 2**-bits`` rounded to a float."""
    shift = abs(n).bit_length() - 62
    if shift > 0:
        return math.ldexp(n >> shift if n >= 0 else -((-n) >> shift), shift - bits)
    return math.ldexp(n, -bits)


def _raw_sums(
    pref: float,
    p: float,
    a: float,
    b: float,
    x: float,
    ks: tuple[int, ...],
    opts: EvalOptions,
) -> list[SeriesValue]:
    """Fixed-point evaluation of ``pref * d^k/dx^k [x**p * sum c[n] x**(2n)]``.

    A float pass in log2 units finds the peak term and the number of terms
    after which every requested derivative series is negligible. The terms
    are then generated as exact-ratio integers scaled by ``2**bits``; a unit
    of rounding injected at term m grows by at most ``peak / T[m]`` later on,
    so ``bits`` covers the peak plus the requested tolerance.
    """
    tol = opts.tolerance
    scales = [pref * x ** (p - k) for k in ks]
    log_scale = max(math.log2(abs(s)) if s else -math.inf for s in scales)
    kmax = max(ks)
    log_tol = math.log2(tol)

    x2 = x * x
    log_q = math.log2(x2 / 4.0)
    log_ab = (math.lgamma(a) + math.lgamma(b)) / _LN2

    def log_term(m: int) -> float:
        # log2 |c[m] x**(2m)| = log2 (x^2/4)^m / ((a)_m (b)_m)
        return m * log_q + log_ab - (math.lgamma(m + a) + math.lgamma(m + b)) / _LN2

    def negligible(m: int) -> bool:
        weight = kmax * math.log2(2 * m + abs(p) + kmax + 1.0) if kmax else 0.0
        ratio = x2 / (4.0 * (m + a) * (m + b))
        return ratio < 0.5 and m > kmax and log_term(m) + weight + log_scale < log_tol - 8

    # terms grow while (m + a)(m + b) < x^2/4, then decrease for good
    top = max(0, math.ceil(0.5 * (math.sqrt((a - b) ** 2 + x2) - a - b)))
    peak = max(0.0, max(log_term(m) for m in range(max(0, top - 1), top + 2)))
    lo, hi = top, max(top, kmax) + 8
    while not negligible(hi):
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if negligible(mid):
            hi = mid
        else:
            lo = mid
    n = hi
    n_terms = n + 1
    max_terms = max(opts.max_terms, 2 * n_terms + 16)
    log_weight = kmax * math.log2(2 * max_terms + abs(p) + kmax + 1.0) if kmax else 0.0
    guard = 2.0 * math.log2(max_terms + 2) + 16
    bits = max(64, math.ceil(peak + log_weight + log_scale - log_tol + guard))

    fx, fa, fb, fp = Fraction(x), Fraction(a), Fraction(b), Fraction(p)
    num = fx.numerator**2 * fa.denominator * fb.denominator
    den0 = 4 * fx.denominator**2
    a_num, a_den, b_num, b_den = fa.numerator, fa.denominator, fb.numerator, fb.denominator
    p_num, p_den = fp.numerator, fp.denominator
    p_shift = p_den.bit_length() - 1  # p_den is a power of two

    base = [1 << bits]

    def extend(count: int) -> None:
        t = base[-1]
        for m in range(len(base) - 1, count - 1):
            t = t * num // (den0 * (m * a_den + a_num) * (m * b_den + b_num))
            base.append(t)

    def weighted(k: int, start: int, stop: int) -> list[int]:
        if k == 0:
            return [-t if m & 1 else t for m, t in enumerate(base[start:stop], start)]
        out = []
        for m in range(start, stop):
            w = 1
            for j in range(k):
                w *= p_num + (2 * m - j) * p_den
            t = (base[m] * w) >> (k * p_shift)
            out.append(-t if m & 1 else t)
        return out

    results = []
    for k, scale in zip(ks, scales):
        if scale == 0.0:
            results.append(SeriesValue(0.0, 0.0, 1))
            continue
        used = n_terms
        while True:
            extend(used + 2)
            terms = weighted(k, 0, used + 2)
            total = sum(terms[:used])
            first, second = abs(terms[used]), abs(terms[used + 1])
            value = _int_to_float(total, bits) * scale
            # the omitted terms must be past their peak and below tolerance
            if second < first and first <= abs(terms[used - 1]):
                tail = 2.0 ** (_log2_abs(first) - bits) * abs(scale) / (1.0 - second / first)
                if tail < tol * max(1.0, abs(value)):
                    break
            elif first == 0 and second == 0:
                tail = 0.0
                break
            if used >= max_terms:
                raise TruncationError(
                    f"raw series did not converge within {max_terms} terms at x={x}",
                    value,
                    math.inf,
                    used,
                )
            used = min(2 * used, max_terms)
        rounding = (used + 2) ** 2 * 2.0 ** (max(peak, 0.0) + log_weight - bits) * abs(scale)
        rounding += 2.0 * _EPS * abs(value)
        results.append(SeriesValue(value, tail + rounding, used))
    return results


def _raw_at_zero(fid: FunctionId, k: int) -> SeriesValue:
    pref, p, a, b = _raw_shape(fid)
    if p == 0.0:
        if k % 2:
            return SeriesValue(0.0, 0.0, 1)
        coef = 1.0
        for n in range(k // 2):
            coef *= -1.0 / (4.0 * (n + a) * (n + b))
        return SeriesValue(pref * coef * math.factorial(k), 0.0, k // 2 + 1)
    if p > k:
        return SeriesValue(0.0, 0.0, 1)
    raise DomainError(f"{fid.family.value} derivative {k} is singular at x = 0")


def eval_raw_many(
    fid: FunctionId, x: float, ks: tuple[int, ...] = (0,), opts: EvalOptions | None = None
) -> list[SeriesValue]:
    """Evaluate several derivative orders of a raw function in one pass."""
    opts = opts or EvalOptions()
    if fid.family not in RAW:
        raise DomainError(f"eval_raw does not handle {fid.family.value}")
    check_domain(fid)
    for k in ks:
        if not 0 <= k <= MAX_DERIVATIVE:
            raise DomainError(f"derivative order must be in [0, {MAX_DERIVATIVE}], got {k}")
    x = float(x)
    if not x >= 0.0 or not math.isfinite(x):
        raise DomainError(f"x must be a non-negative real, got {x}")
    if x == 0.0:
        return [_raw_at_zero(fid, k) for k in ks]
    pref, p, a, b = _raw_shape(fid)
    return _raw_sums(pref, p, a, b, x, tuple(ks), opts)


def eval_raw(fid: FunctionId, x: float, k: int = 0, opts: EvalOptions | None = None) -> SeriesValue:
    """k-th derivative of ``J_nu``, ``H_nu``, ``phi_0`` or ``phi_1`` at real ``x``.

    ``max_terms`` is raised automatically to the number of terms the argument
    needs (about ``1.4 x`` for large ``x``).
    """
    return eval_raw_many(fid, x, (k,), opts)[0]


def dini_value(nu: float, x: float, opts: EvalOptions | None = None) -> SeriesValue:
    """``(2 - nu) J_nu(x) + x J_nu'(x)``, evaluated as ``2 J_nu(x) - x J_{nu+1}(x)``."""
    if nu <= -1.0:
        raise DomainError(f"Dini function needs nu > -1, got {nu}")
    j0 = eval_raw(FunctionId(Family.RAW_BESSEL_J, nu), x, 0, opts)
    j1 = eval_raw(FunctionId(Family.RAW_BESSEL_J, nu + 1.0), x, 0, opts)
    return SeriesValue(
        2.0 * j0.value - x * j1.value,
        2.0 * j0.error_bound + x * j1.error_bound,
        max(j0.terms_used, j1.terms_used),
    )


def dini_value_and_slope(nu: float, x: float, opts: EvalOptions | None = None) -> tuple[float, float]:
    j0, dj0 = eval_raw_many(FunctionId(Family.RAW_BESSEL_J, nu), x, (0, 1), opts)
    j1, dj1 = eval_raw_many(FunctionId(Family.RAW_BESSEL_J, nu + 1.0), x, (0, 1), opts)
    return 2.0 * j0.value - x * j1.value, 2.0 * dj0.value - j1.value - x * dj1.value


def ode_residual(nu: float, x: float, opts: EvalOptions | None = None) -> float:
    """``|x^2 J'' + x J' + (x^2 - nu^2) J|`` at ``x``; zero up to round-off."""
    if nu <= -1.0:
        raise DomainError(f"ode_residual needs nu > -1, got {nu}")
    if not 0.0 < x <= 50.0:
        raise DomainError(f"ode_residual needs 0 < x <= 50, got {x}")
    j, dj, d2j = eval_raw_many(FunctionId(Family.RAW_BESSEL_J, nu), x, (0, 1, 2), opts)
    return abs(x * x * d2j.value + x * dj.value + (x * x - nu * nu) * j.value)


def struve_integral(nu: float, x: float, tol: float = 1e-10) -> float:
    """``H_nu(x)`` from its Poisson-type integral, by quadrature.

    The weight ``(1 - t)**(nu - 1/2)`` is absorbed by ``t = 1 - u**m`` with
    ``m = k / (nu + 1/2)``, ``k = max(1, ceil(nu + 1/2))``: then
    ``(1 - t)**(nu - 1/2) dt = -m u**(k-1) du`` and ``m >= 1``, so no
    singular endpoint remains.
    """
    if nu <= -0.5:
        raise DomainError(f"struve_integral needs nu > -1/2, got {nu}")
    if x < 0.0:
        raise DomainError(f"struve_integral needs x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    s = nu + 0.5
    k = max(1, math.ceil(s))
    m = k / s

    def g(u: float) -> float:
        t = 1.0 - u**m
        return m * u ** (k - 1) * (1.0 + t) ** (nu - 0.5) * math.sin(x * t)

    integral, _ = adaptive_simpson(g, 0.0, 1.0, tol)
    return 2.0 * (x / 2.0) ** nu / (math.sqrt(math.pi) * math.gamma(s)) * integral


def lommel_integrals(mu: float, x: float, tol: float = 1e-10) -> tuple[float, float]:
    """``(x * phi_0(x), phi_1(x))`` from their integral representations.

    Uses ``u = (1 - t)**mu`` so that ``mu (1 - t)**(mu - 1) dt = -du``.
    """
    if not 0.0 < mu < 1.0:
        raise DomainError(f"lommel_integrals needs mu in (0, 1), got {mu}")
    if x < 0.0:
        raise DomainError(f"lommel_integrals needs x >= 0, got {x}")
    inv = 1.0 / mu

    def t_of(u: float) -> float:
        return 1.0 - u**inv

    zphi0, _ = adaptive_simpson(lambda u: math.sin(x * t_of(u)), 0.0, 1.0, tol)
    phi1, _ = adaptive_simpson(lambda u: math.cos(x * t_of(u)), 0.0, 1.0, tol)
    return (mu + 1.0) * zphi0, phi1


def substituted_integral(mu: float, g, tol: float = 1e-10) -> float:
    """``mu * int_0^1 (1 - t)**(mu - 1) g(t) dt`` via ``u = (1 - t)**mu``."""
    if not 0.0 < mu < 1.0:
        raise DomainError(f"needs mu in (0, 1), got {mu}")
    inv = 1.0 / mu
    value, _ = adaptive_simpson(lambda u: g(1.0 - u**inv), 0.0, 1.0, tol)
    return value
