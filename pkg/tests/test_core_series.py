import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unidisc.core_series import (
    EvalOptions,
    Family,
    FunctionId,
    dini_value,
    eval_normalized,
    eval_raw,
    eval_raw_many,
    lommel_integrals,
    ode_residual,
    struve_integral,
    term_ratio,
)
from unidisc.errors import DomainError, TruncationError

mp.mp.dps = 40


# ---- oracles --------------------------------------------------------------


def mp_normalized(family, p, z):
    """f_nu, h_nu, l_mu from their classical closed forms (entire in z)."""
    z = mp.mpc(z)
    if z == 0:
        return mp.mpf(0)
    if family is Family.BESSEL_F:
        return 2**p * mp.gamma(p + 1) * z ** (1 - mp.mpf(p) / 2) * mp.besselj(p, mp.sqrt(z))
    if family is Family.STRUVE_H:
        return mp.sqrt(mp.pi) * 2**p * mp.gamma(p + 1.5) * z ** ((1 - mp.mpf(p)) / 2) * mp.struveh(p, mp.sqrt(z))
    return z * mp.hyp1f2(1, (p + 2) / mp.mpf(2), (p + 3) / mp.mpf(2), -z / 4)


def mp_raw(family, p, x):
    if family is Family.RAW_BESSEL_J:
        return mp.besselj(p, x)
    if family is Family.RAW_STRUVE_H:
        return mp.struveh(p, x)
    k = 0 if family is Family.PHI0 else 1
    return mp.hyp1f2(1, (p - k + 2) / mp.mpf(2), (p - k + 3) / mp.mpf(2), -mp.mpf(x) ** 2 / 4)


def mp_coefficient(family, p, n):
    """Coefficient of z**(n+1) in the normalized series, via Gamma functions."""
    p = mp.mpf(p)
    if family is Family.BESSEL_F:
        return (-1) ** n * mp.gamma(p + 1) / (4**n * mp.factorial(n) * mp.gamma(p + n + 1))
    if family is Family.STRUVE_H:
        return (-mp.mpf(1) / 4) ** n * mp.gamma(1.5) * mp.gamma(p + 1.5) / (mp.gamma(n + 1.5) * mp.gamma(p + n + 1.5))
    a, b = (p + 2) / 2, (p + 3) / 2
    return (-mp.mpf(1) / 4) ** n / (mp.rf(a, n) * mp.rf(b, n))


NORMALIZED_CASES = [
    (Family.BESSEL_F, -0.9),
    (Family.BESSEL_F, -0.5),
    (Family.BESSEL_F, 0.0),
    (Family.BESSEL_F, 2.5),
    (Family.STRUVE_H, -0.5),
    (Family.STRUVE_H, 0.0),
    (Family.STRUVE_H, 0.5),
    (Family.LOMMEL_L, -0.5),
    (Family.LOMMEL_L, 0.5),
    (Family.LOMMEL_L, 0.9),
]


# ---- normalized functions -------------------------------------------------


def test_leading_coefficients():
    assert eval_normalized(FunctionId("bessel_f", 0.5), 0.0, 0).value == 0
    assert eval_normalized(FunctionId("bessel_f", 0.5), 0.0, 1).value == 1
    assert eval_normalized(FunctionId("lommel_l", 0.5), 0.0, 1).value == 1
    assert eval_normalized(FunctionId("struve_h", 0.0), 0.0, 1).value == 1


def test_f0_at_one_extended_precision():
    oracle = mp.nsum(lambda n: (-1) ** n / (4**n * mp.factorial(n) ** 2), [0, 50])
    got = eval_normalized(FunctionId("bessel_f", 0.0), 1.0)
    assert abs(got.value - float(oracle)) <= max(got.error_bound, 1e-16)
    assert abs(got.value - float(oracle)) < 1e-14
    tight = eval_normalized(FunctionId("bessel_f", 0.0), 1.0, 0, EvalOptions(tolerance=1e-17))
    assert abs(tight.value - float(oracle)) < 2e-16


@pytest.mark.parametrize("family,p", NORMALIZED_CASES)
@pytest.mark.parametrize("z", [0.3, 1.0, 1.25, -1.0, 0.6 + 0.7j, -0.2 - 0.9j])
def test_normalized_matches_closed_form(family, p, z):
    got = eval_normalized(FunctionId(family, p), z)
    want = complex(mp_normalized(family, p, z))
    assert abs(got.value - want) <= got.error_bound + 4e-16 * max(1.0, abs(want))


@pytest.mark.parametrize("family,p", NORMALIZED_CASES)
def test_term_ratio_against_gamma_coefficients(family, p):
    fid = FunctionId(family, p)
    for n in range(31):
        want = mp_coefficient(family, p, n + 1) / mp_coefficient(family, p, n)
        assert term_ratio(fid, n) == pytest.approx(float(want), rel=1e-14)


def test_lommel_series_is_the_1f2():
    for mu in (-0.7, 0.25, 0.75):
        for z in (0.4, 1.1, -0.8):
            got = eval_normalized(FunctionId("lommel_l", mu), z).value
            a, b = (mu + 2) / 2, (mu + 3) / 2
            want = float(z * mp.hyp1f2(1, a, b, -mp.mpf(z) / 4))
            assert got == pytest.approx(want, rel=1e-14, abs=1e-16)


zs = st.builds(
    lambda r, t: complex(r * math.cos(t), r * math.sin(t)),
    st.floats(0.0, 0.9),
    st.floats(0.0, 2 * math.pi),
)


@settings(max_examples=20, deadline=None)
@given(z=zs, case=st.sampled_from(NORMALIZED_CASES), k=st.integers(1, 3))
def test_derivative_matches_central_difference(z, case, k):
    fid = FunctionId(*case)
    h = 1e-5
    lower = lambda w: eval_normalized(fid, w, k - 1).value  # noqa: E731
    fd = (lower(z + h) - lower(z - h)) / (2 * h)
    exact = eval_normalized(fid, z, k).value
    assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact))


@pytest.mark.parametrize("family,p", NORMALIZED_CASES[::3])
@pytest.mark.parametrize("k", [0, 1, 2, 5, 20])
def test_high_derivatives_against_mpmath(family, p, k):
    z = 0.7 - 0.4j
    got = eval_normalized(FunctionId(family, p), z, k)
    want = complex(mp.diff(lambda w: mp_normalized(family, p, w), mp.mpc(z), k)) if k <= 5 else None
    if want is None:
        # k = 20: direct coefficient sum in extended precision
        want = complex(
            mp.fsum(
                mp_coefficient(family, p, n) * mp.ff(n + 1, k) * mp.mpc(z) ** (n + 1 - k) for n in range(k - 1, 120)
            )
        )
    assert abs(got.value - want) <= got.error_bound + 1e-14 * max(1.0, abs(want))


@settings(max_examples=40, deadline=None)
@given(z=zs, case=st.sampled_from(NORMALIZED_CASES), k=st.integers(0, 4))
def test_alternating_tail_soundness(z, case, k):
    fid = FunctionId(*case)
    got = eval_normalized(fid, z, k)
    a = [mp_coefficient(fid.family, fid.param, n) for n in range(2 * got.terms_used + k + 4)]
    start = max(k - 1, 0)
    terms = [a[n] * mp.ff(n + 1, k) * mp.mpc(z) ** (n + 1 - k) for n in range(start, start + 2 * got.terms_used + 2)]
    first_omitted = abs(terms[got.terms_used]) if got.terms_used < len(terms) else 0
    assert got.error_bound >= float(first_omitted)
    doubled = complex(mp.fsum(terms[: 2 * got.terms_used]))
    assert abs(doubled - got.value) <= got.error_bound + 1e-16


def test_truncation_error_carries_best_value():
    fid = FunctionId("bessel_f", 0.0)
    with pytest.raises(TruncationError) as info:
        eval_normalized(fid, 1.25, 0, EvalOptions(tolerance=1e-300, max_terms=8))
    err = info.value
    assert err.terms_used == 8
    assert err.error_bound > 0
    assert abs(err.value - complex(mp_normalized(Family.BESSEL_F, 0, 1.25))) <= err.error_bound


def test_domain_errors():
    with pytest.raises(DomainError):
        eval_normalized(FunctionId("bessel_f", -1.0), 0.5)
    with pytest.raises(DomainError):
        eval_normalized(FunctionId("lommel_l", 0.0), 0.5)
    with pytest.raises(DomainError):
        eval_normalized(FunctionId("lommel_l", 1.0), 0.5)
    with pytest.raises(DomainError):
        eval_normalized(FunctionId("struve_h", -1.5), 0.5)
    with pytest.raises(DomainError):
        eval_normalized(FunctionId("bessel_f", 0.0), 1.3)
    with pytest.raises(DomainError):
        eval_normalized(FunctionId("bessel_f", 0.0), 0.5, 21)
    with pytest.raises(DomainError):
        eval_normalized(FunctionId("raw_bessel_j", 0.0), 0.5)
    with pytest.raises(DomainError):
        eval_raw(FunctionId("bessel_f", 0.0), 0.5)
    with pytest.raises(DomainError):
        eval_raw(FunctionId("raw_bessel_j", 0.0), -1.0)
    with pytest.raises(DomainError):
        EvalOptions(tolerance=0.0)
    with pytest.raises(DomainError):
        EvalOptions(max_terms=7)


def test_max_terms_from_environment(monkeypatch):
    monkeypatch.setenv("UNIDISC_MAX_TERMS", "37")
    assert EvalOptions().max_terms == 37


# ---- raw functions --------------------------------------------------------

RAW_CASES = [
    (Family.RAW_BESSEL_J, -0.9),
    (Family.RAW_BESSEL_J, -0.5),
    (Family.RAW_BESSEL_J, 0.0),
    (Family.RAW_BESSEL_J, 0.7),
    (Family.RAW_BESSEL_J, 3.0),
    (Family.RAW_STRUVE_H, -1.5),
    (Family.RAW_STRUVE_H, -0.5),
    (Family.RAW_STRUVE_H, 0.25),
    (Family.PHI0, 0.1),
    (Family.PHI0, 0.9),
    (Family.PHI1, 0.5),
    (Family.PHI1, -0.5),
]


@pytest.mark.parametrize("family,p", RAW_CASES)
@pytest.mark.parametrize("x", [0.001, 0.5, 2.0, 17.3, 60.0, 199.0, 450.0])
def test_raw_matches_mpmath(family, p, x):
    got = eval_raw(FunctionId(family, p), x)
    want = float(mp_raw(family, p, x))
    assert abs(got.value - want) <= got.error_bound + 1e-16
    assert got.error_bound <= 1e-13 * max(1.0, abs(want))


@pytest.mark.parametrize("family,p", RAW_CASES[::2])
@pytest.mark.parametrize("x", [0.8, 9.0, 120.0])
def test_raw_derivatives_against_mpmath(family, p, x):
    got = eval_raw_many(FunctionId(family, p), x, (0, 1, 2, 3))
    for k, v in enumerate(got):
        want = float(mp.diff(lambda t: mp_raw(family, p, t), x, k))
        assert abs(v.value - want) <= v.error_bound + 1e-13 * max(1.0, abs(want))


def test_raw_examples():
    assert eval_raw(FunctionId("phi0", 0.5), 0.0).value == 1.0
    x = 1.0
    assert eval_raw(FunctionId("raw_struve_H", -0.5), x).value == pytest.approx(
        math.sqrt(2 / math.pi) * math.sin(1.0), abs=1e-15
    )
    assert abs(eval_raw(FunctionId("raw_bessel_j", 0.0), 2.404825557695773).value) < 1e-10


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
def test_struve_half_integer_closed_forms(x):
    c = math.sqrt(2 / (math.pi * x))
    assert eval_raw(FunctionId("raw_struve_H", -0.5), x).value == pytest.approx(c * math.sin(x), abs=1e-10)
    assert eval_raw(FunctionId("raw_struve_H", -1.5), x).value == pytest.approx(
        c * (math.cos(x) - math.sin(x) / x), abs=1e-10
    )


def test_struve_recurrence_bracket():
    h = eval_raw(FunctionId("raw_struve_H", -0.5), 1.0).value
    h_prev = eval_raw(FunctionId("raw_struve_H", -1.5), 1.0).value
    assert 2 * h + h_prev == pytest.approx(1.102495575, abs=1e-8)
    assert 2 * h + h_prev == pytest.approx(math.sqrt(2 / math.pi) * (math.sin(1) + math.cos(1)), abs=1e-14)


@pytest.mark.parametrize("mu", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("x", [0.5, 1.0, 3.0])
def test_phi_recurrence(mu, x):
    phi0, dphi0 = eval_raw_many(FunctionId("phi0", mu), x, (0, 1))
    phi1 = eval_raw(FunctionId("phi1", mu), x)
    assert abs((mu + 1) * phi1.value - ((mu + 1) * phi0.value + x * dphi0.value)) <= 1e-10


@pytest.mark.parametrize("nu", [-0.9, -0.5, 0.0, 0.5, 2.0])
@pytest.mark.parametrize("x", [0.5, 1.0, 5.0, 10.0])
def test_ode_residual_grid(nu, x):
    assert ode_residual(nu, x) <= 1e-10


def test_ode_residual_examples():
    assert ode_residual(0.0, 1.0) <= 1e-12
    assert ode_residual(0.7, 5.0) <= 1e-10
    assert ode_residual(-0.5, 2.0) <= 1e-11
    with pytest.raises(DomainError):
        ode_residual(0.0, 51.0)


# ---- Dini function --------------------------------------------------------


def test_dini_reduction_matches_definition():
    for nu in (-0.5, 0.0, 0.5, 1.7):
        for x in (0.3, 1.0, 4.0):
            j, dj = (float(mp.besselj(nu, x)), float(mp.besselj(nu, x, derivative=1)))
            want = (2 - nu) * j + x * dj
            assert dini_value(nu, x).value == pytest.approx(want, abs=1e-14)


def test_dini_examples():
    assert abs(dini_value(0.0, 1e-6).value - 2.0) < 1e-6
    j = lambda nu: eval_raw(FunctionId("raw_bessel_j", nu), 1.0).value  # noqa: E731
    assert dini_value(0.5, 1.0).value == pytest.approx(2 * j(0.5) - j(1.5), abs=1e-15)
    with pytest.raises(DomainError):
        dini_value(-1.0, 1.0)


# ---- integral representations ---------------------------------------------


def test_struve_integral_examples():
    assert struve_integral(0.5, 0.0) == 0.0
    assert struve_integral(0.0, 1.0) == pytest.approx(eval_raw(FunctionId("raw_struve_H", 0.0), 1.0).value, abs=1e-9)
    assert struve_integral(0.25, 3.0) == pytest.approx(eval_raw(FunctionId("raw_struve_H", 0.25), 3.0).value, abs=1e-8)
    with pytest.raises(DomainError):
        struve_integral(-0.5, 1.0)


@pytest.mark.parametrize("nu", [-0.4, 0.1, 0.5, 1.5])
@pytest.mark.parametrize("x", [0.2, 2.0, 7.0])
def test_struve_integral_matches_series(nu, x):
    assert struve_integral(nu, x) == pytest.approx(eval_raw(FunctionId("raw_struve_H", nu), x).value, abs=1e-9)


def test_lommel_integrals_examples():
    _, phi1 = lommel_integrals(0.5, 1e-9)
    assert phi1 == pytest.approx(1.0, abs=1e-9)
    zphi0, _ = lommel_integrals(0.5, 1.0)
    assert zphi0 == pytest.approx(1.0 * eval_raw(FunctionId("phi0", 0.5), 1.0).value, abs=1e-9)
    _, phi1 = lommel_integrals(0.9, 2.0)
    assert phi1 == pytest.approx(eval_raw(FunctionId("phi1", 0.9), 2.0).value, abs=1e-9)


@pytest.mark.parametrize("mu", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("x", [0.5, 3.0, 10.0])
def test_lommel_integrals_match_series(mu, x):
    zphi0, phi1 = lommel_integrals(mu, x)
    assert zphi0 == pytest.approx(x * eval_raw(FunctionId("phi0", mu), x).value, abs=1e-9)
    assert phi1 == pytest.approx(eval_raw(FunctionId("phi1", mu), x).value, abs=1e-9)
