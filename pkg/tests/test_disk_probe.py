import csv
import io
import math

import mpmath as mp
import pytest

from unidisc.core_series import Family, FunctionId
from unidisc.critical_params import solve_critical
from unidisc.disk_probe import Functional, evaluate_functional, probe
from unidisc.errors import DegenerateProbeError, DomainError

mp.mp.dps = 30
NU0 = solve_critical("nu0").value
NU1 = solve_critical("nu1").value
BOUNDARY = (1.0,)


def _bessel(nu):
    return lambda z: z * mp.hyp0f1(nu + 1, -z / 4)


@pytest.mark.parametrize("z", [0.5, 1.0, 0.9j, complex(0.6, -0.7), -1.0])
@pytest.mark.parametrize("nu", [-0.5, 0.0, 1.3])
def test_functionals_against_mpmath(nu, z):
    f = _bessel(nu)
    fid = FunctionId(Family.BESSEL_F, nu)
    zm = mp.mpc(z)
    star = float(mp.re(zm * mp.diff(f, zm) / f(zm)))
    conv = float(mp.re(1 + zm * mp.diff(f, zm, 2) / mp.diff(f, zm)))
    deriv = float(mp.re(mp.diff(f, zm, 2) / mp.diff(f, 0, 2)))
    assert evaluate_functional(fid, Functional.STARLIKE_RE, z) == pytest.approx(star, abs=1e-12)
    assert evaluate_functional(fid, Functional.CONVEX_RE, z) == pytest.approx(conv, abs=1e-12)
    assert evaluate_functional(fid, Functional.DERIV_RE, z, 1) == pytest.approx(deriv, abs=1e-12)


def test_struve_functional_against_mpmath():
    nu, z = 0.2, complex(0.3, 0.8)
    h = lambda t: t * mp.hyp1f2(1, 1.5, nu + 1.5, -t / 4)  # noqa: E731
    zm = mp.mpc(z)
    ref = float(mp.re(zm * mp.diff(h, zm) / h(zm)))
    got = evaluate_functional(FunctionId(Family.STRUVE_H, nu), Functional.STARLIKE_RE, z)
    assert got == pytest.approx(ref, abs=1e-12)


def test_example_nu_one_starlike():
    rep = probe("bessel", 1.0, "starlike_re", radii=(0.5, 0.9, 1.0), angles=256)
    assert rep.min_value >= 0
    assert rep.grid == (3, 256)


def test_example_value_at_threshold():
    value = evaluate_functional(FunctionId(Family.BESSEL_F, NU0), Functional.STARLIKE_RE, 1.0)
    assert abs(value) <= 1e-7
    rep = probe("bessel", NU0, "starlike_re", radii=BOUNDARY, angles=256)
    assert abs(rep.min_value) <= 1e-7
    assert rep.argmin == 1.0


def test_example_below_threshold():
    rep = probe("bessel", NU0 - 0.1, "starlike_re", radii=BOUNDARY, angles=256)
    assert rep.min_value < 0
    assert abs(rep.argmin - 1.0) < 0.05


@pytest.mark.parametrize("offset", [0.1, 0.5])
def test_threshold_sign_structure(offset):
    assert probe("bessel", NU0 + offset, "starlike_re", radii=BOUNDARY).min_value >= -1e-9


@pytest.mark.parametrize("nu", [NU1 + 0.1, 1.0])
def test_convexity_above(nu):
    assert probe("bessel", nu, "convex_re", radii=BOUNDARY).min_value >= -1e-9


def test_convexity_fails_below():
    assert probe("bessel", NU1 - 0.1, "convex_re", radii=BOUNDARY).min_value < 0


@pytest.mark.parametrize("nu", [-0.7, -0.5, -0.2, 0.0, 0.5, 2.0])
@pytest.mark.parametrize("angles", [64, 100, 257])
def test_boundary_minimum_at_one(nu, angles):
    rep = probe("bessel", nu, "starlike_re", radii=BOUNDARY, angles=angles)
    assert rep.argmin == 1.0


def test_report_invariants_and_serialization():
    rep = probe("lommel", 0.5, "starlike_re", radii=(0.5, 1.0), angles=64)
    assert any(p.z == rep.argmin and p.value == rep.min_value for p in rep.points)
    assert rep.min_value == min(p.value for p in rep.points if p.value is not None)
    d = rep.to_dict()
    assert d["functional"] == "starlike_re" and d["heuristic"] is False
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == ["r", "theta", "re_value"]
    assert len(rows) == 1 + 2 * 64
    assert float(rows[1][0]) == 0.5 and float(rows[1][1]) == 0.0


def test_deriv_probe_is_heuristic():
    rep = probe("struve", 0.0, "deriv_re", radii=(0.5, 1.0), angles=64, k=2)
    assert rep.heuristic and rep.to_dict()["heuristic"] is True
    assert rep.label == "deriv_re(2)"
    assert probe("struve", 0.0, "starlike_re", radii=(1.0,), angles=64).heuristic is False


def test_skipped_points_counted():
    # f_nu vanishes at z = 1 when nu = nu*; that boundary point is skipped
    nu_star = solve_critical("nu_star").value
    rep = probe("bessel", nu_star, "starlike_re", radii=(1.0,), angles=64)
    assert rep.skipped <= 1
    assert math.isfinite(rep.min_value)


def test_degenerate_probe(monkeypatch):
    from unidisc import disk_probe

    monkeypatch.setattr(disk_probe, "evaluate_functional", lambda *args: None)
    with pytest.raises(DegenerateProbeError):
        probe("bessel", 0.0, radii=(1.0,), angles=64)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(radii=(1.1,)),
        dict(radii=(0.0,)),
        dict(radii=()),
        dict(angles=32),
        dict(functional="deriv_re", k=11),
    ],
)
def test_probe_preconditions(kwargs):
    with pytest.raises(DomainError):
        probe("bessel", 0.0, **kwargs)


def test_probe_rejects_raw_family():
    with pytest.raises(DomainError):
        probe("raw_bessel_j", 0.0)
