"""Grid sampling of starlike/convex functionals on the closed unit disk.

This is corroboration, not proof: the certificates come from the zero-sum
criterion. ``deriv_re`` in particular is a heuristic (a positive real part
of the derivative is a classical sufficient condition for univalence).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum

from .core_series import EvalOptions, Family, FunctionId, eval_normalized
from .errors import ConsistencyError, DegenerateProbeError, DomainError

DEFAULT_RADII = (0.25, 0.5, 0.75, 0.9, 0.99, 1.0)
DEFAULT_ANGLES = 512
SKIP_BELOW = 1e-13
MAX_K = 10
_OPTS = EvalOptions(tolerance=1e-15)


class Functional(str, Enum):
    STARLIKE_RE = "starlike_re"
    CONVEX_RE = "convex_re"
    DERIV_RE = "deriv_re"


_FAMILIES = {
    "bessel": Family.BESSEL_F,
    "struve": Family.STRUVE_H,
    "lommel": Family.LOMMEL_L,
}


def _normalized_id(family: str | Family, param: float) -> FunctionId:
    key = family.value if isinstance(family, Family) else family
    fam = _FAMILIES.get(key, None) or Family(key)
    if fam not in _FAMILIES.values():
        raise DomainError(f"probe needs a normalized family, got {key!r}")
    return FunctionId(fam, param)


@dataclass(frozen=True)
class GridPoint:
    r: float
    theta: float
    value: float | None  # None when skipped

    @property
    def z(self) -> complex:
        return _point(self.r, self.theta)


@dataclass(frozen=True)
class ProbeReport:
    family: str
    param: float
    functional: Functional
    k: int
    min_value: float
    argmin: complex
    grid: tuple[int, int]
    skipped: int
    heuristic: bool
    points: list[GridPoint] = field(default_factory=list, repr=False, compare=False)

    @property
    def label(self) -> str:
        return f"deriv_re({self.k})" if self.functional is Functional.DERIV_RE else self.functional.value

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "param": self.param,
            "functional": self.label,
            "heuristic": self.heuristic,
            "min_value": self.min_value,
            "argmin": {"re": self.argmin.real, "im": self.argmin.imag},
            "grid": {"radii": self.grid[0], "angles": self.grid[1]},
            "skipped": self.skipped,
        }

    def to_csv(self) -> str:
        """Full grid dump with columns ``r, theta, re_value`` (skipped points left empty)."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["r", "theta", "re_value"])
        for p in self.points:
            writer.writerow([repr(p.r), repr(p.theta), "" if p.value is None else repr(p.value)])
        return buf.getvalue()


def _point(r: float, theta: float) -> complex:
    # exact on the real axis so that theta = 0 really is z = r
    if theta == 0.0:
        return complex(r, 0.0)
    return complex(r * math.cos(theta), r * math.sin(theta))


def evaluate_functional(fid: FunctionId, functional: Functional, z: complex, k: int = 0) -> float | None:
    """The real part of the functional at ``z``, or None when its denominator is below 1e-13."""
    d = lambda m: eval_normalized(fid, z, m, _OPTS).value  # noqa: E731
    if functional is Functional.STARLIKE_RE:
        num, den, shift = z * d(1), d(0), 0.0
    elif functional is Functional.CONVEX_RE:
        num, den, shift = z * d(2), d(1), 1.0
    else:
        num, den, shift = d(k + 1), eval_normalized(fid, 0.0, k + 1, _OPTS).value, 0.0
    if abs(den) < SKIP_BELOW:
        return None
    return shift + (num / den).real


def probe(
    family: str | Family,
    param: float,
    functional: Functional | str = Functional.STARLIKE_RE,
    radii=DEFAULT_RADII,
    angles: int = DEFAULT_ANGLES,
    k: int = 0,
) -> ProbeReport:
    """Minimum of the functional over the polar grid ``radii x angles``.

    Angles are ``2 pi j / angles`` for ``j = 0 .. angles-1`` so ``z = r`` is
    always sampled.
    """
    functional = Functional(functional)
    fid = _normalized_id(family, param)
    radii = tuple(float(r) for r in radii)
    if not radii or not all(0.0 < r <= 1.0 for r in radii):
        raise DomainError(f"radii must lie in (0, 1], got {radii}")
    if angles < 64:
        raise DomainError(f"need at least 64 angles, got {angles}")
    if not 0 <= k <= MAX_K:
        raise DomainError(f"k must lie in [0, {MAX_K}], got {k}")
    if functional is not Functional.DERIV_RE:
        k = 0

    points = []
    best: GridPoint | None = None
    skipped = 0
    for r in radii:
        for j in range(angles):
            theta = 2.0 * math.pi * j / angles
            value = evaluate_functional(fid, functional, _point(r, theta), k)
            p = GridPoint(r, theta, value)
            points.append(p)
            if value is None:
                skipped += 1
            elif best is None or value < best.value:
                best = p
    if best is None:
        raise DegenerateProbeError(f"all {len(points)} grid points skipped")

    again = evaluate_functional(fid, functional, best.z, k)
    if again != best.value:
        raise ConsistencyError(f"probe minimum not reproducible at {best.z}: {best.value!r} vs {again!r}")
    return ProbeReport(
        family=fid.family.value,
        param=fid.param,
        functional=functional,
        k=k,
        min_value=best.value,
        argmin=best.z,
        grid=(len(radii), angles),
        skipped=skipped,
        heuristic=functional is Functional.DERIV_RE,
        points=points,
    )
