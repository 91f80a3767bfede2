"""Adaptive Simpson quadrature with Richardson correction."""

from __future__ import annotations

from collections.abc import Callable

from .errors import QuadratureError


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 48,
) -> tuple[float, float]:
    """Integrate ``f`` over ``[a, b]`` by recursive interval halving.

    Returns ``(value, error_estimate)``. Raises QuadratureError when some
    subinterval reaches ``max_depth`` with its local error still above the
    share of ``tol`` assigned to it.
    """
    if a == b:
        return 0.0, 0.0
    if a > b:
        value, err = adaptive_simpson(f, b, a, tol, max_depth)
        return -value, err

    failed = False

    def simpson(fa: float, fm: float, fb: float, h: float) -> float:
        return h / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(lo, hi, flo, fmid, fhi, whole, depth, eps):
        nonlocal failed
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm = f(lm)
        frm = f(rm)
        left = simpson(flo, flm, fmid, mid - lo)
        right = simpson(fmid, frm, fhi, hi - mid)
        delta = left + right - whole
        if abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0, abs(delta) / 15.0
        if depth >= max_depth:
            failed = True
            return left + right + delta / 15.0, abs(delta) / 15.0
        lv, le = recurse(lo, mid, flo, flm, fmid, left, depth + 1, eps / 2.0)
        rv, re = recurse(mid, hi, fmid, frm, fhi, right, depth + 1, eps / 2.0)
        return lv + rv, le + re

    # start from 8 panels: an oscillating integrand that vanishes at the three
    # nodes of a single panel must not be accepted at depth 0
    pieces = 8
    h = (b - a) / pieces
    nodes = [a + i * h for i in range(pieces)] + [b]
    values = [f(t) for t in nodes]
    total, err = 0.0, 0.0
    for i in range(pieces):
        lo, hi = nodes[i], nodes[i + 1]
        fmid = f(0.5 * (lo + hi))
        whole = simpson(values[i], fmid, values[i + 1], hi - lo)
        v, e = recurse(lo, hi, values[i], fmid, values[i + 1], whole, 1, tol / pieces)
        total += v
        err += e
    if failed:
        raise QuadratureError(
            f"adaptive Simpson reached depth {max_depth} on [{a}, {b}]", total, err
        )
    return total, err
