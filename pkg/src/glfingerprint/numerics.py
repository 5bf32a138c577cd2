"""Scalar primitives shared by the quadrature, bias and parameter modules."""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "sigma",
    "r_func",
    "tr_func",
    "solve_tr",
    "legendre_eval",
    "legendre_roots",
    "bessel_j0_series",
    "bessel_j0_first_zero",
    "J0_FIRST_ZERO",
]

# First positive zero of J_0, to double precision.
J0_FIRST_ZERO = 2.404825557695773

_SERIES_CUTOFF = 0.1
_SERIES_TERMS = 10


def sigma(p):
    """Return ``sqrt((1 - p) / p)``, the per-position score weight.

    Accepts a scalar or an array; every entry must lie strictly inside (0, 1).
    """
    arr = np.asarray(p, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise ValueError(f"sigma requires 0 < p < 1, got {p!r}")
    out = np.sqrt((1.0 - arr) / arr)
    return float(out) if out.ndim == 0 else out


def _r_scalar(t: float) -> float:
    if t < _SERIES_CUTOFF:
        # sum_{i>=0} t^i / (i + 2)!, Horner form
        acc = 0.0
        for i in range(_SERIES_TERMS - 1, -1, -1):
            acc = acc * t + 1.0 / math.factorial(i + 2)
        return acc
    return (math.expm1(t) - t) / (t * t)


def r_func(t: float) -> float:
    """Return ``(e^t - 1 - t) / t^2`` for ``t > 0``.

    Below ``t = 0.1`` a ten-term Taylor series is used instead of the
    closed form, which loses digits to cancellation there.
    """
    t = float(t)
    if not t > 0.0 or not math.isfinite(t):
        raise ValueError(f"r_func requires a finite t > 0, got {t!r}")
    return _r_scalar(t)


def tr_func(t: float) -> float:
    """Return ``t * r_func(t)``; strictly increasing on ``t > 0``."""
    return float(t) * r_func(t)


def solve_tr(target: float, rtol: float = 1e-12) -> float:
    """Solve ``t * r(t) = target`` for the unique ``t > 0``.

    The bracket starts at ``[1e-12, 1]`` and is grown geometrically until it
    contains the root; bisection narrows it and Newton steps polish the
    result, falling back to bisection whenever a step leaves the bracket.
    """
    target = float(target)
    if not target > 0.0 or not math.isfinite(target):
        raise ValueError(f"solve_tr requires a finite target > 0, got {target!r}")

    lo, hi = 1e-12, 1.0
    while tr_func(lo) > target:
        lo *= 1e-3
        if lo < 1e-300:
            raise ValueError(f"target {target!r} too small to bracket")
    while tr_func(hi) < target:
        lo, hi = hi, hi * 2.0

    t = 0.5 * (lo + hi)
    for _ in range(200):
        val = tr_func(t) - target
        if val == 0.0:
            return t
        if val > 0.0:
            hi = t
        else:
            lo = t
        if hi - lo <= 1e-3 * rtol * lo:
            return 0.5 * (lo + hi)
        # d/dt [t r(t)] = (e^t (t - 1) + 1) / t^2 = 1/2 + t/3 + t^2/8 + ...
        if t >= _SERIES_CUTOFF:
            deriv = (math.expm1(t) * (t - 1.0) + t) / (t * t)
        else:
            deriv = 0.5 + t / 3.0 + t * t / 8.0
        step = t - val / deriv
        if not lo < step < hi:
            step = 0.5 * (lo + hi)
        if abs(step - t) <= 1e-3 * rtol * step:
            return step
        t = step
    return t


def legendre_eval(nu: int, t):
    """Evaluate the Legendre polynomial ``L_nu`` and its derivative at ``t``.

    Uses the three-term recurrence for values and
    ``L'_{n+1} = L'_{n-1} + (2n + 1) L_n`` for derivatives, which stays
    well defined at ``t = +-1``. ``t`` may be a scalar or an array.
    """
    if int(nu) != nu or nu < 1:
        raise ValueError(f"nu must be a positive integer, got {nu!r}")
    nu = int(nu)
    x = np.asarray(t, dtype=float)
    p_prev, p_cur = np.ones_like(x), x.copy()
    d_prev, d_cur = np.zeros_like(x), np.ones_like(x)
    for n in range(1, nu):
        p_next = ((2 * n + 1) * x * p_cur - n * p_prev) / (n + 1)
        d_next = d_prev + (2 * n + 1) * p_cur
        p_prev, p_cur = p_cur, p_next
        d_prev, d_cur = d_cur, d_next
    if x.ndim == 0:
        return float(p_cur), float(d_cur)
    return p_cur, d_cur


def legendre_roots(nu: int) -> np.ndarray:
    """Return the ``nu`` zeros of ``L_nu`` in increasing order.

    Newton iteration starts from ``cos(pi (4i - 1) / (4 nu + 2))``. Only the
    non-negative roots are iterated; the negative half is their exact mirror
    and the middle root of odd ``nu`` is exactly zero.
    """
    if int(nu) != nu or nu < 1:
        raise ValueError(f"nu must be a positive integer, got {nu!r}")
    nu = int(nu)
    half = nu // 2
    i = np.arange(1, half + 1)
    x = np.cos(np.pi * (4 * i - 1) / (4 * nu + 2))
    for _ in range(100):
        if half == 0:
            break
        val, der = legendre_eval(nu, x)
        dx = val / der
        x = x - dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    # one extra polish step after convergence
    if half:
        val, der = legendre_eval(nu, x)
        x = x - val / der
    pos = np.sort(x)
    middle = np.zeros(1) if nu % 2 else np.zeros(0)
    return np.concatenate([-pos[::-1], middle, pos])


def bessel_j0_series(t: float, terms: int = 60) -> float:
    """Power series ``sum_i (-1)^i (t/2)^{2i} / (i!)^2`` for ``J_0(t)``."""
    half_sq = (float(t) / 2.0) ** 2
    term, total = 1.0, 1.0
    for i in range(1, terms):
        term *= -half_sq / (i * i)
        total += term
    return total


def bessel_j0_first_zero() -> float:
    """Return the first positive zero of ``J_0`` (a fixed constant)."""
    return J0_FIRST_ZERO
