"""Finite symmetric bias distributions and the c-indistinguishability test.

A bias distribution lists outputs ``p_0 < ... < p_k`` in (0, 1) with masses
``q_i``, symmetric under ``p -> 1 - p``. The functions ``f_lx`` / ``g_lx``
measure how much a coalition of ``l`` holders with ``x`` ones gains at a
position; a distribution is c-indistinguishable when their expectations
vanish for every ``2 <= l <= c``. Such distributions are in bijection with
symmetric quadrature systems of degree ``c - 1``, and the Gauss-Legendre
system yields the one with fewest outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import sigma
from .quadrature import QuadratureSystem, gauss_legendre_qs

__all__ = [
    "BiasDistribution",
    "CIndReport",
    "f_lx",
    "g_lx",
    "expected_f",
    "R_lx",
    "script_R",
    "is_c_ind",
    "is_c_ind_fast",
    "qs_to_bias",
    "bias_to_qs",
    "gl_distribution",
    "sample_bias",
]

_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BiasDistribution:
    """Symmetric finite distribution: output ``p[i]`` has probability ``q[i]``."""

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float).ravel()
        q = np.array(self.q, dtype=float).ravel()
        if p.size == 0 or p.shape != q.shape:
            raise ValueError("p and q must be non-empty and of equal length")
        order = np.argsort(p, kind="stable")
        p, q = p[order], q[order]
        if not np.all((p > 0.0) & (p < 1.0)):
            raise ValueError("bias outputs must lie strictly inside (0, 1)")
        if np.any(np.diff(p) <= 0.0):
            raise ValueError("bias outputs must be distinct")
        if not np.all(q > 0.0):
            raise ValueError("bias probabilities must be positive")
        if abs(q.sum() - 1.0) > _TOL:
            raise ValueError(f"bias probabilities sum to {q.sum()!r}, not 1")
        if np.max(np.abs(p + p[::-1] - 1.0)) > _TOL or np.max(np.abs(q - q[::-1])) > _TOL:
            raise ValueError("bias distribution is not symmetric under p -> 1 - p")
        p.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def n_outputs(self) -> int:
        """Number of outputs, ``k + 1``."""
        return int(self.p.size)

    @property
    def k(self) -> int:
        return self.n_outputs - 1

    def mean_sqrt_pq(self) -> float:
        """``E[sqrt(p (1 - p))]``."""
        return float(np.sum(self.q * np.sqrt(self.p * (1.0 - self.p))))

    def to_text(self) -> str:
        lines = [f"bias {self.n_outputs}"]
        lines += [f"{pi:.17g} {qi:.17g}" for pi, qi in zip(self.p, self.q)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BiasDistribution":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows or len(rows[0]) != 2 or rows[0][0] != "bias":
            raise ValueError("expected a 'bias <count>' header line")
        count = int(rows[0][1])
        body = rows[1:]
        if len(body) != count or any(len(r) != 2 for r in body):
            raise ValueError(f"expected {count} '<p> <q>' lines")
        return cls([float(r[0]) for r in body], [float(r[1]) for r in body])

    def __eq__(self, other):
        if not isinstance(other, BiasDistribution):
            return NotImplemented
        return bool(np.array_equal(self.p, other.p) and np.array_equal(self.q, other.q))

    def __repr__(self):
        return f"BiasDistribution(p={self.p!r}, q={self.q!r})"


def _check_lx(l: int, x: int) -> None:
    if l < 1 or not 0 <= x <= l:
        raise ValueError(f"need l >= 1 and 0 <= x <= l, got l={l}, x={x}")


def _check_p(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise ValueError("p must lie strictly inside (0, 1)")
    return arr


def _scalar(out):
    return float(out) if np.ndim(out) == 0 else out


def f_lx(l: int, x: int, p):
    """``p^x (1-p)^(l-x) (x sigma(p) - (l-x) sigma(1-p))``."""
    _check_lx(l, x)
    p = _check_p(p)
    out = p**x * (1.0 - p) ** (l - x) * (x * sigma(p) - (l - x) * sigma(1.0 - p))
    return _scalar(out)


def g_lx(l: int, x: int, p):
    """``d/dp [p^x (1-p)^(l-x)]``."""
    _check_lx(l, x)
    p = _check_p(p)
    left = x * p ** (x - 1) * (1.0 - p) ** (l - x) if x > 0 else 0.0 * p
    right = (l - x) * p**x * (1.0 - p) ** (l - x - 1) if x < l else 0.0 * p
    return _scalar(left - right)


def expected_f(P: BiasDistribution, l: int, x: int) -> float:
    return float(np.sum(P.q * f_lx(l, x, P.p)))


def R_lx(P: BiasDistribution, l: int, x: int) -> float:
    if l < 2 or not 1 <= x <= l - 1:
        raise ValueError(f"R_lx needs l >= 2 and 1 <= x <= l - 1, got l={l}, x={x}")
    return max(0.0, expected_f(P, l, x))


def script_R(P: BiasDistribution, l: int) -> float:
    """``E[-f_{l,0}] - sum_{x=1}^{l-1} binom(l, x) R_{l,x}``.

    Binomial coefficients are exact integers; each product with ``R_{l,x}``
    is formed in floating point.
    """
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    total = -expected_f(P, l, 0)
    for x in range(1, l):
        r = R_lx(P, l, x)
        if r:
            total -= math.comb(l, x) * r
    return total


@dataclass(frozen=True)
class CIndReport:
    """Outcome of a c-indistinguishability scan.

    ``worst`` is the ``(l, x)`` with the largest ``|E[f_{l,x}]|``;
    ``first_failure`` is the first pair (by ``l`` then ``x``) over ``tol``.
    """

    ok: bool
    c: int
    tol: float
    max_residual: float
    worst: tuple[int, int] | None
    first_failure: tuple[int, int] | None

    def __bool__(self) -> bool:
        return self.ok


def is_c_ind(P: BiasDistribution, c: int, tol: float = 1e-10) -> CIndReport:
    """Scan ``E[f_{l,x}]`` over ``2 <= l <= c``, ``1 <= x <= l - 1``."""
    if c < 1 or not tol > 0:
        raise ValueError("need c >= 1 and tol > 0")
    max_res, worst, first = 0.0, None, None
    for l in range(2, c + 1):
        for x in range(1, l):
            res = abs(expected_f(P, l, x))
            if res > max_res or worst is None:
                max_res, worst = res, (l, x)
            if first is None and res > tol:
                first = (l, x)
    return CIndReport(first is None, c, tol, max_res, worst, first)


def is_c_ind_fast(P: BiasDistribution, c: int, tol: float = 1e-10) -> bool:
    """Decide c-indistinguishability from a single row of conditions.

    With ``c'`` the largest odd number ``<= c`` it suffices that
    ``E[f_{c',x}] = 0`` for ``1 <= x <= (c' - 1) / 2``; the remaining rows
    follow from ``f_{l-1,x} = f_{l,x} + f_{l,x+1}`` and symmetry.
    """
    if c < 1 or not tol > 0:
        raise ValueError("need c >= 1 and tol > 0")
    c_odd = c if c % 2 else c - 1
    return all(abs(expected_f(P, c_odd, x)) <= tol for x in range(1, (c_odd - 1) // 2 + 1))


def qs_to_bias(Q: QuadratureSystem) -> BiasDistribution:
    """Map a symmetric quadrature system to its bias distribution.

    ``p = (1 + xi) / 2`` with mass proportional to ``omega / sqrt(1 - xi^2)``.
    """
    if not Q.is_symmetric():
        raise ValueError("quadrature system must be symmetric")
    xi, w = Q.nodes, Q.weights
    mass = w / np.sqrt(1.0 - xi * xi)
    q = mass / mass.sum()
    q = 0.5 * (q + q[::-1])
    p = (1.0 + xi) / 2.0
    return BiasDistribution(p, q)


def bias_to_qs(P: BiasDistribution) -> QuadratureSystem:
    """Inverse of :func:`qs_to_bias`: ``xi = 2p - 1``, ``omega`` proportional
    to ``sqrt(p (1 - p)) q`` and normalised to total 2."""
    xi = 2.0 * P.p - 1.0
    mass = np.sqrt(P.p * (1.0 - P.p)) * P.q
    w = mass / (mass.sum() / 2.0)
    w = 0.5 * (w + w[::-1])
    return QuadratureSystem(xi, w)


def gl_distribution(c: int) -> BiasDistribution:
    """Gauss-Legendre bias distribution: the c-ind law with fewest outputs.

    Built from the Gauss-Legendre system of order ``ceil(c / 2)``; an odd
    ``c`` shares the distribution of ``c + 1``.
    """
    if int(c) != c or c < 2:
        raise ValueError(f"c must be an integer >= 2, got {c!r}")
    return qs_to_bias(gauss_legendre_qs((int(c) + 1) // 2))


def sample_bias(P: BiasDistribution, u):
    """Inverse-CDF sampling: map uniforms in [0, 1) to output indices."""
    arr = np.asarray(u, dtype=float)
    if np.any((arr < 0.0) | (arr >= 1.0)):
        raise ValueError("u must lie in [0, 1)")
    cum = np.cumsum(P.q)
    idx = np.minimum(np.searchsorted(cum, arr, side="right"), P.k)
    return int(idx) if idx.ndim == 0 else idx.astype(np.intp)
