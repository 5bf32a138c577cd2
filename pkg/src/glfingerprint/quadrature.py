"""Symmetric quadrature systems on (-1, 1) and the Gauss-Legendre family."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import legendre_eval, legendre_roots

__all__ = [
    "QuadratureSystem",
    "gauss_legendre_qs",
    "monomial_residuals",
    "verify_qs_degree",
    "even_degree_promotion_check",
]

_SYM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class QuadratureSystem:
    """Nodes ``xi`` in (-1, 1) with positive weights ``omega(xi)``.

    ``nodes`` is sorted increasingly and ``weights[i]`` belongs to
    ``nodes[i]``. Both arrays are read-only after construction.
    """

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float).ravel()
        weights = np.array(self.weights, dtype=float).ravel()
        if nodes.size == 0 or nodes.shape != weights.shape:
            raise ValueError("nodes and weights must be non-empty and of equal length")
        order = np.argsort(nodes, kind="stable")
        nodes, weights = nodes[order], weights[order]
        if not np.all((nodes > -1.0) & (nodes < 1.0)):
            raise ValueError("quadrature nodes must lie strictly inside (-1, 1)")
        if np.any(np.diff(nodes) <= 0.0):
            raise ValueError("quadrature nodes must be distinct")
        if not np.all(weights > 0.0):
            raise ValueError("quadrature weights must be positive")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def order(self) -> int:
        return int(self.nodes.size)

    def weight(self, xi: float) -> float:
        """Weight of the node closest to ``xi``."""
        return float(self.weights[np.argmin(np.abs(self.nodes - xi))])

    def is_symmetric(self, tol: float = _SYM_TOL) -> bool:
        return bool(
            np.allclose(self.nodes, -self.nodes[::-1], rtol=0.0, atol=tol)
            and np.allclose(self.weights, self.weights[::-1], rtol=0.0, atol=tol)
        )

    def integrate(self, func) -> float:
        return float(np.sum(self.weights * func(self.nodes)))

    def __eq__(self, other):
        if not isinstance(other, QuadratureSystem):
            return NotImplemented
        return bool(
            self.order == other.order
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.weights, other.weights)
        )

    def __repr__(self):
        return f"QuadratureSystem(order={self.order}, nodes={self.nodes!r}, weights={self.weights!r})"


def gauss_legendre_qs(nu: int) -> QuadratureSystem:
    """Gauss-Legendre system of order ``nu``: exact for degree ``2 nu - 1``.

    Nodes are the zeros of ``L_nu`` and ``omega = 2 / ((1 - xi^2) L_nu'(xi)^2)``.
    Weights are averaged with their mirror images so the system is exactly
    symmetric in floating point.
    """
    xi = legendre_roots(nu)
    _, deriv = legendre_eval(nu, xi)
    w = 2.0 / ((1.0 - xi * xi) * deriv * deriv)
    w = 0.5 * (w + w[::-1])
    return QuadratureSystem(xi, w)


def monomial_residuals(q: QuadratureSystem, d: int) -> np.ndarray:
    """``sum omega xi^j - int_{-1}^{1} t^j dt`` for ``j = 0..d``."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    j = np.arange(d + 1)
    sums = np.array([np.sum(q.weights * q.nodes**k) for k in j])
    exact = np.where(j % 2 == 0, 2.0 / (j + 1), 0.0)
    return sums - exact


def verify_qs_degree(q: QuadratureSystem, d: int, tol: float = 1e-10) -> bool:
    """True iff ``q`` integrates every monomial of degree ``<= d`` to ``tol``.

    Monomials span the polynomials of degree ``<= d``, so this is a complete
    test of exactness.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    return bool(np.all(np.abs(monomial_residuals(q, d)) <= tol))


def even_degree_promotion_check(q: QuadratureSystem, max_degree: int | None = None) -> bool:
    """Check that exactness at an even degree carries to the next odd degree.

    For every even ``2d <= max_degree`` at which ``q`` is exact, the odd
    monomial sum at ``2d + 1`` must vanish (within 1e-12). Holds for every
    symmetric system, whatever its weights.
    """
    if not q.is_symmetric():
        raise ValueError("even_degree_promotion_check needs a symmetric system")
    if max_degree is None:
        max_degree = 2 * q.order
    # Exactness at 2d plus a vanishing odd sum at 2d + 1 is exactness at 2d + 1,
    # so checking every odd monomial up to max_degree + 1 covers all d.
    res = monomial_residuals(q, max_degree + 1)
    return bool(np.all(np.abs(res[1::2]) <= _SYM_TOL))
