"""Code length and accusation threshold for a finite bias distribution.

Given a target (``c`` pirates, ``N`` users, error budgets ``eps1`` for each
innocent and ``eps2`` for missing every pirate) the length is
``m = A1 + A2`` with

    A_i >= c / ((1 - eta1 - eta2/c) R - 2 delta c) * (psi2 / x_i) * log(1/eps_i)

and threshold

    Z = ((1 - eta2/c) R / c - delta) A1 + (eta1 R / c + delta) A2,

where ``R`` is a lower bound on the coalition drift, ``psi1 <= sigma(p_0) <=
psi2`` bracket the largest score weight and ``x_i r(x_i) <= eta_i R psi1 / c``.
The asymptotic helpers bound the same quantities for Gauss-Legendre
distributions without constructing them.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .bias import BiasDistribution, script_R
from .numerics import J0_FIRST_ZERO, r_func, sigma, solve_tr

__all__ = [
    "InfeasibleKnobsError",
    "SecurityGoal",
    "SolverKnobs",
    "AuxiliaryValues",
    "CodeParameters",
    "truncate_down",
    "round_up",
    "auxiliary_values",
    "params_from_auxiliary",
    "derive_params",
    "derive_params_exact",
    "sigma_p0_bounds",
    "script_R_lower_bound",
    "x_infinity",
    "asymptotic_ratio",
    "limit_ratio",
    "bound_code_length",
    "tardos_length",
]

A1_PRIME = 1.0 / 3.0
A2_PRIME = 1.0 - 4.0 / math.pi**2


class InfeasibleKnobsError(ValueError):
    """``(1 - eta1 - eta2/c) R - 2 delta c`` is not positive."""


@dataclass(frozen=True)
class SecurityGoal:
    c: int
    N: int
    eps1: float
    eps2: float

    def __post_init__(self):
        if int(self.c) != self.c or self.c < 2:
            raise ValueError(f"c must be an integer >= 2, got {self.c!r}")
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"N must be an integer >= 2, got {self.N!r}")
        for name in ("eps1", "eps2"):
            val = getattr(self, name)
            if not 0.0 < val < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {val!r}")

    @classmethod
    def from_total(cls, c: int, N: int, eps: float) -> "SecurityGoal":
        """Split a total error budget as ``eps1 = eps2 = eps / N``."""
        if not 0.0 < eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {eps!r}")
        return cls(c, N, eps / N, eps / N)

    @property
    def error_bound(self) -> float:
        """``(N - 1) eps1 + eps2``."""
        return (self.N - 1) * self.eps1 + self.eps2


@dataclass(frozen=True)
class SolverKnobs:
    eta1: float
    eta2: float
    delta: float = 0.0
    x_precision: int = 3

    def __post_init__(self):
        if not (self.eta1 > 0 and self.eta2 > 0):
            raise ValueError("eta1 and eta2 must be positive")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")
        if self.x_precision < 0:
            raise ValueError("x_precision must be non-negative")

    @classmethod
    def proposal(cls, c: int, delta: float = 0.0, x_precision: int = 3) -> "SolverKnobs":
        """``(eta1, eta2) = (1/2, sqrt(c)/2)``."""
        return cls(0.5, math.sqrt(c) / 2.0, delta, x_precision)

    @classmethod
    def hhi(cls, c: int, x_precision: int = 3) -> "SolverKnobs":
        """``(eta1, eta2, delta) = (1/4, c/2, 0)``, the older length formula."""
        return cls(0.25, c / 2.0, 0.0, x_precision)

    def denominator(self, c: int, R: float) -> float:
        return (1.0 - self.eta1 - self.eta2 / c) * R - 2.0 * self.delta * c


@dataclass(frozen=True)
class AuxiliaryValues:
    """Lower bound ``R``, bracket ``psi1 <= sigma(p_0) <= psi2`` and ``x1, x2``."""

    R: float
    psi1: float
    psi2: float
    x1: float
    x2: float


@dataclass(frozen=True)
class CodeParameters:
    m: int
    Z: float
    A1: int
    A2: int
    x1: float
    x2: float
    psi1: float
    psi2: float
    R: float
    eta1: float
    eta2: float
    delta: float
    eps1: float
    eps2: float
    c: int
    N: int

    def as_dict(self) -> dict:
        return asdict(self)


def truncate_down(value: float, places: int = 3) -> float:
    scale = 10**places
    return math.floor(value * scale) / scale


def round_up(value: float, places: int = 3) -> float:
    scale = 10**places
    return math.ceil(value * scale) / scale


def auxiliary_values(P: BiasDistribution, c: int, knobs: SolverKnobs) -> AuxiliaryValues:
    """Representable auxiliaries for ``P``.

    Lower bounds (``R``, ``psi1``, ``x_i``) are truncated down and the upper
    bound ``psi2`` rounded up, so every defining inequality keeps its
    direction.
    """
    R_min = min(script_R(P, l) for l in range(1, c + 1))
    if not R_min > 0:
        raise InfeasibleKnobsError(f"min_l R_l = {R_min!r} is not positive")
    R = truncate_down(R_min)
    s0 = sigma(P.p[0])
    psi1, psi2 = truncate_down(s0), round_up(s0)
    xs = []
    for eta in (knobs.eta1, knobs.eta2):
        x = truncate_down(solve_tr(eta * R * psi1 / c), knobs.x_precision)
        if not x > 0:
            raise InfeasibleKnobsError(f"x truncated to zero at precision {knobs.x_precision}")
        xs.append(x)
    return AuxiliaryValues(R, psi1, psi2, xs[0], xs[1])


def params_from_auxiliary(aux: AuxiliaryValues, goal: SecurityGoal, knobs: SolverKnobs) -> CodeParameters:
    """Integer length parts and threshold from given auxiliary values."""
    c = goal.c
    denom = knobs.denominator(c, aux.R)
    if not denom > 0:
        raise InfeasibleKnobsError(
            f"(1 - eta1 - eta2/c) R - 2 delta c = {denom!r} <= 0 "
            f"(eta1={knobs.eta1}, eta2={knobs.eta2}, delta={knobs.delta}, R={aux.R})"
        )
    lead = c / denom * aux.psi2
    A1 = math.ceil(lead / aux.x1 * math.log(1.0 / goal.eps1))
    A2 = math.ceil(lead / aux.x2 * math.log(1.0 / goal.eps2))
    Z = ((1.0 - knobs.eta2 / c) * aux.R / c - knobs.delta) * A1 + (knobs.eta1 * aux.R / c + knobs.delta) * A2
    return CodeParameters(
        m=A1 + A2, Z=Z, A1=A1, A2=A2,
        x1=aux.x1, x2=aux.x2, psi1=aux.psi1, psi2=aux.psi2, R=aux.R,
        eta1=knobs.eta1, eta2=knobs.eta2, delta=knobs.delta,
        eps1=goal.eps1, eps2=goal.eps2, c=c, N=goal.N,
    )


def derive_params(P: BiasDistribution, goal: SecurityGoal, knobs: SolverKnobs) -> CodeParameters:
    """Length ``m`` and threshold ``Z`` for distribution ``P`` and ``goal``."""
    return params_from_auxiliary(auxiliary_values(P, goal.c, knobs), goal, knobs)


def derive_params_exact(P: BiasDistribution, goal: SecurityGoal, knobs: SolverKnobs) -> tuple[float, float]:
    """Unrounded ``(m, Z)`` from the exact auxiliaries.

    Uses ``R = min_l R_l``, the exact ``sigma(p_0)`` and
    ``x_i r(x_i) = sigma(p_0) eta_i R / c`` without truncation or ceilings.
    """
    c = goal.c
    R = min(script_R(P, l) for l in range(1, c + 1))
    denom = knobs.denominator(c, R)
    if not denom > 0:
        raise InfeasibleKnobsError(f"(1 - eta1 - eta2/c) R - 2 delta c = {denom!r} <= 0")
    s0 = sigma(P.p[0])
    x1 = solve_tr(s0 * knobs.eta1 * R / c)
    x2 = solve_tr(s0 * knobs.eta2 * R / c)
    L1, L2 = math.log(1.0 / goal.eps1), math.log(1.0 / goal.eps2)
    m = c * s0 / denom * (L1 / x1 + L2 / x2)
    d = knobs.delta
    Z = s0 / denom * (((1.0 - knobs.eta2 / c) * R - d * c) / x1 * L1 + (knobs.eta1 * R + d * c) / x2 * L2)
    return m, Z


def _check_even(c: int) -> None:
    if int(c) != c or c < 2 or c % 2:
        raise ValueError(f"c must be an even integer >= 2, got {c!r}")


def sigma_p0_bounds(c: int) -> tuple[float, float]:
    """Bracket ``sigma(p_0)`` of the Gauss-Legendre distribution for even ``c``.

    Comes from bounds on the first Legendre zero angle in terms of the first
    zero ``j1`` of the Bessel function ``J_0``.
    """
    _check_even(c)
    lo = 1.0 / math.tan(J0_FIRST_ZERO / math.sqrt((c + 1) ** 2 + A1_PRIME))
    hi = 1.0 / math.tan(J0_FIRST_ZERO / math.sqrt((c + 1) ** 2 + A2_PRIME))
    return lo, hi


def script_R_lower_bound(c: int) -> float:
    """``(c + 1) / (c pi)``, a lower bound on every ``R_l`` of GL(c)."""
    _check_even(c)
    return (c + 1) / (c * math.pi)


def _asymptotic_terms(c: int, eta1: float, eta2: float) -> tuple[float, float]:
    _check_even(c)
    factor = 1.0 - eta1 - eta2 / c
    if not factor > 0:
        raise InfeasibleKnobsError(f"1 - eta1 - eta2/c = {factor!r} <= 0")
    R = script_R_lower_bound(c)
    psi1, _ = sigma_p0_bounds(c)
    tan_hi = math.tan(J0_FIRST_ZERO / math.sqrt((c + 1) ** 2 + A2_PRIME))
    terms = []
    for eta in (eta1, eta2):
        x = solve_tr(eta * R * psi1 / c)
        terms.append(math.pi / (factor * (c + 1) * x * tan_hi))
    return terms[0], terms[1]


def asymptotic_ratio(c: int, eta1: float, eta2: float) -> float:
    """Bound on ``m / (100 c^2 ceil(log(N/eps)))`` for GL(c), as a fraction.

    Equals ``(A'_1 + A'_2) / 100`` where ``m = c^2 (A'_1 log(1/eps1) +
    A'_2 log(1/eps2))`` is the length obtained from the closed-form bounds on
    ``R`` and ``sigma(p_0)`` with ``delta = 0``.
    """
    a1, a2 = _asymptotic_terms(c, eta1, eta2)
    return (a1 + a2) / 100.0


def x_infinity(eta: float) -> float:
    """Root of ``x r(x) = eta / (pi j1)``."""
    return solve_tr(eta / (math.pi * J0_FIRST_ZERO))


def limit_ratio(eta: float, eta_prime: float) -> float:
    """``lim_{c -> inf}`` of the length ratio to Tardos codes, as a fraction.

    ``eta`` is the limit of ``eta1`` and ``eta_prime`` that of ``eta2 / c``
    (with ``eta2 -> inf``).
    """
    factor = 1.0 - eta - eta_prime
    if not factor > 0:
        raise InfeasibleKnobsError(f"1 - eta - eta' = {factor!r} <= 0")
    return math.pi / (factor * J0_FIRST_ZERO * x_infinity(eta)) / 100.0


def bound_code_length(c: int, goal: SecurityGoal, knobs: SolverKnobs) -> float:
    """Real-valued length from the closed-form bounds (no distribution needed).

    ``c^2 (A'_1 log(1/eps1) + A'_2 log(1/eps2))``; ``knobs.delta`` must be 0.
    """
    if knobs.delta != 0:
        raise ValueError("bound_code_length assumes delta = 0")
    a1, a2 = _asymptotic_terms(c, knobs.eta1, knobs.eta2)
    return c * c * (a1 * math.log(1.0 / goal.eps1) + a2 * math.log(1.0 / goal.eps2))


def tardos_length(c: int, N: int, eps: float) -> int:
    """``100 c^2 ceil(log(N / eps))``."""
    return 100 * c * c * math.ceil(math.log(N / eps))

