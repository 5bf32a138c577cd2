"""Score computation and threshold accusation.

At position ``j`` with bias index ``v`` a user holding bit ``w`` scores
``U[v]`` when ``(y_j, w) = (1, 1)``, ``-U[k - v]`` when ``(1, 0)`` and
nothing when ``y_j`` is ``0`` or erased. With ``U = sigma(p)`` this is the
exact score; a table of approximations within ``delta`` moves each total
by at most ``m * delta``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .attack import ONE, PiratedWord
from .bias import BiasDistribution
from .codebook import Codebook
from .numerics import sigma

__all__ = [
    "ScoreTable",
    "TraceResult",
    "exact_score_table",
    "rounded_score_table",
    "position_scores",
    "trace",
    "exact_scores",
]

_SLACK = 1e-15
_BLOCK_ROWS = 256


@dataclass(frozen=True, eq=False)
class ScoreTable:
    """Score values ``U`` for ``dist`` with certified error ``delta``."""

    dist: BiasDistribution
    U: np.ndarray
    delta: float = 0.0

    def __post_init__(self):
        U = np.array(self.U, dtype=float).ravel()
        if U.size != self.dist.n_outputs:
            raise ValueError(f"need {self.dist.n_outputs} score values, got {U.size}")
        if not np.all(np.isfinite(U)):
            raise ValueError("score values must be finite")
        delta = float(self.delta)
        if not delta >= 0.0:
            raise ValueError("delta must be non-negative")
        err = float(np.max(np.abs(U - sigma(self.dist.p))))
        if err > delta + _SLACK:
            raise ValueError(f"score table deviates from sigma(p) by {err:.3g} > delta={delta:.3g}")
        U.setflags(write=False)
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "delta", delta)

    @property
    def k(self) -> int:
        return self.dist.k


@dataclass(frozen=True, eq=False)
class TraceResult:
    scores: np.ndarray
    accused: list
    Z: float

    def __repr__(self):
        return f"TraceResult(N={self.scores.size}, Z={self.Z!r}, accused={self.accused!r})"


def exact_score_table(dist: BiasDistribution) -> ScoreTable:
    return ScoreTable(dist, sigma(dist.p), 0.0)


def rounded_score_table(dist: BiasDistribution, decimals: int) -> ScoreTable:
    """``sigma(p)`` rounded to ``decimals`` places, ``delta = 0.5 * 10**-decimals``."""
    U = np.round(sigma(dist.p), decimals)
    return ScoreTable(dist, U, 0.5 * 10.0 ** (-decimals))


def _word(y, m: int) -> np.ndarray:
    sym = y.symbols if isinstance(y, PiratedWord) else PiratedWord(y).symbols
    if sym.size != m:
        raise ValueError(f"pirated word has length {sym.size}, codebook has m={m}")
    return sym


def _position_values(cb: Codebook, y, table: ScoreTable):
    if table.dist != cb.dist:
        raise ValueError("score table was built for a different distribution")
    sym = _word(y, cb.m)
    idx = cb.biases.indices.astype(np.intp)
    live = sym == ONE
    plus = np.where(live, table.U[idx], 0.0)
    minus = np.where(live, table.U[table.k - idx], 0.0)
    return plus, minus


def position_scores(cb: Codebook, y, table: ScoreTable, rows=None) -> np.ndarray:
    """Per-position scores for the selected users, shape ``(len(rows), m)``."""
    plus, minus = _position_values(cb, y, table)
    W = cb.codewords(rows)
    return np.where(W.astype(bool), plus, -minus)


def trace(cb: Codebook, y, table: ScoreTable, Z: float) -> TraceResult:
    """Score every user and accuse those with score ``>= Z``."""
    plus, minus = _position_values(cb, y, table)
    scores = np.empty(cb.N)
    for start in range(0, cb.N, _BLOCK_ROWS):
        W = cb.codewords(slice(start, start + _BLOCK_ROWS)).astype(bool)
        scores[start : start + W.shape[0]] = np.sum(np.where(W, plus, -minus), axis=1)
    accused = np.flatnonzero(scores >= Z).tolist()
    return TraceResult(scores, accused, float(Z))


def exact_scores(cb: Codebook, y) -> np.ndarray:
    return trace(cb, y, exact_score_table(cb.dist), np.inf).scores
