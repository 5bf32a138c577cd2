"""Pirate coalitions under the Marking Assumption.

At a position where all pirate codewords agree (undetectable) the forged
word must carry that common bit. Elsewhere a strategy picks ``0``, ``1`` or
an erasure, seeing only the pirates' own bits and its own randomness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ZERO",
    "ONE",
    "ERASED",
    "PiratedWord",
    "Strategy",
    "Majority",
    "Minority",
    "RandomPirate",
    "FirstPirate",
    "AllOne",
    "AllZero",
    "CoinFlip",
    "EraseWithProb",
    "STRATEGIES",
    "parse_strategy",
    "detectable_positions",
    "collude",
    "validate_marking",
]

ZERO, ONE, ERASED = 0, 1, 2
_TEXT = {ZERO: "0", ONE: "1", ERASED: "?"}
_FROM_TEXT = {v: k for k, v in _TEXT.items()}


@dataclass(frozen=True, eq=False)
class PiratedWord:
    """Forged word over ``{0, 1, ?}``; ``?`` is stored as ``ERASED`` (2)."""

    symbols: np.ndarray

    def __post_init__(self):
        sym = np.array(self.symbols, dtype=np.uint8).ravel()
        if np.any(sym > ERASED):
            raise ValueError("symbols must be 0, 1 or 2 (erased)")
        sym.setflags(write=False)
        object.__setattr__(self, "symbols", sym)

    @property
    def m(self) -> int:
        return int(self.symbols.size)

    def to_text(self) -> str:
        return "".join(_TEXT[int(s)] for s in self.symbols)

    @classmethod
    def from_text(cls, text: str) -> "PiratedWord":
        text = "".join(text.split())
        try:
            return cls(np.array([_FROM_TEXT[ch] for ch in text], dtype=np.uint8))
        except KeyError as exc:
            raise ValueError(f"invalid pirated-word symbol {exc.args[0]!r}") from None

    def __eq__(self, other):
        if not isinstance(other, PiratedWord):
            return NotImplemented
        return bool(np.array_equal(self.symbols, other.symbols))

    def __len__(self):
        return self.m


class Strategy:
    """Rule for the detectable positions.

    ``decide`` receives the pirates' bits at those positions as an
    ``(l, d)`` array and returns ``d`` symbols.
    """

    name = "strategy"

    def decide(self, columns: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}()"


def _vote(columns, rng, prefer_majority: bool):
    ones = columns.sum(axis=0, dtype=np.int64)
    l = columns.shape[0]
    coin = rng.integers(0, 2, size=ones.size, dtype=np.uint8)
    more_ones = 2 * ones > l
    out = np.where(more_ones, ONE, ZERO) if prefer_majority else np.where(more_ones, ZERO, ONE)
    return np.where(2 * ones == l, coin, out).astype(np.uint8)


class Majority(Strategy):
    """Most common pirate bit; ties broken by a fair coin."""

    name = "majority"

    def decide(self, columns, rng):
        return _vote(columns, rng, True)


class Minority(Strategy):
    name = "minority"

    def decide(self, columns, rng):
        return _vote(columns, rng, False)


class RandomPirate(Strategy):
    """Copy a uniformly chosen pirate's bit, independently per position."""

    name = "random_pirate"

    def decide(self, columns, rng):
        who = rng.integers(0, columns.shape[0], size=columns.shape[1])
        return columns[who, np.arange(columns.shape[1])].astype(np.uint8)


class FirstPirate(Strategy):
    """Always copy the first pirate (the ``identity`` attack)."""

    name = "first_pirate"

    def decide(self, columns, rng):
        return columns[0].astype(np.uint8)


class AllOne(Strategy):
    name = "all_one"

    def decide(self, columns, rng):
        return np.full(columns.shape[1], ONE, dtype=np.uint8)


class AllZero(Strategy):
    name = "all_zero"

    def decide(self, columns, rng):
        return np.full(columns.shape[1], ZERO, dtype=np.uint8)


class CoinFlip(Strategy):
    name = "coin_flip"

    def decide(self, columns, rng):
        return rng.integers(0, 2, size=columns.shape[1], dtype=np.uint8)


class EraseWithProb(Strategy):
    """Erase with probability ``rho``, otherwise vote with the majority."""

    name = "erase"

    def __init__(self, rho: float):
        if not 0.0 <= rho <= 1.0:
            raise ValueError(f"erasure probability must lie in [0, 1], got {rho}")
        self.rho = float(rho)

    def decide(self, columns, rng):
        vote = _vote(columns, rng, True)
        erase = rng.random(columns.shape[1]) < self.rho
        return np.where(erase, ERASED, vote).astype(np.uint8)

    def __repr__(self):
        return f"EraseWithProb({self.rho})"


STRATEGIES = {
    "majority": Majority,
    "minority": Minority,
    "random_pirate": RandomPirate,
    "interleave": RandomPirate,
    "first_pirate": FirstPirate,
    "identity": FirstPirate,
    "all_one": AllOne,
    "all_zero": AllZero,
    "coin_flip": CoinFlip,
}


def parse_strategy(spec: str) -> Strategy:
    """Build a strategy from ``"majority"``, ``"erase:0.2"`` and the like."""
    name, _, arg = spec.strip().partition(":")
    if name == "erase":
        if not arg:
            raise ValueError("erase strategy needs a probability, e.g. 'erase:0.2'")
        return EraseWithProb(float(arg))
    if arg:
        raise ValueError(f"strategy {name!r} takes no parameter")
    try:
        return STRATEGIES[name]()
    except KeyError:
        known = ", ".join(sorted([*STRATEGIES, "erase:<rho>"]))
        raise ValueError(f"unknown strategy {name!r}; choose from {known}") from None


def _as_rows(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=np.uint8)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("coalition must contain at least one codeword")
    if np.any(arr > 1):
        raise ValueError("codewords must be binary")
    return arr


def detectable_positions(rows) -> np.ndarray:
    """Boolean mask of positions where the pirates' bits differ."""
    arr = _as_rows(rows)
    return arr.min(axis=0) != arr.max(axis=0)


def collude(strategy: Strategy, rows, rng: np.random.Generator) -> PiratedWord:
    """Forge a word from the coalition's codewords ``rows`` (shape ``(l, m)``)."""
    arr = _as_rows(rows)
    y = arr[0].copy()
    mask = arr.min(axis=0) != arr.max(axis=0)
    if mask.any():
        y[mask] = strategy.decide(arr[:, mask], rng)
    return PiratedWord(y)


def validate_marking(y: PiratedWord, rows) -> bool:
    """True iff ``y`` carries the common bit at every undetectable position."""
    arr = _as_rows(rows)
    if y.m != arr.shape[1]:
        raise ValueError("word and codeword lengths differ")
    undetectable = arr.min(axis=0) == arr.max(axis=0)
    return bool(np.all(y.symbols[undetectable] == arr[0, undetectable]))
