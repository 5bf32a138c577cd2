"""Input checks shared across the package."""

from __future__ import annotations

import numbers

import numpy as np

from .attack import ERASED, ONE, ZERO


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_open_unit(value, name: str) -> float:
    value = float(value)
    if not 0.0 < value < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {value}")
    return value


def check_pirated_words(X, m: int | None = None) -> np.ndarray:
    """Coerce pirated words into a 2-D uint8 array of ternary symbols.

    Accepts an array-like of shape ``(n_words, m)`` (or a single word of
    shape ``(m,)``) holding ``0``, ``1`` or ``2`` (erased), or strings over
    ``"01?"``.
    """
    from sklearn.utils.validation import check_array

    if isinstance(X, str):
        X = [X]
    if len(X) and isinstance(X[0], str):
        from .attack import PiratedWord

        X = np.stack([PiratedWord.from_text(s).symbols for s in X])
    arr = check_array(X, dtype=None, ensure_2d=False, ensure_all_finite=True)
    if arr.ndim == 1:
        arr = arr[None, :]
    if not np.all(np.isin(arr, (ZERO, ONE, ERASED))):
        raise ValueError("pirated words may only contain 0, 1 or 2 (erased)")
    arr = arr.astype(np.uint8)
    if m is not None and arr.shape[1] != m:
        raise ValueError(f"pirated word length {arr.shape[1]} does not match code length {m}")
    return arr
