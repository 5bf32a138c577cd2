"""Estimator-style wrapper around generation and tracing.

``fit`` derives the code parameters and draws the codebook; afterwards
``decision_function`` scores pirated words against every user and
``predict`` turns the scores into accusations.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_open_unit, check_pirated_words, check_positive_int
from .bias import gl_distribution
from .codebook import generate
from .params import SecurityGoal, SolverKnobs, derive_params
from .tracing import exact_score_table, trace

__all__ = ["FingerprintTracer"]


class FingerprintTracer(BaseEstimator):
    """Gauss-Legendre fingerprinting code for ``n_users`` and coalitions up to ``c``.

    Parameters
    ----------
    c : int
        Maximum coalition size.
    n_users : int
        Number of codewords ``N``.
    eps : float
        Total tracing error, split as ``eps1 = eps2 = eps / n_users``.
    eta1, eta2 : float or None
        Solver knobs; ``None`` selects the preset.
    delta : float
        Score approximation budget.
    hhi : bool
        Use the ``(1/4, c/2, 0)`` preset instead of ``(1/2, sqrt(c)/2)``.
    random_state : int
        Generation seed.
    """

    def __init__(self, c=2, n_users=100, eps=1e-3, eta1=None, eta2=None, delta=0.0, hhi=False, random_state=0):
        self.c = c
        self.n_users = n_users
        self.eps = eps
        self.eta1 = eta1
        self.eta2 = eta2
        self.delta = delta
        self.hhi = hhi
        self.random_state = random_state

    def _knobs(self, c):
        base = SolverKnobs.hhi(c) if self.hhi else SolverKnobs.proposal(c, delta=self.delta)
        eta1 = base.eta1 if self.eta1 is None else self.eta1
        eta2 = base.eta2 if self.eta2 is None else self.eta2
        return SolverKnobs(eta1, eta2, base.delta)

    def fit(self, X=None, y=None):
        """Draw the codebook. ``X`` and ``y`` are ignored."""
        c = check_positive_int(self.c, "c", minimum=2)
        N = check_positive_int(self.n_users, "n_users", minimum=2)
        eps = check_open_unit(self.eps, "eps")
        if self.random_state is None:
            raise ValueError("random_state must be set; generation is always seeded")
        self.dist_ = gl_distribution(c)
        self.params_ = derive_params(self.dist_, SecurityGoal.from_total(c, N, eps), self._knobs(c))
        self.codebook_ = generate(self.dist_, self.params_.m, N, self.random_state, c=c)
        self.table_ = exact_score_table(self.dist_)
        self.threshold_ = self.params_.Z
        return self

    def codewords(self, rows=None) -> np.ndarray:
        check_is_fitted(self, "codebook_")
        return self.codebook_.codewords(rows)

    def decision_function(self, Y) -> np.ndarray:
        """Scores, shape ``(n_words, n_users)``."""
        check_is_fitted(self, "codebook_")
        words = check_pirated_words(Y, self.codebook_.m)
        return np.stack([trace(self.codebook_, w, self.table_, self.threshold_).scores for w in words])

    def predict(self, Y) -> np.ndarray:
        """Accusation mask, shape ``(n_words, n_users)``; ``True`` iff score ``>= Z``."""
        return self.decision_function(Y) >= self.threshold_
