import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glfingerprint.attack import PiratedWord, collude, parse_strategy
from glfingerprint.bias import BiasDistribution, gl_distribution
from glfingerprint.codebook import BiasVector, Codebook, CodeMatrix, generate
from glfingerprint.numerics import sigma
from glfingerprint.rng import stream
from glfingerprint.tracing import (
    ScoreTable,
    exact_score_table,
    exact_scores,
    position_scores,
    rounded_score_table,
    trace,
)


ROUNDED_GL = {
    4: ([0.21132, 0.78868], [0.5, 0.5]),
    6: ([0.11270, 0.5, 0.88730], [0.33201, 0.33598, 0.33201]),
    8: ([0.06943, 0.33001, 0.66999, 0.93057], [0.24833, 0.25167, 0.25167, 0.24833]),
}


PRINTED_U = {
    4: [1.93187, 0.51763],
    6: [2.80590, 1.0, 0.35639],
    8: [3.66101, 1.42485, 0.70182, 0.27314],
}


def rounded_gl(c):
    return BiasDistribution(*ROUNDED_GL[c])


def brute_scores(cb, y, U):
    """Direct per-user, per-position loop."""
    k = cb.dist.k
    W = cb.codewords()
    out = []
    for i in range(cb.N):
        s = 0.0
        for j in range(cb.m):
            if y[j] == 1:
                v = int(cb.biases.indices[j])
                s += U[v] if W[i, j] else -U[k - v]
        out.append(s)
    return np.array(out)


def single_position(dist, index, bit):
    return Codebook(dist, BiasVector([index], dist), CodeMatrix.from_bits([[bit]]), c=4)


class TestTable:
    def test_examples(self):
        np.testing.assert_array_equal(exact_score_table(gl_distribution(2)).U, [1.0])
        # the printed scores are sigma of the printed 5-decimal biases, truncated
        for c, U in PRINTED_U.items():
            exact = exact_score_table(rounded_gl(c)).U
            assert np.all((exact - U >= 0) & (exact - U < 1e-5))
            ScoreTable(rounded_gl(c), U, 1e-5)
        # exact GL nodes move them by the bias rounding only
        np.testing.assert_allclose(exact_score_table(gl_distribution(6)).U, [2.80590, 1, 0.35639], atol=2e-5)
        assert exact_score_table(gl_distribution(8)).U[0] == pytest.approx(3.66101, abs=6e-5)

    def test_delta_checked(self):
        dist = gl_distribution(4)
        U = sigma(dist.p) + 1e-6
        ScoreTable(dist, U, 1e-6)
        with pytest.raises(ValueError):
            ScoreTable(dist, U, 5e-7)
        with pytest.raises(ValueError):
            ScoreTable(dist, [1.0], 0.0)
        with pytest.raises(ValueError):
            ScoreTable(dist, sigma(dist.p), -1.0)

    def test_rounded(self):
        t = rounded_score_table(rounded_gl(8), 5)
        assert t.delta == 5e-6
        np.testing.assert_allclose(t.U, [3.66101, 1.42485, 0.70183, 0.27315])
        exact = exact_score_table(rounded_gl(8)).U
        assert np.max(np.abs(t.U - exact)) <= t.delta


class TestTrace:
    def test_all_zero_word(self):
        cb = generate(gl_distribution(6), 300, 10, seed=1)
        res = trace(cb, PiratedWord(np.zeros(300)), exact_score_table(cb.dist), 0.5)
        np.testing.assert_array_equal(res.scores, 0.0)
        assert res.accused == []

    def test_erasures_score_nothing(self):
        cb = generate(gl_distribution(6), 300, 10, seed=1)
        res = trace(cb, PiratedWord(np.full(300, 2)), exact_score_table(cb.dist), -1.0)
        np.testing.assert_array_equal(res.scores, 0.0)
        assert res.accused == list(range(10))

    def test_single_pirate_c2(self):
        cb = generate(gl_distribution(2), 6278, 5, seed=2)
        w = cb.codewords(2)
        res = trace(cb, PiratedWord(w), exact_score_table(cb.dist), 917.3574048177907)
        assert res.scores[2] == w.sum()
        assert abs(res.scores[2] - 3139) < 4 * np.sqrt(6278 / 4)
        assert 2 in res.accused

    def test_single_position_c4(self):
        dist = rounded_gl(4)
        cb = single_position(dist, 0, 0)
        assert exact_scores(cb, PiratedWord([1]))[0] == pytest.approx(-0.51763, abs=5e-6)
        cb = single_position(dist, 0, 1)
        assert exact_scores(cb, PiratedWord([1]))[0] == pytest.approx(1.93187, abs=1e-5)
        assert exact_scores(cb, PiratedWord([0]))[0] == 0.0

    @pytest.mark.parametrize("c", [2, 4, 7])
    def test_against_brute_force(self, c):
        cb = generate(gl_distribution(c), 257, 9, seed=c)
        y = collude(parse_strategy("erase:0.2"), cb.codewords([0, 1]), stream(c, "a"))
        table = rounded_score_table(cb.dist, 3)
        np.testing.assert_allclose(trace(cb, y, table, 0).scores, brute_scores(cb, y.symbols, table.U), atol=1e-10)
        ps = position_scores(cb, y, table, [0, 1])
        np.testing.assert_allclose(ps.sum(axis=1), brute_scores(cb, y.symbols, table.U)[:2], atol=1e-10)

    def test_ties_accuse_and_monotone(self):
        cb = generate(gl_distribution(4), 400, 30, seed=3)
        y = collude(parse_strategy("majority"), cb.codewords([0, 1, 2]), stream(3, "a"))
        table = exact_score_table(cb.dist)
        scores = trace(cb, y, table, 0).scores
        z = float(scores[5])
        assert 5 in trace(cb, y, table, z).accused
        prev = None
        for Z in np.linspace(scores.min() - 1, scores.max() + 1, 25):
            acc = set(trace(cb, y, table, Z).accused)
            assert acc == {i for i in range(cb.N) if scores[i] >= Z}
            if prev is not None:
                assert acc <= prev
            prev = acc

    def test_errors(self):
        cb = generate(gl_distribution(4), 40, 3, seed=4)
        with pytest.raises(ValueError):
            trace(cb, PiratedWord(np.zeros(39)), exact_score_table(cb.dist), 1.0)
        with pytest.raises(ValueError):
            trace(cb, PiratedWord(np.zeros(40)), exact_score_table(gl_distribution(6)), 1.0)

    @settings(max_examples=25, deadline=None)
    @given(
        st.integers(2, 12),
        st.integers(0, 2**31),
        st.sampled_from(["majority", "minority", "coin_flip", "random_pirate", "erase:0.3"]),
        st.integers(5, 8),
    )
    def test_approximation_bound(self, c, seed, spec, decimals):
        cb = generate(gl_distribution(c), 500, 12, seed=seed)
        l = min(c, 3)
        y = collude(parse_strategy(spec), cb.codewords(slice(0, l)), stream(seed, "attack"))
        table = rounded_score_table(cb.dist, decimals)
        assert table.delta <= 1e-5
        approx = trace(cb, y, table, 0).scores
        exact = exact_scores(cb, y)
        assert np.all(np.abs(approx - exact) <= cb.m * table.delta + 1e-9)


def coalition_contributions(dist, spec, l, m, seed):
    """Summed pirate score at detectable positions carrying y = 1."""
    cb = generate(dist, m, l, seed=seed)
    rows = cb.codewords()
    y = collude(parse_strategy(spec), rows, stream(seed, "attack"))
    detectable = rows.min(axis=0) != rows.max(axis=0)
    mask = detectable & (y.symbols == 1)
    return position_scores(cb, y, exact_score_table(dist)).sum(axis=0)[mask]


@pytest.mark.parametrize("spec", ["majority", "minority", "random_pirate", "all_one", "coin_flip"])
def test_zero_mean_for_cind(spec):
    v = coalition_contributions(gl_distribution(4), spec, 3, 200_000, seed=11)
    se = v.std(ddof=1) / np.sqrt(v.size)
    assert abs(v.mean()) <= 4 * se


def test_nonzero_mean_for_control():
    control = BiasDistribution([0.1, 0.5, 0.9], [1 / 3, 1 / 3, 1 / 3])
    v = coalition_contributions(control, "majority", 3, 200_000, seed=12)
    se = v.std(ddof=1) / np.sqrt(v.size)
    assert abs(v.mean()) > 4 * se
