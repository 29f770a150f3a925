import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vcwidth.metrics import CurveTriple, dissimilarity, halved_objective, mse_mean, mse_sum

from oracles import dissimilarity_ordered_pairs

curve_values = st.floats(-1e3, 1e3, allow_nan=False)


@st.composite
def triples(draw, max_len=30):
    M = draw(st.integers(1, max_len))
    return [draw(st.lists(curve_values, min_size=M, max_size=M)) for _ in range(3)]


class TestDissimilarity:
    def test_equal_curves(self):
        g = [0.3, 0.2, 0.1]
        assert dissimilarity(CurveTriple(g, g, g)) == 0.0

    def test_hand_example(self):
        assert dissimilarity(CurveTriple([0, 0], [1, 1], [2, 2])) == pytest.approx(0.08)

    @given(triples())
    def test_matches_ordered_pair_oracle(self, gs):
        assert dissimilarity(CurveTriple(*gs)) == pytest.approx(dissimilarity_ordered_pairs(*gs), rel=1e-12, abs=1e-12)

    @given(triples())
    def test_permutation_symmetry(self, gs):
        values = {dissimilarity(CurveTriple(*p)) for p in itertools.permutations(gs)}
        assert len(values) == 1

    @given(triples())
    def test_nonnegative_and_dominates_one_pair(self, gs):
        d = dissimilarity(CurveTriple(*gs))
        assert d >= 0
        assert d >= np.abs(np.subtract(gs[0], gs[1])).sum() / 100 - 1e-12

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            CurveTriple([1, 2], [1, 2], [1])

    def test_empty_and_nonfinite(self):
        with pytest.raises(ValueError):
            CurveTriple([], [], [])
        with pytest.raises(ValueError):
            CurveTriple([np.nan], [0], [0])


class TestSquaredErrors:
    @pytest.mark.parametrize("h,t,s,m,half", [
        ([0.2, 0.4], [0.2, 0.4], 0.0, 0.0, 0.0),
        ([1, 0], [0, 0], 1.0, 0.5, 0.25),
        ([1, 1, 1], [0, 0, 0], 3.0, 1.0, 0.5),
    ])
    def test_examples(self, h, t, s, m, half):
        assert mse_sum(h, t) == s
        assert mse_mean(h, t) == m
        assert halved_objective(h, t) == half

    @given(st.lists(st.tuples(curve_values, curve_values), min_size=1, max_size=40))
    def test_identities(self, pairs):
        h, t = zip(*pairs)
        r = len(h)
        s = mse_sum(h, t)
        assert s == pytest.approx(r * mse_mean(h, t), rel=1e-12, abs=1e-12)
        assert s == pytest.approx(2 * r * halved_objective(h, t), rel=1e-12, abs=1e-12)
        assert halved_objective(h, t) == pytest.approx(mse_mean(h, t) / 2, rel=1e-12, abs=1e-12)

    def test_mean_invariant_under_duplication(self):
        h, t = [0.1, 0.9, 0.4], [0, 1, 1]
        assert mse_mean(h * 2, t * 2) == pytest.approx(mse_mean(h, t))

    @pytest.mark.parametrize("fn", [mse_sum, mse_mean, halved_objective])
    def test_length_mismatch(self, fn):
        with pytest.raises(ValueError):
            fn([1, 2], [1])
        with pytest.raises(ValueError):
            fn([], [])
