from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from spikeepisodes.episodes import serial
from spikeepisodes.similarity import similarity, similarity_breakdown, similarity_matrix

ALPHABET = "ABCDEF"


@st.composite
def same_size_sets(draw, size=None, count=None):
    size = size or draw(st.integers(1, 5))
    count = count or draw(st.integers(1, 6))
    ep = st.lists(st.sampled_from(ALPHABET), min_size=size, max_size=size).map(tuple)
    return draw(st.lists(ep, min_size=count, max_size=count))


class TestWorkedExamples:
    def test_identical_sets(self):
        eps = [tuple("ABCDEF") + (f"x{i}",) for i in range(20)]
        res = similarity_breakdown(eps, list(eps))
        assert res.score == 2560
        assert res.matched[7] == 20

    def test_hand_reduction(self):
        res = similarity_breakdown([serial("ABC")], [serial("ABD")])
        assert res.matched == {3: 0, 2: 1, 1: 1}
        assert res.score == 6

    def test_disjoint(self):
        assert similarity(["ABC", "BCA"], ["XYZ"]) == 0

    def test_intervals_ignored(self):
        a = [serial("ABC", [(0, 0.002), (0.004, 0.006)])]
        b = [serial("ABC", [(0.004, 0.006), (0.004, 0.006)])]
        assert similarity(a, b) == 8

    def test_multiset_matching(self):
        # {A B B C} vs {B B C D}: both copies of B match, plus C
        assert similarity_breakdown(["AB", "CB"], ["DB", "BC"]).matched == {2: 0, 1: 3}
        # a duplicate on one side only matches once
        assert similarity_breakdown(["AB", "AB"], ["AB", "CD"]).matched == {2: 1, 1: 0}

    def test_empty(self):
        assert similarity([], ["AB"]) == 0


class TestErrors:
    def test_mixed_sizes(self):
        with pytest.raises(ValueError, match="different sizes"):
            similarity(["AB", "ABC"], ["AB"])

    def test_size_mismatch_across_sets(self):
        with pytest.raises(ValueError, match="same size"):
            similarity(["AB"], ["ABC"])


class TestProperties:
    @settings(max_examples=300)
    @given(st.data())
    def test_symmetric(self, data):
        size = data.draw(st.integers(1, 5))
        a = data.draw(same_size_sets(size=size))
        b = data.draw(same_size_sets(size=size))
        assert similarity(a, b) == similarity(b, a)

    @settings(max_examples=300)
    @given(st.data())
    def test_self_is_maximal(self, data):
        size = data.draw(st.integers(1, 5))
        count = data.draw(st.integers(1, 6))
        a = data.draw(same_size_sets(size=size, count=count))
        b = data.draw(same_size_sets(size=size, count=count))
        assert similarity(a, a) >= similarity(a, b)
        assert similarity(a, a) == count * 2 ** size

    @given(same_size_sets())
    def test_order_invariant(self, eps):
        assert similarity(eps, eps[::-1]) == similarity(eps, eps)


class TestMatrix:
    def test_symmetric_with_self_scores_on_diagonal(self):
        sets = [["ABC", "BCD"], ["ABC"], ["XYZ"]]
        m = similarity_matrix(sets)
        assert (m == m.T).all()
        assert list(m.diagonal()) == [16, 8, 8]
        assert m[0, 2] == 0
