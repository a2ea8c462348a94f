import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from freestates import kernels
from freestates import words as W
from freestates.errors import InvalidGenerator, RankMismatch

from conftest import reduced_words, w, word_pairs


def brute_sphere(n, k):
    """All length-k letter strings, kept when no adjacent pair cancels."""
    letters = [x for i in range(1, n + 1) for x in (i, -i)]
    out = []
    for combo in itertools.product(letters, repeat=k):
        if all(a != -b for a, b in zip(combo, combo[1:])):
            out.append(combo)
    return out


class TestReduce:
    def test_empty(self):
        assert W.reduce([], 2).is_identity

    def test_cancelling_pair(self):
        assert W.reduce([(1, 1), (1, -1)], 2).is_identity

    def test_already_reduced(self):
        s = W.reduce([(1, -1), (1, -1), (2, 1), (2, 1), (2, 1), (1, -1)], 2)
        assert s.code == (-1, -1, 2, 2, 2, -1)

    def test_nested_cancellation(self):
        assert W.reduce([1, 2, -2, -1, 2], 2).code == (2,)

    def test_rejects_bad_index(self):
        with pytest.raises(InvalidGenerator):
            W.reduce([3], 2)
        with pytest.raises(InvalidGenerator):
            W.reduce([0], 2)

    def test_constructor_rejects_unreduced(self):
        with pytest.raises(ValueError):
            W.ReducedWord(2, (1, -1))

    @given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=20))
    def test_idempotent(self, raw):
        s = W.reduce(raw, 3)
        assert W.reduce(s.code, 3) == s


class TestMultiply:
    def test_examples(self):
        assert W.multiply(w("1"), w("-1")).is_identity
        assert W.multiply(w("1 2"), w("-2 1")) == w("1 1")
        assert W.multiply(w("1"), w("2")) == w("1 2")

    def test_rank_mismatch(self):
        with pytest.raises(RankMismatch):
            W.multiply(w("1", 2), w("1", 3))

    @given(word_pairs())
    def test_matches_reduce_of_concatenation(self, pair):
        s, t = pair
        assert s * t == W.reduce(s.code + t.code, s.n)

    @given(st.data())
    def test_associative(self, data):
        n = data.draw(st.integers(2, 3))
        a, b, c = (data.draw(reduced_words(n, 5)) for _ in range(3))
        assert (a * b) * c == a * (b * c)

    @given(reduced_words())
    def test_inverse(self, s):
        assert (s * ~s).is_identity
        assert (~s * s).is_identity
        assert ~~s == s


class TestInverse:
    def test_examples(self):
        assert W.inverse(W.identity(2)).is_identity
        assert W.inverse(w("1 -2")) == w("2 -1")
        assert W.inverse(w("-1 -1 2 2 2 -1")) == w("1 -2 -2 -2 1 1")


class TestStats:
    def test_switch_example(self):
        st_ = W.stats(w("-1 -1 2 2 2 -1"))
        assert (st_.length, st_.gamma, st_.u1_length, st_.tau) == (6, 1, 3, 0)

    def test_identity(self):
        assert W.stats(W.identity(2)) == W.WordStats(0, 0, 0, 0)

    def test_one_switch(self):
        assert W.stats(w("-1 2")) == W.WordStats(2, 1, 1, 0)

    @given(reduced_words())
    def test_gamma_of_inverse(self, s):
        assert W.stats(~s).gamma == W.stats(s).gamma

    @given(reduced_words())
    def test_gamma_bound(self, s):
        st_ = W.stats(s)
        assert 0 <= 2 * st_.gamma <= st_.length
        assert abs(st_.tau) <= st_.length

    @given(reduced_words())
    def test_batch_matches_scalar(self, s):
        codes, lengths = W.words_to_codes([s])
        length, gamma, u1, tau = W.batch_stats(codes, lengths)
        st_ = W.stats(s)
        assert (length[0], gamma[0], u1[0], tau[0]) == (st_.length, st_.gamma, st_.u1_length, st_.tau)


class TestAutomorphisms:
    def test_beta_examples(self):
        assert W.beta(w("2")) == w("1 2")
        assert W.beta(w("1")) == w("1")
        s = w("-1 -1 2 2 2 -1")
        assert W.stats(W.beta(s)).u1_length == 4

    def test_sigma_examples(self):
        assert W.sigma(w("1")) == w("-1")
        assert W.sigma(W.identity(2)).is_identity
        assert W.sigma(w("-1 2")) == w("1 -2")

    @given(reduced_words(n=2))
    def test_beta_u1_length(self, s):
        st_ = W.stats(s)
        assert W.stats(W.beta(s)).u1_length == st_.length - 2 * st_.gamma

    @given(word_pairs())
    def test_beta_is_homomorphism(self, pair):
        s, t = pair
        assert W.beta(s * t) == W.beta(s) * W.beta(t)

    @given(reduced_words())
    def test_sigma_involution(self, s):
        assert W.sigma(W.sigma(s)) == s

    def test_in_plus_minus(self):
        assert W.in_plus_minus(w("1 -2"))
        assert not W.in_plus_minus(w("-1 2"))
        assert W.in_plus_minus(W.identity(2))


class TestEnumeration:
    @pytest.mark.parametrize("n,k", [(2, 0), (2, 1), (2, 2), (2, 4), (3, 3), (4, 2)])
    def test_sphere_matches_brute(self, n, k):
        got = [s.code for s in W.enumerate_sphere(n, k)]
        assert sorted(got) == sorted(brute_sphere(n, k))
        assert len(got) == kernels.sphere_size(n, k)

    def test_sizes(self):
        assert [s.code for s in W.enumerate_sphere(2, 0)] == [()]
        assert len(W.enumerate_sphere(2, 2)) == 12
        assert len(W.enumerate_sphere(3, 2, "positive_only")) == 9

    def test_lex_order(self):
        got = [s.code for s in W.enumerate_sphere(2, 2)]
        rank = {1: 0, -1: 1, 2: 2, -2: 3}
        assert got == sorted(got, key=lambda c: [rank[x] for x in c])
        assert got[0] == (1, 1)

    def test_ending_negative(self):
        words = W.enumerate_sphere(3, 3, "ending_negative_in", gen=2)
        assert words and all(s.code[-1] == -2 for s in words)

    def test_ball_size(self):
        assert len(W.ball(2, 3)) == 1 + 4 + 12 + 36


class TestText:
    def test_parse_and_format(self):
        s = W.parse_word("-1 -1 2 2 2 -1", 2)
        assert W.format_word(s) == "-1 -1 2 2 2 -1"
        assert W.parse_word("e", 2).is_identity
        assert W.format_word(W.identity(3)) == "e"

    def test_parse_rejects(self):
        with pytest.raises(InvalidGenerator):
            W.parse_word("0", 2)
        with pytest.raises(InvalidGenerator):
            W.parse_word("3", 2)

    @given(reduced_words())
    def test_round_trip(self, s):
        assert W.parse_word(W.format_word(s), s.n) == s


def test_right_multiply_letter_matches_scalar():
    words = W.ball(2, 3)
    codes, lengths = W.words_to_codes(words)
    for x in (1, -1, 2, -2):
        c2, l2 = W.right_multiply_letter(codes, lengths, x)
        for r, s in enumerate(words):
            expect = s * W.ReducedWord(2, (x,))
            assert tuple(int(v) for v in c2[r, : l2[r]]) == expect.code
