import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entrev import KeyCapacityError, count_ngrams, end_marginal, reverse_table, start_marginal
from entrev.coding import decode_tuple, encode_tuple

from .conftest import make_seq
from .oracles import brute_counts

sequences = st.builds(
    make_seq,
    st.lists(st.integers(0, 7), min_size=2, max_size=120),
    st.just(8),
)


def table_tuples(table):
    return {table.decode(k): c for k, c in table.items()}


class TestCountNgrams:
    def test_hand_count(self):
        table = count_ngrams(make_seq([0, 1, 0, 1], 2), 2)
        assert table_tuples(table) == {(0, 1): 2, (1, 0): 1}
        assert table.window_total == 3

    def test_unigram(self):
        table = count_ngrams(make_seq([0, 0, 0], 1), 1)
        assert table_tuples(table) == {(0,): 3}

    def test_whole_sequence_window(self):
        table = count_ngrams(make_seq([0, 1, 2], 3), 3)
        assert table_tuples(table) == {(0, 1, 2): 1}

    def test_order_exceeding_length(self):
        with pytest.raises(ValueError, match="exceeds sequence length"):
            count_ngrams(make_seq([0, 1], 2), 3)

    def test_order_zero_rejected(self):
        with pytest.raises(ValueError):
            count_ngrams(make_seq([0, 1], 2), 0)

    def test_capacity_guard(self):
        seq = make_seq(list(range(100)) * 2, 256)
        with pytest.raises(KeyCapacityError):
            count_ngrams(seq, 8)  # 256**8 == 2**64

    @given(sequences, st.integers(1, 5))
    def test_matches_brute_force(self, seq, k):
        if k > len(seq):
            return
        table = count_ngrams(seq, k)
        assert table_tuples(table) == dict(brute_counts(seq.ids, k))
        assert table.window_total == len(seq) - k + 1
        assert int(table.counts.sum()) == table.window_total

    @given(sequences, st.integers(1, 4), st.integers(2, 7))
    def test_chunked_equals_sequential(self, seq, k, chunks):
        if k > len(seq):
            return
        a = count_ngrams(seq, k)
        b = count_ngrams(seq, k, chunks=chunks)
        assert np.array_equal(a.keys, b.keys)
        assert np.array_equal(a.counts, b.counts)

    def test_deterministic(self):
        seq = make_seq([0, 1, 2, 1, 0, 2, 2, 1], 3)
        a, b = count_ngrams(seq, 2), count_ngrams(seq, 2)
        assert np.array_equal(a.keys, b.keys) and np.array_equal(a.counts, b.counts)


class TestMarginals:
    def test_start_marginal_example(self):
        table = count_ngrams(make_seq([0, 1, 0, 1], 2), 2)
        start = start_marginal(table)
        assert table_tuples(start) == {(0,): 2, (1,): 1}
        # full 1-gram counts are {0: 2, 1: 2}: deficit of one at the last 1-gram
        ones = count_ngrams(make_seq([0, 1, 0, 1], 2), 1)
        assert table_tuples(ones) == {(0,): 2, (1,): 2}

    def test_start_marginal_repeated_symbol(self):
        table = count_ngrams(make_seq([0, 0, 0], 1), 2)
        assert table_tuples(table) == {(0, 0): 2}
        assert table_tuples(start_marginal(table)) == {(0,): 2}

    def test_end_marginal_example(self):
        table = count_ngrams(make_seq([0, 1, 0, 1], 2), 2)
        assert table_tuples(end_marginal(table)) == {(1,): 2, (0,): 1}

    @given(sequences, st.integers(1, 4))
    def test_start_marginal_total(self, seq, k):
        if k + 1 > len(seq):
            return
        table = count_ngrams(seq, k + 1)
        start = start_marginal(table)
        assert int(start.counts.sum()) == len(seq) - k

    @given(sequences, st.integers(1, 4))
    def test_boundary_identity(self, seq, k):
        """start - end equals the +-1 indicator at the boundary k-grams."""
        if k + 1 > len(seq):
            return
        table = count_ngrams(seq, k + 1)
        start, end = start_marginal(table), end_marginal(table)
        first = seq.tuple_at(0, k)
        last = seq.tuple_at(len(seq) - k, k)
        keys = set(start.as_dict()) | set(end.as_dict())
        for key in keys:
            t = decode_tuple(key, k, seq.alphabet.size)
            expected = (1 if t == first else 0) - (1 if t == last else 0)
            assert start.get(key) - end.get(key) == expected


class TestReverseTable:
    def test_example(self):
        table = count_ngrams(make_seq([0, 1, 0, 1], 2), 2)
        assert table_tuples(reverse_table(table)) == {(1, 0): 2, (0, 1): 1}

    def test_palindromic_keys_unchanged(self):
        table = count_ngrams(make_seq([0] * 6, 1), 2)
        rev = reverse_table(table)
        assert table_tuples(rev) == table_tuples(table) == {(0, 0): 5}

    @given(sequences, st.integers(1, 5))
    def test_equals_count_of_reverse(self, seq, k):
        if k > len(seq):
            return
        a = reverse_table(count_ngrams(seq, k))
        b = count_ngrams(seq.reverse(), k)
        assert np.array_equal(a.keys, b.keys)
        assert np.array_equal(a.counts, b.counts)


def test_get_and_items():
    table = count_ngrams(make_seq([0, 1, 0, 1], 2), 2)
    key = encode_tuple((0, 1), 2)
    assert table.get(key) == 2
    assert table.get(encode_tuple((1, 1), 2)) == 0
    assert dict(table.items()) == table.as_dict()
