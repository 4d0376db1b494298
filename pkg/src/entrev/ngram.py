"""Exact occurrence counting of k-tuples over overlapping windows.

count(t) is the number of positions i with S[i:i+k] == t; a sequence of
length N therefore contributes N - k + 1 overlapping windows. The prefix and
suffix marginals of an order-(k+1) table recover the k-tuple counts up to a
deficit of one at the sequence boundary, which is the combinatorial fact the
entropy-gap identity rests on.
"""

import numpy as np

from .coding import check_capacity, decode_tuple, prefix_keys, reverse_keys, suffix_keys
from .kernels import encode_windows


class NGramTable:
    """Immutable counts of k-tuples, keyed by the base-A integer encoding."""

    __slots__ = ("order", "alphabet_size", "keys", "counts", "window_total")

    def __init__(self, order, alphabet_size, keys, counts, window_total):
        keys = np.ascontiguousarray(keys, dtype=np.uint64)
        counts = np.ascontiguousarray(counts, dtype=np.int64)
        if keys.shape != counts.shape:
            raise ValueError("keys and counts must have matching shapes")
        if keys.size > 1 and not np.all(keys[1:] > keys[:-1]):
            raise ValueError("keys must be strictly increasing")
        if counts.size and counts.min() < 0:
            raise ValueError("counts must be nonnegative")
        if keys.size and int(keys.max()) >= alphabet_size**order:
            raise ValueError("table contains keys outside the alphabet's tuple space")
        if int(counts.sum()) != window_total:
            raise ValueError("counts must sum to window_total")
        keys.flags.writeable = False
        counts.flags.writeable = False
        self.order = order
        self.alphabet_size = alphabet_size
        self.keys = keys
        self.counts = counts
        self.window_total = window_total

    def get(self, key):
        """Count for one tuple key (0 when absent)."""
        i = int(np.searchsorted(self.keys, np.uint64(key)))
        if i < self.keys.size and self.keys[i] == np.uint64(key):
            return int(self.counts[i])
        return 0

    def items(self):
        for k, c in zip(self.keys, self.counts):
            yield int(k), int(c)

    def as_dict(self):
        return {int(k): int(c) for k, c in zip(self.keys, self.counts)}

    def decode(self, key):
        return decode_tuple(key, self.order, self.alphabet_size)

    def __len__(self):
        return int(self.keys.size)

    def __repr__(self):
        return (
            f"NGramTable(order={self.order}, distinct={len(self)}, "
            f"window_total={self.window_total})"
        )


def _tally(keys):
    return np.unique(keys, return_counts=True)


def _aggregate(keys, counts):
    """Sum counts of duplicate keys. Exact: totals stay far below 2**53."""
    uniq, inverse = np.unique(keys, return_inverse=True)
    summed = np.bincount(inverse, weights=counts.astype(np.float64))
    return uniq, summed.astype(np.int64)


def count_ngrams(seq, k, chunks=1):
    """Count all overlapping k-tuples of a sequence.

    With chunks > 1 the sequence is split into window-start ranges that
    overlap by k - 1 symbols and the per-chunk tables are merged; the result
    is identical to the sequential count for any chunking.
    """
    n = len(seq)
    if k < 1:
        raise ValueError(f"tuple order must be >= 1, got {k}")
    if k > n:
        raise ValueError(f"tuple order {k} exceeds sequence length {n}")
    a = seq.alphabet.size
    check_capacity(a, k)
    n_windows = n - k + 1
    chunks = max(1, min(int(chunks), n_windows))
    if chunks == 1:
        keys, counts = _tally(encode_windows(seq.ids, k, a))
    else:
        bounds = np.linspace(0, n_windows, chunks + 1).astype(np.int64)
        part_keys, part_counts = [], []
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            if hi > lo:
                uk, uc = _tally(encode_windows(seq.ids[lo : hi + k - 1], k, a))
                part_keys.append(uk)
                part_counts.append(uc)
        keys, counts = _aggregate(np.concatenate(part_keys), np.concatenate(part_counts))
    return NGramTable(k, a, keys, counts, n_windows)


def start_marginal(table):
    """Sum out the last symbol: out[t] = sum_s table[(t, s)].

    out[t] counts the (k+1)-windows that start with t, which equals the
    k-gram count of t except at the final k-gram of the source sequence
    (nothing starts there).
    """
    if table.order < 1:
        raise ValueError("marginal requires a table of order >= 1")
    keys, counts = _aggregate(prefix_keys(table.keys, table.alphabet_size), table.counts)
    return NGramTable(table.order - 1, table.alphabet_size, keys, counts, table.window_total)


def end_marginal(table):
    """Sum out the first symbol: out[t] = sum_s table[(s, t)].

    Mirror of start_marginal; the deficit of one sits at the first k-gram.
    """
    if table.order < 1:
        raise ValueError("marginal requires a table of order >= 1")
    keys, counts = _aggregate(
        suffix_keys(table.keys, table.order, table.alphabet_size), table.counts
    )
    return NGramTable(table.order - 1, table.alphabet_size, keys, counts, table.window_total)


def reverse_table(table):
    """Relabel every tuple by its reversal.

    Equals count_ngrams(seq.reverse(), k) exactly for the table's source
    sequence: reading S backwards visits the same windows in reversed order.
    """
    rev = reverse_keys(table.keys, table.order, table.alphabet_size)
    order = np.argsort(rev, kind="stable")
    return NGramTable(
        table.order,
        table.alphabet_size,
        rev[order],
        table.counts[order],
        table.window_total,
    )
