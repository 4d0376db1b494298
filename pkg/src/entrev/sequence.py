"""Alphabets, symbol sequences and corpus ingestion.

A Sequence is an immutable array of integer symbol ids indexing into an
Alphabet. Raw byte corpora map onto ids either compactly (distinct bytes in
first-occurrence order) or through the identity byte alphabet; token corpora
map through a declared token list.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyInputError


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of distinct symbols, each with an implicit id.

    Symbols may be byte values (ints) or user-declared string tokens; the id
    of a symbol is its position in `symbols`.
    """

    symbols: tuple
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.symbols) < 1:
            raise ValueError("alphabet must contain at least one symbol")
        index = {}
        for i, sym in enumerate(self.symbols):
            if sym in index:
                raise ValueError(f"duplicate symbol {sym!r} in alphabet")
            index[sym] = i
        object.__setattr__(self, "_index", index)

    @property
    def size(self):
        return len(self.symbols)

    def id_of(self, symbol):
        return self._index[symbol]

    def label(self, symbol_id):
        """Human-readable form of one symbol, for reports."""
        sym = self.symbols[symbol_id]
        if isinstance(sym, int):
            return chr(sym) if 32 <= sym < 127 else f"\\x{sym:02x}"
        return str(sym)

    @classmethod
    def full_bytes(cls):
        """The identity alphabet over all 256 byte values."""
        return cls(tuple(range(256)))

    @classmethod
    def byte_range(cls, size):
        """The identity alphabet over byte values 0..size-1.

        Used when a file stores symbol ids directly as raw bytes, e.g. the
        output of the `gen` subcommand.
        """
        if not 1 <= size <= 256:
            raise ValueError(f"byte-range alphabet size must be in [1, 256], got {size}")
        return cls(tuple(range(size)))

    @classmethod
    def from_token_file(cls, path):
        """Declared token alphabet: one token per line, UTF-8."""
        with open(path, encoding="utf-8") as fh:
            tokens = [line.rstrip("\n") for line in fh if line.rstrip("\n")]
        if not tokens:
            raise EmptyInputError(f"token list {path} declares no tokens")
        return cls(tuple(tokens))


class Sequence:
    """An immutable run of symbol ids over a fixed alphabet."""

    __slots__ = ("ids", "alphabet")

    def __init__(self, ids, alphabet):
        ids = np.ascontiguousarray(ids, dtype=np.int64)
        if ids.ndim != 1:
            raise ValueError("sequence ids must be one-dimensional")
        if ids.size and (ids.min() < 0 or ids.max() >= alphabet.size):
            raise ValueError("sequence contains ids outside the alphabet")
        ids.flags.writeable = False
        self.ids = ids
        self.alphabet = alphabet

    def __len__(self):
        return int(self.ids.size)

    def __eq__(self, other):
        return (
            isinstance(other, Sequence)
            and self.alphabet == other.alphabet
            and np.array_equal(self.ids, other.ids)
        )

    def __repr__(self):
        head = ",".join(str(i) for i in self.ids[:8])
        tail = ",..." if len(self) > 8 else ""
        return f"Sequence([{head}{tail}], N={len(self)}, |alphabet|={self.alphabet.size})"

    def reverse(self):
        """The sequence read last symbol first. An involution."""
        return Sequence(self.ids[::-1].copy(), self.alphabet)

    def tuple_at(self, position, k):
        """The contiguous k-tuple of ids starting at `position`.

        tuple_at(0, n) is the leading n-tuple and tuple_at(N - n, n) the
        trailing one.
        """
        if k < 0 or position < 0 or position + k > len(self):
            raise IndexError(
                f"window [{position}, {position + k}) out of range for length {len(self)}"
            )
        return tuple(int(x) for x in self.ids[position : position + k])


def ingest_bytes(raw, full_byte_alphabet=False, alphabet=None):
    """Build a Sequence from a raw byte string.

    By default the alphabet contains exactly the distinct bytes present, with
    ids assigned in first-occurrence order (compact keys for counting). With
    `full_byte_alphabet` the ids are the byte values themselves. Passing an
    explicit identity/byte-range `alphabet` pins the id mapping, which is
    required when the bytes already are model symbol ids.
    """
    if len(raw) == 0:
        raise EmptyInputError("input stream contains no bytes")
    data = np.frombuffer(raw, dtype=np.uint8)
    if alphabet is not None:
        return Sequence(data.astype(np.int64), alphabet)
    if full_byte_alphabet:
        return Sequence(data.astype(np.int64), Alphabet.full_bytes())
    values, first_pos = np.unique(data, return_index=True)
    order = np.argsort(first_pos, kind="stable")
    values = values[order]
    lut = np.zeros(256, dtype=np.int64)
    lut[values] = np.arange(values.size)
    return Sequence(lut[data], Alphabet(tuple(int(v) for v in values)))


def ingest_tokens(text, alphabet):
    """Build a Sequence from whitespace-separated tokens of a declared alphabet."""
    tokens = text.split()
    if not tokens:
        raise EmptyInputError("input contains no tokens")
    try:
        ids = np.fromiter((alphabet.id_of(t) for t in tokens), dtype=np.int64, count=len(tokens))
    except KeyError as exc:
        raise ValueError(f"token {exc.args[0]!r} is not in the declared alphabet") from None
    return Sequence(ids, alphabet)


def reverse_sequence(seq):
    """Module-level alias for Sequence.reverse."""
    return seq.reverse()


def tuple_at(seq, position, k):
    """Module-level alias for Sequence.tuple_at."""
    return seq.tuple_at(position, k)
