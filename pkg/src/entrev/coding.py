"""Integer encoding of symbol tuples.

A k-tuple (s0, ..., s_{k-1}) over an alphabet of size A encodes as the
big-endian base-A integer sum(s_i * A**(k-1-i)). The same encoding is used
by count tables, probability tables and JSON reports, so keys are directly
comparable across modules.
"""

import numpy as np

from .errors import KeyCapacityError

# Keys must stay below 2**63 so they survive int64/uint64 round trips.
KEY_BITS = 63

# Largest supported context order (tuples up to MAX_ORDER + 1 symbols).
MAX_ORDER = 12


def check_capacity(alphabet_size, k):
    """Validate that k-tuples over this alphabet fit the 64-bit key encoding."""
    if k < 0:
        raise ValueError(f"tuple length must be >= 0, got {k}")
    if k > MAX_ORDER + 1:
        raise KeyCapacityError(
            f"tuple length {k} exceeds the supported maximum of {MAX_ORDER + 1}"
        )
    if alphabet_size >= 1 and alphabet_size ** k >= 2 ** KEY_BITS:
        raise KeyCapacityError(
            f"{k}-tuples over alphabet size {alphabet_size} do not fit a 64-bit key"
        )


def encode_tuple(symbols, alphabet_size):
    """Encode one tuple of symbol ids as its integer key."""
    key = 0
    for s in symbols:
        if not 0 <= s < alphabet_size:
            raise ValueError(f"symbol id {s} out of range for alphabet size {alphabet_size}")
        key = key * alphabet_size + int(s)
    return key


def decode_tuple(key, k, alphabet_size):
    """Decode an integer key back into its k-tuple of symbol ids."""
    key = int(key)
    out = [0] * k
    for i in range(k - 1, -1, -1):
        out[i] = key % alphabet_size
        key //= alphabet_size
    if key != 0:
        raise ValueError(f"key does not decode to a {k}-tuple over alphabet size {alphabet_size}")
    return tuple(out)


def reverse_keys(keys, k, alphabet_size):
    """Reverse the digit order of each key: (s0..s_{k-1}) -> (s_{k-1}..s0).

    Vectorized over a uint64 array of keys.
    """
    keys = np.asarray(keys, dtype=np.uint64)
    a = np.uint64(alphabet_size)
    rev = np.zeros_like(keys)
    rest = keys.copy()
    for _ in range(k):
        rev = rev * a + rest % a
        rest //= a
    return rev


def prefix_keys(keys, alphabet_size):
    """Drop the last symbol of each key: (s0..s_{k-1}) -> (s0..s_{k-2})."""
    return np.asarray(keys, dtype=np.uint64) // np.uint64(alphabet_size)


def suffix_keys(keys, k, alphabet_size):
    """Drop the first symbol of each key: (s0..s_{k-1}) -> (s1..s_{k-1})."""
    return np.asarray(keys, dtype=np.uint64) % np.uint64(alphabet_size ** (k - 1))
