"""Stable hashed n-gram primitives.

Feature hashing for short informal text. Python's builtin ``hash`` is salted
per process, so bucket assignments here are computed with a polynomial rolling
hash over Unicode code points followed by a splitmix64 finalizer. Everything
runs on uint64 numpy arrays with wraparound arithmetic, which keeps bucket ids
identical across runs, processes, and platforms.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

_POLY_BASE = np.uint64(1099511628211)  # FNV-64 prime, used as the polynomial base

_SM_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_SM_MUL2 = np.uint64(0x94D049BB133111EB)

# salt namespaces so char n-grams and whole-token features never share buckets
# systematically
CHAR_FAMILY = 1
WORD_FAMILY = 2


def splitmix64(x: np.ndarray | np.uint64) -> np.ndarray | np.uint64:
    """Finalizing mixer; accepts a uint64 scalar or array."""
    with np.errstate(over="ignore"):  # wraparound is the point
        x = x + _SM_GAMMA
        x = (x ^ (x >> np.uint64(30))) * _SM_MUL1
        x = (x ^ (x >> np.uint64(27))) * _SM_MUL2
        return x ^ (x >> np.uint64(31))


def family_salt(family: int, order: int) -> np.uint64:
    return splitmix64(np.uint64(family * 1_000_003 + order))


def codepoints(text: str) -> np.ndarray:
    """Unicode code points of ``text`` as a uint64 array."""
    if not text:
        return np.empty(0, dtype=np.uint64)
    return np.frombuffer(text.encode("utf-32-le"), dtype="<u4").astype(np.uint64)


def ngram_buckets(cp: np.ndarray, order: int, dimension: int, salt: np.uint64) -> np.ndarray:
    """Bucket ids for every length-``order`` window of ``cp``.

    Index i of the result is the bucket of the window starting at code point i.
    ``dimension`` must be a power of two (enforced by callers).
    """
    if order < 1:
        raise ValueError(f"n-gram order must be >= 1, got {order}")
    if cp.size < order:
        return np.empty(0, dtype=np.int64)
    with np.errstate(over="ignore"):
        powers = np.empty(order, dtype=np.uint64)
        acc = np.uint64(1)
        for j in range(order - 1, -1, -1):
            powers[j] = acc
            acc = acc * _POLY_BASE
        windows = sliding_window_view(cp, order)
        h = (windows * powers).sum(axis=1, dtype=np.uint64)
        h = splitmix64(h + salt)
        return (h & np.uint64(dimension - 1)).astype(np.int64)


def token_bucket(token: str, dimension: int, salt: np.uint64) -> int:
    """Bucket id of one whole token."""
    cp = codepoints(token)
    with np.errstate(over="ignore"):
        h = np.uint64(0)
        for c in cp:
            h = h * _POLY_BASE + c
        h = splitmix64(h + salt)
        return int(h & np.uint64(dimension - 1))


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0
