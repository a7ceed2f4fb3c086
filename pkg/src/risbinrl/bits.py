"""Binary action vectors and their integer indices.

Actions are length-n 0/1 vectors. The integer index of an action reads the
vector as a binary numeral, most significant bit first, so index 2 with n=2
is [1, 0]. Index 0 is the all-zero action everywhere (enumeration order,
exhaustive-search tie-breaks, vanilla-DQN output decoding).
"""

import numpy as np


def index_to_bits(index: int, n: int) -> np.ndarray:
    if not 0 <= index < (1 << n):
        raise ValueError(f"index {index} out of range for {n} bits")
    return np.array([(index >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.int8)


def bits_to_index(bits) -> int:
    bits = np.asarray(bits)
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx


def all_actions(n: int) -> np.ndarray:
    """(2^n, n) matrix of every action, row i = index_to_bits(i, n)."""
    idx = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts[None, :]) & 1).astype(np.int8)


def complement(bits) -> np.ndarray:
    return (1 - np.asarray(bits)).astype(np.int8)
