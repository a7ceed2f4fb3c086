"""Random-configuration baseline and exhaustive-search upper bound.

The exhaustive oracle enumerates every configuration of the control bits.
The fast path walks the configurations in binary-reflected Gray order, so
each step flips one group's sign and updates the received-signal sum
incrementally (vectorized as a cumulative sum). Because the incremental
values carry rounding drift, any configuration within a small relative
guard of the running maximum is re-evaluated from scratch with the exact
rate function before the winner is chosen; ties break to the smallest
action index. The naive path scores every configuration directly. Both
paths therefore return bitwise-identical results.
"""

from dataclasses import dataclass

import numpy as np

from .bits import bits_to_index
from .env import action_to_reflection, compute_snr, rate
from .errors import CapacityError, ConfigError

ENUM_CAP = 22          # beyond this, 2^n enumeration is declared intractable
_TIE_GUARD = 1e-9      # relative band re-checked exactly


@dataclass(frozen=True)
class OracleResult:
    best_action: np.ndarray
    best_rate: float
    evaluations: int


def random_action(n_ctrl: int, rng: np.random.Generator) -> np.ndarray:
    """IID Bernoulli(1/2) bits."""
    if n_ctrl < 1:
        raise ConfigError(f"n_ctrl must be >= 1, got {n_ctrl}")
    return rng.integers(0, 2, size=n_ctrl).astype(np.int8)


def _group_contributions(H, g, n_group: int) -> np.ndarray:
    n, k = H.shape
    if n % n_group != 0:
        raise ConfigError(f"N={n} not divisible by n_group={n_group}")
    v = np.full(k, 1.0 / k)
    contrib = np.asarray(g) * (np.asarray(H) @ v)
    return contrib.reshape(n // n_group, n_group).sum(axis=1)


def _pick_exact(patterns, H, g, tx_power, noise_power, n_group, n_ctrl):
    """Exact re-evaluation of candidate patterns; smallest index wins ties."""
    best_bits, best_rate, best_idx = None, -1.0, None
    for pattern in patterns:
        bits = ((int(pattern) >> np.arange(n_ctrl)) & 1).astype(np.int8)
        phi = action_to_reflection(bits, n_group)
        r = rate(compute_snr(H, g, phi, tx_power, noise_power))
        idx = bits_to_index(bits)
        if r > best_rate or (r == best_rate and idx < best_idx):
            best_bits, best_rate, best_idx = bits, r, idx
    return best_bits, best_rate


def exhaustive_search(H, g, tx_power: float, noise_power: float,
                      n_group: int = 1, gray: bool = True,
                      cap: int = ENUM_CAP) -> OracleResult:
    """Best configuration over all 2^(N/n_group) control-bit patterns."""
    H = np.asarray(H)
    g = np.asarray(g)
    n_ctrl = H.shape[0] // n_group
    if n_ctrl > cap:
        raise CapacityError(
            f"exhaustive search over 2^{n_ctrl} configurations exceeds the "
            f"cap of 2^{cap}")
    c = _group_contributions(H, g, n_group)
    size = 1 << n_ctrl
    if gray:
        deltas = np.zeros(size, dtype=complex)
        deltas[0] = c.sum()
        for j in range(n_ctrl):
            pos = np.arange(1 << j, size, 1 << (j + 1))
            signs = np.where(np.arange(pos.size) % 2 == 0, -2.0, 2.0)
            deltas[pos] = signs * c[j]
        s = np.cumsum(deltas)
        values = s.real * s.real + s.imag * s.imag
        steps = np.arange(size, dtype=np.int64)
        patterns = steps ^ (steps >> 1)      # gray code; bit j = group j
    else:
        signs = 1.0 - 2.0 * (((np.arange(size, dtype=np.int64)[:, None]
                               >> np.arange(n_ctrl)) & 1))
        s = signs @ c
        values = s.real * s.real + s.imag * s.imag
        patterns = np.arange(size, dtype=np.int64)
    top = values.max()
    if top == 0.0:
        bits = np.zeros(n_ctrl, dtype=np.int8)
        phi = action_to_reflection(bits, n_group)
        best = rate(compute_snr(H, g, phi, tx_power, noise_power))
        return OracleResult(best_action=bits, best_rate=best, evaluations=size)
    near = patterns[values >= top * (1.0 - _TIE_GUARD)]
    bits, best = _pick_exact(near, H, g, tx_power, noise_power, n_group, n_ctrl)
    return OracleResult(best_action=bits, best_rate=best, evaluations=size)
