"""Named, reproducible PRNG streams.

Every stochastic component draws from its own PCG64 generator, derived from
(root seed, label path) via numpy's SeedSequence. Labels are hashed with
crc32 so the derivation is stable across platforms and Python versions
(PYTHONHASHSEED does not leak in). Typical paths:

    stream(seed, "train-chan", n, k)     # training channel realizations
    stream(seed, "eval-chan", n, k)      # evaluation channels (shared by all
                                         # agents at the same cell -> common
                                         # random numbers)
    stream(seed, "init", agent, n, k)    # network weight init
    stream(seed, "explore", agent, n, k) # epsilon draws / OU noise
"""

import zlib

import numpy as np


def _key(part) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part) & 0xFFFFFFFF
    return zlib.crc32(str(part).encode("utf-8"))


def stream(root_seed: int, *path) -> np.random.Generator:
    """Generator for the given label path, independent of all other paths."""
    seq = np.random.SeedSequence(entropy=int(root_seed),
                                 spawn_key=tuple(_key(p) for p in path))
    return np.random.Generator(np.random.PCG64(seq))
