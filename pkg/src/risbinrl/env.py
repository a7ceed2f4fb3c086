"""The RIS configuration MDP: observations, binary actions, rate reward.

Each control bit selects one of the two element phases (0 -> coefficient +1,
1 -> coefficient -1) for a group of n_group consecutive RIS elements. The
observation stacks the real and imaginary parts of the current channel
realization; the reward is the downlink achievable rate under the fixed
uniform precoder. Transitions resample the channels IID, so the action never
influences the next state.
"""

from dataclasses import dataclass

import numpy as np

from .channel import (ChannelParams, ChannelRealization, Geometry,
                      pathloss, sample_channels)
from .errors import ConfigError


def action_to_reflection(bits, n_group: int) -> np.ndarray:
    """Per-element reflection coefficients (+1/-1) from control bits."""
    bits = np.asarray(bits)
    if n_group < 1:
        raise ConfigError(f"n_group must be >= 1, got {n_group}")
    if bits.ndim != 1 or not np.isin(bits, (0, 1)).all():
        raise ConfigError("action must be a flat 0/1 vector")
    return np.repeat(1.0 - 2.0 * bits.astype(float), n_group)


def compute_snr(H: np.ndarray, g: np.ndarray, phi: np.ndarray,
                tx_power: float, noise_power: float) -> float:
    """gamma = (P / sigma^2) |g diag(phi) H v|^2 with v = ones(K)/K."""
    H = np.asarray(H)
    g = np.asarray(g)
    phi = np.asarray(phi)
    n, k = H.shape
    if g.shape != (n,) or phi.shape != (n,):
        raise ConfigError(
            f"inconsistent shapes: H {H.shape}, g {g.shape}, phi {phi.shape}")
    v = np.full(k, 1.0 / k)
    s = np.sum(g * phi * (H @ v))
    return (tx_power / noise_power) * (s.real * s.real + s.imag * s.imag)


def rate(snr: float) -> float:
    """Achievable rate log2(1 + snr) in bits/s/Hz."""
    if snr < 0:
        raise ValueError(f"snr must be >= 0, got {snr}")
    return float(np.log2(1.0 + snr))


def pack_observation(real: ChannelRealization) -> np.ndarray:
    """[Re vec(H), Re g, Im vec(H), Im g] with vec in row format."""
    h = real.H.ravel()
    return np.concatenate([h.real, real.g.real, h.imag, real.g.imag])


def unpack_observation(obs: np.ndarray, n: int, k: int) -> ChannelRealization:
    """Exact inverse of pack_observation."""
    obs = np.asarray(obs, dtype=float)
    half = n * (k + 1)
    if obs.shape != (2 * half,):
        raise ConfigError(f"observation length {obs.shape} != {2 * half}")
    re, im = obs[:half], obs[half:]
    H = (re[:n * k] + 1j * im[:n * k]).reshape(n, k)
    g = re[n * k:] + 1j * im[n * k:]
    return ChannelRealization(H=H, g=g)


def observation_dim(n: int, k: int) -> int:
    return 2 * n * (k + 1)


def observation_scale(geom: Geometry, params: ChannelParams) -> np.ndarray:
    """Per-entry RMS of the observation (pathloss / sqrt(2) per block).

    Dividing an observation by this vector standardizes it to roughly unit
    variance, which the agents rely on for trainable input magnitudes.
    """
    import math as _math
    pl_h = pathloss(_math.dist(geom.bs_pos, geom.ris_pos), params.carrier_freq)
    pl_g = pathloss(_math.dist(geom.ris_pos, geom.ue_pos), params.carrier_freq)
    half = np.concatenate([np.full(geom.n * geom.k, pl_h / np.sqrt(2.0)),
                           np.full(geom.n, pl_g / np.sqrt(2.0))])
    return np.concatenate([half, half])


@dataclass
class StepResult:
    reward: float              # bits/s/Hz on the pre-transition channels
    next_observation: np.ndarray
    snr: float                 # linear SNR actually achieved


class RisEnv:
    """Holds the current realization and a channel stream; single-threaded."""

    def __init__(self, geom: Geometry, params: ChannelParams, n_group: int,
                 rng: np.random.Generator):
        if geom.n % n_group != 0:
            raise ConfigError(f"n={geom.n} not divisible by n_group={n_group}")
        self.geom = geom
        self.params = params
        self.n_group = n_group
        self.n_ctrl = geom.n // n_group
        self._rng = rng
        self._current = sample_channels(geom, params, rng)

    @property
    def realization(self) -> ChannelRealization:
        return self._current

    def observation(self) -> np.ndarray:
        return pack_observation(self._current)

    def step(self, bits) -> StepResult:
        bits = np.asarray(bits)
        if bits.shape != (self.n_ctrl,):
            raise ConfigError(
                f"action length {bits.shape} != n_ctrl {self.n_ctrl}")
        phi = action_to_reflection(bits, self.n_group)
        snr = compute_snr(self._current.H, self._current.g, phi,
                          self.params.tx_power, self.params.noise_power)
        reward = rate(snr)
        self._current = sample_channels(self.geom, self.params, self._rng)
        return StepResult(reward=reward,
                          next_observation=pack_observation(self._current),
                          snr=snr)
