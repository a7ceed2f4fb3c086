"""First-order optimizers, elementwise gradient clipping, target soft updates.

Plain SGD is the default everywhere; Adam is opt-in. Updates mutate the
parameter arrays in place and return the same NetworkParams object.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import ConfigError, TrainingDiverged
from .nn import NetworkParams, param_arrays, zeros_like_params


@dataclass
class OptimizerState:
    kind: str                        # "sgd" | "adam"
    learning_rate: float
    clip_range: Optional[Tuple[float, float]] = None
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    m: Optional[NetworkParams] = None   # adam first moments
    v: Optional[NetworkParams] = None   # adam second moments
    t: int = 0

    def __post_init__(self):
        if self.kind not in ("sgd", "adam"):
            raise ConfigError(f"unknown optimizer {self.kind!r}")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be > 0")
        if self.clip_range is not None:
            lo, hi = self.clip_range
            if not lo < hi:
                raise ConfigError(f"bad clip range {self.clip_range}")


def sgd(learning_rate: float,
        clip_range: Optional[Tuple[float, float]] = None) -> OptimizerState:
    return OptimizerState(kind="sgd", learning_rate=learning_rate,
                          clip_range=clip_range)


def adam(learning_rate: float,
         clip_range: Optional[Tuple[float, float]] = None,
         beta1: float = 0.9, beta2: float = 0.999,
         eps: float = 1e-8) -> OptimizerState:
    return OptimizerState(kind="adam", learning_rate=learning_rate,
                          clip_range=clip_range, beta1=beta1, beta2=beta2,
                          eps=eps)


def apply_update(params: NetworkParams, grads: NetworkParams,
                 opt: OptimizerState) -> NetworkParams:
    """One optimizer step down the (clipped) gradient. Mutates params."""
    g_arrays = list(param_arrays(grads))
    p_arrays = list(param_arrays(params))
    if len(g_arrays) != len(p_arrays):
        raise ConfigError("gradient structure does not match parameters")
    for p, g in zip(p_arrays, g_arrays):
        if p.shape != g.shape:
            raise ConfigError(f"gradient shape {g.shape} != parameter shape {p.shape}")
        if not np.all(np.isfinite(g)):
            raise TrainingDiverged("non-finite gradient; update rejected")
    if opt.kind == "sgd":
        for p, g in zip(p_arrays, g_arrays):
            p -= opt.learning_rate * _clipped(g, opt.clip_range)
        return params
    if opt.m is None:
        opt.m = zeros_like_params(params)
        opt.v = zeros_like_params(params)
    opt.t += 1
    bias1 = 1.0 - opt.beta1 ** opt.t
    bias2 = 1.0 - opt.beta2 ** opt.t
    for p, g, m, v in zip(p_arrays, g_arrays,
                          param_arrays(opt.m), param_arrays(opt.v)):
        gc = _clipped(g, opt.clip_range)
        m *= opt.beta1
        m += (1.0 - opt.beta1) * gc
        v *= opt.beta2
        v += (1.0 - opt.beta2) * gc * gc
        p -= opt.learning_rate * (m / bias1) / (np.sqrt(v / bias2) + opt.eps)
    return params


def _clipped(g: np.ndarray, clip_range) -> np.ndarray:
    if clip_range is None:
        return g
    return np.clip(g, clip_range[0], clip_range[1])


def soft_update(target: NetworkParams, online: NetworkParams,
                tau: float) -> NetworkParams:
    """target <- tau*online + (1-tau)*target, elementwise. Mutates target.

    The two-product form keeps tau=0 a bitwise no-op and tau=1 a bitwise copy.
    """
    if not 0.0 <= tau <= 1.0:
        raise ConfigError(f"tau must be in [0,1], got {tau}")
    t_arrays = list(param_arrays(target))
    o_arrays = list(param_arrays(online))
    if len(t_arrays) != len(o_arrays):
        raise ConfigError("target and online parameter structures differ")
    for t, o in zip(t_arrays, o_arrays):
        if t.shape != o.shape:
            raise ConfigError(f"target shape {t.shape} != online shape {o.shape}")
        t[...] = tau * o + (1.0 - tau) * t
    return target
