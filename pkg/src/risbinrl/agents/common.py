"""Helpers shared by the agents."""

import numpy as np


def eval_forward(net, x) -> dict:
    """Forward pass with dropout disabled, restoring the previous mode."""
    prev = net.params.mode
    net.params.mode = "eval"
    try:
        return net.forward(x)
    finally:
        net.params.mode = prev


def scale_obs(obs, obs_scale):
    """Standardize observations by the per-entry RMS vector, when given."""
    if obs_scale is None:
        return np.asarray(obs, dtype=float)
    return np.asarray(obs, dtype=float) / obs_scale
