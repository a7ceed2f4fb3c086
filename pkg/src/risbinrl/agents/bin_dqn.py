"""Q-learning over binary action vectors via the additive decomposition

    Q(s, a) = q0(s) + a^T q(s)

realized by a dual-head network: a scalar head q0 and a per-bit head q of
length n_ctrl. The greedy action activates exactly the bits with positive
q components, which maximizes Q(s, a) over all 2^n_ctrl actions without
enumeration; the greedy value has the closed form q0 + sum(max(q_i, 0)).
"""

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from ..errors import ConfigError
from ..nn import Network, copy_params
from ..optim import adam, apply_update, sgd, soft_update
from ..replay import ReplayBuffer
from .archs import bin_dqn_spec
from .common import eval_forward, scale_obs


@dataclass(frozen=True)
class BinDqnHyper:
    learning_rate: float = 0.01
    batch_size: int = 128
    epsilon: float = 0.1
    clip_range: Optional[Tuple[float, float]] = (-1.0, 1.0)
    target_period: int = 2000
    target_tau: float = 0.05
    discount: float = 0.9
    replay_capacity: int = 10000
    dropout: float = 0.2
    optimizer: str = "sgd"

    def validate(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ConfigError(f"epsilon must be in [0,1], got {self.epsilon}")
        if not 0.0 <= self.discount <= 1.0:
            raise ConfigError(f"discount must be in [0,1], got {self.discount}")
        if self.learning_rate < 0:
            raise ConfigError("learning_rate must be >= 0")
        if self.target_period < 1:
            raise ConfigError("target_period must be >= 1")


def _make_opt(kind: str, lr: float, clip):
    # lr == 0 means "no updates"; the optimizer itself still requires lr > 0
    if lr == 0:
        return None
    if kind == "adam":
        return adam(lr, clip_range=clip)
    return sgd(lr, clip_range=clip)


class BinDqnAgent:
    kind = "bin-dqn"

    def __init__(self, n_ctrl: int, obs_dim: int,
                 hyper: BinDqnHyper = BinDqnHyper(),
                 rng: Optional[np.random.Generator] = None,
                 obs_scale: Optional[np.ndarray] = None,
                 spec=None):
        hyper.validate()
        self.n_ctrl = n_ctrl
        self.obs_dim = obs_dim
        self.hyper = hyper
        self.obs_scale = obs_scale
        spec = spec if spec is not None else bin_dqn_spec(obs_dim, n_ctrl,
                                                          hyper.dropout)
        self.online = Network(spec, rng=rng)
        self.target = Network(spec, params=copy_params(self.online.params))
        self.target.params.mode = "eval"
        self.opt = _make_opt(hyper.optimizer, hyper.learning_rate,
                             hyper.clip_range)
        self.buffer = ReplayBuffer(hyper.replay_capacity, obs_dim, n_ctrl)
        self.train_steps = 0

    def _heads(self, obs, net) -> Tuple[float, np.ndarray]:
        outs = eval_forward(net, scale_obs(obs, self.obs_scale))
        return float(outs["q0"][0]), outs["q"]

    def q_components(self, obs) -> Tuple[float, np.ndarray]:
        """(q0, q) of the online network, dropout off."""
        return self._heads(obs, self.online)

    def q_value(self, obs, bits) -> float:
        """Q(s, a) = q0 + sum of q over the active bits."""
        bits = np.asarray(bits)
        if bits.shape != (self.n_ctrl,):
            raise ConfigError(f"action shape {bits.shape} != ({self.n_ctrl},)")
        q0, q = self.q_components(obs)
        return q0 + float(np.sum(q[bits > 0.5]))

    def greedy_action(self, obs) -> np.ndarray:
        """Bit i set iff q_i(s) > 0 (exact zeros stay off)."""
        _q0, q = self.q_components(obs)
        return (q > 0.0).astype(np.int8)

    def max_q(self, obs, net=None) -> float:
        """max_a Q(s, a) = q0 + sum(max(q_i, 0)); defaults to the target net."""
        q0, q = self._heads(obs, self.target if net is None else net)
        return q0 + float(np.sum(q[q > 0.0]))

    def act(self, obs, rng: np.random.Generator) -> np.ndarray:
        """Epsilon-greedy: all bits redrawn IID Bernoulli(1/2) on explore."""
        if rng.random() < self.hyper.epsilon:
            return rng.integers(0, 2, size=self.n_ctrl).astype(np.int8)
        return self.greedy_action(obs)

    def observe(self, obs, bits, reward: float, next_obs) -> None:
        self.buffer.push(scale_obs(obs, self.obs_scale), np.asarray(bits, float),
                         reward, scale_obs(next_obs, self.obs_scale))

    def train_step(self, rng: np.random.Generator) -> Optional[float]:
        """One TD regression step on a uniform batch; None if buffer is short."""
        batch = self.buffer.sample(self.hyper.batch_size, rng)
        if batch is None:
            return None
        obs_b, act_b, rew_b, next_b = batch
        t_out = eval_forward(self.target, next_b)
        max_next = t_out["q0"][:, 0] + np.maximum(t_out["q"], 0.0).sum(axis=1)
        y = rew_b + self.hyper.discount * max_next
        outs = self.online.forward(obs_b, rng)
        q_sa = outs["q0"][:, 0] + (outs["q"] * act_b).sum(axis=1)
        err = y - q_sa
        loss = 0.5 * float(np.mean(err * err))
        scale = -err / err.size
        grads, _ = self.online.backward({"q0": scale[:, None],
                                         "q": scale[:, None] * act_b})
        if self.opt is not None:
            apply_update(self.online.params, grads, self.opt)
        self.train_steps += 1
        if self.train_steps % self.hyper.target_period == 0:
            soft_update(self.target.params, self.online.params,
                        self.hyper.target_tau)
        return loss


def make_bin_dqn(n_ctrl, obs_dim, rng, obs_scale=None, **overrides) -> BinDqnAgent:
    return BinDqnAgent(n_ctrl, obs_dim, replace(BinDqnHyper(), **overrides),
                       rng=rng, obs_scale=obs_scale)
