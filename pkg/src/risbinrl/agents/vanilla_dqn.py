"""Configuration-indexed DQN: one output neuron per RIS configuration.

Time and space grow as 2^n_ctrl, which is the point of comparison against
the binary-decomposed agents; construction refuses n_ctrl beyond a hard cap.
"""

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from ..bits import bits_to_index, index_to_bits
from ..errors import CapacityError
from ..nn import Network, copy_params
from ..optim import apply_update, soft_update
from ..replay import ReplayBuffer
from .archs import vanilla_dqn_spec
from .bin_dqn import _make_opt
from .common import eval_forward, scale_obs

HEAD_CAP = 2 ** 22


@dataclass(frozen=True)
class VanillaDqnHyper:
    learning_rate: float = 0.001
    batch_size: int = 128
    epsilon: float = 0.1
    clip_range: Optional[Tuple[float, float]] = (-1.0, 1.0)
    target_period: int = 1000
    target_tau: float = 0.18
    discount: float = 0.9
    replay_capacity: int = 10000
    dropout: float = 0.2
    optimizer: str = "sgd"
    head_cap: int = HEAD_CAP


class VanillaDqnAgent:
    kind = "dqn"

    def __init__(self, n_ctrl: int, obs_dim: int,
                 hyper: VanillaDqnHyper = VanillaDqnHyper(),
                 rng: Optional[np.random.Generator] = None,
                 obs_scale: Optional[np.ndarray] = None):
        if 2 ** n_ctrl > hyper.head_cap:
            raise CapacityError(
                f"vanilla DQN needs 2^{n_ctrl} output neurons, over the cap "
                f"{hyper.head_cap}; use a binary-action agent instead")
        self.n_ctrl = n_ctrl
        self.n_actions = 2 ** n_ctrl
        self.obs_dim = obs_dim
        self.hyper = hyper
        self.obs_scale = obs_scale
        spec = vanilla_dqn_spec(obs_dim, self.n_actions, hyper.dropout)
        self.online = Network(spec, rng=rng)
        self.target = Network(spec, params=copy_params(self.online.params))
        self.target.params.mode = "eval"
        self.opt = _make_opt(hyper.optimizer, hyper.learning_rate,
                             hyper.clip_range)
        self.buffer = ReplayBuffer(hyper.replay_capacity, obs_dim, n_ctrl)
        self.train_steps = 0

    def q_values(self, obs, net=None) -> np.ndarray:
        target = self.online if net is None else net
        return eval_forward(target, scale_obs(obs, self.obs_scale))["q"]

    def q_value(self, obs, bits) -> float:
        return float(self.q_values(obs)[bits_to_index(bits)])

    def greedy_action(self, obs) -> np.ndarray:
        return index_to_bits(int(np.argmax(self.q_values(obs))), self.n_ctrl)

    def act(self, obs, rng: np.random.Generator) -> np.ndarray:
        if rng.random() < self.hyper.epsilon:
            return index_to_bits(int(rng.integers(0, self.n_actions)),
                                 self.n_ctrl)
        return self.greedy_action(obs)

    def observe(self, obs, bits, reward: float, next_obs) -> None:
        self.buffer.push(scale_obs(obs, self.obs_scale), np.asarray(bits, float),
                         reward, scale_obs(next_obs, self.obs_scale))

    def train_step(self, rng: np.random.Generator) -> Optional[float]:
        batch = self.buffer.sample(self.hyper.batch_size, rng)
        if batch is None:
            return None
        obs_b, act_b, rew_b, next_b = batch
        idx = np.array([bits_to_index(a) for a in act_b])
        max_next = eval_forward(self.target, next_b)["q"].max(axis=1)
        y = rew_b + self.hyper.discount * max_next
        outs = self.online.forward(obs_b, rng)
        rows = np.arange(idx.size)
        q_sa = outs["q"][rows, idx]
        err = y - q_sa
        loss = 0.5 * float(np.mean(err * err))
        g = np.zeros_like(outs["q"])
        g[rows, idx] = -err / err.size
        grads, _ = self.online.backward({"q": g})
        if self.opt is not None:
            apply_update(self.online.params, grads, self.opt)
        self.train_steps += 1
        if self.train_steps % self.hyper.target_period == 0:
            soft_update(self.target.params, self.online.params,
                        self.hyper.target_tau)
        return loss


def make_vanilla_dqn(n_ctrl, obs_dim, rng, obs_scale=None,
                     **overrides) -> VanillaDqnAgent:
    return VanillaDqnAgent(n_ctrl, obs_dim,
                           replace(VanillaDqnHyper(), **overrides),
                           rng=rng, obs_scale=obs_scale)
