"""DDPG with its continuous policy output thresholded into RIS bits.

The actor ends in tanh, so each component carries a sign; bit i is set iff
the (noisy, during exploration) output component is positive. The
thresholding is invisible to the learner: the replay buffer stores the
continuous pre-threshold vector, the critic scores (state, continuous
action) pairs, and the actor ascends the critic at its own output.
Exploration adds Ornstein-Uhlenbeck noise with a linearly decaying sigma.
"""

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from ..errors import ConfigError
from ..nn import Network, copy_params
from ..optim import apply_update, soft_update
from ..replay import ReplayBuffer
from .archs import ddpg_actor_spec, ddpg_critic_spec
from .bin_dqn import _make_opt
from .common import eval_forward, scale_obs


def ou_step(x, mu: float, theta: float, sigma: float,
            rng: np.random.Generator) -> np.ndarray:
    """x + theta*(mu - x) + sigma*N(0,1) per component, unit time step."""
    if theta < 0 or sigma < 0:
        raise ConfigError("theta and sigma must be >= 0")
    x = np.asarray(x, dtype=float)
    return x + theta * (mu - x) + sigma * rng.standard_normal(x.shape)


class OuProcess:
    """Mean-reverting exploration noise; sigma decays linearly over steps."""

    def __init__(self, n: int, mu: float = 0.0, theta: float = 0.15,
                 sigma: float = 0.2, sigma_end: Optional[float] = None,
                 decay_steps: int = 0):
        self.mu = mu
        self.theta = theta
        self.sigma_start = sigma
        self.sigma_end = sigma if sigma_end is None else sigma_end
        self.decay_steps = decay_steps
        self.state = np.full(n, float(mu))
        self.t = 0

    def sigma_at(self, t: int) -> float:
        if self.decay_steps <= 0 or t >= self.decay_steps:
            return self.sigma_end
        frac = t / self.decay_steps
        return self.sigma_start + frac * (self.sigma_end - self.sigma_start)

    def step(self, rng: np.random.Generator) -> np.ndarray:
        self.state = ou_step(self.state, self.mu, self.theta,
                             self.sigma_at(self.t), rng)
        self.t += 1
        return self.state

    def reset(self) -> None:
        self.state = np.full_like(self.state, self.mu)


@dataclass(frozen=True)
class BinDdpgHyper:
    critic_lr: float = 0.001
    actor_lr: float = 0.0001
    batch_size: int = 64
    target_period: int = 1
    target_tau: float = 1e-5
    discount: float = 0.9
    replay_capacity: int = 100000
    ou_mu: float = 0.0
    ou_theta: float = 0.15
    ou_sigma: float = 0.2
    ou_sigma_end: float = 0.05
    ou_decay_steps: int = 10000
    dropout: float = 0.2
    optimizer: str = "sgd"

    def validate(self):
        if not 0.0 <= self.discount <= 1.0:
            raise ConfigError(f"discount must be in [0,1], got {self.discount}")
        if self.critic_lr < 0 or self.actor_lr < 0:
            raise ConfigError("learning rates must be >= 0")


class BinDdpgAgent:
    kind = "bin-ddpg"

    def __init__(self, n_ctrl: int, obs_dim: int,
                 hyper: BinDdpgHyper = BinDdpgHyper(),
                 rng: Optional[np.random.Generator] = None,
                 obs_scale: Optional[np.ndarray] = None):
        hyper.validate()
        self.n_ctrl = n_ctrl
        self.obs_dim = obs_dim
        self.hyper = hyper
        self.obs_scale = obs_scale
        self.actor = Network(ddpg_actor_spec(obs_dim, n_ctrl, hyper.dropout),
                             rng=rng)
        self.critic = Network(ddpg_critic_spec(obs_dim, n_ctrl, hyper.dropout),
                              rng=rng)
        self.actor_target = Network(self.actor.spec,
                                    params=copy_params(self.actor.params))
        self.critic_target = Network(self.critic.spec,
                                     params=copy_params(self.critic.params))
        self.actor_target.params.mode = "eval"
        self.critic_target.params.mode = "eval"
        self.actor_opt = _make_opt(hyper.optimizer, hyper.actor_lr, None)
        self.critic_opt = _make_opt(hyper.optimizer, hyper.critic_lr, None)
        self.noise = OuProcess(n_ctrl, mu=hyper.ou_mu, theta=hyper.ou_theta,
                               sigma=hyper.ou_sigma, sigma_end=hyper.ou_sigma_end,
                               decay_steps=hyper.ou_decay_steps)
        self.buffer = ReplayBuffer(hyper.replay_capacity, obs_dim, n_ctrl)
        self.train_steps = 0

    def policy_output(self, obs) -> np.ndarray:
        """Deterministic tanh-bounded actor output (dropout off)."""
        return eval_forward(self.actor, scale_obs(obs, self.obs_scale))["action"]

    def act(self, obs, explore: bool,
            rng: Optional[np.random.Generator] = None):
        """(bits, raw): threshold of the (noisy) continuous policy output."""
        raw = self.policy_output(obs)
        if explore:
            if rng is None:
                raise ConfigError("exploration needs an rng")
            raw = raw + self.noise.step(rng)
        return (raw > 0.0).astype(np.int8), raw

    def greedy_action(self, obs) -> np.ndarray:
        bits, _raw = self.act(obs, explore=False)
        return bits

    def observe(self, obs, raw_action, reward: float, next_obs) -> None:
        self.buffer.push(scale_obs(obs, self.obs_scale),
                         np.asarray(raw_action, float), reward,
                         scale_obs(next_obs, self.obs_scale))

    def _critic_in(self, obs_b, act_b) -> np.ndarray:
        return np.concatenate([obs_b, act_b], axis=1)

    def train_step(self, rng: np.random.Generator):
        """One critic regression + one actor ascent step.

        Returns (critic_loss, actor_objective) or None while the buffer is
        shorter than the batch size.
        """
        batch = self.buffer.sample(self.hyper.batch_size, rng)
        if batch is None:
            return None
        obs_b, act_b, rew_b, next_b = batch
        n_batch = rew_b.size

        next_a = eval_forward(self.actor_target, next_b)["action"]
        q_next = eval_forward(self.critic_target,
                              self._critic_in(next_b, next_a))["value"][:, 0]
        y = rew_b + self.hyper.discount * q_next

        q_pred = self.critic.forward(self._critic_in(obs_b, act_b),
                                     rng)["value"][:, 0]
        err = y - q_pred
        critic_loss = 0.5 * float(np.mean(err * err))
        cgrads, _ = self.critic.backward({"value": (-err / n_batch)[:, None]})
        if self.critic_opt is not None:
            apply_update(self.critic.params, cgrads, self.critic_opt)

        # actor ascends the critic's value at its own continuous output;
        # only the critic's INPUT gradient flows back, its params stay put
        a_pred = self.actor.forward(obs_b, rng)["action"]
        q_actor = eval_forward(self.critic, self._critic_in(obs_b, a_pred))
        actor_objective = float(np.mean(q_actor["value"][:, 0]))
        _discard, dx = self.critic.backward(
            {"value": np.full((n_batch, 1), -1.0 / n_batch)})
        agrads, _ = self.actor.backward({"action": dx[:, self.obs_dim:]})
        if self.actor_opt is not None:
            apply_update(self.actor.params, agrads, self.actor_opt)

        self.train_steps += 1
        if self.train_steps % self.hyper.target_period == 0:
            soft_update(self.actor_target.params, self.actor.params,
                        self.hyper.target_tau)
            soft_update(self.critic_target.params, self.critic.params,
                        self.hyper.target_tau)
        return critic_loss, actor_objective


def make_bin_ddpg(n_ctrl, obs_dim, rng, obs_scale=None,
                  **overrides) -> BinDdpgAgent:
    return BinDdpgAgent(n_ctrl, obs_dim, replace(BinDdpgHyper(), **overrides),
                        rng=rng, obs_scale=obs_scale)
