"""Experiment configuration: flat key-value files, presets, per-agent defaults.

Config files are flat JSON objects whose keys match the ExperimentConfig
field names; CLI flags override file values. Agent hyperparameters default
to the published per-agent values and are only overridden when a field is
set explicitly (non-None).
"""

import dataclasses
import json
from dataclasses import dataclass, field
from typing import Optional

from ..errors import ConfigError

AGENT_KINDS = ("bin-dqn", "bin-ddpg", "dqn")
BASELINE_KINDS = ("random", "exhaustive")
ALL_KINDS = AGENT_KINDS + BASELINE_KINDS


@dataclass
class ExperimentConfig:
    agents: tuple = ("bin-dqn",)
    n_values: tuple = (8,)
    k: int = 4
    n_group: int = 1
    train_steps: int = 10000
    eval_steps: int = 1500
    seeds: tuple = (0,)
    # channel / geometry
    carrier_freq_hz: float = 5.0e9
    tx_power_dbm: float = 40.0
    noise_power_dbm: float = -100.0
    ricean_kappa_db: float = 30.0
    bs_pos: tuple = (10.0, 5.0, 2.0)
    ue_pos: tuple = (8.7, 14.4, 1.6)
    ris_pos: tuple = (7.5, 13.0, 2.0)
    # agent hyperparameters; None keeps each agent's own default
    discount: Optional[float] = None
    value_lr: Optional[float] = None
    policy_lr: Optional[float] = None
    batch_size: Optional[int] = None
    epsilon: Optional[float] = None
    target_period: Optional[int] = None
    target_tau: Optional[float] = None
    replay_capacity: Optional[int] = None
    dropout: Optional[float] = None
    optimizer: Optional[str] = None
    ou_mu: Optional[float] = None
    ou_theta: Optional[float] = None
    ou_sigma: Optional[float] = None
    ou_sigma_end: Optional[float] = None
    obs_scaling: bool = True
    oracle_cap: int = 22

    def __post_init__(self):
        self.agents = tuple(self.agents)
        self.n_values = tuple(int(n) for n in self.n_values)
        self.seeds = tuple(int(s) for s in self.seeds)
        self.bs_pos = tuple(self.bs_pos)
        self.ue_pos = tuple(self.ue_pos)
        self.ris_pos = tuple(self.ris_pos)
        for agent in self.agents:
            if agent not in ALL_KINDS:
                raise ConfigError(
                    f"unknown agent {agent!r}; choose from {ALL_KINDS}")
        if self.n_group < 1:
            raise ConfigError("n_group must be >= 1")
        for n in self.n_values:
            if n % self.n_group != 0:
                raise ConfigError(f"N={n} not divisible by n_group={self.n_group}")
        if self.train_steps < 0 or self.eval_steps < 1:
            raise ConfigError("need train_steps >= 0 and eval_steps >= 1")

    @classmethod
    def from_mapping(cls, mapping: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(mapping) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**mapping)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: not valid flat JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be a JSON object")
        return cls.from_mapping(data)

    def replace(self, **kwargs) -> "ExperimentConfig":
        return dataclasses.replace(self, **kwargs)


def small_sweep() -> ExperimentConfig:
    """Low-to-moderate sizes: N in 10..110 step 10, groups of 5 elements,
    all agents plus both baselines (exhaustive search stays tractable)."""
    return ExperimentConfig(
        agents=("bin-dqn", "bin-ddpg", "dqn", "random", "exhaustive"),
        n_values=tuple(range(10, 111, 10)),
        n_group=5, train_steps=10000, eval_steps=1500, seeds=(0, 1, 2))


def large_sweep() -> ExperimentConfig:
    """Moderate-to-large sizes: perfect-square N up to 1500, no grouping,
    longer training; exhaustive search and vanilla DQN are infeasible here."""
    return ExperimentConfig(
        agents=("bin-dqn", "bin-ddpg", "random"),
        n_values=tuple(i * i for i in range(10, 39)),
        n_group=1, train_steps=20000, eval_steps=1500, seeds=(0, 1, 2))


PRESETS = {"small": small_sweep, "large": large_sweep}
