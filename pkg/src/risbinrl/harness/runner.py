"""Seeded training/evaluation runs and N-sweeps.

Every stochastic ingredient of a run draws from its own named stream
derived from (seed, labels), so a (config, seed) cell reproduces bitwise.
The evaluation channel stream depends only on (seed, N, K, n_group) -- not
on the agent -- so every agent and baseline in the same cell is scored on
the identical channel sequence (common random numbers). Evaluation runs
the greedy policy with exploration and dropout off and performs no updates.
"""

import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from multiprocessing import get_context
from typing import Callable, List, Optional

import numpy as np

from ..agents import make_bin_ddpg, make_bin_dqn, make_vanilla_dqn
from ..baselines import exhaustive_search, random_action
from ..channel import ChannelParams, Geometry, db_to_linear, dbm_to_watt
from ..env import RisEnv, observation_dim, observation_scale, unpack_observation
from ..errors import ConfigError, TrainingDiverged
from ..rngstreams import stream
from .config import AGENT_KINDS, ALL_KINDS, ExperimentConfig
from .csvio import RunRecord, append_row, existing_keys

log = logging.getLogger("risbinrl")

THREADS_ENV = "RISBINRL_THREADS"


def build_geometry(cfg: ExperimentConfig, n: int) -> Geometry:
    return Geometry(n=n, k=cfg.k, bs_pos=cfg.bs_pos, ue_pos=cfg.ue_pos,
                    ris_pos=cfg.ris_pos)


def build_channel_params(cfg: ExperimentConfig) -> ChannelParams:
    return ChannelParams(carrier_freq=cfg.carrier_freq_hz,
                         tx_power=dbm_to_watt(cfg.tx_power_dbm),
                         noise_power=dbm_to_watt(cfg.noise_power_dbm),
                         ricean_kappa=db_to_linear(cfg.ricean_kappa_db))


def _overrides(cfg: ExperimentConfig, kind: str) -> dict:
    """Config fields that override an agent's own defaults (non-None only)."""
    common = {"discount": cfg.discount, "batch_size": cfg.batch_size,
              "target_period": cfg.target_period, "target_tau": cfg.target_tau,
              "replay_capacity": cfg.replay_capacity, "dropout": cfg.dropout,
              "optimizer": cfg.optimizer}
    if kind == "bin-ddpg":
        common.update({"critic_lr": cfg.value_lr, "actor_lr": cfg.policy_lr,
                       "ou_mu": cfg.ou_mu, "ou_theta": cfg.ou_theta,
                       "ou_sigma": cfg.ou_sigma,
                       "ou_sigma_end": cfg.ou_sigma_end,
                       "ou_decay_steps": cfg.train_steps})
    else:
        common.update({"learning_rate": cfg.value_lr, "epsilon": cfg.epsilon})
    return {k: v for k, v in common.items() if v is not None}


def make_agent(kind: str, cfg: ExperimentConfig, n: int, seed: int):
    geom = build_geometry(cfg, n)
    params = build_channel_params(cfg)
    n_ctrl = n // cfg.n_group
    obs_dim = observation_dim(n, cfg.k)
    scale = observation_scale(geom, params) if cfg.obs_scaling else None
    rng = stream(seed, "init", kind, n, cfg.k, cfg.n_group)
    factory = {"bin-dqn": make_bin_dqn, "bin-ddpg": make_bin_ddpg,
               "dqn": make_vanilla_dqn}[kind]
    return factory(n_ctrl, obs_dim, rng, obs_scale=scale,
                   **_overrides(cfg, kind))


def train_agent(agent, cfg: ExperimentConfig, n: int, seed: int) -> None:
    geom = build_geometry(cfg, n)
    params = build_channel_params(cfg)
    env = RisEnv(geom, params, cfg.n_group,
                 stream(seed, "train-chan", n, cfg.k, cfg.n_group))
    explore = stream(seed, "explore", agent.kind, n, cfg.k, cfg.n_group)
    learn = stream(seed, "learn", agent.kind, n, cfg.k, cfg.n_group)
    obs = env.observation()
    for t in range(cfg.train_steps):
        if agent.kind == "bin-ddpg":
            bits, stored = agent.act(obs, explore=True, rng=explore)
        else:
            bits = agent.act(obs, explore)
            stored = bits
        result = env.step(bits)
        agent.observe(obs, stored, result.reward, result.next_observation)
        out = agent.train_step(learn)
        if out is not None:
            losses = out if isinstance(out, tuple) else (out,)
            if not all(math.isfinite(v) for v in losses):
                raise TrainingDiverged(
                    f"non-finite loss {losses} at step {t} "
                    f"(agent={agent.kind}, n={n}, seed={seed})")
        obs = result.next_observation


def evaluate_policy(policy: Callable, cfg: ExperimentConfig, n: int,
                    seed: int) -> np.ndarray:
    """Per-step achievable rates of a policy on the shared eval sequence."""
    geom = build_geometry(cfg, n)
    params = build_channel_params(cfg)
    env = RisEnv(geom, params, cfg.n_group,
                 stream(seed, "eval-chan", n, cfg.k, cfg.n_group))
    obs = env.observation()
    rates = np.empty(cfg.eval_steps)
    for t in range(cfg.eval_steps):
        result = env.step(policy(obs))
        rates[t] = result.reward
        obs = result.next_observation
    return rates


def _policy_for(kind: str, cfg: ExperimentConfig, n: int, seed: int,
                agent=None) -> Callable:
    n_ctrl = n // cfg.n_group
    params = build_channel_params(cfg)
    if kind in AGENT_KINDS:
        return agent.greedy_action
    if kind == "random":
        rng = stream(seed, "baseline", "random", n, cfg.k, cfg.n_group)
        return lambda obs: random_action(n_ctrl, rng)
    if kind == "exhaustive":
        def oracle_policy(obs):
            real = unpack_observation(obs, n, cfg.k)
            return exhaustive_search(real.H, real.g, params.tx_power,
                                     params.noise_power, cfg.n_group,
                                     cap=cfg.oracle_cap).best_action
        return oracle_policy
    raise ConfigError(f"unknown agent kind {kind!r}")


def run_single(cfg: ExperimentConfig, agent_kind: str, n: int,
               seed: int) -> RunRecord:
    """Train (if a DRL agent) then evaluate greedily on fresh channels."""
    if agent_kind not in ALL_KINDS:
        raise ConfigError(f"unknown agent kind {agent_kind!r}")
    if n % cfg.n_group != 0:
        raise ConfigError(f"N={n} not divisible by n_group={cfg.n_group}")
    t0 = time.perf_counter()
    agent = None
    if agent_kind in AGENT_KINDS:
        agent = make_agent(agent_kind, cfg, n, seed)
        train_agent(agent, cfg, n, seed)
    rates = evaluate_policy(_policy_for(agent_kind, cfg, n, seed, agent),
                            cfg, n, seed)
    return RunRecord(agent=agent_kind, n=n, k=cfg.k, n_group=cfg.n_group,
                     seed=seed, train_steps=cfg.train_steps,
                     eval_steps=cfg.eval_steps,
                     mean_rate=float(rates.mean()),
                     std_rate=float(rates.std()),
                     wall_time_s=time.perf_counter() - t0)


def _run_cell(args):
    cfg, agent_kind, n, seed = args
    return run_single(cfg, agent_kind, n, seed)


def sweep_cells(cfg: ExperimentConfig) -> List[tuple]:
    if not cfg.n_values:
        raise ConfigError("sweep needs a nonempty N list")
    return [(agent, n, seed) for agent in cfg.agents
            for n in cfg.n_values for seed in cfg.seeds]


def run_sweep(cfg: ExperimentConfig, out_csv: Optional[str] = None,
              on_record: Optional[Callable] = None) -> List[RunRecord]:
    """Cartesian product of agents x N x seeds, resumable through the CSV.

    Completed cells already present in out_csv are skipped. Each finished
    run is appended immediately; per-run failures are logged and the sweep
    continues. RISBINRL_THREADS caps the worker-process count (default 1).
    """
    cells = sweep_cells(cfg)
    done = existing_keys(out_csv) if out_csv else set()
    todo = [c for c in cells
            if (c[0], c[1], cfg.k, cfg.n_group, c[2], cfg.train_steps,
                cfg.eval_steps) not in done]
    workers = max(1, int(os.environ.get(THREADS_ENV, "1")))
    records: List[RunRecord] = []

    def finish(rec: RunRecord):
        records.append(rec)
        if out_csv:
            append_row(out_csv, rec)
        if on_record:
            on_record(rec)

    if workers == 1 or len(todo) <= 1:
        for agent_kind, n, seed in todo:
            try:
                finish(run_single(cfg, agent_kind, n, seed))
            except Exception:
                log.exception("run failed: agent=%s n=%d seed=%d",
                              agent_kind, n, seed)
        return records

    os.environ.setdefault("OMP_NUM_THREADS", "1")
    ctx = get_context("spawn")
    with ProcessPoolExecutor(max_workers=min(workers, len(todo)),
                             mp_context=ctx) as pool:
        futures = {pool.submit(_run_cell, (cfg, a, n, s)): (a, n, s)
                   for a, n, s in todo}
        for fut in as_completed(futures):
            agent_kind, n, seed = futures[fut]
            try:
                finish(fut.result())
            except Exception:
                log.exception("run failed: agent=%s n=%d seed=%d",
                              agent_kind, n, seed)
    return records


@dataclass(frozen=True)
class AggregateRow:
    agent: str
    n: int
    mean_rate: float    # mean across seeds of the per-run means
    std_rate: float     # std across seeds (population)
    seeds: int


def aggregate(records: List[RunRecord]) -> List[AggregateRow]:
    if not records:
        return []
    groups = {}
    for rec in records:
        groups.setdefault((rec.agent, rec.n), []).append(rec.mean_rate)
    return [AggregateRow(agent=agent, n=n,
                         mean_rate=float(np.mean(vals)),
                         std_rate=float(np.std(vals)), seeds=len(vals))
            for (agent, n), vals in sorted(groups.items())]
