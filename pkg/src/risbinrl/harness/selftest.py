"""Fast invariant suite behind the `selftest` subcommand.

Each check is a pared-down version of one of the package's correctness
contracts; the whole suite runs in a few seconds.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from .. import nn
from ..agents import make_bin_dqn
from ..baselines import exhaustive_search, random_action
from ..bits import all_actions, complement
from ..channel import ChannelParams, Geometry, pathloss, sample_channels, sample_ricean
from ..env import compute_snr, pack_observation, rate, unpack_observation
from ..optim import soft_update
from .config import ExperimentConfig
from .runner import run_single


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check_decomposition(rng) -> CheckResult:
    n_ctrl, worst = 8, 0.0
    actions = all_actions(n_ctrl)
    for trial in range(50):
        agent = make_bin_dqn(n_ctrl, 16, rng)
        obs = rng.standard_normal(16)
        greedy = agent.q_value(obs, agent.greedy_action(obs))
        brute = max(agent.q_value(obs, a) for a in actions)
        worst = max(worst, abs(greedy - brute))
        if greedy != brute:
            return CheckResult("decomposition-argmax", False,
                               f"trial {trial}: {greedy} != {brute}")
    return CheckResult("decomposition-argmax", True,
                       f"50 networks, max |diff| = {worst}")


def _check_gradients(rng) -> CheckResult:
    worst = 0.0
    for _ in range(5):
        spec = nn.NetworkSpec(
            input_dim=6,
            layers=(nn.dense(8), nn.activation("tanh"), nn.dense(8),
                    nn.activation("relu")),
            heads=(("out", 3),))
        net = nn.Network(spec, rng=rng)
        net.params.mode = "eval"
        x = rng.standard_normal(6)
        c = rng.standard_normal(3)
        net.forward(x)
        grads, _ = net.backward({"out": c})
        theta = nn.flatten_params(net.params)
        flat = nn.flatten_params(grads)
        fd = np.empty_like(theta)
        for i in range(theta.size):
            for sgn, slot in ((1.0, 0), (-1.0, 1)):
                vec = theta.copy()
                vec[i] += sgn * 1e-6
                nn.assign_flat(net.params, vec)
                val = float(np.dot(c, net.forward(x)["out"]))
                fd[i] = val if slot == 0 else (fd[i] - val) / 2e-6
        nn.assign_flat(net.params, theta)
        rel = np.linalg.norm(fd - flat) / max(np.linalg.norm(fd), 1e-12)
        worst = max(worst, rel)
    ok = worst <= 1e-4
    return CheckResult("gradient-check", ok, f"max relative error {worst:.3e}")


def _check_soft_update(rng) -> CheckResult:
    spec = nn.NetworkSpec(input_dim=3, layers=(nn.dense(4),), heads=(("y", 2),))
    online = nn.init_params(spec, rng)
    for tau, expect_online in ((1.0, True), (0.0, False)):
        target = nn.init_params(spec, rng)
        before = nn.flatten_params(target).copy()
        soft_update(target, online, tau)
        want = nn.flatten_params(online) if expect_online else before
        if not np.array_equal(nn.flatten_params(target), want):
            return CheckResult("soft-update-endpoints", False, f"tau={tau}")
    return CheckResult("soft-update-endpoints", True, "tau in {0,1} exact")


def _check_oracle(rng) -> CheckResult:
    geom = Geometry(n=6, k=2)
    params = ChannelParams()
    for trial in range(30):
        real = sample_channels(geom, params, rng)
        res = exhaustive_search(real.H, real.g, params.tx_power,
                                params.noise_power, 1)
        rnd = random_action(6, rng)
        rnd_rate = rate(compute_snr(real.H, real.g,
                                    1.0 - 2.0 * rnd.astype(float),
                                    params.tx_power, params.noise_power))
        comp_rate = rate(compute_snr(
            real.H, real.g, 1.0 - 2.0 * complement(res.best_action).astype(float),
            params.tx_power, params.noise_power))
        if res.best_rate < rnd_rate or comp_rate != res.best_rate:
            return CheckResult("oracle-dominance", False, f"trial {trial}")
        naive = exhaustive_search(real.H, real.g, params.tx_power,
                                  params.noise_power, 1, gray=False)
        if (naive.best_rate != res.best_rate
                or not np.array_equal(naive.best_action, res.best_action)):
            return CheckResult("oracle-dominance", False,
                               f"gray/naive mismatch at trial {trial}")
    return CheckResult("oracle-dominance", True,
                       "30 realizations: dominance, complement tie, gray==naive")


def _check_channel_stats(rng) -> CheckResult:
    gain = pathloss(1.0, 5e9)
    want = 0.06 / (4 * np.pi)
    if abs(gain - want) > 1e-12:
        return CheckResult("channel-stats", False, f"pathloss {gain} != {want}")
    draws = 20000
    los = np.ones(draws)
    for kappa in (0.0, 1000.0):
        h = sample_ricean(los, kappa, 1.0, rng)
        power = np.abs(h) ** 2
        se = power.std() / np.sqrt(draws)
        if abs(power.mean() - 1.0) > 3 * se:
            return CheckResult("channel-stats", False,
                               f"kappa={kappa}: E|h|^2 = {power.mean():.4f}")
    return CheckResult("channel-stats", True,
                       "FSPL formula and Ricean power split hold")


def _check_observation(rng) -> CheckResult:
    geom = Geometry(n=5, k=3)
    real = sample_channels(geom, ChannelParams(), rng)
    back = unpack_observation(pack_observation(real), 5, 3)
    ok = np.array_equal(back.H, real.H) and np.array_equal(back.g, real.g)
    return CheckResult("observation-roundtrip", ok,
                       "exact" if ok else "H or g did not round-trip")


def _check_determinism(_rng) -> CheckResult:
    cfg = ExperimentConfig(agents=("bin-dqn",), n_values=(4,), k=2,
                           train_steps=30, eval_steps=10)
    a = run_single(cfg, "bin-dqn", 4, 123)
    b = run_single(cfg, "bin-dqn", 4, 123)
    ok = (a.mean_rate == b.mean_rate and a.std_rate == b.std_rate)
    return CheckResult("run-determinism", ok,
                       f"mean {a.mean_rate:.6f} reproduced" if ok
                       else f"{a.mean_rate} != {b.mean_rate}")


def run_selftest(seed: int = 0) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    checks = [_check_decomposition, _check_gradients, _check_soft_update,
              _check_oracle, _check_channel_stats, _check_observation,
              _check_determinism]
    return [check(rng) for check in checks]
