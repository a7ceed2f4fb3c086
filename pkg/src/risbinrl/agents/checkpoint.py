"""Lossless agent checkpoints: one .npz with a versioned JSON header.

Stores network specs, all parameter arrays (online + target copies),
optimizer state, the train-step counter, and for bin-DDPG the exploration
noise state. Round-trips are exact at 64-bit precision.
"""

import dataclasses
import json

import numpy as np

from ..errors import ConfigError
from ..nn import LayerSpec, Network, NetworkParams, NetworkSpec
from ..optim import OptimizerState
from .bin_ddpg import BinDdpgAgent, BinDdpgHyper
from .bin_dqn import BinDqnAgent, BinDqnHyper
from .vanilla_dqn import VanillaDqnAgent, VanillaDqnHyper

FORMAT = "risbinrl-checkpoint"
VERSION = 1

_AGENTS = {
    "bin-dqn": (BinDqnAgent, BinDqnHyper),
    "dqn": (VanillaDqnAgent, VanillaDqnHyper),
    "bin-ddpg": (BinDdpgAgent, BinDdpgHyper),
}


def _spec_to_dict(spec: NetworkSpec) -> dict:
    return {"input_dim": spec.input_dim,
            "layers": [dataclasses.asdict(l) for l in spec.layers],
            "heads": [list(h) for h in spec.heads]}


def _spec_from_dict(d: dict) -> NetworkSpec:
    return NetworkSpec(input_dim=d["input_dim"],
                       layers=tuple(LayerSpec(**l) for l in d["layers"]),
                       heads=tuple(tuple(h) for h in d["heads"]))


def _params_arrays(prefix: str, params: NetworkParams) -> dict:
    out = {}
    for i, entry in enumerate(params.layers):
        for key, arr in entry.items():
            out[f"{prefix}.layers.{i}.{key}"] = arr
    for i, entry in enumerate(params.heads):
        for key, arr in entry.items():
            out[f"{prefix}.heads.{i}.{key}"] = arr
    return out


def _params_from_arrays(prefix: str, ref: NetworkParams, data) -> NetworkParams:
    layers = [{k: np.array(data[f"{prefix}.layers.{i}.{k}"]) for k in entry}
              for i, entry in enumerate(ref.layers)]
    heads = [{k: np.array(data[f"{prefix}.heads.{i}.{k}"]) for k in entry}
             for i, entry in enumerate(ref.heads)]
    return NetworkParams(layers=layers, heads=heads, mode=ref.mode)


def _opt_meta(opt) -> dict:
    if opt is None:
        return {"kind": "none"}
    return {"kind": opt.kind, "learning_rate": opt.learning_rate,
            "clip_range": list(opt.clip_range) if opt.clip_range else None,
            "beta1": opt.beta1, "beta2": opt.beta2, "eps": opt.eps, "t": opt.t}


def _opt_arrays(prefix: str, opt) -> dict:
    if opt is None or opt.kind != "adam" or opt.m is None:
        return {}
    return {**_params_arrays(f"{prefix}.m", opt.m),
            **_params_arrays(f"{prefix}.v", opt.v)}


def _restore_opt(meta: dict, prefix: str, ref_params, data):
    if meta["kind"] == "none":
        return None
    opt = OptimizerState(
        kind=meta["kind"], learning_rate=meta["learning_rate"],
        clip_range=tuple(meta["clip_range"]) if meta["clip_range"] else None,
        beta1=meta["beta1"], beta2=meta["beta2"], eps=meta["eps"])
    opt.t = meta["t"]
    if opt.kind == "adam" and f"{prefix}.m.heads.0.W" in data:
        opt.m = _params_from_arrays(f"{prefix}.m", ref_params, data)
        opt.v = _params_from_arrays(f"{prefix}.v", ref_params, data)
    return opt


def save_agent(path, agent) -> None:
    if agent.kind not in _AGENTS:
        raise ConfigError(f"unknown agent kind {agent.kind!r}")
    meta = {"format": FORMAT, "version": VERSION, "agent": agent.kind,
            "n_ctrl": agent.n_ctrl, "obs_dim": agent.obs_dim,
            "hyper": dataclasses.asdict(agent.hyper),
            "train_steps": agent.train_steps,
            "has_obs_scale": agent.obs_scale is not None}
    arrays = {}
    if agent.obs_scale is not None:
        arrays["obs_scale"] = np.asarray(agent.obs_scale)
    if agent.kind == "bin-ddpg":
        meta["actor_spec"] = _spec_to_dict(agent.actor.spec)
        meta["critic_spec"] = _spec_to_dict(agent.critic.spec)
        meta["actor_opt"] = _opt_meta(agent.actor_opt)
        meta["critic_opt"] = _opt_meta(agent.critic_opt)
        meta["noise_t"] = agent.noise.t
        arrays["noise_state"] = agent.noise.state
        for prefix, net in (("actor", agent.actor), ("critic", agent.critic),
                            ("actor_target", agent.actor_target),
                            ("critic_target", agent.critic_target)):
            arrays.update(_params_arrays(prefix, net.params))
        arrays.update(_opt_arrays("actor_opt", agent.actor_opt))
        arrays.update(_opt_arrays("critic_opt", agent.critic_opt))
    else:
        meta["spec"] = _spec_to_dict(agent.online.spec)
        meta["opt"] = _opt_meta(agent.opt)
        arrays.update(_params_arrays("online", agent.online.params))
        arrays.update(_params_arrays("target", agent.target.params))
        arrays.update(_opt_arrays("opt", agent.opt))
    np.savez(path, meta=np.str_(json.dumps(meta)), **arrays)


def load_agent(path):
    with np.load(path, allow_pickle=False) as data:
        meta = json.loads(str(data["meta"]))
        if meta.get("format") != FORMAT:
            raise ConfigError(f"{path} is not a {FORMAT} file")
        if meta.get("version") != VERSION:
            raise ConfigError(f"unsupported checkpoint version {meta.get('version')}")
        cls, hyper_cls = _AGENTS[meta["agent"]]
        hyper_kw = dict(meta["hyper"])
        if "clip_range" in hyper_kw and hyper_kw["clip_range"] is not None:
            hyper_kw["clip_range"] = tuple(hyper_kw["clip_range"])
        hyper = hyper_cls(**hyper_kw)
        obs_scale = np.array(data["obs_scale"]) if meta["has_obs_scale"] else None
        agent = cls(meta["n_ctrl"], meta["obs_dim"], hyper,
                    rng=np.random.default_rng(0), obs_scale=obs_scale)
        agent.train_steps = meta["train_steps"]
        if meta["agent"] == "bin-ddpg":
            for prefix, net in (("actor", agent.actor), ("critic", agent.critic),
                                ("actor_target", agent.actor_target),
                                ("critic_target", agent.critic_target)):
                net.params = _params_from_arrays(prefix, net.params, data)
            agent.actor_opt = _restore_opt(meta["actor_opt"], "actor_opt",
                                           agent.actor.params, data)
            agent.critic_opt = _restore_opt(meta["critic_opt"], "critic_opt",
                                            agent.critic.params, data)
            agent.noise.state = np.array(data["noise_state"])
            agent.noise.t = meta["noise_t"]
        else:
            agent.online.params = _params_from_arrays("online",
                                                      agent.online.params, data)
            agent.target.params = _params_from_arrays("target",
                                                      agent.target.params, data)
            agent.opt = _restore_opt(meta["opt"], "opt", agent.online.params,
                                     data)
    return agent
