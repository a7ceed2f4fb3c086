"""Default network architectures for the three agents.

The Q networks use two conv1d(64, kernel 5) + maxpool1d(5) stages over the
flattened observation, then five dense(100) layers, relu activations and
dropout after each hidden dense layer. Observations too short for the conv
stack (small N*K) fall back to the dense trunk alone. The bin-DDPG actor and
critic are three dense(400) layers; the actor head is tanh so its codomain
covers both signs.
"""

from ..errors import ConfigError
from ..nn import (NetworkSpec, activation, conv1d, dense, dropout, maxpool1d)

CONV_CHANNELS = 64
CONV_KERNEL = 5
POOL_KERNEL = 5
Q_DENSE_LAYERS = 5
Q_DENSE_UNITS = 100
DDPG_DENSE_LAYERS = 3
DDPG_DENSE_UNITS = 400


def _conv_stack():
    return [conv1d(CONV_CHANNELS, CONV_KERNEL), activation("relu"),
            maxpool1d(POOL_KERNEL),
            conv1d(CONV_CHANNELS, CONV_KERNEL), activation("relu"),
            maxpool1d(POOL_KERNEL)]


def _dense_stack(n_layers: int, units: int, drop: float):
    layers = []
    for _ in range(n_layers):
        layers += [dense(units), activation("relu")]
        if drop > 0:
            layers.append(dropout(drop))
    return layers


def _fits(input_dim: int, layers, heads) -> bool:
    try:
        NetworkSpec(input_dim=input_dim, layers=tuple(layers),
                    heads=tuple(heads)).validate()
        return True
    except ConfigError:
        return False


def q_trunk(input_dim: int, drop: float):
    conv = _conv_stack()
    fc = _dense_stack(Q_DENSE_LAYERS, Q_DENSE_UNITS, drop)
    if _fits(input_dim, conv + fc, (("q", 1),)):
        return conv + fc
    return fc


def bin_dqn_spec(obs_dim: int, n_ctrl: int, drop: float = 0.2) -> NetworkSpec:
    """Dual-head value network: scalar q0 plus one output per control bit."""
    return NetworkSpec(input_dim=obs_dim,
                       layers=tuple(q_trunk(obs_dim, drop)),
                       heads=(("q0", 1), ("q", n_ctrl)))


def vanilla_dqn_spec(obs_dim: int, n_actions: int, drop: float = 0.2) -> NetworkSpec:
    """One output neuron per whole configuration."""
    return NetworkSpec(input_dim=obs_dim,
                       layers=tuple(q_trunk(obs_dim, drop)),
                       heads=(("q", n_actions),))


def ddpg_actor_spec(obs_dim: int, n_ctrl: int, drop: float = 0.2) -> NetworkSpec:
    return NetworkSpec(
        input_dim=obs_dim,
        layers=tuple(_dense_stack(DDPG_DENSE_LAYERS, DDPG_DENSE_UNITS, drop)),
        heads=(("action", n_ctrl, "tanh"),))


def ddpg_critic_spec(obs_dim: int, n_ctrl: int, drop: float = 0.2) -> NetworkSpec:
    return NetworkSpec(
        input_dim=obs_dim + n_ctrl,
        layers=tuple(_dense_stack(DDPG_DENSE_LAYERS, DDPG_DENSE_UNITS, drop)),
        heads=(("value", 1),))
