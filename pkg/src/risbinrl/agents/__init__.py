from .bin_ddpg import BinDdpgAgent, BinDdpgHyper, OuProcess, make_bin_ddpg, ou_step
from .bin_dqn import BinDqnAgent, BinDqnHyper, make_bin_dqn
from .checkpoint import load_agent, save_agent
from .vanilla_dqn import VanillaDqnAgent, VanillaDqnHyper, make_vanilla_dqn

__all__ = [
    "BinDdpgAgent", "BinDdpgHyper", "BinDqnAgent", "BinDqnHyper",
    "OuProcess", "VanillaDqnAgent", "VanillaDqnHyper",
    "load_agent", "make_bin_ddpg", "make_bin_dqn", "make_vanilla_dqn",
    "ou_step", "save_agent",
]
