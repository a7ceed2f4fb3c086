"""Binary-action deep RL for 1-bit reconfigurable intelligent surfaces."""

__version__ = "0.1.0"
