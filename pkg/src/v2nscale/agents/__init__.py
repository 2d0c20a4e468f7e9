"""Scaling policies: the deterministic-gradient agent plus baselines."""

from .a2c import A2cAgent, A2cConfig, policy_entropy
from .base import ConstantPolicy, OraclePolicy, Policy, clamp_to_action_space, obs_vector
from .checkpoint import agent_from_dict, agent_to_dict, load_agent, save_agent
from .ddpg import DdpgAgent, DdpgConfig, soft_update
from .dod import DodConfig, affine_value, dod
from .lstm_scaler import LstmScaler, LstmScalerConfig, make_windows
from .noise import OUNoise
from .pi import PiConfig, PiController
from .qlearning import Q_ACTIONS, QLearnConfig, QTableAgent
from .replay import ReplayBuffer

__all__ = [
    "A2cAgent", "A2cConfig", "ConstantPolicy", "DdpgAgent", "DdpgConfig",
    "DodConfig", "LstmScaler", "LstmScalerConfig", "OUNoise", "OraclePolicy",
    "PiConfig", "PiController", "Policy", "Q_ACTIONS", "QLearnConfig",
    "QTableAgent", "ReplayBuffer", "affine_value", "agent_from_dict",
    "agent_to_dict", "clamp_to_action_space", "dod", "load_agent",
    "make_windows", "obs_vector", "policy_entropy", "save_agent", "soft_update",
]
