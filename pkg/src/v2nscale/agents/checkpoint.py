"""Save/load agents as JSON: config metadata plus network/table state.

Transient exploration state (OU noise, PI integrator, epsilon schedule
position) is deliberately not persisted; a loaded agent is frozen for
evaluation unless explicitly put back in train mode.
"""

from dataclasses import asdict

import numpy as np

from ..neural import load_json, net_from_dict, net_to_dict, save_json
from ..simenv import EnvConfig
from .a2c import A2cAgent, A2cConfig
from .base import ConstantPolicy, OraclePolicy
from .ddpg import DdpgAgent, DdpgConfig
from .lstm_scaler import LstmScaler, LstmScalerConfig
from .pi import PiConfig, PiController
from .qlearning import QLearnConfig, QTableAgent

FORMAT = "v2nscale-agent-v1"


def _env_from_dict(d: dict) -> EnvConfig:
    return EnvConfig(**d)


def agent_to_dict(agent) -> dict:
    if isinstance(agent, DdpgAgent):
        kind, meta = "ddpg", asdict(agent.config)
        state = {name: net_to_dict(net) for name, net in
                 [("actor", agent.actor), ("critic", agent.critic),
                  ("actor_target", agent.actor_target),
                  ("critic_target", agent.critic_target)]}
        env = asdict(agent.env_config)
    elif isinstance(agent, A2cAgent):
        kind, meta = "a2c", asdict(agent.config)
        state = {"actor": net_to_dict(agent.actor), "critic": net_to_dict(agent.critic)}
        env = asdict(agent.env_config)
    elif isinstance(agent, QTableAgent):
        kind, meta = "qlearn", asdict(agent.config)
        state = {"table": {f"{n},{w}": v.tolist() for (n, w), v in agent.table.items()}}
        env = asdict(agent.env_config)
    elif isinstance(agent, LstmScaler):
        kind, meta = "lstm", asdict(agent.config)
        state = {"predictor": net_to_dict(agent.predictor)}
        env = asdict(agent.env_config)
    elif isinstance(agent, PiController):
        kind, meta = "pi", asdict(agent.config)
        state = {}
        env = {"action_limit": agent.action_limit}
    elif isinstance(agent, OraclePolicy):
        kind, meta, state = "oracle", {}, {}
        env = {"n_max": agent.n_max, "action_limit": agent.action_limit}
    elif isinstance(agent, ConstantPolicy):
        kind, meta, state = "constant", {"action": agent.action}, {}
        env = {}
    else:
        raise TypeError(f"cannot checkpoint {type(agent).__name__}")
    return {"format": FORMAT, "kind": kind, "env": env, "meta": meta, "state": state}


def agent_from_dict(data: dict):
    if data.get("format") != FORMAT:
        raise ValueError(f"unrecognized agent container: {data.get('format')!r}")
    kind, meta, state = data["kind"], data["meta"], data["state"]
    if kind == "ddpg":
        env = _env_from_dict(data["env"])
        agent = DdpgAgent(env, DdpgConfig(**{**meta, "hidden": tuple(meta["hidden"])}))
        agent.actor = net_from_dict(state["actor"])
        agent.critic = net_from_dict(state["critic"])
        agent.actor_target = net_from_dict(state["actor_target"])
        agent.critic_target = net_from_dict(state["critic_target"])
    elif kind == "a2c":
        env = _env_from_dict(data["env"])
        agent = A2cAgent(env, A2cConfig(**{**meta, "hidden": tuple(meta["hidden"])}))
        agent.actor = net_from_dict(state["actor"])
        agent.critic = net_from_dict(state["critic"])
    elif kind == "qlearn":
        env = _env_from_dict(data["env"])
        agent = QTableAgent(env, QLearnConfig(**meta))
        for key, values in state["table"].items():
            n, w = key.split(",")
            agent.table[(int(n), int(w))] = np.asarray(values, dtype=np.float64)
    elif kind == "lstm":
        env = _env_from_dict(data["env"])
        agent = LstmScaler(env, LstmScalerConfig(**meta))
        agent.predictor = net_from_dict(state["predictor"])
    elif kind == "pi":
        agent = PiController(data["env"]["action_limit"], PiConfig(**meta))
    elif kind == "oracle":
        env = EnvConfig(n_max=data["env"]["n_max"],
                        action_limit=data["env"]["action_limit"])
        agent = OraclePolicy(env)
    elif kind == "constant":
        agent = ConstantPolicy(meta["action"])
    else:
        raise ValueError(f"unknown agent kind {kind!r}")
    agent.freeze()
    return agent


def save_agent(agent, path) -> None:
    save_json(agent_to_dict(agent), path)


def load_agent(path):
    return agent_from_dict(load_json(path))
