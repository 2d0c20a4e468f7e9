"""JSON parameter containers; floats serialize via shortest repr, so a
save/load cycle restores every value bit-exactly."""

import json
from dataclasses import asdict

import numpy as np

from .lstm import Lstm, LstmSpec
from .net import Mlp, MlpSpec

FORMAT = "v2nscale-net-v1"


def net_to_dict(net) -> dict:
    if isinstance(net, Mlp):
        kind = "mlp"
    elif isinstance(net, Lstm):
        kind = "lstm"
    else:
        raise TypeError(f"cannot serialize {type(net).__name__}")
    return {
        "format": FORMAT,
        "kind": kind,
        "spec": asdict(net.spec),
        "params": [p.tolist() for p in net.params],
    }


def net_from_dict(data: dict):
    if data.get("format") != FORMAT:
        raise ValueError(f"unrecognized network container: {data.get('format')!r}")
    kind = data["kind"]
    spec_dict = dict(data["spec"])
    rng = np.random.default_rng(0)  # placeholder init, overwritten below
    if kind == "mlp":
        spec_dict["hidden"] = tuple(spec_dict["hidden"])
        net = Mlp(MlpSpec(**spec_dict), rng)
    elif kind == "lstm":
        net = Lstm(LstmSpec(**spec_dict), rng)
    else:
        raise ValueError(f"unknown network kind {kind!r}")
    net.set_params([np.asarray(p, dtype=np.float64) for p in data["params"]])
    return net


def save_json(obj: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh)


def load_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
