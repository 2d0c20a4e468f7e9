"""Small dense-network kernel: MLP and LSTM forward/backward plus Adam.

Everything runs on float64 numpy arrays shaped (batch, features); networks
expose ``params`` (a flat list of arrays), ``forward`` and ``backward``, so
the optimizer and the finite-difference gradient checker treat them
uniformly. Frozen networks are safe to evaluate concurrently; training
mutates parameters in place and needs a single owner.
"""

from .net import Mlp, MlpSpec, elu, elu_grad, softmax
from .lstm import Lstm, LstmSpec
from .optim import Adam
from .gradcheck import finite_difference_grads, gradient_check, max_relative_error
from .checkpoint import load_json, net_from_dict, net_to_dict, save_json

__all__ = [
    "Adam", "Lstm", "LstmSpec", "Mlp", "MlpSpec",
    "elu", "elu_grad", "softmax",
    "finite_difference_grads", "gradient_check", "max_relative_error",
    "load_json", "net_from_dict", "net_to_dict", "save_json",
]
