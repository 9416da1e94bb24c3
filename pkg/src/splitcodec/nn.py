"""Small dense networks with explicit forward/backward passes.

All four mappers/demappers in the pipeline are multilayer perceptrons with
rectifier hidden units and a sigmoid or linear output. The hot per-sample
kernels live in a compiled extension (splitcodec._fastnn) with a numpy
fallback (splitcodec._refnn); set SPLITCODEC_BACKEND=ref|fast to force one.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, TrainingError
from .rng import RngStream

_choice = os.environ.get("SPLITCODEC_BACKEND", "auto")
if _choice == "ref":
    from . import _refnn as _kernels
elif _choice == "fast":
    from . import _fastnn as _kernels  # type: ignore[no-redef]
else:
    try:
        from . import _fastnn as _kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _refnn as _kernels  # type: ignore[no-redef]

BACKEND = _kernels.BACKEND

HIDDEN_ACTIVATIONS = ("relu",)
OUTPUT_ACTIVATIONS = ("sigmoid", "linear")

_OUT_CODE = {"sigmoid": _kernels.ACT_SIGMOID, "linear": _kernels.ACT_LINEAR}

# Sigmoid outputs are clamped to this band before any log.
PROB_EPS = 1e-7


@dataclass
class NetworkModel:
    """A feedforward net: weights[i] has shape (layer_sizes[i+1], layer_sizes[i])."""

    layer_sizes: list[int]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    hidden_activation: str = "relu"
    output_activation: str = "sigmoid"

    @property
    def input_size(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_size(self) -> int:
        return self.layer_sizes[-1]

    def validate(self) -> None:
        if self.hidden_activation not in HIDDEN_ACTIVATIONS:
            raise ContractViolation(f"unknown hidden activation {self.hidden_activation!r}")
        if self.output_activation not in OUTPUT_ACTIVATIONS:
            raise ContractViolation(f"unknown output activation {self.output_activation!r}")
        if len(self.weights) != len(self.layer_sizes) - 1:
            raise ContractViolation("weight count inconsistent with layer_sizes")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            expect = (self.layer_sizes[i + 1], self.layer_sizes[i])
            if w.shape != expect or b.shape != (expect[0],):
                raise ContractViolation(
                    f"layer {i}: weight shape {w.shape} / bias shape {b.shape}, "
                    f"expected {expect}"
                )


@dataclass
class ForwardCache:
    """Activation record tying a backward call to its forward call."""

    model: NetworkModel
    acts: list = field(repr=False, default_factory=list)
    pres: list = field(repr=False, default_factory=list)


def init_network(layer_sizes, output_activation: str, rng: RngStream) -> NetworkModel:
    """He-style init: weights ~ N(0, 2/fan_in), biases zero."""
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        std = np.sqrt(2.0 / fan_in)
        weights.append(rng.normal(std, (fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    model = NetworkModel(list(layer_sizes), weights, biases,
                         output_activation=output_activation)
    model.validate()
    return model


def forward(model: NetworkModel, x: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.input_size,):
        raise ContractViolation(
            f"input shape {x.shape}, model expects ({model.input_size},)")
    acts, pres = _kernels.mlp_forward(
        model.weights, model.biases, _OUT_CODE[model.output_activation], x)
    out = acts[-1]
    if not np.all(np.isfinite(out)):
        raise TrainingError("non-finite network output")
    return out, ForwardCache(model, acts, pres)


def backward(model: NetworkModel, cache: ForwardCache, output_grad: np.ndarray):
    """Gradients w.r.t. every parameter and the input.

    Returns (param_grads, input_grad) with param_grads in the same flat
    [W0, b0, W1, b1, ...] order as parameters().
    """
    if cache.model is not model:
        raise ContractViolation("cache does not belong to this model")
    output_grad = np.asarray(output_grad, dtype=np.float64)
    if output_grad.shape != (model.output_size,):
        raise ContractViolation("output_grad shape mismatch")
    wgrads, bgrads, gin = _kernels.mlp_backward(
        model.weights, cache.acts, cache.pres,
        _OUT_CODE[model.output_activation], output_grad)
    grads = []
    for gw, gb in zip(wgrads, bgrads):
        grads.append(gw)
        grads.append(gb)
    return grads, gin


def parameters(model: NetworkModel) -> list[np.ndarray]:
    """Flat [W0, b0, W1, b1, ...] view (the arrays themselves, not copies)."""
    out = []
    for w, b in zip(model.weights, model.biases):
        out.append(w)
        out.append(b)
    return out


def set_parameters(model: NetworkModel, params: list[np.ndarray]) -> None:
    for i in range(len(model.weights)):
        model.weights[i] = np.asarray(params[2 * i], dtype=np.float64)
        model.biases[i] = np.asarray(params[2 * i + 1], dtype=np.float64)


def clamp_probs(p: np.ndarray) -> np.ndarray:
    return np.clip(p, PROB_EPS, 1.0 - PROB_EPS)


def finite_diff_grad(objective, params: list[np.ndarray], h: float = 1e-5):
    """Central-difference gradient of objective(params), component-wise.

    Test oracle: deliberately independent of backward().
    """
    grads = []
    for k, p in enumerate(params):
        g = np.zeros_like(p, dtype=np.float64)
        flat = p.reshape(-1)
        gflat = g.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            hi = objective(params)
            flat[i] = orig - h
            lo = objective(params)
            flat[i] = orig
            gflat[i] = (hi - lo) / (2.0 * h)
        grads.append(g)
    return grads
