import numpy as np
import pytest

from splitcodec import nn
from splitcodec.rng import RngStream


def random_net(layer_sizes, output_activation, seed, weight_std=0.1):
    """Net with weights ~ N(0, weight_std), for gradient checks."""
    rng = RngStream(seed, "testnet")
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        weights.append(rng.normal(weight_std, (fan_out, fan_in)))
        biases.append(rng.normal(weight_std, fan_out))
    return nn.NetworkModel(list(layer_sizes), weights, biases,
                           output_activation=output_activation)


def max_rel_err(grads, ref, floor=1e-8):
    worst = 0.0
    for g, r in zip(grads, ref):
        denom = np.maximum(np.abs(r), floor)
        worst = max(worst, float(np.max(np.abs(g - r) / denom)))
    return worst


@pytest.fixture
def rng():
    return RngStream(1234, "fixture")
