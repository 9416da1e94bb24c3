"""Pure-numpy MLP kernels (fallback when the compiled extension is absent).

Both backends expose the same two functions with identical semantics:
hidden layers use the rectifier, the output layer uses sigmoid or is
linear. Forward returns the full activation record needed by backward.
"""

from __future__ import annotations

import numpy as np

ACT_SIGMOID = 1
ACT_LINEAR = 2

BACKEND = "ref"


def mlp_forward(weights, biases, out_act, x):
    """Run x through the layers; return (post-activations, pre-activations).

    acts[0] is the input, acts[-1] the network output; pres[i] is the
    pre-activation of layer i.
    """
    acts = [np.asarray(x, dtype=np.float64)]
    pres = []
    last = len(weights) - 1
    for i, (w, b) in enumerate(zip(weights, biases)):
        pre = w @ acts[-1] + b
        pres.append(pre)
        if i < last:
            acts.append(np.maximum(pre, 0.0))
        elif out_act == ACT_SIGMOID:
            acts.append(1.0 / (1.0 + np.exp(-pre)))
        else:
            acts.append(pre.copy())
    return acts, pres


def mlp_backward(weights, acts, pres, out_act, gout):
    """Chain rule through the record from mlp_forward.

    Returns per-layer (weight gradients, bias gradients) and the gradient
    with respect to the input.
    """
    nlayers = len(weights)
    wgrads = [None] * nlayers
    bgrads = [None] * nlayers
    y = acts[-1]
    if out_act == ACT_SIGMOID:
        delta = gout * y * (1.0 - y)
    else:
        delta = np.asarray(gout, dtype=np.float64).copy()
    for i in range(nlayers - 1, -1, -1):
        wgrads[i] = np.outer(delta, acts[i])
        bgrads[i] = delta.copy()
        gin = weights[i].T @ delta
        if i > 0:
            delta = gin * (pres[i - 1] > 0.0)
    return wgrads, bgrads, gin
