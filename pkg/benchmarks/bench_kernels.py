"""Compare the compiled and pure-numpy MLP kernels.

Run as: python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from splitcodec import _refnn

try:
    from splitcodec import _fastnn
except ImportError:
    _fastnn = None


def make_net(sizes, seed):
    gen = np.random.default_rng(seed)
    weights = [gen.normal(0.0, 0.1, (o, i)) for i, o in zip(sizes[:-1], sizes[1:])]
    biases = [gen.normal(0.0, 0.1, o) for o in sizes[1:]]
    return weights, biases


def bench(module, sizes, reps):
    weights, biases = make_net(sizes, seed=0)
    gen = np.random.default_rng(1)
    x = gen.random(sizes[0])
    gout = gen.random(sizes[-1])
    acts, pres = module.mlp_forward(weights, biases, module.ACT_SIGMOID, x)

    t0 = time.perf_counter()
    for _ in range(reps):
        module.mlp_forward(weights, biases, module.ACT_SIGMOID, x)
    t_fwd = (time.perf_counter() - t0) / reps

    t0 = time.perf_counter()
    for _ in range(reps):
        module.mlp_backward(weights, acts, pres, module.ACT_SIGMOID, gout)
    t_bwd = (time.perf_counter() - t0) / reps
    return t_fwd, t_bwd


def main():
    shapes = {
        "source mapper  [64,128,80]": [64, 128, 80],
        "channel mapper [80,128,128,32]": [80, 128, 128, 32],
        "tiny probe net [4,6,4]": [4, 6, 4],
    }
    reps = 2000
    print(f"{'network':34s} {'kernel':6s} {'fwd us':>8s} {'bwd us':>8s}")
    for name, sizes in shapes.items():
        for label, module in (("ref", _refnn), ("fast", _fastnn)):
            if module is None:
                print(f"{name:34s} {label:6s} (extension not built)")
                continue
            t_fwd, t_bwd = bench(module, sizes, reps)
            print(f"{name:34s} {label:6s} {t_fwd * 1e6:8.1f} {t_bwd * 1e6:8.1f}")


if __name__ == "__main__":
    main()
