# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled MLP kernels.

Same contract as _refnn: hidden layers are rectified, the output layer is
sigmoid or linear. For the desk-scale layer sizes used here the fused C
loops beat numpy's per-call dispatch overhead.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp

cnp.import_array()

ACT_SIGMOID = 1
ACT_LINEAR = 2

BACKEND = "fast"


cdef void _matvec_add(double[:, ::1] w, double[::1] x, double[::1] b,
                      double[::1] out) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef Py_ssize_t rows = w.shape[0]
    cdef Py_ssize_t cols = w.shape[1]
    cdef double acc
    for i in range(rows):
        acc = b[i]
        for j in range(cols):
            acc += w[i, j] * x[j]
        out[i] = acc


def mlp_forward(weights, biases, int out_act, x):
    """Run x through the layers; return (post-activations, pre-activations)."""
    cdef Py_ssize_t nlayers = len(weights)
    cdef Py_ssize_t li, i, n
    cdef double[::1] pre_v, post_v
    acts = [np.ascontiguousarray(x, dtype=np.float64)]
    pres = []
    for li in range(nlayers):
        w = np.ascontiguousarray(weights[li], dtype=np.float64)
        b = np.ascontiguousarray(biases[li], dtype=np.float64)
        n = w.shape[0]
        pre = np.empty(n, dtype=np.float64)
        pre_v = pre
        _matvec_add(w, acts[li], b, pre_v)
        pres.append(pre)
        post = np.empty(n, dtype=np.float64)
        post_v = post
        if li < nlayers - 1:
            for i in range(n):
                post_v[i] = pre_v[i] if pre_v[i] > 0.0 else 0.0
        elif out_act == ACT_SIGMOID:
            for i in range(n):
                post_v[i] = 1.0 / (1.0 + exp(-pre_v[i]))
        else:
            for i in range(n):
                post_v[i] = pre_v[i]
        acts.append(post)
    return acts, pres


def mlp_backward(weights, acts, pres, int out_act, gout):
    """Chain rule through the record from mlp_forward."""
    cdef Py_ssize_t nlayers = len(weights)
    cdef Py_ssize_t li, i, j, rows, cols
    cdef double d
    cdef double[:, ::1] w_v, gw_v
    cdef double[::1] delta_v, prev_v, gin_v, y_v, g_v, pre_v
    wgrads = [None] * nlayers
    bgrads = [None] * nlayers

    y = acts[nlayers]
    g = np.ascontiguousarray(gout, dtype=np.float64)
    delta = np.empty(g.shape[0], dtype=np.float64)
    delta_v = delta
    y_v = np.ascontiguousarray(y, dtype=np.float64)
    g_v = g
    if out_act == ACT_SIGMOID:
        for i in range(delta_v.shape[0]):
            delta_v[i] = g_v[i] * y_v[i] * (1.0 - y_v[i])
    else:
        for i in range(delta_v.shape[0]):
            delta_v[i] = g_v[i]

    gin = None
    for li in range(nlayers - 1, -1, -1):
        w = np.ascontiguousarray(weights[li], dtype=np.float64)
        w_v = w
        rows = w_v.shape[0]
        cols = w_v.shape[1]
        prev_v = np.ascontiguousarray(acts[li], dtype=np.float64)
        gw = np.empty((rows, cols), dtype=np.float64)
        gw_v = gw
        for i in range(rows):
            d = delta_v[i]
            for j in range(cols):
                gw_v[i, j] = d * prev_v[j]
        wgrads[li] = gw
        bgrads[li] = np.asarray(delta).copy()
        gin = np.zeros(cols, dtype=np.float64)
        gin_v = gin
        for i in range(rows):
            d = delta_v[i]
            for j in range(cols):
                gin_v[j] += w_v[i, j] * d
        if li > 0:
            pre_v = np.ascontiguousarray(pres[li - 1], dtype=np.float64)
            delta = np.empty(cols, dtype=np.float64)
            delta_v = delta
            for j in range(cols):
                delta_v[j] = gin_v[j] if pre_v[j] > 0.0 else 0.0
    return wgrads, bgrads, gin
