"""Compiled inner loops. All take the CSR adjacency of a :class:`Graph`."""
import math

import numpy as np
from numba import njit

GEOMETRIC = 0
LINEAR = 1


@njit(cache=True)
def local_fields(indptr, nbr, nbr_w, x):
    n = indptr.shape[0] - 1
    f = np.zeros(n, dtype=np.int64)
    for i in range(n):
        s = 0
        for k in range(indptr[i], indptr[i + 1]):
            s += nbr_w[k] * x[nbr[k]]
        f[i] = s
    return f


@njit(cache=True)
def apply_flip(indptr, nbr, nbr_w, x, f, i):
    xi = x[i]
    for k in range(indptr[i], indptr[i + 1]):
        f[nbr[k]] -= 2 * nbr_w[k] * xi
    x[i] = -xi


@njit(cache=True)
def metropolis(delta, temp, u):
    """Accept non-worsening moves; otherwise accept with probability exp(delta / temp)."""
    if delta >= 0:
        return True
    return u < math.exp(delta / temp)


@njit(cache=True)
def gray_enumerate(indptr, nbr, nbr_w):
    """Max cut over all assignments with vertex 0 pinned to +1.

    Returns ``(best_value, best_index)``; the witness is the Gray code of
    ``best_index`` where bit ``b`` set means vertex ``b + 1`` has spin -1.
    """
    n = indptr.shape[0] - 1
    x = np.ones(n, dtype=np.int64)
    f = local_fields(indptr, nbr, nbr_w, x)
    cur = 0
    best = 0
    best_k = 0
    total = np.int64(1) << (n - 1)
    for k in range(1, total):
        b = 0
        while not (k >> b) & 1:
            b += 1
        i = b + 1
        cur += x[i] * f[i]
        apply_flip(indptr, nbr, nbr_w, x, f, i)
        if cur > best:
            best = cur
            best_k = k
    return best, best_k


@njit(cache=True)
def anneal_chunk(indptr, nbr, nbr_w, x, f, best_x, verts, uniforms,
                 state, temp_state, decrement, moves_per_temp, cooling):
    """Run ``len(verts)`` single-flip Metropolis moves in place.

    ``state`` holds ``[current, best, accepted, moves_at_this_temp]`` and
    ``temp_state[0]`` the temperature; both carry over between chunks.
    """
    cur = state[0]
    best = state[1]
    accepted = state[2]
    at_temp = state[3]
    temp = temp_state[0]
    for k in range(verts.shape[0]):
        i = verts[k]
        delta = x[i] * f[i]
        if metropolis(delta, temp, uniforms[k]):
            apply_flip(indptr, nbr, nbr_w, x, f, i)
            cur += delta
            accepted += 1
            if cur > best:
                best = cur
                best_x[:] = x
        at_temp += 1
        if at_temp == moves_per_temp:
            at_temp = 0
            if cooling == GEOMETRIC:
                temp *= 1.0 - decrement
            else:
                temp -= decrement
    state[0] = cur
    state[1] = best
    state[2] = accepted
    state[3] = at_temp
    temp_state[0] = temp


@njit(cache=True)
def steepest_ascent(indptr, nbr, nbr_w, x, f):
    """Apply best improving flips until none is left; returns (gain, flips)."""
    n = x.shape[0]
    gain = 0
    flips = 0
    while True:
        best_i = -1
        best_d = 0
        for i in range(n):
            d = x[i] * f[i]
            if d > best_d:
                best_d = d
                best_i = i
        if best_i < 0:
            return gain, flips
        apply_flip(indptr, nbr, nbr_w, x, f, best_i)
        gain += best_d
        flips += 1
