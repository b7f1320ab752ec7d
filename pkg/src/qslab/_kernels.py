"""Compiled inner loops for random binary search trees.

Every kernel draws from a ``numpy.random.Generator`` passed in by the caller,
so the stream (and hence the result) is fixed by how that generator was
seeded.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def split_path_length(gen, n, cutoff, cdf_flat, cdf_start, cdf_kmin):
    """Internal path length of a random BST with ``n`` nodes.

    The root of a random BST is uniform among the keys and the two subtrees
    are independent random BSTs, and every node adds ``size - 1`` to the
    path length through its subtree.  Subtrees with at most ``cutoff``
    nodes draw their path length from the tabulated exact law instead.
    """
    stack = np.empty(64, np.int64)
    stack[0] = n
    top = 1
    total = 0
    while top > 0:
        top -= 1
        s = stack[top]
        if s <= 1:
            continue
        if s <= cutoff:
            lo = cdf_start[s]
            hi = cdf_start[s + 1]
            u = gen.random()
            k = np.searchsorted(cdf_flat[lo:hi], u, side="right")
            if k > hi - lo - 1:
                k = hi - lo - 1
            total += cdf_kmin[s] + k
            continue
        total += s - 1
        r = gen.integers(0, s)
        if top + 2 > stack.shape[0]:
            bigger = np.empty(stack.shape[0] * 2, np.int64)
            bigger[:top] = stack[:top]
            stack = bigger
        stack[top] = r
        stack[top + 1] = s - 1 - r
        top += 2
    return total


@njit(cache=True)
def _insert(key, root, left, right, keys_at, size):
    """Insert ``key`` into the tree stored in arrays; return its depth."""
    node = root
    depth = 0
    while True:
        depth += 1
        if key < keys_at[node]:
            if left[node] < 0:
                left[node] = size
                break
            node = left[node]
        else:
            if right[node] < 0:
                right[node] = size
                break
            node = right[node]
    keys_at[size] = key
    return depth


@njit(cache=True)
def insertion_path_lengths(gen, n):
    """Insert a uniform random permutation of ``0..n-1`` into an empty BST.

    Returns the array of internal path lengths after each insertion, so
    entry ``j`` is the path length of the tree holding the first ``j + 1``
    keys.
    """
    perm = np.arange(n)
    for i in range(n - 1, 0, -1):
        j = gen.integers(0, i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    out = np.zeros(n, np.int64)
    if n == 0:
        return out
    left = np.full(n, -1, np.int64)
    right = np.full(n, -1, np.int64)
    keys_at = np.empty(n, np.int64)
    keys_at[0] = perm[0]
    total = 0
    for size in range(1, n):
        total += _insert(perm[size], 0, left, right, keys_at, size)
        out[size] = total
    return out


@njit(cache=True)
def path_length_of_order(order):
    """Internal path length after inserting ``order`` left to right."""
    n = order.shape[0]
    if n == 0:
        return 0
    left = np.full(n, -1, np.int64)
    right = np.full(n, -1, np.int64)
    keys_at = np.empty(n, np.int64)
    keys_at[0] = order[0]
    total = 0
    for size in range(1, n):
        total += _insert(order[size], 0, left, right, keys_at, size)
    return total
