"""Independent reference implementations used only by the tests.

Everything here works on plain tuples and lists, straight from the
definitions, and shares no code with the package.
"""

from collections import deque
from itertools import product

import numpy as np


def lamp_tuple(members, n):
    return tuple(1 if i in set(members) else 0 for i in range(n))


def wreath_mul(a, b, n):
    """Coordinatewise law: coordinate h of (x, g)(y, k) is x_h + y_{g+h}."""
    (x, g), (y, k) = a, b
    return tuple((x[h] + y[(g + h) % n]) % 2 for h in range(n)), (g + k) % n


def all_elements(n):
    for pos in range(n):
        for bits in product((0, 1), repeat=n):
            yield bits, pos


def bfs_distances(n, moves=(1,), toggle=True):
    """Word lengths from the identity by BFS over tuple-encoded elements."""
    gens = []
    for s in set(moves) | {(-s) % n for s in moves}:
        gens.append((tuple([0] * n), s % n))
    if toggle:
        gens.append((lamp_tuple([0], n), 0))
    start = (tuple([0] * n), 0)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = wreath_mul(g, s, n)
            if h not in dist:
                dist[h] = dist[g] + 1
                queue.append(h)
    return dist


def cyc(a, b, n):
    d = (a - b) % n
    return min(d, n - d)


def walsh_subset_sum(I, B):
    """sum over subsets A of I of (-1)^{|A & B|}, by enumeration."""
    I = sorted(I)
    total = 0
    for mask in range(1 << len(I)):
        A = {I[t] for t in range(len(I)) if mask >> t & 1}
        total += (-1) ** len(A & set(B))
    return total


def fourier_weights_by_solve(moduli, F):
    """Solve sum_chi a_chi |1 - chi(x)|^2 = F(x) for the a_chi by least squares."""
    elems = list(product(*[range(m) for m in moduli]))
    chars = elems
    M = np.zeros((len(elems), len(chars)))
    for r, x in enumerate(elems):
        for c, u in enumerate(chars):
            theta = sum(ui * xi / m for ui, xi, m in zip(u, x, moduli))
            M[r, c] = abs(1 - np.exp(2j * np.pi * theta)) ** 2
    # the trivial character has a zero column; drop it
    a, *_ = np.linalg.lstsq(M[:, 1:], np.asarray(F, dtype=float), rcond=None)
    return np.concatenate([[0.0], a])


def circulant_adjacency(n, moves):
    S = set(s % n for s in moves) | {(-s) % n for s in moves}
    A = np.zeros((n, n))
    for i in range(n):
        for s in S:
            A[i, (i + s) % n] += 1.0 / len(S)
    return A
