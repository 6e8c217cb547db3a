"""Word metrics on C_2 wr C_n.

Three routes to the word length ``rho(g, e)``:

* :func:`bfs_table` -- breadth-first search over the full Cayley graph, for any
  generating set of the form ``({emptyset} x S) u {({0}, 0)}``.
* :func:`exact_travel_metric` -- for the standard generators, ``|x|`` toggles
  plus the shortest closed-form walk of the lighter, found by a dynamic program
  over covered arcs.
* :func:`surrogate_sigma` -- the cheap two-term approximation
  ``d(0, j) + max_{k in x} (d(0, k) + 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np

from . import group as grp
from .errors import GenerationError, SizeGuardError, UsageError
from .group import GroupElement, cyclic_distance

BFS_MAX_N = 22


@dataclass(frozen=True)
class GeneratorSet:
    """Movement steps ``S`` (as ``(emptyset, s)``) plus optionally the toggle.

    ``movement`` lists the steps as given; the word metric always uses the
    symmetrized set ``S u -S``.
    """

    n: int
    movement: tuple[int, ...] = (1,)
    toggle: bool = True

    def __post_init__(self):
        moves = tuple(int(s) % self.n for s in self.movement)
        if any(s == 0 for s in moves):
            raise UsageError("movement steps must be nonzero mod n")
        if len(set(moves)) != len(moves):
            raise UsageError(f"repeated movement steps in {self.movement}")
        object.__setattr__(self, "movement", moves)

    @classmethod
    def standard(cls, n: int) -> "GeneratorSet":
        return cls(n, (1,), True)

    @property
    def symmetrized_moves(self) -> tuple[int, ...]:
        return tuple(sorted({s for s in self.movement} | {(-s) % self.n for s in self.movement}))

    @property
    def generates_base(self) -> bool:
        g = self.n
        for s in self.movement:
            g = gcd(g, s)
        return g == 1

    def elements(self) -> list[GroupElement]:
        """The listed (unsymmetrized) generators."""
        gens = [grp.step(self.n, s) for s in self.movement]
        if self.toggle:
            gens.append(grp.toggle(self.n))
        return gens

    def __len__(self):
        return len(self.movement) + int(self.toggle)


@dataclass
class WordMetricTable:
    """``dist[index(g)] = rho(g, e)`` for every element ``g``."""

    n: int
    gens: GeneratorSet
    dist: np.ndarray = field(repr=False)

    def __getitem__(self, g: GroupElement) -> int:
        return int(self.dist[g.index])

    def lookup(self, x, j) -> np.ndarray:
        return self.dist[grp.dense_index(x, j, self.n)]

    def pair_distances(self, xa, ja, xb, jb) -> np.ndarray:
        """Vectorized ``rho(a, b) = rho(b^-1 a, e)``."""
        xi, ji = grp.inverse_arrays(xb, jb, self.n)
        xq, jq = grp.multiply_arrays(xi, ji, xa, ja, self.n)
        return self.lookup(xq, jq)

    @property
    def order(self) -> int:
        return grp.group_order(self.n)

    def moments(self) -> tuple[int, int, int]:
        """``(|G|, sum rho, sum rho^2)`` as exact integers."""
        d = self.dist.astype(np.int64)
        return self.order, int(d.sum()), int((d * d).sum())


def bfs_table(n: int, gens: GeneratorSet | None = None, max_n: int = BFS_MAX_N) -> WordMetricTable:
    """Exact word lengths by breadth-first search from the identity.

    Edges are right multiplications ``g -> g s`` by the symmetrized
    generators, so layer ``t`` holds the elements of word length ``t``.
    """
    if gens is None:
        gens = GeneratorSet.standard(n)
    if gens.n != n:
        raise UsageError(f"generator set built for n={gens.n}, table requested for n={n}")
    if n > max_n:
        raise SizeGuardError(f"BFS guard: n={n} exceeds {max_n} (n * 2**n states)")
    order = grp.group_order(n)
    mask = grp.full_mask(n)
    moves = np.array(gens.symmetrized_moves, dtype=np.int64)

    dist = np.full(order, -1, dtype=np.int16)
    visited = np.zeros(order, dtype=bool)
    frontier = np.array([0], dtype=np.int64)
    visited[0] = True
    dist[0] = 0
    layer = 0
    while frontier.size:
        layer += 1
        x = frontier & mask
        j = frontier >> n
        candidates = []
        for s in moves:
            candidates.append((((j + s) % n) << n) | x)
        if gens.toggle:
            flip = np.left_shift(np.int64(1), (-j) % n)
            candidates.append((j << n) | (x ^ flip))
        nxt = np.unique(np.concatenate(candidates)) if candidates else np.empty(0, np.int64)
        nxt = nxt[~visited[nxt]]
        visited[nxt] = True
        dist[nxt] = layer
        frontier = nxt

    if not visited.all():
        missing = int(np.flatnonzero(~visited)[0])
        raise GenerationError(
            f"generating set {gens} does not generate C_2 wr C_{n}; "
            f"unreached element {GroupElement.from_index(missing, n)!r}"
        )
    return WordMetricTable(n, gens, dist)


# --- exact metric for the standard generators --------------------------------


@lru_cache(maxsize=None)
def frontier_costs(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Cheapest walks from 0 that cover the arc ``[-l, r]`` exactly.

    Returns ``(right, left)`` where ``right[l, r]`` is the cost of a walk that
    has covered ``[-l, r]`` and stands at ``r``, and ``left[l, r]`` stands at
    ``-l``. Entries with ``l + r > n - 1`` are infinite. A new point is always
    reached at an endpoint, and moving to the opposite side crosses the whole
    covered arc.
    """
    inf = np.iinfo(np.int64).max // 4
    right = np.full((n, n), inf, dtype=np.int64)
    left = np.full((n, n), inf, dtype=np.int64)
    right[0, 0] = left[0, 0] = 0
    for total in range(n - 1):
        for l in range(total + 1):
            r = total - l
            span = l + r + 1
            cr, cl = right[l, r], left[l, r]
            right[l, r + 1] = min(right[l, r + 1], cr + 1, cl + span)
            left[l + 1, r] = min(left[l + 1, r], cl + 1, cr + span)
    right.setflags(write=False)
    left.setflags(write=False)
    return right, left


def _cover_lmin(visit_bits: int, n: int) -> np.ndarray:
    """``lmin[r]``: least ``l`` such that ``[-l, r]`` contains the visit set."""
    lmin = np.zeros(n, dtype=np.int64)
    need = 0
    for p in range(n - 1, 0, -1):
        lmin[p] = need
        if visit_bits >> p & 1:
            need = max(need, n - p)
    lmin[0] = need
    return lmin


def exact_travel_metric(x: int, j: int, n: int) -> int:
    """``rho((x, j), e)`` for the standard generators.

    The lighter must stand at ``-k`` to flip lamp ``k``, so the word length is
    ``|x|`` plus the shortest walk from 0 that visits ``{-k : k in x}`` and
    ends at ``j``.
    """
    right, left = frontier_costs(n)
    visit = grp.negate(x, n)
    lmin = _cover_lmin(visit, n)
    ls = np.arange(n)[:, None]
    rs = np.arange(n)[None, :]
    covered = (ls >= lmin[None, :]) & (ls + rs <= n - 1)
    to_j_from_r = np.array([cyclic_distance(r, j, n) for r in range(n)])
    to_j_from_l = np.array([cyclic_distance(-l, j, n) for l in range(n)])
    total = np.minimum(right + to_j_from_r[None, :], left + to_j_from_l[:, None])
    return grp.popcount(x) + int(total[covered].min())


def travel_metric_batch(x, j, n: int, chunk: int = 65536) -> np.ndarray:
    """Vectorized :func:`exact_travel_metric` over ``uint64`` lamp arrays.

    Walk costs are nondecreasing in the covered arc, so for each right reach
    ``r`` only the least admissible left reach matters.
    """
    x = np.asarray(x, dtype=np.uint64)
    j = np.asarray(j, dtype=np.int64)
    right, left = frontier_costs(n)
    rs = np.arange(n)
    out = np.empty(x.shape, dtype=np.int64)
    for lo in range(0, x.size, chunk):
        xs, js = x[lo:lo + chunk], j[lo:lo + chunk]
        bits = grp.bits_matrix(xs, n)
        # visit set P = -x: position p is visited iff lamp (-p) is lit
        visit = bits[:, (-rs) % n]
        weight = np.where(visit, n - rs[None, :], 0)
        weight[:, 0] = 0
        # lmin[r] = max over p > r of weight[p]
        suffix = np.maximum.accumulate(weight[:, ::-1], axis=1)[:, ::-1]
        lmin = np.zeros_like(suffix)
        lmin[:, :-1] = suffix[:, 1:]
        valid = lmin + rs[None, :] <= n - 1
        lcl = np.minimum(lmin, n - 1)
        d_r = np.abs(rs[None, :] - js[:, None]) % n
        d_r = np.minimum(d_r, n - d_r)
        d_l = np.abs((-lcl) % n - js[:, None]) % n
        d_l = np.minimum(d_l, n - d_l)
        cost = np.minimum(right[lcl, rs[None, :]] + d_r, left[lcl, rs[None, :]] + d_l)
        cost = np.where(valid, cost, np.iinfo(np.int64).max)
        out[lo:lo + chunk] = cost.min(axis=1) + grp.popcount_array(xs)
    return out


def standard_moments(n: int) -> tuple[int, int, int]:
    """Exact ``(|G|, sum_g rho(g, e), sum_g rho(g, e)^2)`` for the standard generators.

    Works far beyond the BFS guard. The optimal walk is fixed by the largest
    gap it leaves unvisited, so the visit sets whose walk cost is at least
    ``t`` are counted as paths ``0 = p_0 < p_1 < ... < n`` whose every gap
    costs at least ``t``; the count is refined by the number of visited points.
    """
    if n < 3:
        raise UsageError(f"modulus must be >= 3, got {n}")
    if n > 62:
        raise SizeGuardError(f"moment guard: n={n} exceeds 62 (int64 subset counts)")
    right, left = frontier_costs(n)
    a_idx = np.arange(n + 1)[:, None]
    b_idx = np.arange(n + 1)[None, :]
    gap = a_idx < b_idx
    r = np.where(gap, a_idx, 0)
    l = np.where(gap, n - b_idx, 0)
    l = np.where(l == n, 0, l)
    total_sum = 0
    total_sq = 0
    for j in range(n):
        d_r = np.vectorize(lambda p: cyclic_distance(p, j, n))(r)
        d_l = np.vectorize(lambda p: cyclic_distance(-p, j, n))(l)
        cost = np.minimum(right[l, r] + d_r, left[l, r] + d_l)
        cost = np.where(gap, cost, -1)
        # counts[t][m] = number of visit sets in {1..n-1} of size m with walk cost >= t
        prev = None
        t = 0
        hist = []
        while True:
            allowed = (cost >= t).astype(np.int64)
            f = np.zeros((n + 1, n), dtype=np.int64)
            f[0, 0] = 1
            for b in range(1, n + 1):
                acc = allowed[:b, b] @ f[:b]
                if b < n:
                    f[b, 1:] = acc[:-1]
                else:
                    f[b] = acc
            cur = f[n]
            if prev is not None:
                hist.append(prev - cur)
            if not cur.any():
                break
            prev = cur
            t += 1
        m = np.arange(n)
        for cost_value, counts in enumerate(hist):
            for mm in m[counts > 0]:
                c = int(counts[mm])
                # lamp 0 sits at the start; with or without it the walk is the same
                for lamps in (int(mm), int(mm) + 1):
                    rho = lamps + cost_value
                    total_sum += c * rho
                    total_sq += c * rho * rho
    return grp.group_order(n), total_sum, total_sq


# --- surrogate ---------------------------------------------------------------


def _sigma_from_identity(x: int, j: int, n: int) -> int:
    reach = max((cyclic_distance(0, k, n) + 1 for k in grp.lamp_members(x, n)), default=0)
    return cyclic_distance(0, j, n) + reach


def surrogate_sigma(a: GroupElement, b: GroupElement) -> int:
    """Two-term approximation to ``rho(a, b)``.

    The raw formula ``d(j, l) + max_{k in x ^ y} (d(0, k) + 1)`` is neither
    left-invariant nor symmetric once translated; evaluating it on both
    quotients ``b^-1 a`` and ``a^-1 b`` and taking the larger value restores
    both properties.
    """
    if a.n != b.n:
        raise UsageError(f"mismatched moduli {a.n} and {b.n}")
    q = grp.inverse(b) * a
    qi = grp.inverse(q)
    return max(_sigma_from_identity(q.lamps, q.pos, a.n), _sigma_from_identity(qi.lamps, qi.pos, a.n))


def surrogate_sigma_batch(x, j, n: int) -> np.ndarray:
    """Vectorized ``surrogate_sigma((x, j), e)``."""
    x = np.asarray(x, dtype=np.uint64)
    j = np.asarray(j, dtype=np.int64)
    reach_of = np.array([cyclic_distance(0, k, n) + 1 for k in range(n)])

    def one_sided(xs, js):
        bits = grp.bits_matrix(xs, n)
        reach = np.where(bits, reach_of[None, :], 0).max(axis=1)
        dj = np.minimum(js % n, (-js) % n)
        return dj + reach

    xi, ji = grp.inverse_arrays(x, j, n)
    return np.maximum(one_sided(x, j), one_sided(xi, ji))


def pair_distance(table: WordMetricTable, a: GroupElement, b: GroupElement) -> int:
    if a.n != table.n or b.n != table.n:
        raise UsageError(f"table built for n={table.n}")
    return table[grp.inverse(b) * a]
