"""Distortion measurement, Gram-kernel symmetrization and subcube averages."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import embedding as em
from . import group as grp
from . import word_metric as wm
from .errors import DegenerateError, SizeGuardError, UsageError

PairOracle = Callable[[np.ndarray, np.ndarray], np.ndarray]

SYMMETRIZE_MAX_ORDER = 4096


@dataclass
class DistortionReport:
    expansion: float
    contraction: float
    distortion: float
    expansion_pair: tuple[int, int]
    contraction_pair: tuple[int, int]
    mode: str
    pairs: int
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return asdict(self)


def _sampler(seed: int) -> np.random.Generator:
    # counter-based, so a seed reproduces the same draws on any platform
    return np.random.Generator(np.random.Philox(seed))


def _partial(a, b, metric: PairOracle, embed: PairOracle):
    """Local (expansion, pair, contraction, pair, count) for one chunk of pairs."""
    rho = np.asarray(metric(a, b), dtype=float)
    dist = np.asarray(embed(a, b), dtype=float)
    if np.any(rho <= 0):
        i = int(np.flatnonzero(rho <= 0)[0])
        raise DegenerateError(f"metric vanishes on distinct points {int(a[i])}, {int(b[i])}")
    if np.any(dist <= 0):
        i = int(np.flatnonzero(dist <= 0)[0])
        raise DegenerateError(f"embedding collapses distinct points {int(a[i])}, {int(b[i])}")
    up = dist / rho
    down = rho / dist
    i, k = int(np.argmax(up)), int(np.argmax(down))
    return float(up[i]), (int(a[i]), int(b[i])), float(down[k]), (int(a[k]), int(b[k])), a.size


class _Reducer:
    def __init__(self):
        self.expansion = -np.inf
        self.contraction = -np.inf
        self.expansion_pair = (-1, -1)
        self.contraction_pair = (-1, -1)
        self.pairs = 0

    def merge(self, part):
        up, up_pair, down, down_pair, count = part
        # strict comparison keeps the first witness, so the merge order fixes the result
        if up > self.expansion:
            self.expansion, self.expansion_pair = up, up_pair
        if down > self.contraction:
            self.contraction, self.contraction_pair = down, down_pair
        self.pairs += count

    def run(self, chunks, metric: PairOracle, embed: PairOracle, workers: int = 1):
        chunks = (c for c in chunks if c[0].size)
        if workers <= 1:
            for a, b in chunks:
                self.merge(_partial(a, b, metric, embed))
            return
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(lambda c: _partial(c[0], c[1], metric, embed), chunks):
                self.merge(part)

    def report(self, mode: str, seed=None) -> DistortionReport:
        if self.pairs == 0:
            raise UsageError("no pairs to scan")
        return DistortionReport(self.expansion, self.contraction, self.expansion * self.contraction,
                                self.expansion_pair, self.contraction_pair, mode, self.pairs, seed)


def _exact_chunks(size: int, identity: Optional[int], chunk: int):
    if identity is not None:
        others = np.arange(size, dtype=np.int64)
        others = others[others != identity]
        for lo in range(0, others.size, chunk):
            a = others[lo:lo + chunk]
            yield a, np.full(a.size, identity, dtype=np.int64)
        return
    rows_per_block = max(1, chunk // size)
    for lo in range(0, size - 1, rows_per_block):
        rows = np.arange(lo, min(lo + rows_per_block, size - 1), dtype=np.int64)
        a = np.repeat(rows, size)
        b = np.tile(np.arange(size, dtype=np.int64), rows.size)
        keep = b > a
        yield a[keep], b[keep]


def _sampled_chunks(size: int, identity: Optional[int], count: int, seed: int, chunk: int):
    rng = _sampler(seed)
    remaining = count
    while remaining > 0:
        m = min(remaining, chunk)
        if identity is not None:
            a = rng.integers(0, size - 1, m)
            a = a + (a >= identity)
            b = np.full(m, identity, dtype=np.int64)
        else:
            a = rng.integers(0, size, m)
            b = rng.integers(0, size - 1, m)
            b = b + (b >= a)
        yield a.astype(np.int64), b.astype(np.int64)
        remaining -= m


def distortion_scan(metric: PairOracle, embed: PairOracle, domain, mode: str = "exact", *,
                    identity: Optional[int] = None, count: int = 100_000, seed: int = 0,
                    anchors: Sequence[tuple[int, int]] = (), chunk: int = 1 << 20,
                    workers: int = 1) -> DistortionReport:
    """Expansion, contraction and distortion of one map over a finite domain.

    ``metric`` and ``embed`` take two equal-length integer arrays of domain
    indices and return the corresponding distances. ``domain`` is a sequence
    or its length.

    With ``identity`` set, both oracles are taken to be invariant under a
    group action that is transitive on the domain, and only pairs
    ``(g, identity)`` are visited. ``mode="sampled"`` draws ``count`` seeded
    uniform pairs (or uniform ``g`` in the reduced case) and always includes
    ``anchors``; it reports a lower estimate of the distortion.

    Chunks may be evaluated by ``workers`` threads; partial results are merged
    in chunk order, so the report does not depend on the worker count.
    """
    size = domain if isinstance(domain, (int, np.integer)) else len(domain)
    if size < 2:
        raise UsageError("domain needs at least two points")
    if mode not in ("exact", "sampled"):
        raise UsageError(f"unknown scan mode {mode!r}")
    red = _Reducer()
    if anchors:
        pa = np.array([p[0] for p in anchors], dtype=np.int64)
        pb = np.array([p[1] for p in anchors], dtype=np.int64)
        red.run([(pa, pb)], metric, embed)
    if mode == "exact":
        red.run(_exact_chunks(size, identity, chunk), metric, embed, workers)
        return red.report("exact")
    red.run(_sampled_chunks(size, identity, count, seed, chunk), metric, embed, workers)
    return red.report("sampled", seed)


def matrix_oracle(D: np.ndarray) -> PairOracle:
    D = np.asarray(D)
    return lambda a, b: D[a, b]


def points_oracle(points: np.ndarray) -> PairOracle:
    """Euclidean distances between rows of ``points``."""
    P = np.asarray(points)
    return lambda a, b: np.linalg.norm(P[a] - P[b], axis=-1)


# --- the lamplighter embedding ---------------------------------------------


@dataclass
class LamplighterScan:
    report: DistortionReport
    n: int
    elements: tuple[np.ndarray, np.ndarray] = field(repr=False)

    def element(self, index: int) -> grp.GroupElement:
        x, j = self.elements
        return grp.GroupElement(self.n, int(x[index]), int(j[index]))

    def witnesses(self) -> dict:
        return {
            "expansion": [repr(self.element(i)) for i in self.report.expansion_pair],
            "contraction": [repr(self.element(i)) for i in self.report.contraction_pair],
        }


def _element_pool(n: int, mode: str, count: int, seed: int, gens: wm.GeneratorSet):
    if mode == "exact":
        return grp.all_element_arrays(n)
    if mode != "sampled":
        raise UsageError(f"unknown scan mode {mode!r}")
    if count < 1:
        raise UsageError("sample count must be positive")
    rng = _sampler(seed)
    x = rng.integers(0, 1 << n, count, dtype=np.uint64)
    j = rng.integers(0, n, count)
    fixed = [grp.identity(n)] + gens.elements()
    fx = np.array([g.lamps for g in fixed], dtype=np.uint64)
    fj = np.array([g.pos for g in fixed], dtype=np.int64)
    return np.concatenate([fx, x]), np.concatenate([fj, j])


def embedding_distortion(params: em.EmbeddingParams, gens: wm.GeneratorSet | None = None,
                         mode: str = "exact", count: int = 1_000_000, seed: int = 0,
                         table: wm.WordMetricTable | None = None, workers: int = 1,
                         chunk: int = 1 << 18) -> LamplighterScan:
    """Distortion of the arc embedding against a word metric.

    Both the word metric and the embedding are invariant, so pairs reduce to
    ``(g, e)``. Exact mode visits every element. Sampled mode visits the
    generators (where the expansion of a map on a word metric is attained)
    and ``count`` seeded uniform elements.
    """
    n = params.n
    gens = gens or wm.GeneratorSet.standard(n)
    standard = gens.movement == (1,) and gens.toggle
    if n > grp.MAX_VECTOR_N:
        raise SizeGuardError(f"vectorized scan guard: n={n} exceeds {grp.MAX_VECTOR_N}")
    if table is None and not standard:
        table = wm.bfs_table(n, gens)
    x, j = _element_pool(n, mode, count, seed, gens)

    def metric(a, b):
        if table is not None:
            return table.pair_distances(x[a], j[a], x[b], j[b])
        xi, ji = grp.inverse_arrays(x[b], j[b], n)
        xq, jq = grp.multiply_arrays(xi, ji, x[a], j[a], n)
        return wm.travel_metric_batch(xq, jq, n)

    def embed(a, b):
        xi, ji = grp.inverse_arrays(x[b], j[b], n)
        xq, jq = grp.multiply_arrays(xi, ji, x[a], j[a], n)
        return np.sqrt(em.fast_sq_dist_batch(xq, jq, params))

    # pool index 0 is the identity in both modes
    report = distortion_scan(metric, embed, x.size, "exact", identity=0, workers=workers, chunk=chunk)
    if mode == "sampled":
        report.mode, report.seed = "sampled", seed
    return LamplighterScan(report, n, (x, j))


# --- symmetrization ------------------------------------------------------------


@dataclass
class SymmetrizedEmbedding:
    kernel: np.ndarray
    coords: np.ndarray
    min_eigenvalue: float
    trace: float
    degenerate: bool

    @property
    def psd(self) -> bool:
        return self.min_eigenvalue >= -1e-9 * max(self.trace, 1e-300)

    def sq_distances(self) -> np.ndarray:
        d = np.real(np.diag(self.kernel))
        return np.maximum(d[:, None] + d[None, :] - 2.0 * np.real(self.kernel), 0.0)


def symmetrize(points: np.ndarray, mul: np.ndarray, inv: np.ndarray | None = None) -> SymmetrizedEmbedding:
    """Average the Gram matrix of an arbitrary embedding over the group.

    ``points[x]`` is the image of element ``x`` and ``mul[a, b]`` indexes the
    product ``a b``. The kernel ``K(x, y) = (1/|G|) sum_z <f(zx), f(zy)>``
    depends only on ``x^-1 y``, which brings the cost down to ``O(|G|^2)``.
    Coordinates come from the eigendecomposition of ``K`` with negative
    round-off eigenvalues clipped to zero; the resulting map is equivariant
    for the left-regular representation.
    """
    P = np.asarray(points)
    order = P.shape[0]
    if order > SYMMETRIZE_MAX_ORDER:
        raise SizeGuardError(f"symmetrize guard: |G|={order} exceeds {SYMMETRIZE_MAX_ORDER}")
    if mul.shape != (order, order):
        raise UsageError(f"multiplication table shape {mul.shape} does not match {order} points")
    if P.ndim == 1:
        P = P[:, None]
    gram = P.conj() @ P.T
    # kappa[h] = (1/|G|) sum_w <f(w), f(w h)>
    kappa = np.array([gram[np.arange(order), mul[:, h]].mean() for h in range(order)])
    if inv is None:
        inv = np.argmax(mul == 0, axis=1)
    K = kappa[mul[inv][:, :]]  # K[x, y] = kappa[x^-1 y]
    K = 0.5 * (K + K.conj().T)
    w, U = np.linalg.eigh(K)
    trace = float(np.real(np.trace(K)))
    coords = U * np.sqrt(np.clip(w, 0.0, None))[None, :]
    degenerate = trace <= 1e-300 or bool(np.any(_offdiag_zero(K)))
    return SymmetrizedEmbedding(K, coords, float(w.min()), trace, degenerate)


def _offdiag_zero(K: np.ndarray) -> np.ndarray:
    d = np.real(np.diag(K))
    sq = d[:, None] + d[None, :] - 2.0 * np.real(K)
    scale = max(float(d.max()), 1e-300)
    mask = ~np.eye(K.shape[0], dtype=bool)
    return (sq <= 1e-12 * scale) & mask


# --- subcube averages ------------------------------------------------------------


def subcube_diagnostic(B: int, params: em.EmbeddingParams) -> float:
    """Average of ``|f(x, 0) - f(e)|^2`` over all lamp sets ``x`` inside ``B``.

    A uniform subset of ``B`` meets a set ``J`` with probability
    ``1 - 2**-|J & B|``, so the average is
    ``2**(L+1) sum_I sum_k (1 - 2**-|(-I) & shift(B, k)|) (v^I_k)^2``.
    """
    n = params.n
    V = params.profiles
    shifted = [grp.shift(B, k, n) for k in range(n)]
    meet = np.array([[grp.popcount(J & s) for s in shifted] for J in params.walsh_supports])
    return float(2.0 * np.sum((1.0 - 2.0 ** (-meet)) * V * V))
