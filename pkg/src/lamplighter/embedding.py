"""Low-distortion equivariant embedding of C_2 wr C_n into Hilbert space.

For every arc ``I`` of length ``L = floor(n/3)`` there is a profile vector

    v^I_k = eta                        if k in I
    v^I_k = delta * d(k, I) ** alpha   otherwise        (alpha = 1/2)

and the embedding is the direct sum, over arcs ``I`` and Walsh labels ``A``
contained in the mirror arc ``-I``, of ``pi_A(g) v^I``. The Walsh factor
``W_A(shift(x, k))`` flips coordinate ``k`` exactly when lamp ``-k`` of ``x``
lies in ``A``, so taking ``A`` inside ``-I`` places the flips where ``v^I`` is
small.

Summing over all ``A`` in a set ``J`` with ``sum_A W_A(B) = 2**|J| [J & B empty]``
collapses the ``2**L`` blocks per arc, giving

    |f(x, j) - f(e)|^2 = 2**L sum_I sum_k ( v_{k+j}^2 + v_k^2
                                           - 2 [(-I) & shift(x, k) empty] v_{k+j} v_k ).

The factor ``2**L`` is folded into the parameters (``eta_scaled**2 =
2**L eta**2``) so nothing under- or overflows for large ``n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import group as grp
from .errors import SizeGuardError, UsageError
from .group import Arc, GroupElement

DENSE_MAX_N = 12


@dataclass(frozen=True)
class EmbeddingParams:
    n: int
    eta_scaled: float
    delta_scaled: float
    arc_len: int
    alpha: float = 0.5

    def __post_init__(self):
        if self.n < 3:
            raise UsageError(f"modulus must be >= 3, got {self.n}")
        for name in ("eta_scaled", "delta_scaled", "alpha"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise UsageError(f"{name} must be finite and positive, got {value}")
        if not 1 <= self.arc_len < self.n:
            raise UsageError(f"arc length {self.arc_len} outside [1, n)")

    @classmethod
    def default(cls, n: int, alpha: float = 0.5) -> "EmbeddingParams":
        """``eta = 1/(n 2^{n/6})`` and ``delta = 1/(sqrt(n) 2^{n/6})``."""
        L = n // 3
        # 2^{L/2} * 2^{-n/6}, combined before evaluation
        factor = 2.0 ** (L / 2 - n / 6)
        return cls(n, factor / n, factor / np.sqrt(n), L, alpha)

    @classmethod
    def from_raw(cls, n: int, eta: float, delta: float, arc_len: int | None = None,
                 alpha: float = 0.5) -> "EmbeddingParams":
        L = n // 3 if arc_len is None else arc_len
        return cls(n, eta * 2.0 ** (L / 2), delta * 2.0 ** (L / 2), L, alpha)

    @property
    def eta(self) -> float:
        return self.eta_scaled * 2.0 ** (-self.arc_len / 2)

    @property
    def delta(self) -> float:
        return self.delta_scaled * 2.0 ** (-self.arc_len / 2)

    def scaled_by(self, c: float) -> "EmbeddingParams":
        return EmbeddingParams(self.n, c * self.eta_scaled, c * self.delta_scaled, self.arc_len, self.alpha)

    @cached_property
    def arcs(self) -> list[Arc]:
        return grp.arc_family(self.n, self.arc_len)

    @cached_property
    def profiles(self) -> np.ndarray:
        """Scaled profiles, one row per arc."""
        return np.array([_profile(arc, self.eta_scaled, self.delta_scaled, self.alpha) for arc in self.arcs])

    @cached_property
    def walsh_supports(self) -> list[int]:
        """Bitmask of the mirror arc ``-I`` holding the Walsh labels of each block."""
        return [arc.reflected().bits for arc in self.arcs]


@dataclass(frozen=True)
class ArcProfile:
    arc: Arc
    values: np.ndarray


def _profile(arc: Arc, eta: float, delta: float, alpha: float) -> np.ndarray:
    d = np.array([grp.arc_distance(k, arc) for k in range(arc.n)], dtype=float)
    return np.where(d == 0, eta, delta * d ** alpha)


def build_arc_profile(arc: Arc, params: EmbeddingParams) -> ArcProfile:
    """Raw (unscaled) profile ``v^I``."""
    if arc.length != params.arc_len or arc.n != params.n:
        raise UsageError(f"arc {arc} does not match params (n={params.n}, length={params.arc_len})")
    return ArcProfile(arc, _profile(arc, params.eta, params.delta, params.alpha))


# --- dense materialization (oracle only) -------------------------------------


def dense_block_labels(params: EmbeddingParams) -> list[tuple[Arc, int]]:
    """Block order ``(I, A)`` used by :func:`dense_embed`."""
    labels = []
    for arc in params.arcs:
        support = arc.reflected().members
        for r in range(len(support) + 1):
            for subset in itertools.combinations(support, r):
                labels.append((arc, grp.lamps_from_members(subset, params.n)))
    return labels


def dense_embed(g: GroupElement, params: EmbeddingParams) -> np.ndarray:
    """Concatenation over blocks ``(I, A)`` of ``(W_A(shift(x, k)) v^I_{k+j})_k``."""
    n = params.n
    if n > DENSE_MAX_N:
        raise SizeGuardError(f"dense guard: n={n} exceeds {DENSE_MAX_N}; use fast_sq_dist")
    if g.n != n:
        raise UsageError(f"element for n={g.n}, params for n={n}")
    raw = {arc: build_arc_profile(arc, params).values for arc in params.arcs}
    shifted = [grp.shift(g.lamps, k, n) for k in range(n)]
    blocks = []
    for arc, A in dense_block_labels(params):
        signs = np.array([-1.0 if grp.popcount(A & s) & 1 else 1.0 for s in shifted])
        blocks.append(signs * np.roll(raw[arc], -g.pos))
    return np.concatenate(blocks)


def dense_sq_dist_batch(x, j, params: EmbeddingParams, chunk: int = 8192) -> np.ndarray:
    """``|f(g) - f(e)|^2`` from the materialized blocks, for arrays of elements.

    Same coordinates as :func:`dense_embed`, built block by block over a
    chunk of elements; nothing from the closed form is reused.
    """
    n = params.n
    if n > DENSE_MAX_N:
        raise SizeGuardError(f"dense guard: n={n} exceeds {DENSE_MAX_N}; use fast_sq_dist")
    x = np.asarray(x, dtype=np.uint64)
    j = np.asarray(j, dtype=np.int64)
    raw = {arc: build_arc_profile(arc, params).values for arc in params.arcs}
    ks = np.arange(n)
    out = np.empty(x.shape, dtype=float)
    for lo in range(0, x.size, chunk):
        xs, js = x[lo:lo + chunk], j[lo:lo + chunk]
        shifted = np.stack([grp.shift_array(xs, k, n) for k in ks], axis=1)
        acc = np.zeros(xs.size)
        for arc, A in dense_block_labels(params):
            v = raw[arc]
            signs = 1.0 - 2.0 * (grp.popcount_array(shifted & np.uint64(A)) & 1)
            block = signs * v[(ks[None, :] + js[:, None]) % n]
            acc += np.sum((block - v[None, :]) ** 2, axis=1)
        out[lo:lo + chunk] = acc
    return out


def dense_dimension(params: EmbeddingParams) -> int:
    return params.n * params.n * 2 ** params.arc_len


# --- closed form -------------------------------------------------------------


def _check(g: GroupElement, params: EmbeddingParams) -> None:
    if g.n != params.n:
        raise UsageError(f"element for n={g.n}, params for n={params.n}")


def _miss_matrix(x: int, params: EmbeddingParams) -> np.ndarray:
    """``miss[I, k]``: the mirror arc of ``I`` misses ``shift(x, k)``."""
    n = params.n
    shifted = [grp.shift(x, k, n) for k in range(n)]
    return np.array([[(J & s) == 0 for s in shifted] for J in params.walsh_supports])


def fast_sq_dist(g: GroupElement, params: EmbeddingParams) -> float:
    """``|f(g) - f(e)|^2`` in closed form, summed arc by arc."""
    _check(g, params)
    V = params.profiles
    Vj = np.roll(V, -g.pos, axis=1)
    miss = _miss_matrix(g.lamps, params)
    return float(np.sum(Vj * Vj + V * V - 2.0 * miss * Vj * V))


def pair_sq_dist(g: GroupElement, h: GroupElement, params: EmbeddingParams) -> float:
    """``|f(g) - f(h)|^2 = |f(h^-1 g) - f(e)|^2`` by equivariance."""
    if g == h:
        return 0.0
    return fast_sq_dist(grp.inverse(h) * g, params)


@dataclass(frozen=True)
class TermDecomposition:
    travel: float
    parity: float
    surrogate: float

    @property
    def total(self) -> float:
        return self.travel + self.parity


def term_decomposition(g: GroupElement, params: EmbeddingParams) -> TermDecomposition:
    """Split ``|f(g) - f(e)|^2`` into a movement part and a lamp-parity part.

    ``travel + parity`` is exact. ``surrogate`` is the simpler two-term form
    ``travel + 2**(L+1) sum [flip] v_k^2``, which agrees with the exact value
    up to a factor in ``[1/2, 3]`` since all profile entries are nonnegative.
    """
    _check(g, params)
    V = params.profiles
    Vj = np.roll(V, -g.pos, axis=1)
    hit = ~_miss_matrix(g.lamps, params)
    travel = float(np.sum((Vj - V) ** 2))
    parity = float(2.0 * np.sum(hit * Vj * V))
    surrogate = travel + float(2.0 * np.sum(hit * V * V))
    return TermDecomposition(travel, parity, surrogate)


def fast_sq_dist_batch(x, j, params: EmbeddingParams, chunk: int = 65536) -> np.ndarray:
    """Vectorized closed form over ``uint64`` lamp arrays.

    Arc ``I + a`` has profile ``v^I`` rotated by ``a`` and mirror arc
    ``-I - a``, so each arc contributes the same total and only the first arc
    needs evaluating.
    """
    n = params.n
    x = np.asarray(x, dtype=np.uint64)
    j = np.asarray(j, dtype=np.int64)
    v = params.profiles[0]
    J0 = params.walsh_supports[0]
    # (-I) & shift(x, k) empty  <=>  x & (J0 + k) empty
    windows = np.array([grp.shift(J0, -k, n) for k in range(n)], dtype=np.uint64)
    base = 2.0 * float(v @ v)
    out = np.empty(x.shape, dtype=float)
    ks = np.arange(n)
    for lo in range(0, x.size, chunk):
        xs, js = x[lo:lo + chunk], j[lo:lo + chunk]
        miss = (xs[:, None] & windows[None, :]) == 0
        vj = v[(ks[None, :] + js[:, None]) % n]
        cross = np.sum(miss * vj * v[None, :], axis=1)
        out[lo:lo + chunk] = n * (base - 2.0 * cross)
    return np.maximum(out, 0.0)
