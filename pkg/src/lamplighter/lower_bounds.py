"""Certified lower bounds on the Euclidean distortion of C_2 wr C_n.

Two routes:

* the representation-averaging bound, which pairs the second moment of the
  word metric with the smallest Rayleigh quotient of ``sum_s (2 - g(s) - g(s)*)``
  over nontrivial representations;
* the spectral-gap bound for Cayley graphs with random movement sets, where the
  gap comes from the zig-zag eigenvalue estimate.
"""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, field
from math import gcd, log, sqrt
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from . import group as grp
from . import representations as rep
from . import word_metric as wm
from .errors import GenerationError, SizeGuardError, UsageError

DENSE_EIG_MAX_DIM = 64
CAYLEY_MAX_N = 12
DEGENERATE_LAMBDA = 1.0 - 1e-12


@dataclass(frozen=True)
class IrrepSpec:
    label: rep.RepLabel
    matrices: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return self.label.dim

    @classmethod
    def build(cls, label: rep.RepLabel, gens) -> "IrrepSpec":
        return cls(label, tuple(rep.irrep_generator_matrices(label, gens)))

    def is_unitary(self, tol: float = 1e-12) -> bool:
        eye = np.eye(self.dim)
        return all(np.abs(M.conj().T @ M - eye).max() <= tol for M in self.matrices)


def generator_operator(matrices: Sequence[np.ndarray]):
    """``sum_s (2 I - M_s - M_s^*)``, sparse when the matrices are large."""
    dim = matrices[0].shape[0]
    if dim > DENSE_EIG_MAX_DIM:
        H = sp.csr_matrix((dim, dim), dtype=complex)
        for M in matrices:
            Ms = sp.csr_matrix(M)
            H = H + 2.0 * sp.identity(dim, format="csr") - Ms - Ms.conj().T
        return H
    H = np.zeros((dim, dim), dtype=complex)
    for M in matrices:
        H += 2.0 * np.eye(dim) - M - M.conj().T
    return H


def _smallest_eigenvalue(H) -> float:
    if sp.issparse(H):
        if H.shape[0] <= DENSE_EIG_MAX_DIM:
            H = H.toarray()
        else:
            # shift so the smallest eigenvalue becomes the largest in magnitude
            top = float(abs(H).sum(axis=1).max())
            B = top * sp.identity(H.shape[0], format="csr") - H
            val = eigsh(B, k=1, which="LA", return_eigenvectors=False, tol=1e-12)[0]
            return max(0.0, top - float(val))
    return max(0.0, float(np.linalg.eigvalsh(H)[0]))


def rayleigh_min(irrep: IrrepSpec, gens=None) -> float:
    """``min_v sum_s |g(s) v - v|^2 / |v|^2`` for a nontrivial representation.

    When ``gens`` is given the matrices are rebuilt for it; otherwise the
    matrices stored in ``irrep`` are used.
    """
    if irrep.label.is_trivial:
        raise UsageError("the trivial representation has Rayleigh quotient 0 and voids the bound")
    matrices = irrep.matrices if gens is None else tuple(rep.irrep_generator_matrices(irrep.label, gens))
    if not matrices:
        raise UsageError("empty generator list")
    return _smallest_eigenvalue(generator_operator(matrices))


def circulant_laplacian(n: int, movement: Sequence[int]) -> np.ndarray:
    """``sum_s (2 I - P^s - P^-s)`` over the listed steps ``s``."""
    L = np.zeros((n, n))
    idx = np.arange(n)
    for s in movement:
        L[idx, idx] += 2.0
        L[idx, (idx + s) % n] -= 1.0
        L[idx, (idx - s) % n] -= 1.0
    return L


@dataclass(frozen=True)
class ListedMinimum:
    value: float
    label: rep.RepLabel
    character_min: float
    walsh_min: float


def listed_rayleigh_min(gens: wm.GeneratorSet) -> ListedMinimum:
    """Smallest Rayleigh quotient over every nontrivial listed representation.

    For a Walsh label ``A`` the operator is the circulant Laplacian of the
    moves plus ``4`` on the diagonal entries ``k`` with ``-k`` in ``A`` (one
    toggle). Enlarging ``A`` adds a positive semidefinite term and rotating
    ``A`` conjugates by a shift, so over nonempty ``A`` the minimum sits at
    ``A = {0}``; the full set ``A = C_n`` acts on ``C^1`` with value ``4``.
    """
    n = gens.n
    chars = [(sum(abs(np.exp(2j * np.pi * u * s / n) - 1.0) ** 2 for s in gens.movement), u)
             for u in range(1, n)]
    cmin, cu = min(chars)
    L = circulant_laplacian(n, gens.movement)
    if gens.toggle:
        L[0, 0] += 4.0
    wmin = max(0.0, float(np.linalg.eigvalsh(L)[0]))
    wlabel = rep.walsh(1, n)
    if gens.toggle and 4.0 < wmin:
        wmin, wlabel = 4.0, rep.walsh(grp.full_mask(n), n)
    if cmin <= wmin:
        return ListedMinimum(float(cmin), rep.character(cu, n), float(cmin), wmin)
    return ListedMinimum(wmin, wlabel, float(cmin), wmin)


def _moments(source) -> tuple[int, int, int]:
    if isinstance(source, wm.WordMetricTable):
        return source.moments()
    order, total, total_sq = source
    return int(order), int(total), int(total_sq)


def lemma32_bound(table, gens: wm.GeneratorSet, irreps: Optional[Sequence[IrrepSpec]] = None) -> float:
    """``sqrt( sum_g rho(g, e)^2 / (2 |G|) * R / |S| )``.

    ``R`` is the least Rayleigh quotient among ``irreps`` (each nontrivial) or,
    with ``irreps=None``, over the whole listed family. ``table`` is a
    :class:`WordMetricTable` or a ``(|G|, sum rho, sum rho^2)`` triple such as
    :func:`word_metric.standard_moments` returns. The bound is relative to the
    listed family.
    """
    order, _, total_sq = _moments(table)
    if irreps is None:
        R = listed_rayleigh_min(gens).value
    else:
        if len(irreps) == 0:
            raise UsageError("lemma32_bound needs at least one representation")
        for ir in irreps:
            if ir.label.n != gens.n:
                raise UsageError(f"representation for n={ir.label.n}, generators for n={gens.n}")
        R = min(rayleigh_min(ir, gens) for ir in irreps)
    return sqrt(total_sq / (2.0 * order) * R / len(gens))


# --- spectral bound ---------------------------------------------------------


def circulant_spectrum(n: int, movement: Sequence[int]) -> np.ndarray:
    """Eigenvalues of the normalized adjacency of ``Cayley(C_n, S u -S)``, descending."""
    moves = sorted({int(s) % n for s in movement} | {(-int(s)) % n for s in movement})
    if not moves:
        raise UsageError("movement set must be nonempty")
    if 0 in moves:
        raise UsageError("movement set may not contain 0")
    u = np.arange(n)[:, None]
    s = np.array(moves)[None, :]
    vals = np.cos(2.0 * np.pi * u * s / n).mean(axis=1)
    return np.clip(np.sort(vals)[::-1], -1.0, 1.0)


def second_eigenvalue(n: int, movement: Sequence[int]) -> float:
    return float(circulant_spectrum(n, movement)[1])


def default_generator_count(n: int, log_base: float = np.e) -> int:
    return int(np.ceil(100.0 * log(n) / log(log_base)))


def sample_generators(n: int, count: int, seed: int = 0, max_tries: int = 10_000) -> tuple[int, ...]:
    """Uniform ``count``-subset of ``C_n \\ {0}`` conditioned on generating ``C_n``."""
    if n < 2:
        raise UsageError(f"modulus must be >= 2, got {n}")
    if not 1 <= count <= n - 1:
        raise UsageError(f"cannot draw {count} distinct nonzero residues mod {n}")
    rng = np.random.Generator(np.random.Philox(seed))
    for _ in range(max_tries):
        S = np.sort(rng.choice(n - 1, size=count, replace=False) + 1)
        g = n
        for s in S:
            g = gcd(g, int(s))
        if g == 1:
            return tuple(int(s) for s in S)
    raise GenerationError(f"no generating {count}-subset of C_{n} in {max_tries} draws")


def zigzag_lambda(lambda1: float, lambda2: float) -> float:
    """``(1 - b^2) a / 2 + sqrt((1 - b^2)^2 a^2 + 4 b^2) / 2`` for ``a = lambda1``, ``b = lambda2``."""
    for name, v in (("lambda1", lambda1), ("lambda2", lambda2)):
        if not 0.0 <= v <= 1.0:
            raise UsageError(f"{name}={v} outside [0, 1]")
    c = 1.0 - lambda2 * lambda2
    val = 0.5 * c * lambda1 + 0.5 * sqrt(c * c * lambda1 * lambda1 + 4.0 * lambda2 * lambda2)
    return min(1.0, val)


def cayley_second_eigenvalue(gens: wm.GeneratorSet, max_n: int = CAYLEY_MAX_N) -> float:
    """Second largest eigenvalue of the normalized adjacency of the full Cayley graph."""
    n = gens.n
    if n > max_n:
        raise SizeGuardError(f"Cayley spectrum guard: n={n} exceeds {max_n}")
    x, j = grp.all_element_arrays(n)
    order = x.size
    src = np.arange(order)
    rows, cols = [], []
    for s in gens.symmetrized_moves:
        rows.append(src)
        cols.append(grp.dense_index(x, (j + s) % n, n))
    if gens.toggle:
        rows.append(src)
        cols.append(grp.dense_index(x ^ grp.shift_array(np.ones_like(x), j, n), j, n))
    degree = len(rows)
    A = sp.csr_matrix((np.full(degree * order, 1.0 / degree), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(order, order))
    vals = eigsh(A, k=2, which="LA", return_eigenvectors=False, tol=1e-10)
    return float(np.clip(np.sort(vals)[0], -1.0, 1.0))


@dataclass
class SpectralReport:
    n: int
    generator_count: int
    lambda1: float
    lambda2: float
    lambda_: float
    avg_rho_sq: float
    d_lower: float
    mode: str
    lambda_zigzag: float
    admissible: bool
    warning: Optional[str] = None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lambda_")
        return out


def prop34_bound(n: int, movement: Sequence[int], rho_source: str = "estimate",
                 log_base: float = np.e) -> SpectralReport:
    """``D >= sqrt((1 - lambda) avg rho^2 / 2)`` for the movement set plus the toggle.

    Generator edges have length 1, so the edge average of ``rho^2`` is 1.
    ``rho_source="estimate"`` uses ``E|x ^ y|^2 = n(n+1)/4`` for independent
    uniform lamp sets, a lower estimate since ``rho >= |x ^ y|``, together with
    the zig-zag eigenvalue. ``rho_source="exact"`` (``n <= 12``) takes the
    average from a BFS table and uses the Cayley graph's own second eigenvalue,
    reporting the zig-zag value alongside.
    """
    gens = wm.GeneratorSet(n, tuple(movement), True)
    lam1 = 1.0 - 2.0 / n
    lam2_signed = second_eigenvalue(n, gens.movement)
    lam2 = min(1.0, max(0.0, lam2_signed))
    lam_zz = zigzag_lambda(lam1, lam2)
    admissible = len(gens.movement) >= 100.0 * log(n) / log(log_base)

    if rho_source == "estimate":
        avg = n * (n + 1) / 4.0
        lam = lam_zz
    elif rho_source == "exact":
        if n > CAYLEY_MAX_N:
            raise SizeGuardError(f"exact spectral mode guard: n={n} exceeds {CAYLEY_MAX_N}")
        order, _, total_sq = wm.bfs_table(n, gens).moments()
        avg = total_sq / order
        lam = cayley_second_eigenvalue(gens)
    else:
        raise UsageError(f"unknown rho source {rho_source!r}")

    warning = None
    if lam >= DEGENERATE_LAMBDA:
        warning = f"degenerate spectral bound: lambda={lam!r} is not below 1 - 1e-12"
        warnings.warn(warning, RuntimeWarning, stacklevel=2)
        d_lower = 0.0
    else:
        d_lower = sqrt((1.0 - lam) * avg / 2.0)
    return SpectralReport(n, len(gens.movement), lam1, lam2_signed, lam, avg, d_lower, rho_source,
                          lam_zz, admissible, warning)
