"""Unitary representations of C_2 wr C_n used by the embedding and the bounds.

Two families:

* characters ``chi_u(x, j) = exp(2 pi i u j / n)``, factoring through ``C_n``;
* Walsh-twisted permutation representations ``pi_A`` on ``C^n`` with

      (pi_A(x, j) v)_k = W_A(shift(x, k)) * v_{k+j},   W_A(y) = (-1)^{|A & y|}.

``A = C_n`` is the one-dimensional sign representation ``(-1)^{|x|}``, and
``A = emptyset`` gives the regular representation of the quotient ``C_n``
(isomorphic to the sum of all characters).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import group as grp
from .errors import UsageError
from .group import GroupElement


@dataclass(frozen=True)
class RepLabel:
    kind: str  # "character" or "walsh"
    n: int
    u: int = 0
    A: int = 0

    def __post_init__(self):
        if self.kind not in ("character", "walsh"):
            raise UsageError(f"unknown representation kind {self.kind!r}")
        if self.kind == "character" and not 0 <= self.u < self.n:
            raise UsageError(f"character index {self.u} outside C_{self.n}")
        if self.kind == "walsh" and (self.A < 0 or self.A >> self.n):
            raise UsageError("Walsh label has bits beyond n")

    @property
    def dim(self) -> int:
        if self.kind == "character" or self.A == grp.full_mask(self.n):
            return 1
        return self.n

    @property
    def is_trivial(self) -> bool:
        return self.kind == "character" and self.u == 0

    @property
    def contains_trivial(self) -> bool:
        """True for ``chi_0`` and for ``pi_emptyset``."""
        return self.is_trivial or (self.kind == "walsh" and self.A == 0)

    def __str__(self):
        if self.kind == "character":
            return f"chi_{self.u}"
        return f"pi_{set(grp.lamp_members(self.A, self.n)) or '{}'}"


def character(u: int, n: int) -> RepLabel:
    return RepLabel("character", n, u=u % n)


def walsh(A, n: int) -> RepLabel:
    bits = A if isinstance(A, int) else grp.lamps_from_members(A, n)
    return RepLabel("walsh", n, A=bits)


def walsh_eval(A: int, x: int) -> int:
    """``W_A(x) = (-1)^{|A & x|}``."""
    return -1 if grp.popcount(A & x) & 1 else 1


def chi_apply(u: int, g: GroupElement) -> complex:
    return complex(np.exp(2j * np.pi * u * g.pos / g.n))


def walsh_diagonal(A: int, x: int, n: int) -> np.ndarray:
    """Entries ``W_A(shift(x, k))`` for ``k = 0..n-1``."""
    return np.array([walsh_eval(A, grp.shift(x, k, n)) for k in range(n)], dtype=float)


def pi_apply(A: int, g: GroupElement, v) -> np.ndarray:
    """Action of ``pi_A(g)`` on ``v``, via ``g = (x, 0) . (emptyset, 1)^j``."""
    n = g.n
    v = np.asarray(v, dtype=complex)
    if A == grp.full_mask(n):
        if v.shape != (1,):
            raise UsageError("pi_{C_n} acts on C^1")
        return (-1) ** grp.popcount(g.lamps) * v
    if v.shape != (n,):
        raise UsageError(f"pi_A acts on C^{n}, got shape {v.shape}")
    return walsh_diagonal(A, g.lamps, n) * np.roll(v, -g.pos)


def rep_matrix(label: RepLabel, g: GroupElement) -> np.ndarray:
    """Matrix of ``label`` at the element ``g``."""
    if label.n != g.n:
        raise UsageError(f"label for n={label.n}, element for n={g.n}")
    if label.kind == "character":
        return np.array([[chi_apply(label.u, g)]])
    n = g.n
    if label.dim == 1:
        return np.array([[(-1.0) ** grp.popcount(g.lamps)]], dtype=complex)
    # row k picks column k + j
    shift = np.zeros((n, n), dtype=complex)
    shift[np.arange(n), (np.arange(n) + g.pos) % n] = 1.0
    return walsh_diagonal(label.A, g.lamps, n)[:, None] * shift


def irrep_generator_matrices(label: RepLabel, gens) -> list[np.ndarray]:
    """Matrices of ``label`` on each listed generator.

    ``gens`` is a :class:`~lamplighter.word_metric.GeneratorSet` or any
    sequence of group elements.
    """
    elements = gens.elements() if hasattr(gens, "elements") else list(gens)
    return [rep_matrix(label, s) for s in elements]


def listed_labels(n: int, include_trivial: bool = False) -> Iterator[RepLabel]:
    """Every label of the list: all characters and all Walsh sets ``A``.

    ``pi_emptyset`` and ``chi_0`` contain the trivial representation and are
    skipped unless ``include_trivial``. There are ``2**n`` Walsh labels, so
    this is only sensible for small ``n``.
    """
    for u in range(n):
        if u or include_trivial:
            yield character(u, n)
    for A in range(1 << n):
        if A or include_trivial:
            yield RepLabel("walsh", n, A=A)


def group_sum(label: RepLabel) -> np.ndarray:
    """``sum_{g in G} label(g)`` by direct summation over every element."""
    n = label.n
    total = np.zeros((label.dim, label.dim), dtype=complex)
    for g in grp.elements(n):
        total += rep_matrix(label, g)
    return total


def orbit_gram(label: RepLabel, v: Sequence[complex], elements: Sequence[GroupElement]) -> np.ndarray:
    """Gram matrix ``<label(g) v, label(h) v>`` over the given elements."""
    vecs = np.array([rep_matrix(label, g) @ np.asarray(v, dtype=complex) for g in elements])
    return vecs.conj() @ vecs.T
