"""The cyclic lamplighter group C_2 wr C_n.

Elements are pairs ``(x, j)`` with ``x`` a subset of ``C_n`` (the lit lamps)
and ``j`` the lighter position. Lamp sets are stored as ``n``-bit
characteristic vectors in a plain Python ``int`` (bit ``i`` set iff ``i`` is
in the set), so any ``n`` works; the vectorized helpers below use ``uint64``
arrays and therefore need ``n <= 63``.

The group law is

    (x, j) . (y, k) = (x ^ shift(y, j), j + k)

where ``shift(y, j) = {i - j : i in y}``. Under this law right multiplication
by the toggle generator ``({0}, 0)`` flips lamp ``-j`` when the lighter is at
``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import SizeGuardError, UsageError

MAX_VECTOR_N = 63


def _check_modulus(n: int, minimum: int = 3) -> None:
    if not isinstance(n, (int, np.integer)) or n < minimum:
        raise UsageError(f"modulus must be an integer >= {minimum}, got {n!r}")


def full_mask(n: int) -> int:
    return (1 << n) - 1


def lamps_from_members(members: Iterable[int], n: int) -> int:
    bits = 0
    for i in members:
        bits |= 1 << (int(i) % n)
    return bits


def lamp_members(bits: int, n: int) -> list[int]:
    return [i for i in range(n) if bits >> i & 1]


def popcount(bits: int) -> int:
    return bin(bits).count("1")


def shift(x: int, k: int, n: int) -> int:
    """alpha^k applied to a lamp set: ``{i - k mod n : i in x}``.

    This is a right rotation of the ``n``-bit word by ``k``.
    """
    k %= n
    if k == 0:
        return x
    return ((x >> k) | (x << (n - k))) & full_mask(n)


def negate(x: int, n: int) -> int:
    """The reflected set ``{-i mod n : i in x}``."""
    out = x & 1
    for i in range(1, n):
        if x >> i & 1:
            out |= 1 << (n - i)
    return out


def cyclic_distance(j: int, k: int, n: int) -> int:
    d = (j - k) % n
    return min(d, n - d)


@dataclass(frozen=True, order=True)
class GroupElement:
    """A lamplighter element ``(lamps, pos)`` of ``C_2 wr C_n``."""

    n: int
    lamps: int
    pos: int

    def __post_init__(self):
        _check_modulus(self.n)
        if not 0 <= self.pos < self.n:
            raise UsageError(f"position {self.pos} outside C_{self.n}")
        if self.lamps < 0 or self.lamps >> self.n:
            raise UsageError(f"lamp bits beyond position {self.n - 1}")

    @classmethod
    def from_members(cls, members: Iterable[int], pos: int, n: int) -> "GroupElement":
        return cls(n, lamps_from_members(members, n), pos % n)

    @classmethod
    def from_index(cls, index: int, n: int) -> "GroupElement":
        return cls(n, index & full_mask(n), index >> n)

    @property
    def members(self) -> list[int]:
        return lamp_members(self.lamps, self.n)

    @property
    def index(self) -> int:
        """Dense index ``pos * 2**n + lamps``."""
        return (self.pos << self.n) | self.lamps

    def canonical(self) -> tuple[tuple[int, ...], int]:
        return tuple(self.members), self.pos

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def __repr__(self):
        return f"GroupElement({set(self.members) or '{}'}, {self.pos}; n={self.n})"


def identity(n: int) -> GroupElement:
    return GroupElement(n, 0, 0)


def toggle(n: int) -> GroupElement:
    """The generator ``({0}, 0)``."""
    return GroupElement(n, 1, 0)


def step(n: int, s: int = 1) -> GroupElement:
    """The movement generator ``(emptyset, s)``."""
    return GroupElement(n, 0, s % n)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    if a.n != b.n:
        raise UsageError(f"mismatched moduli {a.n} and {b.n}")
    n = a.n
    return GroupElement(n, a.lamps ^ shift(b.lamps, a.pos, n), (a.pos + b.pos) % n)


def inverse(g: GroupElement) -> GroupElement:
    n = g.n
    return GroupElement(n, shift(g.lamps, -g.pos, n), (-g.pos) % n)


def elements(n: int, max_n: int = 22) -> Iterator[GroupElement]:
    """All ``n * 2**n`` elements in dense-index order."""
    _check_modulus(n)
    if n > max_n:
        raise SizeGuardError(f"element guard: n={n} exceeds {max_n}")
    for index in range(n << n):
        yield GroupElement.from_index(index, n)


def group_order(n: int) -> int:
    return n << n


@dataclass(frozen=True)
class Arc:
    """A connected arc ``{start, start+1, ..., start+length-1}`` of ``C_n``."""

    n: int
    start: int
    length: int

    def __post_init__(self):
        _check_modulus(self.n)
        if not 1 <= self.length <= self.n:
            raise UsageError(f"arc length must lie in [1, {self.n}], got {self.length}")
        if not 0 <= self.start < self.n:
            raise UsageError(f"arc start {self.start} outside C_{self.n}")

    def __contains__(self, k: int) -> bool:
        return (k - self.start) % self.n < self.length

    @property
    def members(self) -> list[int]:
        return [(self.start + t) % self.n for t in range(self.length)]

    @property
    def bits(self) -> int:
        return lamps_from_members(self.members, self.n)

    def reflected(self) -> "Arc":
        """The arc ``-I``."""
        return Arc(self.n, (-(self.start + self.length - 1)) % self.n, self.length)

    def rotated(self, t: int) -> "Arc":
        return Arc(self.n, (self.start + t) % self.n, self.length)


def arc_distance(k: int, arc: Arc) -> int:
    """Cyclic distance from ``k`` to the nearest point of ``arc``."""
    if arc is None:
        raise UsageError("empty arc")
    n = arc.n
    offset = (k - arc.start) % n
    if offset < arc.length:
        return 0
    # distance past the far end vs. distance back to the start
    return min(offset - (arc.length - 1), n - offset)


def arc_family(n: int, length: int | None = None) -> list[Arc]:
    """The ``n`` arcs of length ``floor(n/3)``, one starting at each residue."""
    _check_modulus(n)
    if length is None:
        length = n // 3
    return [Arc(n, s, length) for s in range(n)]


# --- vectorized helpers over uint64 arrays (n <= 63) -------------------------


def _check_vector_n(n: int) -> None:
    if n > MAX_VECTOR_N:
        raise SizeGuardError(f"vectorized lamp arrays: n={n} exceeds {MAX_VECTOR_N}")


def shift_array(x: np.ndarray, k, n: int) -> np.ndarray:
    """Vectorized :func:`shift`; ``k`` may be a scalar or an array."""
    _check_vector_n(n)
    x = np.asarray(x, dtype=np.uint64)
    k = np.asarray(k, dtype=np.int64) % n
    mask = np.uint64(full_mask(n))
    right = np.right_shift(x, k.astype(np.uint64))
    # a left shift by n would be undefined for uint64 when n == 64; k == 0 is masked out
    left = np.left_shift(x, ((n - k) % n).astype(np.uint64))
    out = (right | np.where(k == 0, np.uint64(0), left)) & mask
    return out.astype(np.uint64)


def multiply_arrays(xa, ja, xb, jb, n: int):
    """Vectorized group law on parallel arrays ``(lamps, pos)``."""
    xa = np.asarray(xa, dtype=np.uint64)
    xb = np.asarray(xb, dtype=np.uint64)
    ja = np.asarray(ja, dtype=np.int64)
    jb = np.asarray(jb, dtype=np.int64)
    return xa ^ shift_array(xb, ja, n), (ja + jb) % n


def inverse_arrays(x, j, n: int):
    j = np.asarray(j, dtype=np.int64)
    return shift_array(x, -j, n), (-j) % n


def popcount_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.uint64)
    count = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        count += (x & np.uint64(1)).astype(np.int64)
        x = x >> np.uint64(1)
    return count


def bits_matrix(x: np.ndarray, n: int) -> np.ndarray:
    """Boolean matrix ``(len(x), n)`` of lamp memberships."""
    x = np.asarray(x, dtype=np.uint64)
    positions = np.arange(n, dtype=np.uint64)
    return ((x[:, None] >> positions[None, :]) & np.uint64(1)).astype(bool)


def all_element_arrays(n: int, max_n: int = 22):
    """``(lamps, pos)`` arrays for every element in dense-index order."""
    _check_modulus(n)
    if n > max_n:
        raise SizeGuardError(f"element guard: n={n} exceeds {max_n}")
    index = np.arange(n << n, dtype=np.int64)
    return (index & full_mask(n)).astype(np.uint64), index >> n


def dense_index(x, j, n: int) -> np.ndarray:
    return (np.asarray(j, dtype=np.int64) << n) | np.asarray(x, dtype=np.uint64).astype(np.int64)


def multiplication_table(n: int, max_order: int = 4096) -> np.ndarray:
    """``table[a, b]`` is the dense index of ``a . b``."""
    order = group_order(n)
    if order > max_order:
        raise SizeGuardError(f"multiplication table guard: |G|={order} exceeds {max_order}")
    x, j = all_element_arrays(n)
    xa, xb = np.meshgrid(x, x, indexing="ij")
    ja, jb = np.meshgrid(j, j, indexing="ij")
    xp, jp = multiply_arrays(xa.ravel(), ja.ravel(), xb.ravel(), jb.ravel(), n)
    return dense_index(xp, jp, n).reshape(order, order)


def inverse_table(n: int) -> np.ndarray:
    x, j = all_element_arrays(n)
    xi, ji = inverse_arrays(x, j, n)
    return dense_index(xi, ji, n)
