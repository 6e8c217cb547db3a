import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lamplighter import group as grp
from lamplighter.errors import UsageError
from lamplighter.group import Arc, GroupElement

from oracles import all_elements, cyc, wreath_mul


def E(members, pos, n):
    return GroupElement.from_members(members, pos, n)


@st.composite
def elements_of(draw, n):
    return GroupElement(n, draw(st.integers(0, (1 << n) - 1)), draw(st.integers(0, n - 1)))


@st.composite
def element_triples(draw):
    n = draw(st.integers(3, 16))
    return n, draw(elements_of(n)), draw(elements_of(n)), draw(elements_of(n))


def to_tuple(g):
    return tuple(g.lamps >> i & 1 for i in range(g.n)), g.pos


# --- examples ----------------------------------------------------------------


def test_identity_is_neutral():
    for g in grp.elements(4):
        assert grp.identity(4) * g == g
        assert g * grp.identity(4) == g


def test_toggle_is_an_involution():
    assert grp.toggle(5) * grp.toggle(5) == grp.identity(5)


def test_step_then_toggle_lights_the_negated_lamp():
    assert E([], 1, 4) * E([0], 0, 4) == E([3], 1, 4)


def test_inverse_examples():
    assert grp.inverse(grp.identity(4)) == grp.identity(4)
    assert grp.inverse(E([0], 1, 4)) == E([1], 3, 4)
    g = E([3], 1, 4)
    assert g * grp.inverse(g) == grp.identity(4)


def test_mismatched_moduli():
    with pytest.raises(UsageError):
        grp.multiply(grp.identity(4), grp.identity(5))


def test_cyclic_distance_examples():
    assert grp.cyclic_distance(0, 7, 12) == 5
    assert grp.cyclic_distance(3, 3, 12) == 0
    assert grp.cyclic_distance(0, 11, 12) == 1


def test_shift_examples():
    for n in (3, 5, 8):
        assert grp.shift(grp.lamps_from_members([1, 2], n), 1, n) == grp.lamps_from_members([0, 1], n)
        x = 0b101 & grp.full_mask(n)
        assert grp.shift(x, 0, n) == x
        assert grp.shift(x, n, n) == x


def test_arc_distance_examples():
    I = Arc(12, 0, 4)
    assert grp.arc_distance(2, I) == 0
    assert grp.arc_distance(5, I) == 2
    assert grp.arc_distance(11, I) == 1


def test_arc_distance_requires_an_arc():
    with pytest.raises(UsageError):
        grp.arc_distance(0, None)


def test_arc_family():
    fam = grp.arc_family(12)
    assert len(fam) == 12 and all(a.length == 4 for a in fam)
    fam7 = grp.arc_family(7)
    assert len(fam7) == 7 and all(a.length == 2 for a in fam7)
    for n in (6, 7, 13):
        fam = grp.arc_family(n)
        for k in range(n):
            assert sum(k in a for a in fam) == n // 3
    with pytest.raises(UsageError):
        grp.arc_family(2)


def test_element_validation():
    with pytest.raises(UsageError):
        GroupElement(4, 0, 4)
    with pytest.raises(UsageError):
        GroupElement(4, 1 << 4, 0)
    with pytest.raises(UsageError):
        GroupElement(2, 0, 0)


def test_canonical_and_index_roundtrip():
    n = 5
    for idx in range(grp.group_order(n)):
        g = GroupElement.from_index(idx, n)
        assert g.index == idx
        assert g == E(*g.canonical(), n)


# --- exhaustive and property checks ----------------------------------------------


def test_law_matches_coordinatewise_definition():
    for n in (3, 4, 5):
        els = list(grp.elements(n))
        for a, b in itertools.product(els, els[:: max(1, len(els) // 40)]):
            assert to_tuple(a * b) == wreath_mul(to_tuple(a), to_tuple(b), n)


def test_associativity_exhaustive_small():
    for n in (3, 4):
        els = list(grp.elements(n))
        for a, b, c in itertools.product(els, repeat=3):
            assert (a * b) * c == a * (b * c)


@given(element_triples())
def test_associativity_random(t):
    _, a, b, c = t
    assert (a * b) * c == a * (b * c)


def test_inverse_law_exhaustive():
    for n in range(3, 7):
        for g in grp.elements(n):
            assert g * grp.inverse(g) == grp.identity(n) == grp.inverse(g) * g


@given(st.integers(3, 20), st.integers(-40, 40), st.integers(-40, 40), st.data())
def test_shift_is_an_action(n, j, k, data):
    x = data.draw(st.integers(0, (1 << n) - 1))
    assert grp.shift(grp.shift(x, k, n), j, n) == grp.shift(x, j + k, n)
    assert grp.popcount(grp.shift(x, k, n)) == grp.popcount(x)


@given(st.integers(3, 20), st.data())
def test_cyclic_distance_metric(n, data):
    a, b, c = (data.draw(st.integers(0, n - 1)) for _ in range(3))
    assert grp.cyclic_distance(a, b, n) == cyc(a, b, n) == grp.cyclic_distance(b, a, n)
    assert grp.cyclic_distance(a, c, n) <= grp.cyclic_distance(a, b, n) + grp.cyclic_distance(b, c, n)


@given(st.integers(3, 24), st.data())
def test_arc_distance_matches_min_over_members(n, data):
    I = Arc(n, data.draw(st.integers(0, n - 1)), data.draw(st.integers(1, n)))
    k = data.draw(st.integers(0, n - 1))
    brute = min(cyc(k, m, n) for m in I.members)
    assert grp.arc_distance(k, I) == brute
    assert (brute == 0) == (k in I)
    # reflection symmetry
    assert grp.arc_distance((-k) % n, I.reflected()) == brute
    assert set(I.reflected().members) == {(-m) % n for m in I.members}


@given(st.integers(3, 63), st.data())
def test_vectorized_law_matches_scalar(n, data):
    a = data.draw(elements_of(n))
    b = data.draw(elements_of(n))
    x, j = grp.multiply_arrays(np.array([a.lamps], dtype=np.uint64), [a.pos],
                               np.array([b.lamps], dtype=np.uint64), [b.pos], n)
    assert GroupElement(n, int(x[0]), int(j[0])) == a * b
    xi, ji = grp.inverse_arrays(np.array([a.lamps], dtype=np.uint64), [a.pos], n)
    assert GroupElement(n, int(xi[0]), int(ji[0])) == grp.inverse(a)
    assert grp.popcount_array(np.array([a.lamps], dtype=np.uint64))[0] == grp.popcount(a.lamps)


def test_multiplication_table_matches_elementwise():
    n = 4
    mul = grp.multiplication_table(n)
    inv = grp.inverse_table(n)
    els = list(grp.elements(n))
    for a in els:
        assert els[inv[a.index]] == grp.inverse(a)
        for b in els:
            assert mul[a.index, b.index] == (a * b).index


def test_negate_matches_definition():
    for n in (3, 7, 10):
        for x in range(1 << n):
            want = grp.lamps_from_members([(-i) % n for i in grp.lamp_members(x, n)], n)
            assert grp.negate(x, n) == want


def test_tuple_oracle_enumerates_the_same_group():
    n = 4
    assert len(set(all_elements(n))) == grp.group_order(n)
