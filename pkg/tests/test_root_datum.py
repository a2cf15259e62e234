from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from titsgroup.root_datum import (RootDatumError, build_root_datum, inversion_set, longest_element,
                                  normal_form, weyl_act)

from conftest import datum

WEYL_ORDERS = {("A", 1): 2, ("A", 2): 6, ("A", 3): 24, ("B", 3): 48, ("C", 3): 48,
               ("D", 4): 192, ("G", 2): 12, ("F", 4): 1152}


def matrix_closure(rd):
    """Weyl group order by closing the simple reflection matrices under products."""
    gens = [np.array(m, dtype=np.int64) for m in rd.simple_matrices]
    one = np.eye(rd.dim, dtype=np.int64)
    seen = {one.tobytes()}
    frontier = [one]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g @ s
                key = h.tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append(h)
        frontier = nxt
    return len(seen)


@pytest.mark.parametrize("kind,rank", sorted(WEYL_ORDERS))
def test_weyl_order_matches_matrix_closure(kind, rank):
    rd = datum(kind, rank)
    assert rd.weyl_order == matrix_closure(rd) == WEYL_ORDERS[kind, rank]


def test_a2_positive_roots():
    rd = datum("A", 2)
    assert rd.npos == 3
    assert sorted(rd.roots[:3]) == [(0, 1), (1, 0), (1, 1)]


def test_a1_adjoint_lattice_is_half_coroot():
    rd = datum("A", 1, "ad")
    assert rd.lattice == ((Fraction(1, 2),),)
    assert rd.coroot_lattice[0] == (2,)


def test_rejects_bad_input():
    with pytest.raises(RootDatumError):
        build_root_datum([("H", 2)])
    with pytest.raises(RootDatumError):
        build_root_datum([("A", 0)])
    with pytest.raises(RootDatumError, match="coroot lattice"):
        build_root_datum([("A", 1)], [[2]])
    with pytest.raises(RootDatumError, match="coweight"):
        build_root_datum([("A", 1)], [[Fraction(1, 4)]])


def test_reflection_action():
    rd = datum("A", 2)
    s1, s2 = rd.s(1), rd.s(2)
    assert weyl_act(rd, s1, (1, 0)) == (-1, 0)
    assert weyl_act(rd, s1, (0, 1)) == (1, 1)
    assert weyl_act(rd, rd.identity, (3, -2)) == (3, -2)
    with pytest.raises(RootDatumError):
        weyl_act(rd, s2, (1, 0, 0))


def test_normal_forms():
    rd = datum("A", 2)
    assert normal_form(rd, [1, 2, 1, 2, 1, 2]).is_identity()
    assert normal_form(rd, [1, 2, 1]) == normal_form(rd, [2, 1, 2])
    assert normal_form(rd, [2, 1, 2]).word == (1, 2, 1)
    a1 = datum("A", 1)
    w = normal_form(a1, [1, 1, 1])
    assert w == a1.s(1) and w.length == 1


def test_longest_elements():
    rd = datum("A", 2)
    assert longest_element(rd, []).is_identity()
    w0 = longest_element(rd, [1, 2])
    assert w0.length == 3 and (w0 * w0).is_identity()
    assert max(rd.enumerate_weyl(), key=lambda w: w.length) == w0
    assert len(inversion_set(rd, w0)) == 3
    assert inversion_set(rd, rd.s(1)) == [(1, 0)]
    assert inversion_set(rd, rd.identity) == []


@pytest.mark.parametrize("kind,rank", [("B", 3), ("C", 3), ("G", 2), ("F", 4)])
def test_inner_product_invariant(kind, rank):
    rd = datum(kind, rank)
    basis = [tuple(int(i == j) for j in range(rd.dim)) for i in range(rd.dim)]
    for i in range(1, rank + 1):
        s = rd.s(i)
        for x in basis:
            for y in basis:
                assert rd.vec_inner(s.act(x), s.act(y)) == rd.vec_inner(x, y)


elements = st.integers(min_value=0, max_value=47)
vectors = st.lists(st.integers(-5, 5), min_size=3, max_size=3).map(tuple)


@settings(max_examples=60, deadline=None)
@given(elements, elements, vectors)
def test_weyl_action_is_an_action(i, j, v):
    rd = datum("B", 3)
    ws = rd.enumerate_weyl()
    u, w = ws[i], ws[j]
    assert (u * w).act(v) == u.act(w.act(v))
    assert u.length == len(inversion_set(rd, u)) == u.inverse().length
    assert normal_form(rd, u.word) == u
