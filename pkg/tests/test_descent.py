import random

import pytest
from hypothesis import given, settings, strategies as st

from titsgroup.affine_tits import TitsElt, at_mul
from titsgroup.descent import (DescentError, build_frobenius, node_orbits, node_permutation, relative_data,
                               relative_tits_check, sigma_star_tits, sigma_star_weyl, sigma_weyl,
                               stable_cross_section)
from titsgroup.iwahori_weyl import ExtAffElt, length, node_reflection, omega_group

from conftest import datum, frob


def parabolic_longest_length(rd, nodes):
    """Max length over the subgroup generated by the node reflections (closure search)."""
    gens = [node_reflection(rd, s) for s in nodes]
    one = gens[0] * gens[0]
    seen = {(one.lam, one.w.perm): one}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                key = (y.lam, y.w.perm)
                if key not in seen:
                    seen[key] = y
                    nxt.append(y)
        frontier = nxt
        assert len(seen) < 10 ** 5
    return max(length(x) for x in seen.values())


def test_trivial_label_is_split():
    rd = datum("A", 2)
    fd = build_frobenius(rd)
    assert fd.inner is None
    assert node_permutation(fd) == (0, 1, 2)


def test_a1_inner_data():
    sc = frob("type=A rank=1 isogeny=sc inner=nu(1)")
    assert (sc.inner.k, sc.inner.eta) == (2, (1,))
    ad = frob("type=A rank=1 isogeny=ad inner=nu(1)")
    assert (ad.inner.k, ad.inner.eta) == (1, (1,))
    assert node_permutation(sc) == (1, 0)
    rel = relative_data(sc)
    assert rel.simple == [] and [o.finite for o in rel.orbits] == [False]


def test_a3_flip_relative_parameters():
    fd = frob("type=A rank=3 isogeny=sc diagram=3,2,1")
    rel = relative_data(fd)
    assert [o.nodes for o in rel.simple] == [(0,), (1, 3), (2,)]
    assert rel.params() == [1, 2, 1]


def test_a2_type_orbit_has_c_two():
    rel = relative_data(frob("type=A rank=2 isogeny=sc diagram=2,1"))
    (a2,) = [o for o in rel.simple if len(o.nodes) == 2]
    assert a2.param == 3 and a2.c_a == 2 and a2.coroot_bits == 0


CONFIGS = [
    "type=A rank=3 isogeny=sc diagram=3,2,1",
    "type=A rank=3 isogeny=ad diagram=3,2,1 inner=nu(1)",
    "type=A rank=3 isogeny=ad inner=nu(1)^2",
    "type=D rank=4 isogeny=sc inner=nu(3)",
    "type=D rank=5 isogeny=sc inner=nu(5)",
    "type=D rank=5 isogeny=sc diagram=1,2,3,5,4 inner=nu(5)",
    "type=A rank=2 isogeny=sc diagram=2,1",
    "type=A rank=2 isogeny=sc res_copies=2 diagram=2,1",
]


@pytest.mark.parametrize("text", CONFIGS)
def test_parameters_are_parabolic_longest_lengths(text):
    fd = frob(text)
    rel = relative_data(fd)
    for o in rel.simple:
        assert o.param == parabolic_longest_length(fd.rd, o.nodes)


@pytest.mark.parametrize("text", CONFIGS)
def test_relative_check_small_radius(text):
    out = relative_tits_check(frob(text), radius=2, pairs=100)
    assert out["status"] == "pass", [r["name"] for r in out["records"] if r["status"] == "fail"]


def test_s2_strictly_larger_than_relative_coroot_span():
    out = relative_tits_check(frob("type=A rank=3 isogeny=ad diagram=3,2,1"), radius=2, pairs=50)
    assert out["status"] == "pass"
    assert (out["s2_fixed_dim"], out["relative_coroot_span_dim"]) == (2, 1)


def test_label_normalisation():
    with pytest.raises(DescentError):
        build_frobenius(datum("A", 2, "sc"), [2, 1], "nu(1)")
    with pytest.raises(DescentError):
        build_frobenius(datum("A", 3, "ad"), [3, 2, 1], "nu(1)^2")
    with pytest.raises(DescentError):
        build_frobenius(datum("A", 3, "ad"), None, "nu(7)")


def test_sigma_star_fixes_stable_lifts():
    fd = frob("type=E rank=6 isogeny=sc inner=nu(1)")
    sec = stable_cross_section(fd)
    for o in sec.rel.simple:
        m = sec.m_simple(o)
        assert sigma_star_tits(fd, m) == m


def test_omega_elements_act_by_sigma():
    fd = frob("type=A rank=3 isogeny=ad diagram=3,2,1 inner=nu(1)")
    grp = omega_group(fd.rd)
    d = fd.diagram
    for tau in grp.elements:
        img = sigma_star_weyl(fd, tau.x)
        assert img == ExtAffElt(d.act(tau.x.lam), sigma_weyl(d, tau.x.w))
        assert length(img) == 0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_sigma_star_is_multiplicative(seed):
    fd = frob("type=D rank=4 isogeny=sc inner=nu(1)")
    rd = fd.rd
    rng = random.Random(seed)
    ws = rd.enumerate_weyl(limit=192)

    def rand():
        lam = tuple(rng.randint(-2, 2) for _ in range(rd.dim))
        return TitsElt(lam, rng.randrange(1 << rd.dim), rng.choice(ws))

    x, y = rand(), rand()
    assert sigma_star_tits(fd, at_mul(rd, x, y)) == at_mul(rd, sigma_star_tits(fd, x), sigma_star_tits(fd, y))


def test_orbits_partition_nodes():
    fd = frob("type=D rank=4 isogeny=sc diagram=3,2,4,1")
    orbs = node_orbits(fd)
    assert sorted(i for o in orbs for i in o) == list(range(5))
