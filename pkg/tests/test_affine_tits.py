import pytest
from hypothesis import given, settings, strategies as st

from titsgroup.affine_tits import (TitsElt, at_identity, at_inverse, at_mul, check_reduced_word_independence,
                                   check_section_multiplicative, cross_section, extra_node_choices,
                                   lift_affine_simple, lift_cocharacter, lift_omega, s2_basis, ses_check,
                                   verify_coxeter)
from titsgroup.iwahori_weyl import affine_nodes, from_word, length, omega_group
from titsgroup.root_datum import bits_to_list

from conftest import datum

COXETER_TYPES = [("A", 2), ("A", 3), ("A", 4), ("B", 3), ("C", 2), ("C", 3), ("D", 4), ("G", 2), ("F", 4)]


def gf2_rank(rows):
    rows = [sum((x % 2) << k for k, x in enumerate(r)) for r in rows]
    rank = 0
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
    return rank


@pytest.mark.parametrize("iso", ["sc", "ad"])
@pytest.mark.parametrize("kind,rank", COXETER_TYPES)
def test_verify_coxeter(kind, rank, iso):
    out = verify_coxeter(datum(kind, rank, iso))
    assert out["status"] == "pass"
    assert all(r["status"] in ("pass", "skip") for r in out["records"])


def test_affine_a1_pair_is_skipped():
    out = verify_coxeter(datum("A", 1))
    skipped = [r for r in out["records"] if r["status"] == "skip"]
    assert len(skipped) == 1 and skipped[0]["reason"] == "no relation"


@pytest.mark.parametrize("kind,rank,iso", [("A", 2, "sc"), ("A", 2, "ad"), ("A", 3, "ad"), ("C", 3, "sc"),
                                           ("D", 4, "ad"), ("G", 2, "sc"), ("B", 3, "ad")])
def test_s2_dimension_is_cartan_rank_mod_two(kind, rank, iso):
    rd = datum(kind, rank, iso)
    # coroots in the lattice basis: unit vectors (sc) or Cartan rows (ad)
    rows = [[int(i == j) for j in range(rank)] for i in range(rank)] if iso == "sc" else rd.cartan
    assert len(s2_basis(rd)) == gf2_rank(rows)


def test_ses_examples():
    out = ses_check(datum("A", 2), 6)
    assert out["status"] == "pass" and out["s2_dim"] == 2 and out["kernel_dim"] == 2
    a1 = ses_check(datum("A", 1, "ad"), 6)
    assert a1["status"] == "pass" and a1["s2_dim"] == 0 and a1["kernel_size"] == 1
    zero = ses_check(datum("A", 2), 0)
    assert zero["elements"] == 1 and zero["kernel_size"] == 1
    with pytest.raises(ValueError):
        ses_check(datum("A", 2), -1)


@pytest.mark.parametrize("kind,rank", [("A", 2), ("C", 2)])
def test_reduced_word_independence(kind, rank):
    out = check_reduced_word_independence(datum(kind, rank), 6)
    assert out["status"] == "pass" and out["words"] > out["elements"]


@pytest.mark.parametrize("kind,rank,iso", [("A", 2, "sc"), ("A", 2, "ad"), ("C", 2, "ad")])
def test_section_multiplicative_radius_five(kind, rank, iso):
    out = check_section_multiplicative(datum(kind, rank, iso), 5)
    assert out["status"] == "pass" and out["pairs"] > 0


def test_extra_node_lift_projects_to_affine_reflection():
    rd = datum("A", 2)
    nd = affine_nodes(rd)[0]
    assert nd.is_extra
    lift = lift_affine_simple(rd, 0)
    assert lift.project() == from_word(rd, [0])
    sq = at_mul(rd, lift, lift)
    assert sq == TitsElt(rd.zero(), rd.coroot_bits[nd.root.b], rd.identity)
    choice = extra_node_choices(rd)[0]
    assert choice.eps == min(choice.candidates, key=lambda e: bits_to_list(e, rd.dim))


def test_lift_cocharacter_additive():
    rd = datum("B", 3, "ad")
    assert lift_cocharacter(rd, (0, 0, 0)) == at_identity(rd)
    a, b = (1, -2, 0), (0, 3, 1)
    s = tuple(x + y for x, y in zip(a, b))
    assert lift_cocharacter(rd, s) == at_mul(rd, lift_cocharacter(rd, a), lift_cocharacter(rd, b))


def test_a1_adjoint_omega_lift():
    rd = datum("A", 1, "ad")
    nu = omega_group(rd).labels["nu(1)"]
    m = cross_section(rd, nu.x)
    assert m == at_mul(rd, lift_cocharacter(rd, (1,)), TitsElt(rd.zero(), 0, rd.s(1)))
    assert m == lift_omega(rd, nu)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3).map(tuple), st.integers(0, 47))
def test_conjugating_translations(lam, wi):
    rd = datum("C", 3, "ad")
    w = rd.enumerate_weyl()[wi]
    m = cross_section(rd, from_word(rd, list(w.word)))
    conj = at_mul(rd, at_mul(rd, m, lift_cocharacter(rd, lam)), at_inverse(rd, m))
    assert conj == lift_cocharacter(rd, w.act(lam))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=5), st.lists(st.integers(0, 2), max_size=5))
def test_section_multiplicative_random(u, v):
    rd = datum("G", 2)
    x, y = from_word(rd, u), from_word(rd, v)
    m = cross_section(rd, x * y)
    assert m.project() == x * y
    if length(x * y) == length(x) + length(y):
        assert m == at_mul(rd, cross_section(rd, x), cross_section(rd, y))


@pytest.mark.parametrize("kind", ["A", "C"])
def test_word_count_matches_brute_force(kind):
    from itertools import product
    rd = datum(kind, 2)
    reduced = sum(1 for n in range(7) for w in product(range(3), repeat=n) if length(from_word(rd, w)) == n)
    assert check_reduced_word_independence(rd, 6)["words"] == reduced
