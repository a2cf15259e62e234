from functools import lru_cache

import pytest

from titsgroup.descriptor import parse_descriptor
from titsgroup.root_datum import build_root_datum


@lru_cache(maxsize=None)
def datum(kind, rank, isogeny="sc"):
    return build_root_datum([(kind, rank)], isogeny)


@lru_cache(maxsize=None)
def frob(text):
    return parse_descriptor(text).frobenius()


@pytest.fixture
def a2():
    return datum("A", 2)


def oracle_agreement(kind, rank, pairs=None, seed=0):
    """Compare the cocycle product with products of signed matrices.

    ``pairs=None`` runs every pair of finite Tits group elements; otherwise
    that many random pairs. Returns (pairs checked, mismatches).
    """
    import random

    import numpy as np

    from titsgroup.finite_tits import (SignedMatrixModel, TitsFinElt, f2_basis, ft_mul, oracle_datum,
                                       span_elements)

    rd = oracle_datum(kind, rank)
    model = SignedMatrixModel(rd)
    signs = span_elements(f2_basis(rd.coroot_bits[:rd.npos]))
    elts = [TitsFinElt(e, w) for w in rd.enumerate_weyl() for e in signs]
    mats = {}

    def mat(x):
        key = (x.eps, x.w.perm)
        if key not in mats:
            mats[key] = model(x)
        return mats[key]

    if pairs is None:
        todo = ((x, y) for x in elts for y in elts)
    else:
        rng = random.Random(seed)
        todo = ((rng.choice(elts), rng.choice(elts)) for _ in range(pairs))
    count = bad = 0
    for x, y in todo:
        count += 1
        if not np.array_equal(mat(ft_mul(rd, x, y)), mat(x) @ mat(y)):
            bad += 1
    return count, bad


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num:2d}: {title} ({detail})")
