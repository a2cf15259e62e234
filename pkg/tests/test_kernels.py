import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from titsgroup import _kernels_py as pure
from titsgroup import kernels

from conftest import datum

compiled = pytest.importorskip("titsgroup._kernels")


def test_env_forces_pure_backend():
    code = "from titsgroup.kernels import BACKEND; print(BACKEND)"
    env = dict(os.environ, TITSGROUP_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND in ("python", "cython")


idx = st.integers(0, 10 ** 6)


@settings(max_examples=100, deadline=None)
@given(idx, idx, st.integers(0, 63))
def test_backends_agree(a, b, bits):
    rd = datum("B", 4)
    ws = rd.enumerate_weyl(limit=384)
    u, v = ws[a % len(ws)], ws[b % len(ws)]
    n = rd.npos
    assert compiled.compose(u.perm, v.perm) == pure.compose(u.perm, v.perm)
    assert compiled.invert(u.perm) == pure.invert(u.perm)
    assert compiled.inversion_count(u.perm, n) == pure.inversion_count(u.perm, n) == u.length
    assert (compiled.cocycle_bits(u.perm, v.perm, n, rd.coroot_bits)
            == pure.cocycle_bits(u.perm, v.perm, n, rd.coroot_bits))
    u.act_bits(0)
    assert compiled.act_bits(u._cols2, bits & 15) == pure.act_bits(u._cols2, bits & 15)
    assert compiled.mat_vec(rd.root_functionals, (1, -2, 0, 3)) == pure.mat_vec(rd.root_functionals, (1, -2, 0, 3))
