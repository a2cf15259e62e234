"""Pure-Python versions of the permutation and sign-vector kernels.

Permutations are tuples over root indices: positive roots occupy
``0..npos-1`` and the negative of root ``a`` sits at ``a + npos``.
Sign vectors are ints read as bitmasks over lattice coordinates.
"""
from __future__ import annotations

from operator import itemgetter
from typing import Sequence, Tuple


def compose(u: Tuple[int, ...], v: Tuple[int, ...]) -> Tuple[int, ...]:
    """Permutation of ``u * v``, i.e. ``a -> u[v[a]]``."""
    return itemgetter(*v)(u)


def invert(u: Tuple[int, ...]) -> Tuple[int, ...]:
    out = [0] * len(u)
    for a, b in enumerate(u):
        out[b] = a
    return tuple(out)


def inversion_count(u: Tuple[int, ...], npos: int) -> int:
    return sum(1 for a in range(npos) if u[a] >= npos)


def cocycle_bits(u: Tuple[int, ...], v: Tuple[int, ...], npos: int,
                 coroot_bits: Sequence[int]) -> int:
    """XOR of coroot bits over positive ``a`` with ``v(a) < 0 < uv(a)``."""
    acc = 0
    for a in range(npos):
        va = v[a]
        if va >= npos and u[va] < npos:
            acc ^= coroot_bits[a]
    return acc


def act_bits(columns: Sequence[int], bits: int) -> int:
    """Apply a mod-2 matrix given by its column bitmasks."""
    acc = 0
    k = 0
    while bits:
        if bits & 1:
            acc ^= columns[k]
        bits >>= 1
        k += 1
    return acc


def mat_vec(mat: Sequence[Sequence[int]], vec: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sum(m * x for m, x in zip(row, vec)) for row in mat)
