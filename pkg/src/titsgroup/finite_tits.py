"""The finite Tits group as sign vectors times Weyl elements.

An element ``(eps, w)`` stands for ``t_eps * n_w`` where ``t_eps`` is the
2-torsion point ``eps(-1)`` and ``n_w`` the canonical lift of ``w``.  Generator
lifts multiply as ``n_u n_v = n_{uv} t_c`` where ``c(u, v) = sum a^vee`` runs
over positive ``a`` with ``v(a) < 0 < uv(a)``.  Moving ``t_c`` to the left
turns it into ``uv(c)``, which is the 2-cocycle used by the group law.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from . import kernels
from .root_datum import (RootDatum, RootDatumError, WeylElt, bits_to_list,
                         build_root_datum, y_paren)


class UnsupportedType(RootDatumError):
    """The requested oracle does not exist for this root datum."""


# -- sign vectors -----------------------------------------------------------

def coroot_span(rd: RootDatum, roots: Optional[Sequence[int]] = None) -> List[int]:
    """Row-reduced F_2 basis of the span of coroot images in X_*/2X_*."""
    if roots is None:
        roots = range(rd.npos)
    return f2_basis(rd.coroot_bits[a] for a in roots)


def f2_basis(vectors) -> List[int]:
    basis: List[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return basis


def f2_reduce(basis: Sequence[int], v: int) -> int:
    for b in basis:
        v = min(v, v ^ b)
    return v


def in_span(basis: Sequence[int], v: int) -> bool:
    return f2_reduce(basis, v) == 0


def span_elements(basis: Sequence[int]) -> List[int]:
    out = [0]
    for b in basis:
        out += [x ^ b for x in out]
    return sorted(out)


def is_central(rd: RootDatum, bits: int) -> bool:
    """Whether eps(-1) is central: every simple root pairs evenly with eps."""
    for f in rd.simple_functionals:
        if sum(f[k] for k in range(rd.dim) if (bits >> k) & 1) % 2:
            return False
    return True


# -- group law --------------------------------------------------------------

@dataclass(frozen=True)
class TitsFinElt:
    eps: int
    w: WeylElt

    def to_json(self) -> dict:
        return {"eps": bits_to_list(self.eps, self.w.rd.dim), "w": list(self.w.word)}


def rostami_correction(rd: RootDatum, u: WeylElt, v: WeylElt) -> int:
    """Sign vector c(u, v) as a bitmask."""
    return kernels.cocycle_bits(u.perm, v.perm, rd.npos, rd.coroot_bits)


def left_cocycle(rd: RootDatum, u: WeylElt, v: WeylElt) -> int:
    """Sign vector ``uv(c(u, v))`` with ``n_u n_v = t_{uv(c)} n_{uv}``."""
    c = rostami_correction(rd, u, v)
    return (u * v).act_bits(c) if c else 0


def ft_mul(rd: RootDatum, x: TitsFinElt, y: TitsFinElt) -> TitsFinElt:
    uv = x.w * y.w
    c = rostami_correction(rd, x.w, y.w)
    eps = x.eps ^ x.w.act_bits(y.eps) ^ (uv.act_bits(c) if c else 0)
    return TitsFinElt(eps, uv)


def ft_identity(rd: RootDatum) -> TitsFinElt:
    return TitsFinElt(0, rd.identity)


def ft_lift(rd: RootDatum, w: WeylElt) -> TitsFinElt:
    """Canonical lift n_w: product of generator lifts along a reduced word."""
    out = ft_identity(rd)
    for i in w.word:
        out = ft_mul(rd, out, TitsFinElt(0, rd.s(i)))
    return out


def ft_lift_word(rd: RootDatum, word: Sequence[int]) -> TitsFinElt:
    out = ft_identity(rd)
    for i in word:
        out = ft_mul(rd, out, TitsFinElt(0, rd.s(i)))
    return out


def ft_inverse(rd: RootDatum, x: TitsFinElt) -> TitsFinElt:
    winv = x.w.inverse()
    eps = winv.act_bits(x.eps ^ left_cocycle(rd, x.w, winv))
    return TitsFinElt(eps, winv)


def ft_pow(rd: RootDatum, x: TitsFinElt, k: int) -> TitsFinElt:
    out = ft_identity(rd)
    base = x if k >= 0 else ft_inverse(rd, x)
    for _ in range(abs(k)):
        out = ft_mul(rd, out, base)
    return out


def ft_torus(rd: RootDatum, coroot_indices: Sequence[int]) -> TitsFinElt:
    """(a_{i1}^vee + a_{i2}^vee + ...)(-1) for 1-based simple indices."""
    eps = 0
    for i in coroot_indices:
        eps ^= rd.coroot_bits[i - 1]
    return TitsFinElt(eps, rd.identity)


# -- signed-matrix oracle ---------------------------------------------------

def _unit(dim: int, pairs) -> np.ndarray:
    m = np.zeros((dim, dim), dtype=np.int64)
    for (a, b), c in pairs:
        m[a, b] += c
    return m


def _exp_nilpotent(e: np.ndarray) -> np.ndarray:
    dim = e.shape[0]
    out = np.eye(dim, dtype=np.int64)
    term = np.eye(dim, dtype=np.int64)
    k = 1
    while True:
        term = term @ e
        if not term.any():
            return out
        fact = 1
        for t in range(2, k + 1):
            fact *= t
        if (term % fact).any():
            raise ArithmeticError("exponential is not integral")
        out = out + term // fact
        k += 1


def standard_lattice(kind: str, rank: int) -> List[List]:
    """Cocharacter lattice of SL, SO(odd), Sp, SO(even) in coroot coordinates."""
    from fractions import Fraction
    n = rank
    if kind == "A":
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    if kind not in "BCD":
        raise UnsupportedType(f"no standard representation for type {kind}")
    # columns: coroots in e-coordinates; invert to express e_k in coroots
    m = [[0] * n for _ in range(n)]  # m[i] = alpha_i^vee in e-coordinates
    for i in range(n - 1):
        m[i][i], m[i][i + 1] = 1, -1
    if kind == "B":
        m[n - 1] = [0] * (n - 1) + [2]
    elif kind == "C":
        m[n - 1] = [0] * (n - 1) + [1]
    else:
        m[n - 1] = [0] * (n - 2) + [1, 1]
    from sympy import Matrix
    inv = Matrix(m).inv()  # row k: e_k in coroot coordinates
    return [[Fraction(int(inv[k, i].p), int(inv[k, i].q)) for i in range(n)] for k in range(n)]


def oracle_datum(kind: str, rank: int) -> RootDatum:
    """Root datum whose cocharacters match the standard matrix group."""
    return build_root_datum([(kind, rank)], standard_lattice(kind, rank))


class SignedMatrixModel:
    """Faithful matrix model of the finite Tits group for classical types.

    Generators are Tits' elements exp(E) exp(-F) exp(E) of a pinning in the
    standard representation; torus points act diagonally through weights.
    """

    def __init__(self, rd: RootDatum):
        if len(rd.components) != 1 or rd.central_rank:
            raise UnsupportedType("matrix oracle needs a single simple component")
        kind, n = rd.components[0].kind, rd.components[0].rank
        if kind not in "ABCD":
            raise UnsupportedType(f"no signed-matrix model for type {kind}")
        if [list(r) for r in rd.lattice] != standard_lattice(kind, n):
            raise UnsupportedType("matrix oracle needs the standard cocharacter lattice")
        self.rd = rd
        self.kind = kind
        self.n = n
        self.form, self.E, self.F, self.weights = self._pinning(kind, n)
        self.dim = self.form.shape[0]
        self.gens = []
        for i in range(n):
            e, f = self.E[i], self.F[i]
            h = e @ f - f @ e
            expect = np.diag([self._weight_pairing(j, rd.coroot_lattice[i]) for j in range(self.dim)])
            if not (h == expect).all():
                raise AssertionError(f"[E,F] mismatch at node {i + 1}")
            for x in (e, f):
                if (x.T @ self.form + self.form @ x).any():
                    raise AssertionError("root vector outside the Lie algebra")
            g = _exp_nilpotent(e) @ _exp_nilpotent(-f) @ _exp_nilpotent(e)
            self.gens.append(g)
        images = {tuple(self.torus(1 << k).diagonal()) for k in range(rd.dim)}
        if len(images) != rd.dim or any(all(x == 1 for x in im) for im in images):
            raise UnsupportedType("torus 2-torsion does not embed")

    def _weight_pairing(self, j: int, vec) -> int:
        return int(sum(self.weights[j][k] * vec[k] for k in range(len(vec))))

    @staticmethod
    def _pinning(kind: str, n: int):
        if kind == "A":
            dim = n + 1
            form = np.zeros((dim, dim), dtype=np.int64)  # no invariant form needed
            E = [_unit(dim, [((i, i + 1), 1)]) for i in range(n)]
            F = [_unit(dim, [((i + 1, i), 1)]) for i in range(n)]
            # lattice basis = simple coroots e_i - e_{i+1}
            weights = [[(1 if j == k else 0) - (1 if j == k + 1 else 0) for k in range(n)] for j in range(dim)]
            return form, E, F, weights
        if kind == "B":
            dim = 2 * n + 1
            mid = n

            def neg(k):  # index of e_{-k}, k 1-based
                return 2 * n + 1 - k
            form = np.zeros((dim, dim), dtype=np.int64)
            for k in range(1, n + 1):
                form[k - 1, neg(k)] = form[neg(k), k - 1] = 1
            form[mid, mid] = 2
        else:
            dim = 2 * n

            def neg(k):
                return 2 * n - k
            form = np.zeros((dim, dim), dtype=np.int64)
            for k in range(1, n + 1):
                form[k - 1, neg(k)] = 1
                form[neg(k), k - 1] = -1 if kind == "C" else 1
        E, F = [], []
        for i in range(1, n):
            # epsilon_i - epsilon_{i+1}
            E.append(_unit(dim, [((i - 1, i), 1), ((neg(i + 1), neg(i)), -1)]))
        if kind == "B":
            E.append(_unit(dim, [((n - 1, mid), 2), ((mid, neg(n)), -1)]))
        elif kind == "C":
            E.append(_unit(dim, [((n - 1, neg(n)), 1)]))
        else:
            E.append(_unit(dim, [((n - 2, neg(n)), 1), ((n - 1, neg(n - 1)), -1)]))
        F = [e.T.copy() for e in E]
        if kind == "B":
            F[-1] = _unit(dim, [((mid, n - 1), 1), ((neg(n), mid), -2)])
        weights = []
        for j in range(dim):
            w = [0] * n
            if j < n:
                w[j] = 1
            elif kind == "B" and j == mid:
                pass
            else:
                w[2 * n - j - (0 if kind == "B" else 1)] = -1
            weights.append(w)
        return form, E, F, weights

    def torus(self, bits: int) -> np.ndarray:
        signs = []
        for j in range(self.dim):
            p = sum(self.weights[j][k] for k in range(self.rd.dim) if (bits >> k) & 1)
            signs.append(-1 if p % 2 else 1)
        return np.diag(signs).astype(np.int64)

    def generator(self, i: int) -> np.ndarray:
        return self.gens[i - 1]

    def __call__(self, x: TitsFinElt) -> np.ndarray:
        m = self.torus(x.eps)
        for i in x.w.word:
            m = m @ self.gens[i - 1]
        return m


def signed_matrix(rd: RootDatum, x: TitsFinElt, model: Optional[SignedMatrixModel] = None) -> np.ndarray:
    if model is None:
        model = SignedMatrixModel(rd)
    return model(x)


# -- identity battery -------------------------------------------------------

def _serialize(x: TitsFinElt) -> dict:
    return x.to_json()


def _identity_record(name: str, lhs: TitsFinElt, rhs: TitsFinElt, **extra) -> dict:
    rec = {"name": name, "status": "pass" if lhs == rhs else "fail",
           "lhs": _serialize(lhs), "rhs": _serialize(rhs)}
    rec.update(extra)
    return rec


def check_ftg_identities(rd: RootDatum) -> List[dict]:
    """Evaluate the power identities for n_{y_(i)} that apply to ``rd``."""
    if len(rd.components) != 1:
        return [{"name": "ftg", "status": "skip", "reason": "not simple"}]
    comp = rd.components[0]
    kind, n = comp.kind, comp.rank
    records: List[dict] = []
    one = ft_identity(rd)

    def n_y(i: int) -> TitsFinElt:
        return ft_lift(rd, y_paren(rd, i))

    # part (1): n_{y_(i)}^k is central
    for i in range(1, n + 1):
        if not rd.minuscule(i - 1):
            continue
        y = y_paren(rd, i)
        k = y.order()
        p = ft_pow(rd, n_y(i), k)
        ok = p.w.is_identity() and is_central(rd, p.eps)
        records.append({"name": f"central_power(y_({i}))^{k}", "status": "pass" if ok else "fail",
                        "lhs": _serialize(p), "rhs": {"central": True},
                        "is_identity": p == one})
    if kind == "A":
        ny1 = n_y(1)
        y1 = y_paren(rd, 1)
        for i in range(0, n + 1):
            lhs = ft_pow(rd, ny1, i + 1)
            base = ft_lift(rd, y1 ** (i + 1))
            if i % 2 == 0:
                rhs = base
            else:
                rhs = ft_mul(rd, ft_torus(rd, range(1, i + 1, 2)), base)
            records.append(_identity_record(f"typeA_power(y_(1))^{i + 1}", lhs, rhs))
    if kind == "D" and n % 2 == 1:
        nyn = n_y(n)
        if n % 4 == 1:
            t2 = list(range(2, n, 2))
            t3 = [n - 1, n]
        else:
            t2 = list(range(2, n - 2, 2)) + [n]
            t3 = []
        records.append(_identity_record(
            "typeD_odd_square", ft_pow(rd, nyn, 2), ft_mul(rd, ft_torus(rd, t2), n_y(1))))
        records.append(_identity_record(
            "typeD_odd_cube", ft_pow(rd, nyn, 3), ft_mul(rd, ft_torus(rd, t3), n_y(n - 1))))
        records.append(_identity_record(
            "typeD_odd_fourth", ft_pow(rd, nyn, 4), ft_torus(rd, [n - 1, n])))
    if kind == "D" and n % 2 == 0:
        trio = [1, n - 1, n]
        for a in range(3):
            for b in range(3):
                if a == b:
                    continue
                i, j = trio[a], trio[b]
                k = trio[3 - a - b]
                prod = ft_mul(rd, n_y(i), n_y(j))
                other = ft_mul(rd, n_y(j), n_y(i))
                z = ft_mul(rd, prod, ft_inverse(rd, n_y(k)))
                ok = (z.w.is_identity() and is_central(rd, z.eps) and prod == other)
                records.append({"name": f"typeD_even_product({i},{j})", "status": "pass" if ok else "fail",
                                "lhs": _serialize(prod), "rhs": _serialize(ft_mul(rd, z, n_y(k))),
                                "swapped": _serialize(other), "z": _serialize(z)})
    return records
