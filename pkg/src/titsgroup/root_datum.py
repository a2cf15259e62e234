"""Root data of split reductive groups and their finite Weyl groups.

Coordinates: the ambient space is spanned by the simple coroots followed by
``central_rank`` central directions.  The cocharacter lattice X_* is given by
basis rows in these coordinates, and every vector handled downstream is an
integer tuple in that lattice basis.  Simple roots are numbered as in
Bourbaki; cartan[i][j] = <alpha_j, alpha_i^vee>.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from . import kernels

Vec = Tuple[int, ...]
Perm = Tuple[int, ...]

TYPES = ("A", "B", "C", "D", "E", "F", "G")


class RootDatumError(ValueError):
    """Raised for malformed group data."""


# -- Cartan matrices --------------------------------------------------------

def _check_rank(kind: str, rank: int) -> None:
    if kind not in TYPES:
        raise RootDatumError(f"unknown type {kind!r}")
    if rank <= 0:
        raise RootDatumError(f"rank must be positive, got {rank}")
    minimum = {"A": 1, "B": 2, "C": 2, "D": 3, "E": 6, "F": 4, "G": 2}[kind]
    if rank < minimum:
        raise RootDatumError(f"type {kind} needs rank >= {minimum}")
    if (kind == "E" and rank > 8) or (kind == "F" and rank != 4) or (kind == "G" and rank != 2):
        raise RootDatumError(f"no root system of type {kind}{rank}")


def cartan_matrix(kind: str, rank: int) -> List[List[int]]:
    """Bourbaki-numbered Cartan matrix, entry [i][j] = <alpha_j, alpha_i^vee>."""
    _check_rank(kind, rank)
    n = rank
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i: int, j: int) -> None:
        c[i][j] = c[j][i] = -1

    if kind == "A":
        for i in range(n - 1):
            bond(i, i + 1)
    elif kind == "B":
        for i in range(n - 1):
            bond(i, i + 1)
        c[n - 1][n - 2] = -2
    elif kind == "C":
        for i in range(n - 1):
            bond(i, i + 1)
        c[n - 2][n - 1] = -2
    elif kind == "D":
        for i in range(n - 2):
            bond(i, i + 1)
        bond(n - 3, n - 1)
    elif kind == "E":
        for i, j in [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, n - 1)]:
            bond(i, j)
    elif kind == "F":
        bond(0, 1)
        bond(1, 2)
        bond(2, 3)
        c[2][1] = -2
    elif kind == "G":
        bond(0, 1)
        c[0][1] = -3
    return c


# -- integer linear algebra -------------------------------------------------

def solve_integer(rows: Sequence[Sequence], target: Sequence) -> Optional[Tuple[int, ...]]:
    """Integer x with sum_k x_k rows[k] == target, or None."""
    a = Matrix([[Fraction(v) for v in r] for r in rows])
    den = 1
    for v in list(a) + [Fraction(t) for t in target]:
        den = den * Fraction(v).denominator // _gcd(den, Fraction(v).denominator)
    a = (a * den).applyfunc(int)
    b = Matrix([[int(Fraction(t) * den) for t in target]])
    s, u, v = smith_normal_decomp(a)
    bv = b * v
    y = []
    for i in range(a.rows):
        d = s[i, i] if i < a.cols else 0
        if d == 0:
            y.append(0)
            continue
        if bv[0, i] % d:
            return None
        y.append(bv[0, i] // d)
    for j in range(a.cols):
        if (j >= a.rows or s[j, j] == 0) and bv[0, j] != 0:
            return None
    x = Matrix([y]) * u
    return tuple(int(t) for t in x)


def quotient_structure(sub_rows: Sequence[Sequence[int]], dim: int):
    """Invariant factors and generators of Z^dim / rowspan(sub_rows).

    Returns (torsion, free) where torsion is a list of (order, generator) and
    free lists generators of the free part.
    """
    a = Matrix(sub_rows) if sub_rows else Matrix.zeros(0, dim)
    if a.rows == 0:
        return [], [tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim)]
    s, u, v = smith_normal_decomp(a)
    vinv = v.inv()
    torsion, free = [], []
    for j in range(dim):
        d = abs(s[j, j]) if j < a.rows else 0
        gen = tuple(int(t) for t in vinv.row(j))
        if d == 0:
            free.append(gen)
        elif d > 1:
            torsion.append((int(d), gen))
    return torsion, free


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# -- root datum -------------------------------------------------------------

@dataclass(frozen=True)
class Component:
    kind: str
    rank: int
    offset: int  # first global simple index

    @property
    def label(self) -> str:
        return f"{self.kind}{self.rank}"


class RootDatum:
    """Immutable root datum with cached root, coroot and Weyl group data."""

    def __init__(self, components: Sequence[Tuple[str, int]], lattice: Sequence[Sequence],
                 central_rank: int = 0):
        comps = []
        offset = 0
        for kind, rank in components:
            _check_rank(kind, rank)
            comps.append(Component(kind, rank, offset))
            offset += rank
        self.components: Tuple[Component, ...] = tuple(comps)
        self.ss_rank = offset
        self.central_rank = central_rank
        self.dim = offset + central_rank
        cartan = [[0] * offset for _ in range(offset)]
        for comp in comps:
            block = cartan_matrix(comp.kind, comp.rank)
            for i in range(comp.rank):
                for j in range(comp.rank):
                    cartan[comp.offset + i][comp.offset + j] = block[i][j]
        self.cartan: Tuple[Tuple[int, ...], ...] = tuple(tuple(r) for r in cartan)
        self.lattice: Tuple[Tuple[Fraction, ...], ...] = tuple(
            tuple(Fraction(x) for x in row) for row in lattice)
        self._validate_lattice()
        self._build_roots()
        self._weyl_cache: Dict[Perm, "WeylElt"] = {}

    # construction helpers
    def _validate_lattice(self) -> None:
        n, r = self.dim, self.ss_rank
        if len(self.lattice) != n or any(len(row) != n for row in self.lattice):
            raise RootDatumError(f"lattice must have {n} rows of length {n}")
        b = Matrix(self.lattice)
        if b.det() == 0:
            raise RootDatumError("lattice rows are linearly dependent")
        self._binv = b.inv()
        for i in range(r):
            coords = self.amb_to_lattice_rational(tuple(1 if j == i else 0 for j in range(n)))
            if any(x.denominator != 1 for x in coords):
                raise RootDatumError("lattice does not contain the coroot lattice")
        for row in self.lattice:
            for j in range(r):
                val = sum(row[i] * self.cartan[i][j] for i in range(r))
                if val.denominator != 1:
                    raise RootDatumError("lattice is not contained in the coweight lattice")

    def amb_to_lattice_rational(self, amb: Sequence) -> Tuple[Fraction, ...]:
        v = Matrix([[Fraction(x) for x in amb]]) * self._binv
        return tuple(Fraction(int(t.p), int(t.q)) for t in v)

    def amb_to_lattice(self, amb: Sequence) -> Vec:
        out = self.amb_to_lattice_rational(amb)
        if any(x.denominator != 1 for x in out):
            raise RootDatumError(f"vector {tuple(str(x) for x in amb)} is not in X_*")
        return tuple(int(x) for x in out)

    def lattice_to_amb(self, vec: Sequence[int]) -> Tuple[Fraction, ...]:
        return tuple(sum((Fraction(vec[k]) * self.lattice[k][i] for k in range(self.dim)), Fraction(0))
                     for i in range(self.dim))

    def _build_roots(self) -> None:
        r, cartan = self.ss_rank, self.cartan
        simple = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
        coroot_of: Dict[Vec, Vec] = {s: s for s in simple}
        frontier = list(simple)
        while frontier:
            nxt = []
            for beta in frontier:
                bc = coroot_of[beta]
                for i in range(r):
                    p = sum(beta[j] * cartan[i][j] for j in range(r))
                    img = tuple(beta[j] - (p if j == i else 0) for j in range(r))
                    if img in coroot_of:
                        continue
                    q = sum(bc[j] * cartan[j][i] for j in range(r))
                    coroot_of[img] = tuple(bc[j] - (q if j == i else 0) for j in range(r))
                    nxt.append(img)
            frontier = nxt
        pos = [b for b in coroot_of if all(x >= 0 for x in b)]
        pos.sort(key=lambda b: (sum(b), tuple(-x for x in b)))
        self.npos = len(pos)
        npos = self.npos
        self.roots: Tuple[Vec, ...] = tuple(pos) + tuple(tuple(-x for x in b) for b in pos)
        self.coroots_ss: Tuple[Vec, ...] = tuple(coroot_of[b] for b in self.roots)
        self.root_index: Dict[Vec, int] = {b: k for k, b in enumerate(self.roots)}
        n = self.dim
        # <alpha_j, b_k> for lattice basis vectors b_k
        simple_fn = [[int(sum(self.lattice[k][i] * cartan[i][j] for i in range(r))) for k in range(n)]
                     for j in range(r)]
        self.simple_functionals: Tuple[Vec, ...] = tuple(tuple(f) for f in simple_fn)
        self.root_functionals: Tuple[Vec, ...] = tuple(
            tuple(sum(beta[j] * simple_fn[j][k] for j in range(r)) for k in range(n)) for beta in self.roots)
        self.coroot_lattice: Tuple[Vec, ...] = tuple(
            self.amb_to_lattice(tuple(c) + (0,) * self.central_rank) for c in self.coroots_ss)
        self.coroot_bits: Tuple[int, ...] = tuple(bits_of(v) for v in self.coroot_lattice)
        self.simple_perms: Tuple[Perm, ...] = tuple(
            tuple(self.root_index[tuple(beta[j] - (sum(beta[t] * cartan[i][t] for t in range(r)) if j == i else 0)
                                        for j in range(r))] for beta in self.roots)
            for i in range(r))
        self.simple_matrices = tuple(
            tuple(tuple((1 if a == b else 0) - self.coroot_lattice[i][a] * simple_fn[i][b] for b in range(n))
                  for a in range(n))
            for i in range(r))
        self.identity_perm: Perm = tuple(range(2 * npos))

    # basic queries
    @property
    def rank(self) -> int:
        return self.ss_rank

    def component_of(self, i: int) -> int:
        for c, comp in enumerate(self.components):
            if comp.offset <= i < comp.offset + comp.rank:
                return c
        raise IndexError(i)

    def component_of_root(self, root: int) -> int:
        beta = self.roots[root]
        return self.component_of(next(j for j, x in enumerate(beta) if x))

    def pair(self, root: int, vec: Sequence[int]) -> int:
        """<root, vec> for a root index and a lattice vector."""
        return sum(f * x for f, x in zip(self.root_functionals[root], vec))

    def neg(self, root: int) -> int:
        return root + self.npos if root < self.npos else root - self.npos

    def is_positive(self, root: int) -> bool:
        return root < self.npos

    def highest_root(self, comp: int) -> int:
        c = self.components[comp]
        best = None
        for k in range(self.npos):
            beta = self.roots[k]
            if any(beta[j] for j in range(self.ss_rank) if not c.offset <= j < c.offset + c.rank):
                continue
            if best is None or sum(beta) > sum(self.roots[best]):
                best = k
        return best

    def fundamental_coweight_amb(self, i: int) -> Tuple[Fraction, ...]:
        """omega_i^vee in ambient coordinates."""
        inv = Matrix(self.cartan).inv()
        return tuple(Fraction(int(x.p), int(x.q)) for x in inv.row(i)) + (Fraction(0),) * self.central_rank

    def minuscule(self, i: int) -> bool:
        theta = self.roots[self.highest_root(self.component_of(i))]
        return theta[i] == 1

    def zero(self) -> Vec:
        return (0,) * self.dim

    # inner products
    @cached_property
    def coroot_lengths(self) -> Tuple[Fraction, ...]:
        """Squared lengths of simple coroots; short coroots have length 2."""
        r, cartan = self.ss_rank, self.cartan
        lengths: List[Optional[Fraction]] = [None] * r
        for comp in self.components:
            idx = range(comp.offset, comp.offset + comp.rank)
            lengths[comp.offset] = Fraction(1)
            changed = True
            while changed:
                changed = False
                for i in idx:
                    for j in idx:
                        if lengths[i] is not None and lengths[j] is None and cartan[i][j]:
                            lengths[j] = lengths[i] * cartan[j][i] / cartan[i][j]
                            changed = True
            scale = 2 / min(lengths[i] for i in idx)
            for i in idx:
                lengths[i] *= scale
        return tuple(lengths)

    @cached_property
    def inner_product(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """W-invariant form on ambient coordinates."""
        r, n, L = self.ss_rank, self.dim, self.coroot_lengths
        g = [[Fraction(0)] * n for _ in range(n)]
        for i in range(r):
            for j in range(r):
                g[i][j] = self.cartan[i][j] * L[j] / 2
        for i in range(r, n):
            g[i][i] = Fraction(1)
        return tuple(tuple(row) for row in g)

    def root_inner(self, a: int, b: int) -> Fraction:
        """W-invariant form on roots dual to the coroot form."""
        L = self.coroot_lengths
        ra, rb = self.roots[a], self.roots[b]
        total = Fraction(0)
        for i, x in enumerate(ra):
            if not x:
                continue
            for j, y in enumerate(rb):
                if y:
                    # (alpha_i, alpha_j) = cartan[j][i] * (alpha_j, alpha_j) / 2
                    total += x * y * self.cartan[j][i] * Fraction(2) / L[j]
        return total

    def vec_inner(self, u: Sequence[int], v: Sequence[int]) -> Fraction:
        au, av, g = self.lattice_to_amb(u), self.lattice_to_amb(v), self.inner_product
        return sum((au[i] * g[i][j] * av[j] for i in range(self.dim) for j in range(self.dim)), Fraction(0))

    # Weyl group
    def weyl(self, perm: Perm) -> "WeylElt":
        w = self._weyl_cache.get(perm)
        if w is None:
            w = WeylElt(self, perm)
            self._weyl_cache[perm] = w
        return w

    @property
    def identity(self) -> "WeylElt":
        return self.weyl(self.identity_perm)

    def s(self, i: int) -> "WeylElt":
        """Simple reflection, 1-based Bourbaki index."""
        return self.weyl(self.simple_perms[i - 1])

    def reflection(self, root: int) -> "WeylElt":
        """Reflection in an arbitrary root (by index)."""
        r, cartan = self.ss_rank, self.cartan
        beta = self.roots[root]
        co = self.coroots_ss[root]
        perm = []
        for gamma in self.roots:
            p = sum(co[i] * cartan[i][j] * gamma[j] for i in range(r) for j in range(r))
            perm.append(self.root_index[tuple(g - p * b for g, b in zip(gamma, beta))])
        return self.weyl(tuple(perm))

    def enumerate_weyl(self, limit: Optional[int] = None) -> List["WeylElt"]:
        """All elements of W_0 in breadth-first order (optionally capped)."""
        seen = {self.identity_perm}
        order = [self.identity]
        frontier = [self.identity_perm]
        while frontier:
            nxt = []
            for p in frontier:
                for sp in self.simple_perms:
                    q = kernels.compose(p, sp)
                    if q not in seen:
                        seen.add(q)
                        order.append(self.weyl(q))
                        nxt.append(q)
                        if limit is not None and len(order) >= limit:
                            return order
            frontier = nxt
        return order

    @cached_property
    def weyl_order(self) -> int:
        return len(self.enumerate_weyl())

    def describe(self) -> dict:
        return {
            "components": [[c.kind, c.rank] for c in self.components],
            "central_rank": self.central_rank,
            "cartan": [list(r) for r in self.cartan],
            "lattice": [[_frac_json(x) for x in row] for row in self.lattice],
            "positive_roots": self.npos,
        }


def _frac_json(x: Fraction):
    return int(x) if x.denominator == 1 else [x.numerator, x.denominator]


def bits_of(vec: Sequence[int]) -> int:
    out = 0
    for k, x in enumerate(vec):
        if x & 1:
            out |= 1 << k
    return out


def bits_to_list(bits: int, dim: int) -> List[int]:
    return [(bits >> k) & 1 for k in range(dim)]


class WeylElt:
    """Element of the finite Weyl group, stored as a permutation of roots."""

    __slots__ = ("rd", "perm", "_word", "_matrix", "_cols2", "_inv", "__weakref__")

    def __init__(self, rd: RootDatum, perm: Perm):
        self.rd = rd
        self.perm = perm
        self._word = None
        self._matrix = None
        self._cols2 = None
        self._inv = None

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElt) and self.perm == other.perm

    def __hash__(self) -> int:
        return hash(self.perm)

    def __mul__(self, other: "WeylElt") -> "WeylElt":
        return self.rd.weyl(kernels.compose(self.perm, other.perm))

    def __repr__(self) -> str:
        return f"WeylElt({list(self.word)})"

    def inverse(self) -> "WeylElt":
        if self._inv is None:
            self._inv = self.rd.weyl(kernels.invert(self.perm))
        return self._inv

    def __pow__(self, k: int) -> "WeylElt":
        out = self.rd.identity
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    @property
    def length(self) -> int:
        return kernels.inversion_count(self.perm, self.rd.npos)

    def is_identity(self) -> bool:
        return self.perm == self.rd.identity_perm

    def left_descents(self) -> List[int]:
        """0-based i with l(s_i w) < l(w)."""
        inv = self.inverse().perm
        npos = self.rd.npos
        return [i for i in range(self.rd.ss_rank) if inv[i] >= npos]

    def right_descents(self) -> List[int]:
        npos = self.rd.npos
        return [i for i in range(self.rd.ss_rank) if self.perm[i] >= npos]

    @property
    def word(self) -> Tuple[int, ...]:
        """Lexicographically least reduced word, 1-based indices."""
        if self._word is None:
            rd, npos = self.rd, self.rd.npos
            w = self.perm
            out = []
            while True:
                inv = kernels.invert(w)
                for i in range(rd.ss_rank):
                    if inv[i] >= npos:
                        out.append(i + 1)
                        w = kernels.compose(rd.simple_perms[i], w)
                        break
                else:
                    break
            self._word = tuple(out)
        return self._word

    @property
    def matrix(self) -> Tuple[Tuple[int, ...], ...]:
        """Action on lattice coordinates (column-vector convention)."""
        if self._matrix is None:
            rd = self.rd
            n = rd.dim
            m = tuple(tuple(1 if a == b else 0 for b in range(n)) for a in range(n))
            for i in self.word:
                s = rd.simple_matrices[i - 1]
                m = tuple(tuple(sum(m[a][c] * s[c][b] for c in range(n)) for b in range(n)) for a in range(n))
            self._matrix = m
        return self._matrix

    def act(self, vec: Sequence[int]) -> Vec:
        return kernels.mat_vec(self.matrix, vec)

    def act_bits(self, bits: int) -> int:
        if self._cols2 is None:
            m, n = self.matrix, self.rd.dim
            self._cols2 = tuple(bits_of([m[a][k] for a in range(n)]) for k in range(n))
        return kernels.act_bits(self._cols2, bits)

    def act_root(self, root: int) -> int:
        return self.perm[root]

    def inversions(self) -> List[int]:
        npos = self.rd.npos
        return [a for a in range(npos) if self.perm[a] >= npos]

    def order(self) -> int:
        k, x = 1, self
        while not x.is_identity():
            x = x * self
            k += 1
        return k


# -- operations -------------------------------------------------------------

def _lattice_rows(components: Sequence[Tuple[str, int]], isogeny, central_rank: int):
    r = sum(rank for _, rank in components)
    n = r + central_rank
    if isinstance(isogeny, str):
        if isogeny not in ("sc", "ad"):
            raise RootDatumError(f"unknown isogeny {isogeny!r}")
        rows = []
        if isogeny == "sc":
            rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(r)]
        else:
            offset = 0
            for kind, rank in components:
                inv = Matrix(cartan_matrix(kind, rank)).inv()
                for i in range(rank):
                    row = [Fraction(0)] * n
                    for j in range(rank):
                        x = inv[i, j]
                        row[offset + j] = Fraction(int(x.p), int(x.q))
                    rows.append(row)
                offset += rank
        rows += [[Fraction(int(i == j)) for j in range(n)] for i in range(r, n)]
        return rows
    return [[Fraction(x) for x in row] for row in isogeny]


def build_root_datum(components: Sequence[Tuple[str, int]], isogeny="sc", central_rank: int = 0,
                     res_copies: int = 1) -> RootDatum:
    """Root datum from components, an isogeny ("sc", "ad" or lattice rows)."""
    comps = [(str(k).upper(), int(r)) for k, r in components]
    if not comps:
        raise RootDatumError("at least one component is required")
    if central_rank < 0:
        raise RootDatumError("central rank must be nonnegative")
    for kind, rank in comps:
        _check_rank(kind, rank)
    if res_copies < 1:
        raise RootDatumError("res_copies must be positive")
    comps = comps * res_copies
    if not isinstance(isogeny, str) and res_copies > 1:
        raise RootDatumError("explicit lattices cannot be combined with res_copies")
    return RootDatum(comps, _lattice_rows(comps, isogeny, central_rank), central_rank)


def weyl_act(rd: RootDatum, w: WeylElt, v: Sequence[int]) -> Vec:
    if len(v) != rd.dim:
        raise RootDatumError(f"expected a vector of length {rd.dim}, got {len(v)}")
    return w.act(v)


def word_to_elt(rd: RootDatum, word: Iterable[int]) -> WeylElt:
    perm = rd.identity_perm
    for i in word:
        if not 1 <= i <= rd.ss_rank:
            raise RootDatumError(f"simple index {i} out of range")
        perm = kernels.compose(perm, rd.simple_perms[i - 1])
    return rd.weyl(perm)


def normal_form(rd: RootDatum, word: Iterable[int]) -> WeylElt:
    """Element of W_0 for a word; its ``.word`` is the canonical reduced word."""
    return word_to_elt(rd, word)


def longest_element(rd: RootDatum, J: Iterable[int]) -> WeylElt:
    """Longest element y_J of the parabolic subgroup on 1-based indices J."""
    J = sorted(set(J))
    w = rd.identity
    npos = rd.npos
    while True:
        for j in J:
            if w.perm[j - 1] < npos:  # l(w s_j) > l(w)
                w = w * rd.s(j)
                break
        else:
            return w


def inversion_set(rd: RootDatum, w: WeylElt) -> List[Vec]:
    """Positive roots a with w(a) < 0, as simple-root coefficient vectors."""
    return [rd.roots[a] for a in w.inversions()]


def y_paren(rd: RootDatum, i: int) -> WeylElt:
    """y_(i) = y_{I minus i} y_I inside the component of the 1-based node i."""
    comp = rd.components[rd.component_of(i - 1)]
    nodes = list(range(comp.offset + 1, comp.offset + comp.rank + 1))
    return longest_element(rd, [j for j in nodes if j != i]) * longest_element(rd, nodes)
