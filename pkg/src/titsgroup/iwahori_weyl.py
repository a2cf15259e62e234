"""Extended affine Weyl group X_* x| W_0, affine roots and the length-zero subgroup.

Conventions: ``x = t_lam w`` sends the affine root ``(b, k)`` (the function
``v -> <b, v> + k``) to ``(w b, k - <w b, lam>)``.  The base alcove is the
dominant one at the origin, so each component contributes the affine simple
roots ``(-theta, 1)`` (listed first) followed by its finite simple roots.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from . import kernels
from .root_datum import RootDatum, RootDatumError, Vec, WeylElt, quotient_structure, y_paren


class AffineRoot(NamedTuple):
    b: int  # index into rd.roots
    k: int


@dataclass(frozen=True)
class ExtAffElt:
    lam: Vec
    w: WeylElt

    @property
    def rd(self) -> RootDatum:
        return self.w.rd

    def __mul__(self, other: "ExtAffElt") -> "ExtAffElt":
        shifted = self.w.act(other.lam) if other.lam != self.rd.zero() else other.lam
        return ExtAffElt(tuple(a + b for a, b in zip(self.lam, shifted)), self.w * other.w)

    def inverse(self) -> "ExtAffElt":
        winv = self.w.inverse()
        return ExtAffElt(tuple(-x for x in winv.act(self.lam)), winv)

    def __pow__(self, k: int) -> "ExtAffElt":
        base = self if k >= 0 else self.inverse()
        out = identity(self.rd)
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return self.w.is_identity() and not any(self.lam)

    def __repr__(self) -> str:
        return f"ExtAffElt(lam={self.lam}, w={self.w.word})"

    def key(self) -> Tuple:
        return (length(self), word_of(self), self.lam, self.w.word)

    def to_json(self) -> dict:
        word, tau = descent_decompose(self.rd, self)
        return {"lambda": list(self.lam), "w": list(self.w.word), "word": list(word),
                "omega": {"lambda": list(tau.x.lam), "w": list(tau.x.w.word)}}


def identity(rd: RootDatum) -> ExtAffElt:
    return ExtAffElt(rd.zero(), rd.identity)


def translation(rd: RootDatum, lam: Sequence[int]) -> ExtAffElt:
    lam = tuple(int(x) for x in lam)
    if len(lam) != rd.dim:
        raise RootDatumError(f"expected a cocharacter of length {rd.dim}")
    return ExtAffElt(lam, rd.identity)


def finite(rd: RootDatum, w: WeylElt) -> ExtAffElt:
    return ExtAffElt(rd.zero(), w)


# -- affine roots -------------------------------------------------------------

def act_affine_root(x: ExtAffElt, a: AffineRoot) -> AffineRoot:
    rd = x.rd
    wb = x.w.perm[a.b]
    return AffineRoot(wb, a.k - rd.pair(wb, x.lam))


def act_inverse_affine_root(x: ExtAffElt, a: AffineRoot) -> AffineRoot:
    """x^{-1}(a) without forming the inverse."""
    rd = x.rd
    return AffineRoot(x.w.inverse().perm[a.b], a.k + rd.pair(a.b, x.lam))


def is_positive(rd: RootDatum, a: AffineRoot) -> bool:
    return a.k > 0 or (a.k == 0 and a.b < rd.npos)


def gradient_coroot(rd: RootDatum, a: AffineRoot) -> Vec:
    return rd.coroot_lattice[a.b]


def root_reflection(rd: RootDatum, a: AffineRoot) -> ExtAffElt:
    """Reflection in the affine hyperplane of ``a``: t_{-k b^vee} s_b."""
    cor = rd.coroot_lattice[a.b]
    return ExtAffElt(tuple(-a.k * c for c in cor), rd.reflection(a.b))


@dataclass(frozen=True)
class AffineNode:
    index: int
    component: int
    root: AffineRoot
    finite: Optional[int]  # 1-based simple index, None for the extra node

    @property
    def is_extra(self) -> bool:
        return self.finite is None

    @property
    def label(self) -> str:
        return f"s{self.index}"


def affine_nodes(rd: RootDatum) -> Tuple[AffineNode, ...]:
    cached = getattr(rd, "_affine_nodes", None)
    if cached is not None:
        return cached
    nodes: List[AffineNode] = []
    for c, comp in enumerate(rd.components):
        theta = rd.highest_root(c)
        nodes.append(AffineNode(len(nodes), c, AffineRoot(rd.neg(theta), 1), None))
        for i in range(comp.offset, comp.offset + comp.rank):
            nodes.append(AffineNode(len(nodes), c, AffineRoot(i, 0), i + 1))
    out = tuple(nodes)
    rd._affine_nodes = out
    return out


def node_reflection(rd: RootDatum, node: int) -> ExtAffElt:
    cache = rd.__dict__.setdefault("_node_reflections", {})
    if node not in cache:
        cache[node] = root_reflection(rd, affine_nodes(rd)[node].root)
    return cache[node]


def node_of_finite(rd: RootDatum, i: int) -> int:
    """Affine node index of the 1-based finite simple index ``i``."""
    for nd in affine_nodes(rd):
        if nd.finite == i:
            return nd.index
    raise RootDatumError(f"no simple node {i}")


def braid_order(rd: RootDatum, p: int, q: int) -> Optional[int]:
    """Order of s_p s_q, or None when infinite."""
    if p == q:
        return 1
    nodes = affine_nodes(rd)
    a, b = nodes[p], nodes[q]
    if a.component != b.component:
        return 2
    prod = rd.pair(a.root.b, rd.coroot_lattice[b.root.b]) * rd.pair(b.root.b, rd.coroot_lattice[a.root.b])
    if prod >= 4:
        return None
    return {0: 2, 1: 3, 2: 4, 3: 6}[prod]


# -- length and descents --------------------------------------------------------

def length(x: ExtAffElt) -> int:
    """Closed formula sum_{b>0} |<b, lam> - [w^{-1} b < 0]|."""
    rd = x.rd
    cache = rd.__dict__.setdefault("_length_cache", {})
    key = (x.lam, x.w.perm)
    hit = cache.get(key)
    if hit is not None:
        return hit
    npos = rd.npos
    winv = kernels.invert(x.w.perm)
    pairs = kernels.mat_vec(rd.root_functionals[:npos], x.lam)
    hit = sum(abs(p - (winv[b] >= npos)) for b, p in enumerate(pairs))
    if len(cache) > 1 << 20:
        cache.clear()
    cache[key] = hit
    return hit


def length_hyperplanes(x: ExtAffElt) -> int:
    """Count positive affine roots made negative by x^{-1}, root by root."""
    rd = x.rd
    total = 0
    for b in range(rd.npos):
        m = rd.pair(b, x.lam)
        for sign, broot in ((1, b), (-1, rd.neg(b))):
            start = 0 if sign == 1 else 1
            for k in range(start, abs(m) + 2):
                if not is_positive(rd, act_inverse_affine_root(x, AffineRoot(broot, k))):
                    total += 1
    return total


def left_descents(x: ExtAffElt) -> List[int]:
    rd = x.rd
    return [nd.index for nd in affine_nodes(rd)
            if not is_positive(rd, act_inverse_affine_root(x, nd.root))]


def right_descents(x: ExtAffElt) -> List[int]:
    rd = x.rd
    return [nd.index for nd in affine_nodes(rd) if not is_positive(rd, act_affine_root(x, nd.root))]


@dataclass(frozen=True)
class OmegaElt:
    x: ExtAffElt
    perm: Tuple[int, ...]

    def __mul__(self, other: "OmegaElt") -> "OmegaElt":
        return omega_elt(self.x * other.x)

    def inverse(self) -> "OmegaElt":
        return omega_elt(self.x.inverse())

    def __pow__(self, k: int) -> "OmegaElt":
        return omega_elt(self.x ** k)

    def is_identity(self) -> bool:
        return self.x.is_identity()

    def to_json(self) -> dict:
        return {"lambda": list(self.x.lam), "w": list(self.x.w.word), "perm": list(self.perm)}


def omega_elt(x: ExtAffElt) -> OmegaElt:
    if left_descents(x):
        raise RootDatumError("element has positive length")
    return OmegaElt(x, omega_conjugation(x.rd, x))


def omega_conjugation(rd: RootDatum, tau) -> Tuple[int, ...]:
    """Permutation p of affine nodes with tau s_i tau^{-1} = s_{p(i)}."""
    x = tau.x if isinstance(tau, OmegaElt) else tau
    nodes = affine_nodes(rd)
    where = {nd.root: nd.index for nd in nodes}
    out = []
    for nd in nodes:
        img = act_affine_root(x, nd.root)
        if img not in where:
            raise RootDatumError("element does not stabilise the base alcove")
        out.append(where[img])
    return tuple(out)


def descent_decompose(rd: RootDatum, x: ExtAffElt) -> Tuple[Tuple[int, ...], OmegaElt]:
    """Lexicographically least reduced word and length-zero part: x = s_{i1}...s_{in} tau."""
    cache = rd.__dict__.setdefault("_descent_cache", {})
    key = (x.lam, x.w.perm)
    hit = cache.get(key)
    if hit is not None:
        return hit
    word: List[int] = []
    cur = x
    while True:
        desc = left_descents(cur)
        if not desc:
            break
        s = desc[0]
        word.append(s)
        cur = node_reflection(rd, s) * cur
    out = (tuple(word), OmegaElt(cur, omega_conjugation(rd, cur)))
    if len(cache) < 200000:
        cache[key] = out
    return out


def word_of(x: ExtAffElt) -> Tuple[int, ...]:
    return descent_decompose(x.rd, x)[0]


def length_walk(x: ExtAffElt) -> int:
    return len(word_of(x))


def from_word(rd: RootDatum, word: Sequence[int], tau: Optional[ExtAffElt] = None) -> ExtAffElt:
    out = identity(rd)
    for s in word:
        out = out * node_reflection(rd, s)
    return out * tau if tau is not None else out


def reduced_words(x: ExtAffElt, limit: int = 10000) -> List[Tuple[int, ...]]:
    """All reduced words of x (up to ``limit``), each followed by the same tau."""
    rd = x.rd

    @lru_cache(maxsize=None)
    def words(key) -> Tuple[Tuple[int, ...], ...]:
        cur = ExtAffElt(key[0], rd.weyl(key[1]))
        desc = left_descents(cur)
        if not desc:
            return ((),)
        out = []
        for s in desc:
            nxt = node_reflection(rd, s) * cur
            for tail in words((nxt.lam, nxt.w.perm)):
                out.append((s,) + tail)
                if len(out) >= limit:
                    return tuple(out)
        return tuple(out)

    return list(words((x.lam, x.w.perm)))


def is_length_additive(x: ExtAffElt, y: ExtAffElt) -> bool:
    return length(x * y) == length(x) + length(y)


# -- the length-zero group ------------------------------------------------------

TABLE_GENERATOR = {"A": lambda n: 1, "B": lambda n: 1, "C": lambda n: n,
                   "D": lambda n: n if n % 2 else None, "E": lambda n: {6: 1, 7: 7}.get(n),
                   "F": lambda n: None, "G": lambda n: None}


def nu_ad(rd: RootDatum, i: int) -> ExtAffElt:
    """t_{omega_i^vee} y_(i) for a minuscule 1-based node i (coweight must lie in X_*)."""
    if not rd.minuscule(i - 1):
        raise RootDatumError(f"node {i} is not minuscule")
    amb = rd.fundamental_coweight_amb(i - 1)
    lam = rd.amb_to_lattice(amb)
    return ExtAffElt(lam, y_paren(rd, i))


@dataclass
class OmegaGroup:
    torsion: List[Tuple[int, OmegaElt]]
    free: List[OmegaElt]
    labels: Dict[str, OmegaElt] = field(default_factory=dict)
    generator: Optional[str] = None
    elements: Optional[List[OmegaElt]] = None

    @property
    def finite(self) -> bool:
        return not self.free

    @property
    def order(self) -> Optional[int]:
        if self.free:
            return None
        out = 1
        for d, _ in self.torsion:
            out *= d
        return out

    def invariants(self) -> List[int]:
        return [d for d, _ in self.torsion]

    def to_json(self) -> dict:
        return {"torsion": [[d, g.to_json()] for d, g in self.torsion],
                "free": [g.to_json() for g in self.free],
                "order": self.order, "generator": self.generator,
                "labels": {k: v.to_json() for k, v in sorted(self.labels.items())}}


def omega_part(rd: RootDatum, x: ExtAffElt) -> OmegaElt:
    return descent_decompose(rd, x)[1]


def omega_group(rd: RootDatum) -> OmegaGroup:
    cached = getattr(rd, "_omega_group", None)
    if cached is not None:
        return cached
    torsion, free = quotient_structure(rd.coroot_lattice, rd.dim)
    tors = [(d, omega_part(rd, translation(rd, g))) for d, g in torsion]
    frees = [omega_part(rd, translation(rd, g)) for g in free]
    labels: Dict[str, OmegaElt] = {}
    for i in range(1, rd.ss_rank + 1):
        if not rd.minuscule(i - 1):
            continue
        amb = rd.fundamental_coweight_amb(i - 1)
        if any(x.denominator != 1 for x in rd.amb_to_lattice_rational(amb)):
            continue
        labels[f"nu({i})"] = omega_elt(nu_ad(rd, i))
    generator = None
    if len(rd.components) == 1:
        comp = rd.components[0]
        g = TABLE_GENERATOR[comp.kind](comp.rank)
        if g is not None and f"nu({g})" in labels:
            generator = f"nu({g})"
    elements = None
    if not frees:
        elements = _closure(rd, [g for _, g in tors])
    grp = OmegaGroup(tors, frees, labels, generator, elements)
    rd._omega_group = grp
    return grp


def _closure(rd: RootDatum, gens: Sequence[OmegaElt]) -> List[OmegaElt]:
    one = OmegaElt(identity(rd), tuple(range(len(affine_nodes(rd)))))
    seen = {(one.x.lam, one.x.w.perm): one}
    frontier = [one]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                key = (b.x.lam, b.x.w.perm)
                if key not in seen:
                    seen[key] = b
                    nxt.append(b)
        frontier = nxt
    return sorted(seen.values(), key=lambda t: (t.perm, t.x.lam))


def element_order(x, cap: int = 10000) -> Optional[int]:
    cur = x
    for k in range(1, cap + 1):
        if cur.is_identity():
            return k
        cur = cur * x
    return None


# -- enumeration ----------------------------------------------------------------

def affine_ball(rd: RootDatum, radius: int) -> List[ExtAffElt]:
    """Elements of the affine Weyl group of length at most ``radius``."""
    one = identity(rd)
    seen = {(one.lam, one.w.perm): one}
    frontier = [one]
    nodes = range(len(affine_nodes(rd)))
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for s in nodes:
                y = node_reflection(rd, s) * x
                key = (y.lam, y.w.perm)
                if key not in seen:
                    seen[key] = y
                    nxt.append(y)
        frontier = nxt
    return sorted(seen.values(), key=lambda x: (length(x), word_of(x)))


def omega_ball(rd: RootDatum, radius: int) -> List[OmegaElt]:
    """All of a finite Omega, else products of at most ``radius`` generators."""
    grp = omega_group(rd)
    if grp.elements is not None:
        return list(grp.elements)
    gens = [g for _, g in grp.torsion] + grp.free
    gens = gens + [g.inverse() for g in gens]
    one = OmegaElt(identity(rd), tuple(range(len(affine_nodes(rd)))))
    seen = {(one.x.lam, one.x.w.perm): one}
    frontier = [one]
    for _ in range(radius):
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                key = (b.x.lam, b.x.w.perm)
                if key not in seen:
                    seen[key] = b
                    nxt.append(b)
        frontier = nxt
    return sorted(seen.values(), key=lambda t: (t.perm, t.x.lam))


def extended_ball(rd: RootDatum, radius: int) -> List[ExtAffElt]:
    """Products w tau with l(w) <= radius and tau from ``omega_ball``."""
    taus = omega_ball(rd, radius)
    return [w * t.x for w in affine_ball(rd, radius) for t in taus]
