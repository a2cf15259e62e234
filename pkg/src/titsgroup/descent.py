"""Frobenius actions for inner twists and the relative Tits group.

``sigma`` is a pinned diagram automorphism acting on lattice coordinates.  An
inner twist is named by an element ``nu = t_beta z`` of the adjoint length-zero
group in the first component, and ``sigma* = Ad(nu) o sigma`` acts on triples
through the formulas for translations, signs and Weyl lifts below.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .affine_tits import (TitsElt, at_identity, at_inverse, at_mul, at_pow, at_prod,
                          extra_node_choices, finite_lift, lift_affine_simple, s2_basis,
                          _raw_extra_lift)
from .finite_tits import f2_basis, span_elements
from .iwahori_weyl import (ExtAffElt, OmegaElt, affine_nodes, descent_decompose, element_order,
                           identity, length, node_reflection, nu_ad, omega_ball,
                           omega_elt, omega_group)
from .root_datum import (RootDatum, RootDatumError, Vec, WeylElt, bits_of, bits_to_list,
                         build_root_datum, solve_integer, word_to_elt)


class DescentError(RootDatumError):
    pass


# -- diagram automorphisms --------------------------------------------------------

@dataclass
class Diagram:
    """Node permutation ``perm[i-1] = sigma(i)`` on 1-based finite nodes."""
    perm: Tuple[int, ...]
    lattice: Tuple[Tuple[int, ...], ...]  # sigma on lattice coordinates, column convention
    root_perm: Tuple[int, ...]

    def act(self, vec: Sequence[int]) -> Vec:
        return tuple(sum(self.lattice[a][b] * vec[b] for b in range(len(vec))) for a in range(len(vec)))

    def act_bits(self, bits: int) -> int:
        return bits_of(self.act(tuple((bits >> k) & 1 for k in range(len(self.lattice))))) if bits else 0


def res_permutation(rd: RootDatum, delta: Sequence[int], copies: int) -> Tuple[int, ...]:
    """sigma moving component c to c+1, applying ``delta`` from the last copy to the first."""
    r = rd.components[0].rank
    out = []
    for c in range(copies):
        for i in range(1, r + 1):
            if c < copies - 1:
                out.append((c + 1) * r + i)
            else:
                out.append(delta[i - 1])
    return tuple(out)


def make_diagram(rd: RootDatum, perm: Sequence[int]) -> Diagram:
    n = rd.ss_rank
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise DescentError("diagram must permute the finite simple nodes")
    for i in range(n):
        for j in range(n):
            if rd.cartan[perm[i] - 1][perm[j] - 1] != rd.cartan[i][j]:
                raise DescentError("diagram does not preserve the Cartan matrix")
    dim = rd.dim

    def amb_perm(amb):
        out = list(amb)
        for i in range(n):
            out[perm[i] - 1] = amb[i]
        return tuple(out)

    cols = []
    for k in range(dim):
        e = tuple(int(k == j) for j in range(dim))
        img = rd.amb_to_lattice_rational(amb_perm(rd.lattice_to_amb(e)))
        if any(x.denominator != 1 for x in img):
            raise DescentError("diagram does not preserve the cocharacter lattice")
        cols.append(tuple(int(x) for x in img))
    mat = tuple(tuple(cols[b][a] for b in range(dim)) for a in range(dim))
    root_perm = []
    for beta in rd.roots:
        img = [0] * n
        for i in range(n):
            img[perm[i] - 1] = beta[i]
        root_perm.append(rd.root_index[tuple(img)])
    return Diagram(perm, mat, tuple(root_perm))


def sigma_weyl(d: Diagram, w: WeylElt) -> WeylElt:
    rp = d.root_perm
    inv = [0] * len(rp)
    for a, b in enumerate(rp):
        inv[b] = a
    return w.rd.weyl(tuple(rp[w.perm[inv[a]]] for a in range(len(rp))))


def sigma_naive(d: Diagram, x: TitsElt) -> TitsElt:
    """Coordinate action of sigma on a triple."""
    return TitsElt(d.act(x.lam), d.act_bits(x.eps), sigma_weyl(d, x.w))


def _twist_bits(twist: Sequence[int], lam: Sequence[int]) -> int:
    out = 0
    for k, x in enumerate(lam):
        if x & 1:
            out ^= twist[k]
    return out


def sigma_tits(fd: "FrobeniusData", x: TitsElt) -> TitsElt:
    """sigma on triples: n_lam goes to n_{sigma lam} t_{f(lam)}, f fixed by the pinning."""
    d = fd.diagram
    eps = d.act_bits(x.eps)
    if fd.twist_map is not None:
        eps ^= _twist_bits(fd.twist_map, x.lam)
    return TitsElt(d.act(x.lam), eps, sigma_weyl(d, x.w))


def _projection_twist(rd: RootDatum, d: Diagram, comps: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Bits of proj_S(sigma e_k) mod 2 per lattice basis vector, or None if not integral."""
    keep = set()
    for c in comps:
        comp = rd.components[c]
        keep.update(range(comp.offset, comp.offset + comp.rank))
    out = []
    for k in range(rd.dim):
        amb = rd.lattice_to_amb(d.act(tuple(int(k == j) for j in range(rd.dim))))
        amb = tuple(a if j in keep else Fraction(0) for j, a in enumerate(amb))
        img = rd.amb_to_lattice_rational(amb)
        if any(x.denominator != 1 for x in img):
            return None
        out.append(bits_of(tuple(int(x) for x in img)))
    return tuple(out)


def _choose_twist(rd: RootDatum, d: Diagram) -> Tuple[Tuple[int, ...], Optional[Tuple[int, ...]]]:
    """Least component subset S making the pinned node lifts sigma-compatible."""
    from itertools import combinations
    probe = FrobeniusData(rd, d, None)
    perm = node_permutation(probe)
    lifts = [lift_affine_simple(rd, s) for s in range(len(perm))]
    ncomp = len(rd.components)
    for size in range(ncomp + 1):
        for comps in combinations(range(ncomp), size):
            twist = _projection_twist(rd, d, comps) if comps else None
            if comps and twist is None:
                continue
            probe.twist_map = twist
            if all(sigma_tits(probe, lifts[s]) == lifts[perm[s]] for s in range(len(perm))):
                return comps, twist
    raise DescentError("no torus twist makes the pinned affine lifts sigma-compatible")


# -- inner twist data -----------------------------------------------------------

@dataclass
class InnerTwistDatum:
    label: str
    beta: Tuple[Fraction, ...]  # ambient coroot coordinates
    z: WeylElt
    k: int
    eta: Vec
    g_z: TitsElt
    power: Optional[int]  # exponent of the table generator (cyclic case)

    def to_json(self, dim: int) -> dict:
        return {"label": self.label, "beta": [[x.numerator, x.denominator] for x in self.beta],
                "z": list(self.z.word), "k": self.k, "eta": list(self.eta),
                "g_z": self.g_z.to_json(), "power": self.power}


@dataclass
class FrobeniusData:
    rd: RootDatum
    diagram: Diagram
    inner: Optional[InnerTwistDatum]
    copies: int = 1
    twist_map: Optional[Tuple[int, ...]] = None
    twist_components: Tuple[int, ...] = ()
    _node_perm: Optional[Tuple[int, ...]] = None

    @property
    def twisted(self) -> bool:
        return self.inner is not None

    def to_json(self) -> dict:
        return {"diagram": list(self.diagram.perm), "copies": self.copies,
                "twist_components": list(self.twist_components),
                "inner": self.inner.to_json(self.rd.dim) if self.inner else None}


LABEL = re.compile(r"^nu\((\d+)\)(?:\^(\d+))?$")


def parse_inner_label(label: str) -> Optional[Tuple[int, int]]:
    label = label.strip()
    if label in ("", "trivial", "1"):
        return None
    m = LABEL.match(label)
    if not m:
        raise DescentError(f"invalid inner label {label!r}")
    return int(m.group(1)), int(m.group(2) or 1)


def _adjoint_component(rd: RootDatum) -> RootDatum:
    comp = rd.components[0]
    return build_root_datum([(comp.kind, comp.rank)], "ad")


def _transport(rd: RootDatum, w: WeylElt) -> WeylElt:
    """Weyl element of the first component's adjoint datum inside ``rd``."""
    return word_to_elt(rd, w.word)


def coinvariant_order(ad: RootDatum, delta: Sequence[int]) -> int:
    """|Omega_ad / <delta(x) x^{-1}>| for the node permutation ``delta``."""
    grp = omega_group(ad)
    d = make_diagram(ad, delta)
    elems = grp.elements
    keys = {(t.x.lam, t.x.w.perm) for t in elems}
    sub = set()
    for t in elems:
        img = ExtAffElt(d.act(t.x.lam), sigma_weyl(d, t.x.w))
        if (img.lam, img.w.perm) not in keys:
            raise DescentError("diagram does not preserve the length-zero group")
        q = img * t.x.inverse()
        sub.add((q.lam, q.w.perm))
    # close the set of differences under multiplication
    frontier = list(sub)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(sub):
                p = ExtAffElt(a[0], ad.weyl(a[1])) * ExtAffElt(b[0], ad.weyl(b[1]))
                key = (p.lam, p.w.perm)
                if key not in sub:
                    sub.add(key)
                    nxt.append(key)
        frontier = nxt
    return len(elems) // max(1, len(sub))


def _delta_of(rd: RootDatum, perm: Sequence[int], copies: int) -> Tuple[int, ...]:
    """sigma^copies restricted to the first component."""
    r = rd.components[0].rank
    out = []
    for i in range(1, r + 1):
        j = i
        for _ in range(copies):
            j = perm[j - 1]
        out.append(j)
    return tuple(out)


def build_frobenius(rd: RootDatum, diagram: Optional[Sequence[int]] = None, inner: str = "trivial",
                    copies: int = 1) -> FrobeniusData:
    """Frobenius datum: ``diagram`` is a global node permutation, or for ``copies > 1``
    the automorphism applied when wrapping from the last copy to the first."""
    if copies > 1:
        r = rd.components[0].rank
        if len(rd.components) != copies or any(c.kind != rd.components[0].kind or c.rank != r
                                                for c in rd.components):
            raise DescentError("restriction of scalars needs identical components")
        delta = tuple(diagram) if diagram else tuple(range(1, r + 1))
        perm = res_permutation(rd, delta, copies)
    else:
        perm = tuple(diagram) if diagram else tuple(range(1, rd.ss_rank + 1))
    d = make_diagram(rd, perm)
    parsed = parse_inner_label(inner)
    comps, twist = _choose_twist(rd, d)
    fd = FrobeniusData(rd, d, None, copies, twist, comps)
    if parsed is None:
        return fd
    i, j = parsed
    comp = rd.components[0]
    if not 1 <= i <= comp.rank:
        raise DescentError(f"inner label names node {i} outside the first component")
    ad = _adjoint_component(rd)
    if not ad.minuscule(i - 1):
        raise DescentError(f"node {i} is not minuscule")
    nu1 = nu_ad(ad, i)
    nu = nu1 ** j
    grp = omega_group(ad)
    delta = _delta_of(rd, perm, copies)
    coinv = coinvariant_order(ad, delta)
    even_d = comp.kind == "D" and comp.rank % 2 == 0
    power = None
    if even_d:
        g_word = nu.w
    else:
        gen = grp.generator
        if gen is None:
            raise DescentError("length-zero group is trivial for this type")
        nu0 = grp.labels[gen].x
        cur, power = identity(ad), None
        for m in range(grp.order):
            if cur == nu:
                power = m
                break
            cur = cur * nu0
        if power is None:
            raise DescentError("inner label is not a power of the table generator")
        if power >= coinv:
            raise DescentError(f"inner label {inner!r} is not the normalised representative of its "
                               f"class in a coinvariant group of order {coinv}")
        g_word = nu0.w
    beta_c = ad.lattice_to_amb(nu.lam)
    beta = tuple(beta_c) + (Fraction(0),) * (rd.ss_rank - comp.rank)
    z = _transport(rd, nu.w)
    rows = [row[: rd.ss_rank] for row in rd.lattice]
    k, eta = 1, None
    while eta is None:
        eta = solve_integer(rows, [k * b for b in beta])
        if eta is None:
            k += 1
            if k > 64:
                raise DescentError("no multiple of beta lies in the image of X_*")
    if even_d:
        g_z = finite_lift(rd, z)
    else:
        g_z = at_pow(rd, finite_lift(rd, _transport(rd, g_word)), power)
    label = "trivial" if (power == 0 or nu.is_identity()) else inner.strip()
    if nu.is_identity():
        return fd
    fd.inner = InnerTwistDatum(label, beta, z, k, tuple(eta), g_z, power)
    return fd


# -- sigma* --------------------------------------------------------------------

def _beta_shift(fd: FrobeniusData, w: WeylElt) -> Vec:
    """beta - w(beta) as a lattice vector; must lie in the coroot lattice."""
    rd = fd.rd
    if fd.inner is None:
        return rd.zero()
    beta = fd.inner.beta
    wb = _act_ambient(rd, w, beta)
    diff = tuple(b - c for b, c in zip(beta, wb))
    if any(x.denominator != 1 for x in diff):
        raise DescentError("beta - w(beta) is not in the coroot lattice")
    return rd.amb_to_lattice(tuple(int(x) for x in diff) + (0,) * rd.central_rank)


def _act_ambient(rd: RootDatum, w: WeylElt, vec: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Weyl action on semisimple ambient (coroot) coordinates."""
    v = list(vec)
    for i in reversed(w.word):
        pair = sum(v[j] * rd.cartan[j][i - 1] for j in range(rd.ss_rank))  # <alpha_i, v>
        v[i - 1] -= pair
    return tuple(v)


def _z(fd: FrobeniusData) -> WeylElt:
    return fd.inner.z if fd.inner else fd.rd.identity


def sigma_star_weyl(fd: FrobeniusData, x: ExtAffElt) -> ExtAffElt:
    z = _z(fd)
    lam = z.act(fd.diagram.act(x.lam))
    w2 = z * sigma_weyl(fd.diagram, x.w) * z.inverse()
    shift = _beta_shift(fd, w2)
    return ExtAffElt(tuple(a + b for a, b in zip(lam, shift)), w2)


def sigma_star_weyl_ambient(fd: FrobeniusData, x: ExtAffElt) -> ExtAffElt:
    """Ad(nu) o sigma computed with rational translations in the adjoint group."""
    rd = fd.rd
    amb = rd.lattice_to_amb(fd.diagram.act(x.lam))
    sw = sigma_weyl(fd.diagram, x.w)
    if fd.inner is None:
        return ExtAffElt(rd.amb_to_lattice(amb), sw)
    beta = tuple(fd.inner.beta) + (Fraction(0),) * rd.central_rank
    z = fd.inner.z
    # (t_beta z)(t_lam w)(z^{-1} t_{-beta}) = t_{beta + z lam - zwz^{-1} beta} zwz^{-1}
    w2 = z * sw * z.inverse()
    zl = _act_ambient(rd, z, amb[: rd.ss_rank]) + tuple(amb[rd.ss_rank:])
    wb = _act_ambient(rd, w2, beta[: rd.ss_rank]) + tuple(beta[rd.ss_rank:])
    total = tuple(b + l - c for b, l, c in zip(beta, zl, wb))
    return ExtAffElt(rd.amb_to_lattice(total), w2)


def sigma_star_tits(fd: FrobeniusData, x: TitsElt) -> TitsElt:
    rd = fd.rd
    z = _z(fd)
    sx = sigma_tits(fd, x)
    torus = TitsElt(z.act(sx.lam), z.act_bits(sx.eps), rd.identity)
    sw = sx.w
    w2 = z * sw * z.inverse()
    shift = TitsElt(_beta_shift(fd, w2), 0, rd.identity)
    weyl = TitsElt(rd.zero(), 0, sw)
    if fd.inner is not None:
        g = fd.inner.g_z
        weyl = at_prod(rd, g, weyl, at_inverse(rd, g))
    return at_prod(rd, torus, shift, weyl)


def sigma_star_pow(fd: FrobeniusData, x, k: int, on=None):
    f = on or (sigma_star_tits if isinstance(x, TitsElt) else sigma_star_weyl)
    for _ in range(k):
        x = f(fd, x)
    return x


def node_permutation(fd: FrobeniusData) -> Tuple[int, ...]:
    """sigma* on affine simple reflections."""
    if fd._node_perm is not None:
        return fd._node_perm
    rd = fd.rd
    nodes = affine_nodes(rd)
    refl = {}
    for nd in nodes:
        r = node_reflection(rd, nd.index)
        refl[(r.lam, r.w.perm)] = nd.index
    out = []
    for nd in nodes:
        img = sigma_star_weyl(fd, node_reflection(rd, nd.index))
        key = (img.lam, img.w.perm)
        if key not in refl:
            raise DescentError("sigma* does not preserve the affine simple reflections")
        out.append(refl[key])
    fd._node_perm = tuple(out)
    return fd._node_perm


def node_orbits(fd: FrobeniusData) -> List[Tuple[int, ...]]:
    perm = node_permutation(fd)
    seen, orbits = set(), []
    for start in range(len(perm)):
        if start in seen:
            continue
        orb, cur = [], start
        while cur not in seen:
            seen.add(cur)
            orb.append(cur)
            cur = perm[cur]
        orbits.append(tuple(orb))
    return orbits


# -- relative Weyl group --------------------------------------------------------

def _positive_definite(gram: List[List[Fraction]]) -> bool:
    n = len(gram)
    a = [row[:] for row in gram]
    for i in range(n):
        if a[i][i] <= 0:
            return False
        for r in range(i + 1, n):
            f = a[r][i] / a[i][i]
            for c in range(i, n):
                a[r][c] -= f * a[i][c]
    return True


@dataclass
class Orbit:
    nodes: Tuple[int, ...]  # in sigma*-order starting at the least node
    finite: bool
    w_x: Optional[ExtAffElt] = None
    param: Optional[int] = None
    c_a: Optional[Fraction] = None
    coroot_bits: Optional[int] = None  # c_a * sum of gradient coroots mod 2

    def to_json(self, rd: RootDatum) -> dict:
        return {"nodes": list(self.nodes), "finite": self.finite,
                "w_x": self.w_x.to_json() if self.w_x is not None else None,
                "param": self.param,
                "c_a": None if self.c_a is None else [self.c_a.numerator, self.c_a.denominator],
                "coroot": None if self.coroot_bits is None else bits_to_list(self.coroot_bits, rd.dim)}


@dataclass
class RelativeWeyl:
    fd: FrobeniusData
    orbits: List[Orbit]
    simple: List[Orbit]  # finite orbits, the relative simple reflections
    omega_fixed: List[OmegaElt]
    s2_fixed: List[int]
    s2_full: List[int]

    @property
    def rd(self) -> RootDatum:
        return self.fd.rd

    def params(self) -> List[int]:
        return [o.param for o in self.simple]

    def to_json(self) -> dict:
        rd = self.rd
        return {"orbits": [o.to_json(rd) for o in self.orbits],
                "simple": [list(o.nodes) for o in self.simple],
                "params": self.params(),
                "omega_fixed": [t.to_json() for t in self.omega_fixed],
                "s2_dim": len(self.s2_full), "s2_fixed_dim": len(self.s2_fixed),
                "s2_fixed": [bits_to_list(b, rd.dim) for b in self.s2_fixed]}


def longest_in_parabolic(rd: RootDatum, nodes: Sequence[int]) -> ExtAffElt:
    x = identity(rd)
    lx = 0
    while True:
        for s in nodes:
            y = x * node_reflection(rd, s)
            ly = length(y)
            if ly > lx:
                x, lx = y, ly
                break
        else:
            return x


def sigma_fixed_subspace(fd: FrobeniusData, basis: Sequence[int]) -> List[int]:
    """sigma*-fixed vectors of the F_2 span of ``basis``."""
    z = _z(fd)
    elems = span_elements(basis)
    fixed = [e for e in elems if z.act_bits(fd.diagram.act_bits(e)) == e]
    return f2_basis(fixed)


def relative_data(fd: FrobeniusData) -> RelativeWeyl:
    rd = fd.rd
    nodes = affine_nodes(rd)
    orbits = []
    for orb in node_orbits(fd):
        grads = [nodes[i].root.b for i in orb]
        gram = [[rd.root_inner(a, b) for b in grads] for a in grads]
        fin = _positive_definite(gram)
        o = Orbit(tuple(orb), fin)
        if fin:
            o.w_x = longest_in_parabolic(rd, orb)
            o.param = length(o.w_x)
            b = grads[0]
            o.c_a = rd.root_inner(b, b) / sum(rd.root_inner(b, b2) for b2 in grads)
            if o.c_a.denominator != 1:
                raise DescentError("non-integral c_a")
            total = 0
            for g in grads:
                total ^= rd.coroot_bits[g]
            o.coroot_bits = total if o.c_a.numerator % 2 else 0
        orbits.append(o)
    simple = [o for o in orbits if o.finite]
    fixed = []
    for t in omega_ball(rd, 4):
        img = sigma_star_weyl(fd, t.x)
        if img == t.x:
            fixed.append(t)
    s2 = s2_basis(rd)
    return RelativeWeyl(fd, orbits, simple, fixed, sigma_fixed_subspace(fd, s2), s2)


# -- sigma*-stable lifts ----------------------------------------------------------

@dataclass
class StableSection:
    fd: FrobeniusData
    rel: RelativeWeyl
    node_lifts: Dict[int, TitsElt]
    representatives: Dict[int, int]  # orbit start -> representative node
    extra_eps: Dict[int, int]  # orbits represented by an extra node -> chosen eps

    def m_simple(self, orbit: Orbit) -> TitsElt:
        rd = self.fd.rd
        word, _ = descent_decompose(rd, orbit.w_x)
        out = at_identity(rd)
        for s in word:
            out = at_mul(rd, out, self.node_lifts[s])
        return out

    def m_affine(self, x: ExtAffElt) -> TitsElt:
        rd = self.fd.rd
        word, tau = descent_decompose(rd, x)
        out = at_identity(rd)
        for s in word:
            out = at_mul(rd, out, self.node_lifts[s])
        return at_mul(rd, out, m_tau(self.fd, tau))


def _component_part(rd: RootDatum, w: WeylElt, comp: int) -> WeylElt:
    c = rd.components[comp]
    return word_to_elt(rd, [i for i in w.word if c.offset < i <= c.offset + c.rank])


@lru_cache(maxsize=None)
def _cyclic_generator(kind: str, rank: int) -> Optional[Tuple[Tuple[int, ...], int]]:
    """Reduced word of the Weyl part of the cyclic Omega_ad generator, and its order."""
    grp = omega_group(build_root_datum([(kind, rank)], "ad"))
    if grp.generator is None:
        return None
    return tuple(grp.labels[grp.generator].x.w.word), grp.order


def _m_y_component(rd: RootDatum, y: WeylElt, comp: int) -> TitsElt:
    """Lift of the Weyl part of a length-zero element, within one component."""
    c = rd.components[comp]
    if y.is_identity():
        return at_identity(rd)
    if c.kind == "D" and c.rank % 2 == 0:
        return finite_lift(rd, y)
    gen = _cyclic_generator(c.kind, c.rank)
    if gen is None:
        raise DescentError("nontrivial Weyl part without a cyclic length-zero group")
    word, order = gen
    z0 = word_to_elt(rd, [i + c.offset for i in word])
    cur = rd.identity
    for j in range(order):
        if cur == y:
            return at_pow(rd, finite_lift(rd, z0), j)
        cur = cur * z0
    raise DescentError("Weyl part is not a power of z_0")


def _component_cycles(fd: FrobeniusData) -> List[List[int]]:
    rd = fd.rd
    perm = fd.diagram.perm
    img = {}
    for c, comp in enumerate(rd.components):
        img[c] = rd.component_of(perm[comp.offset] - 1)
    seen, cycles = set(), []
    for c in range(len(rd.components)):
        if c in seen:
            continue
        cyc, cur = [], c
        while cur not in seen:
            seen.add(cur)
            cyc.append(cur)
            cur = img[cur]
        cycles.append(cyc)
    return cycles


def m_weyl_part(fd: FrobeniusData, y: WeylElt) -> TitsElt:
    """m(y) = m(y1) sigma(m(y1)) ... sigma^{k-1}(m(y1)) over each cycle of components."""
    rd = fd.rd
    out = at_identity(rd)
    for cyc in _component_cycles(fd):
        y1 = _component_part(rd, y, cyc[0])
        base = _m_y_component(rd, y1, cyc[0])
        cur = base
        for step in range(len(cyc)):
            out = at_mul(rd, out, cur)
            cur = sigma_tits(fd, cur)
    return out


def m_tau(fd: FrobeniusData, tau) -> TitsElt:
    x = tau.x if isinstance(tau, OmegaElt) else tau
    rd = fd.rd
    return at_mul(rd, TitsElt(x.lam, 0, rd.identity), m_weyl_part(fd, x.w))


def stable_cross_section(fd: FrobeniusData) -> StableSection:
    rd = fd.rd
    rel = relative_data(fd)
    nodes = affine_nodes(rd)
    lifts: Dict[int, TitsElt] = {}
    reps: Dict[int, int] = {}
    extra: Dict[int, int] = {}
    for orb in node_orbits(fd):
        size = len(orb)
        finite_nodes = [i for i in orb if not nodes[i].is_extra]
        if finite_nodes:
            rep = min(finite_nodes)
            base = lift_affine_simple(rd, rep)
        else:
            rep = orb[0]
            base = None
            choice = extra_node_choices(rd)[rep]
            pool = list(choice.candidates)
            for eps in pool:
                cand = _raw_extra_lift(rd, rep, eps)
                if sigma_star_pow(fd, cand, size) == cand:
                    base = cand
                    extra[orb[0]] = eps
                    break
            if base is None:
                raise DescentError(f"no sigma*-periodic lift for the orbit of node {rep}")
        reps[orb[0]] = rep
        # walk the orbit from the representative
        start = orb.index(rep)
        cur = base
        for step in range(size):
            node = orb[(start + step) % size]
            lifts[node] = cur
            cur = sigma_star_tits(fd, cur)
    return StableSection(fd, rel, lifts, reps, extra)


# -- verification ---------------------------------------------------------------

def _rec(name: str, ok: bool, **data) -> dict:
    out = {"name": name, "status": "pass" if ok else "fail"}
    out.update(data)
    return out


def _random_tits(rd: RootDatum, rng: random.Random, weyl: List[WeylElt], s2: List[int]) -> TitsElt:
    lam = tuple(rng.randint(-2, 2) for _ in range(rd.dim))
    eps = 0
    for b in s2:
        if rng.random() < 0.5:
            eps ^= b
    eps ^= rng.getrandbits(rd.dim) if rng.random() < 0.5 else 0
    return TitsElt(lam, eps, rng.choice(weyl))


def _weyl_sample(rd: RootDatum, rng: random.Random, count: int = 64) -> List[WeylElt]:
    out = [rd.identity]
    for _ in range(count):
        w = rd.identity
        for _ in range(rng.randint(0, 3 * rd.ss_rank)):
            w = w * rd.s(rng.randint(1, rd.ss_rank))
        out.append(w)
    return out


def check_automorphism(fd: FrobeniusData, pairs: int = 1000, seed: int = 0) -> dict:
    rd = fd.rd
    rng = random.Random(seed)
    weyl = _weyl_sample(rd, rng)
    s2 = s2_basis(rd)
    bad = None
    for _ in range(pairs):
        x = _random_tits(rd, rng, weyl, s2)
        y = _random_tits(rd, rng, weyl, s2)
        lhs = sigma_star_tits(fd, at_mul(rd, x, y))
        rhs = at_mul(rd, sigma_star_tits(fd, x), sigma_star_tits(fd, y))
        if lhs != rhs:
            bad = {"x": x.to_json(), "y": y.to_json()}
            break
        px = ExtAffElt(x.lam, x.w)
        if sigma_star_tits(fd, x).project() != sigma_star_weyl(fd, px):
            bad = {"x": x.to_json(), "reason": "projection"}
            break
        if sigma_star_weyl(fd, px) != sigma_star_weyl_ambient(fd, px):
            bad = {"x": x.to_json(), "reason": "ambient"}
            break
    return _rec("sigma_star_automorphism", bad is None, pairs=pairs, witness=bad)


def check_power_s(fd: FrobeniusData) -> List[dict]:
    """(sigma*)^{|X|} fixes n_s for every finite simple node."""
    rd = fd.rd
    out = []
    for orb in node_orbits(fd):
        for s in orb:
            nd = affine_nodes(rd)[s]
            if nd.is_extra:
                continue
            n = lift_affine_simple(rd, s)
            img = sigma_star_pow(fd, n, len(orb))
            out.append(_rec(f"power_s(s{s})", img == n, orbit=list(orb), lhs=img.to_json(), rhs=n.to_json()))
    return out


def check_sigma_tau(fd: FrobeniusData) -> List[dict]:
    out = []
    for t in omega_ball(fd.rd, 4):
        a = sigma_star_weyl(fd, t.x)
        d = fd.diagram
        b = ExtAffElt(d.act(t.x.lam), sigma_weyl(d, t.x.w))
        out.append(_rec("sigma_star_on_omega", a == b, tau=t.to_json()))
    return out


def check_m_tau(fd: FrobeniusData, rel: RelativeWeyl) -> List[dict]:
    out = []
    for t in rel.omega_fixed:
        m = m_tau(fd, t)
        img = sigma_star_tits(fd, m)
        out.append(_rec("m_tau_fixed", img == m, tau=t.to_json(), m=m.to_json(), image=img.to_json()))
    return out


def relative_decompose(rel: RelativeWeyl, x: ExtAffElt) -> Tuple[Tuple[int, ...], ExtAffElt]:
    """Least-index relative descent word (indices into rel.simple) and length-zero part."""
    word = []
    cur = x
    lcur = length(cur)
    while True:
        for idx, o in enumerate(rel.simple):
            y = o.w_x * cur
            ly = length(y)
            if ly == lcur - o.param:
                word.append(idx)
                cur, lcur = y, ly
                break
        else:
            return tuple(word), cur


def _relative_decompose(sec: StableSection, x: ExtAffElt):
    return relative_decompose(sec.rel, x)


def relative_ball(sec: StableSection, radius: int) -> List[ExtAffElt]:
    rd = sec.fd.rd
    one = identity(rd)
    seen = {(one.lam, one.w.perm): one}
    frontier = [one]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for o in sec.rel.simple:
                y = o.w_x * x
                key = (y.lam, y.w.perm)
                if key not in seen:
                    seen[key] = y
                    nxt.append(y)
        frontier = nxt
    out = []
    for x in seen.values():
        for t in sec.rel.omega_fixed:
            out.append(x * t.x)
    return sorted(out, key=lambda e: (length(e), descent_decompose(rd, e)[0], e.lam))


def relative_length(sec: StableSection, x: ExtAffElt) -> int:
    return len(_relative_decompose(sec, x)[0])


def relative_tits_check(fd: FrobeniusData, radius: int = 3, seed: int = 0, pairs: int = 200) -> dict:
    rd = fd.rd
    records: List[dict] = []
    records.append(check_automorphism(fd, pairs=pairs, seed=seed))
    records += check_power_s(fd)
    records += check_sigma_tau(fd)
    sec = stable_cross_section(fd)
    rel = sec.rel
    perm = node_permutation(fd)
    # stability of the generator set
    stable = all(sigma_star_tits(fd, sec.node_lifts[s]) == sec.node_lifts[perm[s]] for s in sec.node_lifts)
    records.append(_rec("stable_generators", stable))
    # relations among the stable generators
    from .iwahori_weyl import braid_order
    rel_ok, witness = True, None
    nodes = affine_nodes(rd)
    for p in range(len(nodes)):
        sq = at_mul(rd, sec.node_lifts[p], sec.node_lifts[p])
        if sq != TitsElt(rd.zero(), rd.coroot_bits[nodes[p].root.b], rd.identity):
            rel_ok, witness = False, {"square": p}
        for q in range(p + 1, len(nodes)):
            k = braid_order(rd, p, q)
            if k is None:
                continue
            a, b = sec.node_lifts[p], sec.node_lifts[q]
            lhs = at_prod(rd, *[(a if t % 2 == 0 else b) for t in range(k)])
            rhs = at_prod(rd, *[(b if t % 2 == 0 else a) for t in range(k)])
            if lhs != rhs:
                rel_ok, witness = False, {"braid": [p, q]}
    records.append(_rec("stable_generator_relations", rel_ok, witness=witness))
    records += check_m_tau(fd, rel)
    # relative simple reflections
    for o in rel.simple:
        m = sec.m_simple(o)
        fixed = sigma_star_tits(fd, m) == m
        sq = at_mul(rd, m, m)
        want = TitsElt(rd.zero(), o.coroot_bits, rd.identity)
        records.append(_rec(f"relative_simple({','.join(map(str, o.nodes))})",
                            fixed and sq == want and o.c_a in (1, 2),
                            c_a=int(o.c_a), param=o.param, fixed=fixed,
                            square=sq.to_json(), expected=want.to_json()))
    # braid orders of the relative Coxeter system
    orders = []
    for i, a in enumerate(rel.simple):
        for j in range(i + 1, len(rel.simple)):
            b = rel.simple[j]
            orders.append([i, j, element_order(a.w_x * b.w_x, cap=24)])
    # kernel and fibres over a relative ball
    ball = relative_ball(sec, radius)
    s2f = rel.s2_fixed
    fibre_ok, fwitness = True, None
    for x in ball:
        m = sec.m_affine(x)
        if sigma_star_tits(fd, m) != m or m.project() != x:
            fibre_ok, fwitness = False, {"element": x.to_json(), "reason": "section not fixed"}
            break
        fibre = [at_mul(rd, m, TitsElt(rd.zero(), e, rd.identity)) for e in span_elements(rel.s2_full)]
        fixed = sorted(at_mul(rd, at_inverse(rd, m), f).eps for f in fibre if sigma_star_tits(fd, f) == f)
        if fixed != sorted(span_elements(s2f)):
            fibre_ok, fwitness = False, {"element": x.to_json(), "reason": "fixed fibre"}
            break
    kernel = sorted(e for e in span_elements(rel.s2_full)
                    if sigma_star_tits(fd, TitsElt(rd.zero(), e, rd.identity)).eps == e)
    records.append(_rec("relative_kernel", fibre_ok and f2_basis(kernel) == s2f, witness=fwitness,
                        elements=len(ball), s2_fixed_dim=len(s2f)))
    # reduced-word independence and length equivalence in the relative group
    indep_ok, add_ok, wit = True, True, None
    for x in ball:
        words = _relative_reduced_words(sec, x)
        vals = set()
        for wd in words:
            out = at_identity(rd)
            for idx in wd:
                out = at_mul(rd, out, sec.m_simple(rel.simple[idx]))
            tau = x
            for idx in wd:
                tau = rel.simple[idx].w_x * tau
            out = at_mul(rd, out, m_tau(fd, omega_elt(tau)))
            vals.add(out.key())
        if len(vals) != 1:
            indep_ok, wit = False, {"element": x.to_json()}
            break
    rng = random.Random(seed)
    sample = [(rng.choice(ball), rng.choice(ball)) for _ in range(min(pairs, len(ball) ** 2))] if ball else []
    lengths = {}
    for x, y in sample:
        lx = lengths.setdefault(x.key(), relative_length(sec, x))
        ly = lengths.setdefault(y.key(), relative_length(sec, y))
        xy = x * y
        rel_add = relative_length(sec, xy) == lx + ly
        if rel_add != (length(xy) == length(x) + length(y)):
            add_ok = False
            wit = {"x": x.to_json(), "y": y.to_json()}
            break
    records.append(_rec("relative_word_independence", indep_ok, witness=wit))
    records.append(_rec("length_additivity_equivalence", add_ok, pairs=len(sample)))
    span_b = f2_basis([o.coroot_bits for o in rel.simple if o.coroot_bits])
    status = "fail" if any(r["status"] == "fail" for r in records) else "pass"
    return {"status": status, "records": records, "relative": rel.to_json(),
            "braid_orders": orders, "frobenius": fd.to_json(),
            "node_permutation": list(perm),
            "s2_fixed_dim": len(s2f), "relative_coroot_span_dim": len(span_b),
            "representatives": {str(k): v for k, v in sorted(sec.representatives.items())},
            "extra_eps": {str(k): bits_to_list(v, rd.dim) for k, v in sorted(sec.extra_eps.items())}}


def _relative_reduced_words(sec: StableSection, x: ExtAffElt, limit: int = 200) -> List[Tuple[int, ...]]:
    rel = sec.rel
    lx = length(x)
    out = []
    for idx, o in enumerate(rel.simple):
        y = o.w_x * x
        if length(y) == lx - o.param:
            for tail in _relative_reduced_words(sec, y, limit):
                out.append((idx,) + tail)
                if len(out) >= limit:
                    return out
    return out or [()]
