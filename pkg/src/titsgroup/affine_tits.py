"""Tits group of the extended affine Weyl group as triples (lam, eps, w).

A triple stands for ``lam(uniformizer) * t_eps * n_w``.  Affine simple
reflections lift to ``(0, 0, s_i)`` for finite nodes and to
``(theta^vee, eps, s_theta)`` for the extra node of each component, where
``eps`` is chosen so that squares and braid relations hold.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from . import kernels
from .finite_tits import coroot_span, f2_basis, in_span, span_elements
from .iwahori_weyl import (ExtAffElt, OmegaElt, affine_ball, affine_nodes, braid_order,
                           descent_decompose, extended_ball, length, node_reflection,
                           omega_group, reduced_words)
from .root_datum import RootDatum, RootDatumError, Vec, WeylElt, bits_to_list


@dataclass(frozen=True)
class TitsElt:
    lam: Vec
    eps: int
    w: WeylElt

    @property
    def rd(self) -> RootDatum:
        return self.w.rd

    def project(self) -> ExtAffElt:
        return ExtAffElt(self.lam, self.w)

    def key(self) -> Tuple:
        return (self.lam, self.eps, self.w.perm)

    def is_identity(self) -> bool:
        return self.eps == 0 and self.w.is_identity() and not any(self.lam)

    def __repr__(self) -> str:
        return f"TitsElt(lam={self.lam}, eps={bits_to_list(self.eps, len(self.lam))}, w={self.w.word})"

    def to_json(self) -> dict:
        return {"lambda": list(self.lam), "eps": bits_to_list(self.eps, len(self.lam)),
                "w": list(self.w.word)}


def at_identity(rd: RootDatum) -> TitsElt:
    return TitsElt(rd.zero(), 0, rd.identity)


def at_mul(rd: RootDatum, x: TitsElt, y: TitsElt) -> TitsElt:
    u, v = x.w, y.w
    uv = u * v
    lam = x.lam if not any(y.lam) else tuple(a + b for a, b in zip(x.lam, u.act(y.lam)))
    c = kernels.cocycle_bits(u.perm, v.perm, rd.npos, rd.coroot_bits)
    eps = x.eps ^ u.act_bits(y.eps) ^ (uv.act_bits(c) if c else 0)
    return TitsElt(lam, eps, uv)


def at_inverse(rd: RootDatum, x: TitsElt) -> TitsElt:
    winv = x.w.inverse()
    c = kernels.cocycle_bits(x.w.perm, winv.perm, rd.npos, rd.coroot_bits)
    return TitsElt(tuple(-a for a in winv.act(x.lam)), winv.act_bits(x.eps ^ c), winv)


def at_prod(rd: RootDatum, *xs: TitsElt) -> TitsElt:
    out = at_identity(rd)
    for x in xs:
        out = at_mul(rd, out, x)
    return out


def at_pow(rd: RootDatum, x: TitsElt, k: int) -> TitsElt:
    base = x if k >= 0 else at_inverse(rd, x)
    out = at_identity(rd)
    for _ in range(abs(k)):
        out = at_mul(rd, out, base)
    return out


def sign_elt(rd: RootDatum, eps: int) -> TitsElt:
    return TitsElt(rd.zero(), eps, rd.identity)


def finite_lift(rd: RootDatum, w: WeylElt) -> TitsElt:
    """Canonical lift n_w along the canonical reduced word."""
    out = at_identity(rd)
    for i in w.word:
        out = at_mul(rd, out, TitsElt(rd.zero(), 0, rd.s(i)))
    return out


def lift_cocharacter(rd: RootDatum, lam: Sequence[int]) -> TitsElt:
    lam = tuple(int(x) for x in lam)
    if len(lam) != rd.dim:
        raise RootDatumError(f"cocharacter must have {rd.dim} lattice coordinates")
    return TitsElt(lam, 0, rd.identity)


def s2_basis(rd: RootDatum) -> List[int]:
    """F_2 basis of the subgroup generated by all a^vee(-1)."""
    return coroot_span(rd)


# -- generator lifts ------------------------------------------------------------

@dataclass
class ExtraNodeChoice:
    node: int
    eps: int
    candidates: List[int]  # every eps passing squares and braid relations

    def to_json(self, dim: int) -> dict:
        return {"node": self.node, "eps": bits_to_list(self.eps, dim),
                "candidates": [bits_to_list(c, dim) for c in self.candidates]}


def _raw_extra_lift(rd: RootDatum, node: int, eps: int) -> TitsElt:
    refl = node_reflection(rd, node)
    base = finite_lift(rd, refl.w)
    return TitsElt(refl.lam, eps ^ base.eps, base.w)


def _braid_ok(rd: RootDatum, a: TitsElt, b: TitsElt, k: int) -> bool:
    lhs, rhs = at_identity(rd), at_identity(rd)
    for t in range(k):
        lhs = at_mul(rd, lhs, a if t % 2 == 0 else b)
        rhs = at_mul(rd, rhs, b if t % 2 == 0 else a)
    return lhs == rhs


def _lex_key(rd: RootDatum, eps: int) -> Tuple[int, ...]:
    return tuple(bits_to_list(eps, rd.dim))


def extra_node_choices(rd: RootDatum) -> Dict[int, ExtraNodeChoice]:
    cached = getattr(rd, "_extra_choices", None)
    if cached is not None:
        return cached
    nodes = affine_nodes(rd)
    out: Dict[int, ExtraNodeChoice] = {}
    for nd in nodes:
        if not nd.is_extra:
            continue
        comp_roots = [a for a in range(rd.npos) if rd.component_of_root(a) == nd.component]
        pool = sorted(span_elements(coroot_span(rd, comp_roots)), key=lambda e: _lex_key(rd, e))
        target = rd.coroot_bits[nd.root.b]
        passing = []
        for eps in pool:
            lift = _raw_extra_lift(rd, nd.index, eps)
            sq = at_mul(rd, lift, lift)
            if not (sq.w.is_identity() and not any(sq.lam) and sq.eps == target):
                continue
            ok = True
            for other in nodes:
                if other.component != nd.component or other.index == nd.index:
                    continue
                k = braid_order(rd, nd.index, other.index)
                if k is None:
                    continue
                if not _braid_ok(rd, lift, TitsElt(rd.zero(), 0, rd.s(other.finite)), k):
                    ok = False
                    break
            if ok:
                passing.append(eps)
        if not passing:
            raise RootDatumError(f"no sign choice satisfies the relations at node {nd.index}")
        out[nd.index] = ExtraNodeChoice(nd.index, passing[0], passing)
    rd._extra_choices = out
    return out


def lift_affine_simple(rd: RootDatum, node: int) -> TitsElt:
    cache = rd.__dict__.setdefault("_simple_lifts", {})
    if node in cache:
        return cache[node]
    nd = affine_nodes(rd)[node]
    if nd.is_extra:
        lift = _raw_extra_lift(rd, node, extra_node_choices(rd)[node].eps)
    else:
        lift = TitsElt(rd.zero(), 0, rd.s(nd.finite))
    cache[node] = lift
    return lift


def lift_omega(rd: RootDatum, tau) -> TitsElt:
    """n_tau = lam(uniformizer) n_y for tau = t_lam y."""
    x = tau.x if isinstance(tau, OmegaElt) else tau
    y = finite_lift(rd, x.w)
    return TitsElt(x.lam, y.eps, y.w)


def lift_word(rd: RootDatum, word: Sequence[int]) -> TitsElt:
    out = at_identity(rd)
    for s in word:
        out = at_mul(rd, out, lift_affine_simple(rd, s))
    return out


def cross_section(rd: RootDatum, x: ExtAffElt) -> TitsElt:
    word, tau = descent_decompose(rd, x)
    return at_mul(rd, lift_word(rd, word), lift_omega(rd, tau))


# -- verification ---------------------------------------------------------------

def _record(name: str, ok: bool, **data) -> dict:
    rec = {"name": name, "status": "pass" if ok else "fail"}
    rec.update(data)
    return rec


def verify_coxeter(rd: RootDatum) -> dict:
    nodes = affine_nodes(rd)
    records = []
    for nd in nodes:
        lift = lift_affine_simple(rd, nd.index)
        sq = at_mul(rd, lift, lift)
        want = TitsElt(rd.zero(), rd.coroot_bits[nd.root.b], rd.identity)
        records.append(_record(f"square({nd.label})", sq == want, lhs=sq.to_json(), rhs=want.to_json()))
    for p in range(len(nodes)):
        for q in range(p + 1, len(nodes)):
            k = braid_order(rd, p, q)
            name = f"braid({nodes[p].label},{nodes[q].label})"
            if k is None:
                records.append({"name": name, "status": "skip", "order": None, "reason": "no relation"})
                continue
            ok = _braid_ok(rd, lift_affine_simple(rd, p), lift_affine_simple(rd, q), k)
            records.append(_record(name, ok, order=k))
    choices = extra_node_choices(rd)
    return {"records": records,
            "extra_nodes": [choices[i].to_json(rd.dim) for i in sorted(choices)],
            "status": "fail" if any(r["status"] == "fail" for r in records) else "pass"}


def tits_generators(rd: RootDatum) -> List[TitsElt]:
    """Simple-reflection lifts and Omega lifts; free Omega generators also get inverses."""
    gens = [lift_affine_simple(rd, nd.index) for nd in affine_nodes(rd)]
    grp = omega_group(rd)
    gens += [lift_omega(rd, g) for _, g in grp.torsion if not g.is_identity()]
    free = [lift_omega(rd, g) for g in grp.free]
    return gens + free + [at_inverse(rd, g) for g in free]


def ses_check(rd: RootDatum, radius: int) -> dict:
    """Products of at most ``radius`` generators: kernel and fibres of the projection."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    s2 = s2_basis(rd)
    gens = tits_generators(rd)
    one = at_identity(rd)
    seen = {one.key(): one}
    frontier = [one]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for g in gens:
                y = at_mul(rd, x, g)
                k = y.key()
                if k not in seen:
                    seen[k] = y
                    nxt.append(y)
        frontier = nxt
    kernel = sorted({x.eps for x in seen.values() if x.w.is_identity() and not any(x.lam)})
    kernel_in_s2 = all(in_span(s2, e) for e in kernel)
    kernel_basis = f2_basis(kernel)
    fibres: Dict[Tuple, List[TitsElt]] = {}
    for x in seen.values():
        fibres.setdefault((x.lam, x.w.perm), []).append(x)
    bad_fibre = None
    full = 0
    for key, elts in fibres.items():
        m = cross_section(rd, elts[0].project())
        minv = at_inverse(rd, m)
        for x in elts:
            d = at_mul(rd, minv, x)
            if not (d.w.is_identity() and not any(d.lam) and in_span(s2, d.eps)):
                bad_fibre = {"element": x.to_json(), "section": m.to_json()}
                break
        if bad_fibre:
            break
        if len(elts) == 2 ** len(s2):
            full += 1
    ok = kernel_in_s2 and len(kernel_basis) == len(s2) and bad_fibre is None
    return {
        "status": "pass" if ok else "fail",
        "radius": radius,
        "s2_dim": len(s2),
        "kernel_dim": len(kernel_basis),
        "kernel_size": len(kernel),
        "kernel_in_s2": kernel_in_s2,
        "elements": len(seen),
        "fibres": len(fibres),
        "full_fibres": full,
        "fibre_size": 2 ** len(s2),
        "witness": bad_fibre,
    }


def check_reduced_word_independence(rd: RootDatum, max_length: int) -> dict:
    """Every reduced word of every element up to ``max_length`` gives the same lift."""
    bad = None
    checked = words = 0
    for x in affine_ball(rd, max_length):
        want = lift_word(rd, descent_decompose(rd, x)[0])
        for word in reduced_words(x):
            words += 1
            if lift_word(rd, word) != want:
                bad = {"element": x.to_json(), "word": list(word)}
                break
        checked += 1
        if bad:
            break
    return {"status": "pass" if bad is None else "fail", "elements": checked, "words": words,
            "max_length": max_length, "witness": bad}


def check_section_multiplicative(rd: RootDatum, radius: int) -> dict:
    """m(xy) = m(x) m(y) for x in the affine Weyl group whenever lengths add."""
    xs = affine_ball(rd, radius)
    ys = extended_ball(rd, radius)
    pairs = bad = 0
    witness = None
    for x in xs:
        mx = cross_section(rd, x)
        lx = length(x)
        for y in ys:
            xy = x * y
            if length(xy) != lx + length(y):
                continue
            pairs += 1
            if cross_section(rd, xy) != at_mul(rd, mx, cross_section(rd, y)):
                bad += 1
                witness = witness or {"x": x.to_json(), "y": y.to_json()}
    return {"status": "pass" if bad == 0 else "fail", "pairs": pairs, "failures": bad,
            "radius": radius, "witness": witness}
