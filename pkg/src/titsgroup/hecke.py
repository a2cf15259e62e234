"""Iwahori-Hecke algebras with unequal parameters and Howe-Tits presentation schemas.

Coefficients are integer polynomials in ``q`` stored as tuples ascending in degree.
The basis is indexed by the relative group ``W`` of a :class:`StableSection`; the
split case is the trivial Frobenius, where every orbit is a single node with
parameter 1.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .affine_tits import TitsElt, at_inverse, at_mul, at_prod
from .descent import (DescentError, FrobeniusData, StableSection, build_frobenius, m_tau,
                      relative_ball, relative_decompose, stable_cross_section)
from .finite_tits import span_elements
from .iwahori_weyl import ExtAffElt, element_order, identity, length
from .root_datum import RootDatum, bits_to_list

Poly = Tuple[int, ...]


# -- polynomials ----------------------------------------------------------------

def _trim(p: Sequence[int]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def padd(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def qpow(k: int) -> Poly:
    return (0,) * k + (1,)


def peval1(p: Poly) -> int:
    return sum(p)


ONE: Poly = (1,)


# -- the algebra ----------------------------------------------------------------

class HeckeAlgebra:
    """H_0 for the relative group of ``sec`` with parameters L(s) = length of w_X."""

    def __init__(self, sec: StableSection):
        self.sec = sec
        self.rd: RootDatum = sec.fd.rd
        self.rel = sec.rel
        self.simple = [o.w_x for o in self.rel.simple]
        self.params = [o.param for o in self.rel.simple]
        self.omega = [t.x for t in self.rel.omega_fixed]
        self._cache: Dict[Tuple, Dict[ExtAffElt, Poly]] = {}
        self._words: Dict[Tuple, Tuple[Tuple[int, ...], ExtAffElt]] = {}

    @classmethod
    def split(cls, rd: RootDatum) -> "HeckeAlgebra":
        return cls(stable_cross_section(build_frobenius(rd)))

    @classmethod
    def relative(cls, fd: FrobeniusData) -> "HeckeAlgebra":
        return cls(stable_cross_section(fd))

    # basis helpers
    def basis(self, x: ExtAffElt) -> "HeckeElt":
        return HeckeElt(self, {x: ONE})

    def one(self) -> "HeckeElt":
        return self.basis(identity(self.rd))

    def T(self, idx: int) -> "HeckeElt":
        return self.basis(self.simple[idx])

    def decompose(self, x: ExtAffElt) -> Tuple[Tuple[int, ...], ExtAffElt]:
        key = (x.lam, x.w.perm)
        hit = self._words.get(key)
        if hit is None:
            hit = self._words[key] = relative_decompose(self.rel, x)
        return hit

    def rel_length(self, x: ExtAffElt) -> int:
        return len(self.decompose(x)[0])

    def sort_key(self, x: ExtAffElt) -> Tuple:
        word, tau = self.decompose(x)
        return (len(word), word, tau.lam, tau.w.perm)

    def ball(self, radius: int) -> List[ExtAffElt]:
        return relative_ball(self.sec, radius)

    def _left_simple(self, idx: int, w: ExtAffElt) -> Dict[ExtAffElt, Poly]:
        s, L = self.simple[idx], self.params[idx]
        sw = s * w
        if length(sw) == length(w) + L:
            return {sw: ONE}
        return {w: padd(qpow(L), (-1,)), sw: qpow(L)}

    def basis_mul(self, x: ExtAffElt, y: ExtAffElt) -> Dict[ExtAffElt, Poly]:
        key = (x.lam, x.w.perm, y.lam, y.w.perm)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        word, tau = self.decompose(x)
        cur: Dict[ExtAffElt, Poly] = {tau * y: ONE}
        for idx in reversed(word):
            nxt: Dict[ExtAffElt, Poly] = {}
            for w, c in cur.items():
                for v, d in self._left_simple(idx, w).items():
                    nxt[v] = padd(nxt.get(v, ()), pmul(c, d))
            cur = {k: v for k, v in nxt.items() if v}
        self._cache[key] = cur
        return cur


@dataclass
class HeckeElt:
    alg: HeckeAlgebra
    terms: Dict[ExtAffElt, Poly] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {k: _trim(v) for k, v in self.terms.items() if _trim(v)}

    def __add__(self, other: "HeckeElt") -> "HeckeElt":
        _same(self, other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = padd(out.get(k, ()), v)
        return HeckeElt(self.alg, out)

    def scale(self, p: Poly) -> "HeckeElt":
        return HeckeElt(self.alg, {k: pmul(v, p) for k, v in self.terms.items()})

    def __mul__(self, other: "HeckeElt") -> "HeckeElt":
        return hk_mul(self.alg, self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, HeckeElt) and self.alg is other.alg and self.terms == other.terms

    def to_json(self) -> List[dict]:
        rows = []
        for x in sorted(self.terms, key=self.alg.sort_key):
            word, tau = self.alg.decompose(x)
            rows.append({"word": list(word), "omega": tau.to_json(), "coeff": list(self.terms[x])})
        return rows


def _same(x: HeckeElt, y: HeckeElt) -> None:
    if x.alg is not y.alg:
        raise ValueError("operands belong to different Hecke algebras")


def hk_mul(alg: HeckeAlgebra, x: HeckeElt, y: HeckeElt) -> HeckeElt:
    _same(x, y)
    if x.alg is not alg:
        raise ValueError("operands belong to a different Hecke algebra")
    out: Dict[ExtAffElt, Poly] = {}
    for a, p in x.terms.items():
        for b, r in y.terms.items():
            pr = pmul(p, r)
            for c, v in alg.basis_mul(a, b).items():
                out[c] = padd(out.get(c, ()), pmul(pr, v))
    return HeckeElt(alg, out)


def specialize_q1(alg: HeckeAlgebra, x: HeckeElt) -> Dict[ExtAffElt, int]:
    out: Dict[ExtAffElt, int] = {}
    for k, v in x.terms.items():
        c = peval1(v)
        if c:
            out[k] = out.get(k, 0) + c
    return {k: v for k, v in out.items() if v}


def group_algebra_mul(x: Dict[ExtAffElt, int], y: Dict[ExtAffElt, int]) -> Dict[ExtAffElt, int]:
    out: Dict[ExtAffElt, int] = {}
    for a, p in x.items():
        for b, r in y.items():
            ab = a * b
            out[ab] = out.get(ab, 0) + p * r
    return {k: v for k, v in out.items() if v}


# -- checks -----------------------------------------------------------------------

def _rec(name: str, ok: bool, **data) -> dict:
    out = {"name": name, "status": "pass" if ok else "fail"}
    out.update(data)
    return out


def hecke_check(alg: HeckeAlgebra, radius: int = 6, triples: int = 500, seed: int = 0) -> dict:
    rng = random.Random(seed)
    records = []
    one = alg.one()
    for idx, L in enumerate(alg.params):
        Ts = alg.T(idx)
        lhs = Ts * Ts
        rhs = Ts.scale(padd(qpow(L), (-1,))) + one.scale(qpow(L))
        records.append(_rec(f"quadratic(s{idx})", lhs == rhs, param=L, lhs=lhs.to_json()))
    ball = alg.ball(radius)
    records.append(_rec("identity_unit", all(one * alg.basis(x) == alg.basis(x) == alg.basis(x) * one
                                             for x in ball[: min(len(ball), 50)])))
    bad = None
    for _ in range(triples if ball else 0):
        a, b, c = (alg.basis(rng.choice(ball)) for _ in range(3))
        if (a * b) * c != a * (b * c):
            bad = {"x": a.to_json(), "y": b.to_json(), "z": c.to_json()}
            break
    records.append(_rec("associativity", bad is None, triples=triples if ball else 0, witness=bad))
    bad = None
    for x in ball:
        word, tau = alg.decompose(x)
        for alt in _relative_words(alg, x):
            prod = alg.one()
            for idx in alt:
                prod = prod * alg.T(idx)
            prod = prod * alg.basis(tau)
            if prod != alg.basis(x):
                bad = {"element": x.to_json(), "word": list(alt)}
                break
        if bad:
            break
    records.append(_rec("braid_compatibility", bad is None, elements=len(ball), witness=bad))
    bad = None
    for _ in range(triples if ball else 0):
        a, b = alg.basis(rng.choice(ball)), alg.basis(rng.choice(ball))
        if rng.random() < 0.5:
            a = a + alg.basis(rng.choice(ball)).scale((rng.randint(-2, 2), 1))
        lhs = specialize_q1(alg, a * b)
        rhs = group_algebra_mul(specialize_q1(alg, a), specialize_q1(alg, b))
        if lhs != rhs:
            bad = {"x": a.to_json(), "y": b.to_json()}
            break
    records.append(_rec("q1_homomorphism", bad is None, witness=bad))
    status = "fail" if any(r["status"] == "fail" for r in records) else "pass"
    return {"status": status, "records": records, "params": list(alg.params),
            "parameter_polys": sorted({tuple(qpow(L)) for L in alg.params}),
            "ball_size": len(ball)}


def _relative_words(alg: HeckeAlgebra, x: ExtAffElt, limit: int = 64) -> List[Tuple[int, ...]]:
    lx = length(x)
    out: List[Tuple[int, ...]] = []
    for idx, s in enumerate(alg.simple):
        y = s * x
        if length(y) == lx - alg.params[idx]:
            for tail in _relative_words(alg, y, limit):
                out.append((idx,) + tail)
                if len(out) >= limit:
                    return out
    return out or [()]


# -- Howe-Tits constants ----------------------------------------------------------

def _sign(rd: RootDatum, x: TitsElt, what: str) -> int:
    if x.w.is_identity() and not any(x.lam):
        return x.eps
    raise DescentError(f"{what} does not lie in the torus kernel")


def howe_tits_constants(sec: StableSection) -> dict:
    """c_{tau,tau'} = m(tau)m(tau')m(tau tau')^{-1} and c_{tau,s} = m(tau)m(s)m(tau)^{-1}m(tau s tau^{-1})^{-1}."""
    fd, rel = sec.fd, sec.rel
    rd = fd.rd
    taus = [t.x for t in rel.omega_fixed]
    index = {(t.lam, t.w.perm): i for i, t in enumerate(taus)}
    simple_index = {(o.w_x.lam, o.w_x.w.perm): i for i, o in enumerate(rel.simple)}
    m_t = [m_tau(fd, t) for t in taus]
    m_s = [sec.m_simple(o) for o in rel.simple]
    pairs, conj = [], []
    kernel = set(span_elements(rel.s2_fixed))
    for i, t in enumerate(taus):
        for j, u in enumerate(taus):
            tu = t * u
            k = index.get((tu.lam, tu.w.perm))
            if k is None:
                continue
            c = _sign(rd, at_prod(rd, m_t[i], m_t[j], at_inverse(rd, m_t[k])), "c_{tau,tau'}")
            pairs.append({"tau": i, "tau2": j, "product": k, "c": c, "in_s2": c in kernel})
        for si, o in enumerate(rel.simple):
            img = t * o.w_x * t.inverse()
            sj = simple_index.get((img.lam, img.w.perm))
            if sj is None:
                raise DescentError("conjugate of a relative simple reflection is not simple")
            c = _sign(rd, at_prod(rd, m_t[i], m_s[si], at_inverse(rd, m_t[i]), at_inverse(rd, m_s[sj])),
                      "c_{tau,s}")
            conj.append({"tau": i, "s": si, "image": sj, "c": c, "in_s2": c in kernel})
    return {"omega": taus, "m_tau": m_t, "m_s": m_s, "pairs": pairs, "conj": conj}


# -- presentation schemas ---------------------------------------------------------

@dataclass
class PresentationSchema:
    level: int
    dim: int
    generators: List[dict]
    relations: List[dict]
    collapsed: Optional[dict] = None

    def to_json(self) -> dict:
        def bits(rel):
            out = dict(rel)
            for key in ("c", "c_inverse_pair"):
                if key in out and isinstance(out[key], int):
                    out[key] = bits_to_list(out[key], self.dim)
            return out
        return {"level": self.level, "generators": self.generators,
                "relations": [bits(r) for r in self.relations], "collapsed": self.collapsed}


def emit_presentation(sec: StableSection, n: int = 0) -> PresentationSchema:
    if n < 0:
        raise ValueError("level must be non-negative")
    rel = sec.rel
    rd = sec.fd.rd
    consts = howe_tits_constants(sec)
    taus = consts["omega"]
    gens = []
    for i, o in enumerate(rel.simple):
        gens.append({"class": "simple", "label": f"m(s{i})", "index": i, "orbit": list(o.nodes),
                     "param": o.param, "lift": consts["m_s"][i].to_json()})
    for i, t in enumerate(taus):
        gens.append({"class": "omega", "label": f"m(tau{i})", "index": i,
                     "element": t.to_json(), "lift": consts["m_tau"][i].to_json()})
    gens.append({"class": "iwahori", "label": "g", "symbolic": True, "ranges_over": "I/I_n"})
    rels: List[dict] = []
    for i in range(len(rel.simple)):
        for j in range(i + 1, len(rel.simple)):
            k = element_order(rel.simple[i].w_x * rel.simple[j].w_x, cap=24)
            rels.append({"tag": "A(i)", "kind": "braid", "s": i, "t": j, "order": k})
    for i, o in enumerate(rel.simple):
        rels.append({"tag": "A(ii)", "kind": "quadratic", "s": i, "param": o.param,
                     "coefficient": list(qpow(o.param)), "sum_over": "P_{s,n}/I_n",
                     "sum_size": list(qpow(o.param)), "square": consts["m_s"][i].to_json()})
    inv_pair = {}
    for p in consts["pairs"]:
        rels.append({"tag": "B(i)", "kind": "omega_product", "tau": p["tau"], "tau2": p["tau2"],
                     "product": p["product"], "c": p["c"], "in_s2": p["in_s2"]})
        if p["product"] == _identity_index(taus, rd):
            inv_pair[p["tau"]] = (p["tau2"], p["c"])
    for c in consts["conj"]:
        inv, cinv = inv_pair.get(c["tau"], (None, None))
        rels.append({"tag": "B(ii)", "kind": "omega_conjugation", "tau": c["tau"], "tau_inverse": inv,
                     "c_inverse_pair": cinv, "s": c["s"], "image": c["image"], "c": c["c"],
                     "in_s2": c["in_s2"]})
    for i in range(len(taus)):
        inv, cinv = inv_pair.get(i, (None, None))
        rels.append({"tag": "B(iii)", "kind": "omega_iwahori", "tau": i, "tau_inverse": inv,
                     "c_inverse_pair": cinv, "symbolic": True})
    rels.append({"tag": "C(i)", "kind": "unit", "symbolic": True})
    rels.append({"tag": "C(ii)", "kind": "iwahori_product", "symbolic": True})
    for i, o in enumerate(rel.simple):
        rels.append({"tag": "C(iii)", "kind": "iwahori_commute", "s": i, "symbolic": True})
        rels.append({"tag": "C(iv)", "kind": "iwahori_exchange", "s": i, "param": o.param,
                     "coefficient": list(qpow(o.param)), "placeholders": ["g1", "g2"], "symbolic": True})
    collapsed = None
    if n == 0:
        collapsed = {
            "generators": [f"T_s{i}" for i in range(len(rel.simple))] + [f"T_tau{i}" for i in range(len(taus))],
            "braid": [[r["s"], r["t"], r["order"]] for r in rels if r["tag"] == "A(i)"],
            "quadratic": [{"s": i, "T_s": list(padd(qpow(o.param), (-1,))), "T_e": list(qpow(o.param))}
                          for i, o in enumerate(rel.simple)],
            "omega_table": [[p["tau"], p["tau2"], p["product"]] for p in consts["pairs"]],
            "omega_action": [[c["tau"], c["s"], c["image"]] for c in consts["conj"]],
            "identity_omega": _identity_index(taus, rd),
        }
    return PresentationSchema(n, rd.dim, gens, rels, collapsed)


def _identity_index(taus: Sequence[ExtAffElt], rd: RootDatum) -> Optional[int]:
    for i, t in enumerate(taus):
        if t.is_identity():
            return i
    return None


def verify_cs(sec: StableSection, schema: PresentationSchema) -> List[dict]:
    """Re-check m(tau)m(tau') = c m(tau tau') and m(tau)m(s)m(tau)^{-1} = c m(tau s tau^{-1})."""
    rd = sec.fd.rd
    consts = howe_tits_constants(sec)
    m_t, m_s = consts["m_tau"], consts["m_s"]
    out = []
    for r in schema.relations:
        if r["tag"] == "B(i)":
            lhs = at_mul(rd, m_t[r["tau"]], m_t[r["tau2"]])
            rhs = at_mul(rd, TitsElt(rd.zero(), r["c"], rd.identity), m_t[r["product"]])
            out.append(_rec(f"cs(tau{r['tau']},tau{r['tau2']})", lhs == rhs and r["in_s2"]))
        elif r["tag"] == "B(ii)":
            lhs = at_prod(rd, m_t[r["tau"]], m_s[r["s"]], at_inverse(rd, m_t[r["tau"]]))
            rhs = at_mul(rd, TitsElt(rd.zero(), r["c"], rd.identity), m_s[r["image"]])
            out.append(_rec(f"cs(tau{r['tau']},s{r['s']})", lhs == rhs and r["in_s2"]))
    return out


# -- evaluating the collapsed schema by word rewriting ------------------------------

class SchemaAlgebra:
    """Multiplication in H_0 derived only from a collapsed schema.

    Basis elements are (canonical word, omega index); canonical words are the
    lexicographically least members of their braid-move class.
    """

    def __init__(self, collapsed: dict):
        self.nsimple = len(collapsed["quadratic"])
        self.order = {}
        for s, t, k in collapsed["braid"]:
            self.order[(s, t)] = self.order[(t, s)] = k
        self.quad = {r["s"]: (tuple(r["T_s"]), tuple(r["T_e"])) for r in collapsed["quadratic"]}
        self.table = {(a, b): c for a, b, c in collapsed["omega_table"]}
        self.action = {(t, s): img for t, s, img in collapsed["omega_action"]}
        self.e = collapsed["identity_omega"]
        self._classes: Dict[Tuple[int, ...], frozenset] = {}

    def braid_class(self, word: Tuple[int, ...]) -> frozenset:
        hit = self._classes.get(word)
        if hit is not None:
            return hit
        seen = {word}
        queue = deque([word])
        while queue:
            w = queue.popleft()
            for i in range(len(w)):
                for s, t in ((w[i], u) for u in range(self.nsimple) if u != w[i]):
                    k = self.order.get((s, t))
                    if k is None or i + k > len(w):
                        continue
                    alt = tuple(s if m % 2 == 0 else t for m in range(k))
                    if w[i:i + k] == alt:
                        new = w[:i] + tuple(t if m % 2 == 0 else s for m in range(k)) + w[i + k:]
                        if new not in seen:
                            seen.add(new)
                            queue.append(new)
        out = frozenset(seen)
        for w in seen:
            self._classes[w] = out
        return out

    def canonical(self, word: Tuple[int, ...]) -> Tuple[int, ...]:
        return min(self.braid_class(word))

    def left_simple(self, s: int, elt: Tuple[Tuple[int, ...], int]) -> Dict[Tuple, Poly]:
        word, tau = elt
        starts = [w for w in self.braid_class(word) if w and w[0] == s]
        if starts:
            a, b = self.quad[s]
            return {elt: a, (self.canonical(starts[0][1:]), tau): b}
        return {(self.canonical((s,) + word), tau): ONE}

    def left_omega(self, t: int, elt: Tuple[Tuple[int, ...], int]) -> Tuple[Tuple[int, ...], int]:
        word, tau = elt
        moved = tuple(self.action[(t, s)] for s in word)
        return self.canonical(moved), self.table[(t, tau)]

    def mul(self, x: Tuple[Tuple[int, ...], int], y: Tuple[Tuple[int, ...], int]) -> Dict[Tuple, Poly]:
        word, tau = x
        cur = {self.left_omega(tau, y): ONE}
        for s in reversed(word):
            nxt: Dict[Tuple, Poly] = {}
            for e, c in cur.items():
                for v, d in self.left_simple(s, e).items():
                    nxt[v] = padd(nxt.get(v, ()), pmul(c, d))
            cur = {k: v for k, v in nxt.items() if v}
        return cur


def schema_agreement(alg: HeckeAlgebra, schema: PresentationSchema, max_left: int = 1,
                     max_right: int = 4) -> dict:
    """Compare the collapsed schema product with the direct product on a ball."""
    if schema.collapsed is None:
        raise ValueError("schema has no collapsed level-zero form")
    sa = SchemaAlgebra(schema.collapsed)
    taus = alg.omega
    tindex = {(t.lam, t.w.perm): i for i, t in enumerate(taus)}

    def label(x: ExtAffElt):
        word, tau = alg.decompose(x)
        return word, tindex[(tau.lam, tau.w.perm)]

    ball = alg.ball(max(max_left, max_right))
    left = [x for x in ball if alg.rel_length(x) <= max_left]
    right = [x for x in ball if alg.rel_length(x) <= max_right]
    bad, count = None, 0
    for x in left:
        for y in right:
            direct = {label(k): v for k, v in alg.basis_mul(x, y).items()}
            via = sa.mul(label(x), label(y))
            count += 1
            if direct != via:
                bad = {"x": x.to_json(), "y": y.to_json()}
                break
        if bad:
            break
    return _rec("schema_vs_direct", bad is None, pairs=count, witness=bad)
