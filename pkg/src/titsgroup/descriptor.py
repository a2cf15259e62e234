"""Line-oriented ``key=value`` group descriptors.

Grammar (whitespace separates tokens, ``#`` starts a comment)::

    descriptor := component+ setting*
    component  := "type=" KIND "rank=" INT
    setting    := "isogeny=" ("sc" | "ad" | ROWS)
                | "central_rank=" INT | "res_copies=" INT
                | "diagram=" INT ("," INT)* | "inner=" LABEL
    ROWS       := row (";" row)*   with entries INT or INT/INT separated by ","
    LABEL      := "trivial" | "nu(" INT ")" ["^" INT]

The canonical form is a single line: components first, then ``isogeny`` and any
non-default settings in the order above.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .descent import DescentError, FrobeniusData, build_frobenius, parse_inner_label
from .root_datum import TYPES, RootDatum, RootDatumError, build_root_datum

Isogeny = Union[str, Tuple[Tuple[Fraction, ...], ...]]

SETTINGS = ("isogeny", "central_rank", "res_copies", "diagram", "inner")


class DescriptorError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message, self.line, self.column = message, line, column


@dataclass(frozen=True)
class GroupDescriptor:
    components: Tuple[Tuple[str, int], ...]
    isogeny: Isogeny = "sc"
    central_rank: int = 0
    res_copies: int = 1
    diagram: Optional[Tuple[int, ...]] = None
    inner: str = "trivial"

    def root_datum(self) -> RootDatum:
        return build_root_datum(self.components, self.isogeny, self.central_rank, self.res_copies)

    def frobenius(self, rd: Optional[RootDatum] = None) -> FrobeniusData:
        return build_frobenius(rd or self.root_datum(), self.diagram, self.inner, self.res_copies)

    def to_json(self) -> dict:
        iso = self.isogeny if isinstance(self.isogeny, str) else [
            [[x.numerator, x.denominator] for x in row] for row in self.isogeny]
        return {"components": [list(c) for c in self.components], "isogeny": iso,
                "central_rank": self.central_rank, "res_copies": self.res_copies,
                "diagram": list(self.diagram) if self.diagram else None, "inner": self.inner}


def _frac(tok: str) -> str:
    x = Fraction(tok)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def serialize(d: GroupDescriptor) -> str:
    parts = []
    for kind, rank in d.components:
        parts += [f"type={kind}", f"rank={rank}"]
    if isinstance(d.isogeny, str):
        parts.append(f"isogeny={d.isogeny}")
    else:
        rows = ";".join(",".join(_frac(str(x)) for x in row) for row in d.isogeny)
        parts.append(f"isogeny={rows}")
    if d.central_rank:
        parts.append(f"central_rank={d.central_rank}")
    if d.res_copies != 1:
        parts.append(f"res_copies={d.res_copies}")
    if d.diagram is not None:
        parts.append("diagram=" + ",".join(map(str, d.diagram)))
    if d.inner != "trivial":
        parts.append(f"inner={d.inner}")
    return " ".join(parts)


def _int(value: str, line: int, col: int, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise DescriptorError(f"{key} expects an integer, got {value!r}", line, col) from None


def _tokens(text: str):
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        for m in re.finditer(r"\S+", body):
            yield ln, m.start() + 1, m.group()


def parse_descriptor(text: str, validate: bool = True) -> GroupDescriptor:
    comps: List[Tuple[str, int]] = []
    pending: Optional[Tuple[str, int, int]] = None
    settings = {}
    where = {}
    for ln, col, tok in _tokens(text):
        if "=" not in tok:
            raise DescriptorError(f"expected key=value, got {tok!r}", ln, col)
        key, value = tok.split("=", 1)
        if key == "type":
            if pending is not None:
                raise DescriptorError("type without rank", *pending[1:])
            kind = value.upper()
            if kind not in TYPES:
                raise DescriptorError(f"unknown type {value!r}", ln, col)
            pending = (kind, ln, col)
        elif key == "rank":
            if pending is None:
                raise DescriptorError("rank must follow type", ln, col)
            comps.append((pending[0], _int(value, ln, col, key)))
            pending = None
        elif key in SETTINGS:
            if key in settings:
                raise DescriptorError(f"duplicate key {key!r}", ln, col)
            settings[key] = value
            where[key] = (ln, col)
        else:
            raise DescriptorError(f"unknown key {key!r}", ln, col)
    if pending is not None:
        raise DescriptorError("type without rank", *pending[1:])
    if not comps:
        raise DescriptorError("no components given", 1, 1)
    iso: Isogeny = "sc"
    if "isogeny" in settings:
        v = settings["isogeny"]
        if v in ("sc", "ad"):
            iso = v
        else:
            try:
                iso = tuple(tuple(Fraction(x) for x in row.split(",")) for row in v.split(";"))
            except (ValueError, ZeroDivisionError):
                raise DescriptorError(f"bad isogeny {v!r}", *where["isogeny"]) from None
    central = _int(settings.get("central_rank", "0"), *where.get("central_rank", (0, 0)), "central_rank")
    copies = _int(settings.get("res_copies", "1"), *where.get("res_copies", (0, 0)), "res_copies")
    diagram = None
    if "diagram" in settings:
        ln, col = where["diagram"]
        diagram = tuple(_int(x, ln, col, "diagram") for x in settings["diagram"].split(","))
    inner = settings.get("inner", "trivial")
    try:
        parse_inner_label(inner)
    except DescentError as exc:
        raise DescriptorError(str(exc), *where["inner"]) from None
    d = GroupDescriptor(tuple(comps), iso, central, copies, diagram, inner)
    if validate:
        try:
            rd = d.root_datum()
        except RootDatumError as exc:
            raise DescriptorError(str(exc), *where.get("isogeny", (1, 1))) from None
        if diagram is not None or inner != "trivial":
            try:
                d.frobenius(rd)
            except RootDatumError as exc:
                key = "inner" if "inner" in where else "diagram"
                raise DescriptorError(str(exc), *where.get(key, (1, 1))) from None
    return d
