"""Definition scripts: tokenizer, statement parser and the session of named bindings.

One statement per line; brackets and braces may span lines.  ``#`` starts a
comment.  See docs/FORMAT.md for the grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import ParseError, PolyhomError, UnboundName
from .fp import FpPolyhom, FpWindow, fp_zero, make_fp_polyhom, with_alpha
from .groups import (
    FiniteGroup,
    Subgroup,
    cyclic,
    dihedral,
    direct_product,
    elementary_abelian,
    from_cayley_table,
    quaternion,
    subgroup_generate,
    symmetric,
)
from .morphisms import MeasuredGroup, Polyhom, make_polyhom, zero
from .operators import format_fraction
from .relations import MultRelation

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)|(?P<arrow>->)"
    r"|(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_.']*)|(?P<punct>[{}\[\](),;=:/])"
)
_OPEN = {"{": "}", "[": "]", "(": ")"}


@dataclass(frozen=True)
class Token:
    kind: str  # int, name, punct, arrow
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[list[Token]]:
    """Split into statements: newlines inside brackets do not end a statement."""
    statements: list[list[Token]] = []
    current: list[Token] = []
    stack: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        pos = m.end()
        if kind == "nl":
            if not stack and current:
                statements.append(current)
                current = []
            line, line_start = line + 1, pos
            continue
        if kind in ("ws", "comment"):
            continue
        tok = Token(kind, m.group(), line, col)
        if tok.text in _OPEN:
            stack.append(tok)
        elif tok.text in _OPEN.values():
            if not stack or _OPEN[stack[-1].text] != tok.text:
                raise ParseError(f"unbalanced {tok.text!r}", line, col)
            stack.pop()
        current.append(tok)
    if stack:
        raise ParseError(f"unclosed {stack[-1].text!r}", stack[-1].line, stack[-1].column)
    if current:
        statements.append(current)
    return statements


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _end_position(self) -> tuple[int, int]:
        last = self.tokens[-1]
        return last.line, last.column + len(last.text)

    def next(self, what: str = "a token") -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"expected {what} at end of statement", *self._end_position())
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next(repr(text))
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.column)
        return tok

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.text == text:
            self.i += 1
            return True
        return False

    def name(self, what: str = "a name") -> Token:
        tok = self.next(what)
        if tok.kind != "name":
            raise ParseError(f"expected {what}, found {tok.text!r}", tok.line, tok.column)
        return tok

    def keyword(self, *words: str) -> Token:
        tok = self.name(" or ".join(repr(w) for w in words))
        if tok.text not in words:
            raise ParseError(f"expected {' or '.join(words)}, found {tok.text!r}", tok.line, tok.column)
        return tok

    def integer(self) -> int:
        tok = self.next("an integer")
        if tok.kind != "int":
            raise ParseError(f"expected an integer, found {tok.text!r}", tok.line, tok.column)
        return int(tok.text)

    def fraction(self) -> Fraction:
        tok = self.peek()
        num = self.integer()
        if self.accept("/"):
            den = self.integer()
            if den == 0:
                raise ParseError("zero denominator", tok.line, tok.column)
            return Fraction(num, den)
        return Fraction(num)

    def done(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected {tok.text!r} after end of statement", tok.line, tok.column)

    def int_set(self) -> list[int]:
        self.expect("{")
        out = []
        while not self.accept("}"):
            out.append(self.integer())
            if not self.accept(","):
                self.expect("}")
                break
        return out

    def pair_set(self) -> list[tuple[int, int]]:
        self.expect("{")
        out = []
        while not self.accept("}"):
            self.expect("(")
            a = self.integer()
            self.expect(",")
            b = self.integer()
            self.expect(")")
            out.append((a, b))
            if not self.accept(","):
                self.expect("}")
                break
        return out

    def int_list(self) -> list[int]:
        self.expect("[")
        out = []
        while not self.accept("]"):
            out.append(self.integer())
            if not self.accept(","):
                self.expect("]")
                break
        return out

    def int_matrix(self) -> list[list[int]]:
        self.expect("[")
        rows = []
        while not self.accept("]"):
            rows.append(self.int_list())
            if not self.accept(","):
                self.expect("]")
                break
        return rows


@dataclass
class Binding:
    kind: str
    value: Any
    line: int
    source: str  # statement text as written


KINDS = ("group", "subgroup", "measured", "relation", "polyhom", "fpwindow", "fppolyhom")


@dataclass
class Session:
    """Named bindings of every kind, in definition order.  Lookups fall back to ``base``."""

    bindings: dict[tuple[str, str], Binding] = field(default_factory=dict)
    base: "Session | None" = None

    def lookup(self, kind: str, name: str, tok: Token | None = None):
        b = self.bindings.get((kind, name))
        if b is not None:
            return b.value
        if self.base is not None:
            try:
                return self.base.lookup(kind, name)
            except UnboundName:
                pass
        where = f" (line {tok.line}, column {tok.column})" if tok else ""
        raise UnboundName(f"no {kind} named {name!r}{where}")

    def names(self, kind: str) -> list[str]:
        own = [n for (k, n) in self.bindings if k == kind]
        inherited = self.base.names(kind) if self.base else []
        return inherited + [n for n in own if n not in inherited]

    def values(self, kind: str) -> list:
        return [self.lookup(kind, n) for n in self.names(kind)]

    def bind(self, kind: str, name: str, value, tok: Token, source: str) -> None:
        if (kind, name) in self.bindings:
            raise ParseError(f"{kind} {name!r} is already defined", tok.line, tok.column)
        self.bindings[(kind, name)] = Binding(kind, value, tok.line, source)

    # reverse lookups used when printing definitions

    def group_name(self, G: FiniteGroup) -> str | None:
        for n in self.names("group"):
            if self.lookup("group", n) == G:
                return n
        return None

    def space_text(self, M: MeasuredGroup) -> str:
        for n in self.names("measured"):
            if self.lookup("measured", n) == M:
                return n
        g = self.group_name(M.group) or M.group.name or "?"
        if M.point_mass == 1:
            return g
        return f"{g} pointmass {format_fraction(M.point_mass)}"

    def window_name(self, W: FpWindow) -> str | None:
        for n in self.names("fpwindow"):
            if self.lookup("fpwindow", n) == W:
                return n
        return None


def parse(text: str, base: Session | None = None) -> Session:
    session = Session(base=base)
    lines = text.split("\n")
    for stmt in tokenize(text):
        first, last = stmt[0], stmt[-1]
        source = "\n".join(lines[first.line - 1 : last.line]).strip()
        _Statement(session, _Cursor(stmt), source).run()
    return session


def parse_file(path: str, base: Session | None = None) -> Session:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), base)


class _Statement:
    def __init__(self, session: Session, cur: _Cursor, source: str):
        self.s = session
        self.cur = cur
        self.source = source

    def run(self) -> None:
        kw = self.cur.keyword(*KINDS)
        name = self.cur.name(f"a {kw.text} name")
        try:
            value = getattr(self, "_" + kw.text)()
        except (PolyhomError, ValueError) as exc:
            if isinstance(exc, (ParseError, UnboundName)):
                raise
            raise PolyhomError(f"{kw.text} {name.text!r} (line {name.line}): {type(exc).__name__}: {exc}") from exc
        self.cur.done()
        self.s.bind(kw.text, name.text, value, name, self.source)

    def _ref(self, kind: str):
        tok = self.cur.name(f"a {kind} name")
        return self.s.lookup(kind, tok.text, tok)

    def _group(self) -> FiniteGroup:
        c = self.cur
        c.expect("=")
        kind = c.keyword("cyclic", "product", "table", "symmetric", "dihedral", "quaternion", "elementary")
        if kind.text == "cyclic":
            return cyclic(c.integer())
        if kind.text == "symmetric":
            return symmetric(c.integer())
        if kind.text == "dihedral":
            return dihedral(c.integer())
        if kind.text == "quaternion":
            return quaternion()
        if kind.text == "elementary":
            p = c.integer()
            return elementary_abelian(p, c.integer())
        if kind.text == "product":
            G = self._ref("group")
            return direct_product(G, self._ref("group"))
        return from_cayley_table(c.int_matrix())

    def _subgroup(self) -> Subgroup:
        c = self.cur
        c.keyword("in")
        G = self._ref("group")
        c.expect("=")
        if c.accept("generated"):
            return subgroup_generate(G, c.int_set())
        return Subgroup(G, c.int_set())

    def _space(self) -> MeasuredGroup:
        tok = self.cur.name("a group or measured group")
        try:
            M = self.s.lookup("measured", tok.text, tok)
        except UnboundName:
            M = MeasuredGroup(self.s.lookup("group", tok.text, tok))
        if self.cur.accept("pointmass"):
            M = MeasuredGroup(M.group, self.cur.fraction())
        return M

    def _measured(self) -> MeasuredGroup:
        self.cur.expect("=")
        G = self._ref("group")
        self.cur.keyword("pointmass")
        return MeasuredGroup(G, self.cur.fraction())

    def _relation_body(self, G: FiniteGroup, H: FiniteGroup) -> MultRelation:
        c = self.cur
        kind = c.keyword("generated", "graph", "full")
        if kind.text == "generated":
            return MultRelation.generated(G, H, c.pair_set())
        if kind.text == "graph":
            return MultRelation.graph(G, H, c.int_list())
        return MultRelation.full(G, H)

    def _relation(self) -> MultRelation:
        c = self.cur
        c.expect(":")
        G = self._ref("group")
        c.expect("->")
        H = self._ref("group")
        c.expect("=")
        return self._relation_body(G, H)

    def _polyhom(self) -> Polyhom:
        c = self.cur
        if c.accept("="):
            c.keyword("zero")
            src = self._space()
            return zero(src, self._space())
        c.expect(":")
        src = self._space()
        c.expect("->")
        tgt = self._space()
        fields = self._fields({"relation", "weight", "alpha"}, (src.group, tgt.group))
        rel = fields.get("relation")
        if rel is None:
            raise ParseError("polyhom needs a relation", c.tokens[0].line, c.tokens[0].column)
        if "weight" in fields and "alpha" in fields:
            raise ParseError("give weight or alpha, not both", c.tokens[0].line, c.tokens[0].column)
        if "alpha" in fields:
            weight = fields["alpha"] * src.point_mass / rel.marginals().indef.order
        else:
            weight = fields.get("weight", Fraction(1))
        return make_polyhom(rel, weight, src, tgt)

    def _fields(self, allowed: set[str], groups=None) -> dict:
        c = self.cur
        c.expect("{")
        out: dict = {}
        while not c.accept("}"):
            key = c.name("a field name")
            if key.text not in allowed:
                raise ParseError(f"unknown field {key.text!r}", key.line, key.column)
            if key.text in out:
                raise ParseError(f"field {key.text!r} given twice", key.line, key.column)
            c.expect("=")
            out[key.text] = self._field_value(key.text, groups)
            c.accept(";")  # optional between fields written on separate lines
        return out

    def _field_value(self, key: str, groups):
        c = self.cur
        if key in ("weight", "alpha"):
            return c.fraction()
        if key == "basis":
            return c.int_matrix()
        # relation: a name or an inline body
        tok = c.peek()
        if tok is not None and tok.text in ("generated", "graph", "full"):
            return self._relation_body(*groups)
        rel = self._ref("relation")
        if (rel.source, rel.target) != groups:
            raise ParseError("relation groups differ from the polyhom's groups", tok.line, tok.column)
        return rel

    def _fppolyhom(self) -> FpPolyhom:
        c = self.cur
        c.keyword("in")
        W = self._ref("fpwindow")
        if c.accept("="):
            c.keyword("zero")
            return fp_zero(W)
        fields = self._fields({"basis", "weight", "alpha"})
        head = c.tokens[0]
        if "basis" not in fields:
            raise ParseError("fppolyhom needs a basis", head.line, head.column)
        if "weight" in fields and "alpha" in fields:
            raise ParseError("give weight or alpha, not both", head.line, head.column)
        basis = np.array(fields["basis"], dtype=np.int64).reshape(len(fields["basis"]), -1) if fields["basis"] else []
        if "alpha" in fields:
            return with_alpha(W, basis, fields["alpha"])
        return make_fp_polyhom(W, basis, fields.get("weight", W.point_mass))

    def _fpwindow(self) -> FpWindow:
        c = self.cur
        c.expect("=")
        c.keyword("p")
        p = c.integer()
        kind = c.keyword("radius", "middle", "range")
        if kind.text == "radius":
            return FpWindow.radius(p, c.integer())
        if kind.text == "middle":
            return FpWindow.middle(p, c.integer())
        lo = c.integer()
        return FpWindow(p, lo, c.integer())
