"""Parser for the germ-document input language.

A document describes one multigerm, optionally together with a one-parameter
unfolding, a target diffeomorphism pair, named lists of vector fields, and
option overrides::

    germ cusp {
      n = 1; p = 2;
      target (X, Y);
      branch a(y) = (y^2, y^3);
      unfolding at 2 {
        branch a(y, t) = (y^2, y^3 + t*y, t);
      }
      fields reference {
        (2*X, 3*Y);
        (9*Y, -2*X^2);
      }
      options { max_i = 6; }
    }

Polynomials use ``+ - *`` and ``^`` for powers; rational literals are written
``a/b``.  Comments run from ``#`` to end of line.  Errors carry line/column.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .germs import Branch, MultiGerm, UnfoldingSpec
from .poly import Polynomial


class ParseError(ValueError):
    """Syntax or semantic error in a germ document, with location."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

_SYMBOLS = "{}()=;,+-*/^"


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "int", "sym", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if c in _SYMBOLS:
            tokens.append(Token("sym", c, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# document model
# ---------------------------------------------------------------------------

@dataclass
class BranchDecl:
    label: str
    source_vars: tuple[str, ...]
    components: tuple[Polynomial, ...]


@dataclass
class UnfoldingDecl:
    param_target_index: int  # 0-based position of the parameter in the target
    target_vars: tuple[str, ...]
    branches: list[BranchDecl]


@dataclass
class FieldsDecl:
    name: str
    over_unfolding: bool
    fields: list[tuple[Polynomial, ...]]


@dataclass
class GermDocument:
    name: str
    n: int
    p: int
    target_vars: tuple[str, ...]
    branches: list[BranchDecl]
    unfolding: Optional[UnfoldingDecl] = None
    diffeo: Optional[tuple[tuple[Polynomial, ...], tuple[Polynomial, ...]]] = None
    fields: dict[str, FieldsDecl] = field(default_factory=dict)
    options: dict[str, int] = field(default_factory=dict)

    # -- conversions ----------------------------------------------------
    def to_multigerm(self) -> MultiGerm:
        return MultiGerm(
            [Branch(b.label, b.source_vars, b.components) for b in self.branches],
            self.target_vars,
        )

    def to_unfolding_spec(self) -> UnfoldingSpec:
        if self.unfolding is None:
            raise ValueError(f"document {self.name!r} has no unfolding block")
        u = self.unfolding
        F = MultiGerm(
            [Branch(b.label, b.source_vars, b.components) for b in u.branches],
            u.target_vars,
        )
        param = u.branches[0].source_vars[-1]
        return UnfoldingSpec(F, self.to_multigerm(), param, u.param_target_index)

    def diffeo_pair(self) -> tuple[tuple[Polynomial, ...], tuple[Polynomial, ...]]:
        if self.diffeo is None:
            raise ValueError(f"document {self.name!r} has no diffeo block")
        return self.diffeo

    # -- rendering ------------------------------------------------------
    def render(self) -> str:
        out = [f"germ {self.name} {{"]
        out.append(f"  n = {self.n}; p = {self.p};")
        out.append(f"  target ({', '.join(self.target_vars)});")
        for b in self.branches:
            comps = ", ".join(c.render(b.source_vars) for c in b.components)
            out.append(f"  branch {b.label}({', '.join(b.source_vars)}) = ({comps});")
        if self.unfolding is not None:
            u = self.unfolding
            out.append(f"  unfolding at {u.param_target_index + 1} {{")
            out.append(f"    target ({', '.join(u.target_vars)});")
            for b in u.branches:
                comps = ", ".join(c.render(b.source_vars) for c in b.components)
                out.append(f"    branch {b.label}({', '.join(b.source_vars)}) = ({comps});")
            out.append("  }")
        if self.diffeo is not None:
            H, Hinv = self.diffeo
            out.append("  diffeo {")
            out.append(f"    H = ({', '.join(c.render(self.target_vars) for c in H)});")
            out.append(f"    Hinv = ({', '.join(c.render(self.target_vars) for c in Hinv)});")
            out.append("  }")
        for fd in self.fields.values():
            over = " over unfolding" if fd.over_unfolding else ""
            out.append(f"  fields {fd.name}{over} {{")
            names = (
                self.unfolding.target_vars if fd.over_unfolding else self.target_vars
            )
            for vf in fd.fields:
                out.append(f"    ({', '.join(c.render(names) for c in vf)});")
            out.append("  }")
        if self.options:
            opts = " ".join(f"{k} = {v};" for k, v in sorted(self.options.items()))
            out.append(f"  options {{ {opts} }}")
        out.append("}")
        return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# recursive-descent parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token helpers --------------------------------------------------
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind
            got = t.text or "end of input"
            self.error(f"expected {want!r}, found {got!r}")
        return self.next()

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        t = self.peek()
        if t.kind == kind and (text is None or t.text == text):
            return self.next()
        return None

    # -- grammar --------------------------------------------------------
    def document(self) -> GermDocument:
        self.expect("name", "germ")
        name = self.expect("name").text
        self.expect("sym", "{")
        n = p = None
        target: tuple[str, ...] | None = None
        branches: list[BranchDecl] = []
        unfolding = None
        diffeo = None
        fields: dict[str, FieldsDecl] = {}
        options: dict[str, int] = {}
        while not self.accept("sym", "}"):
            t = self.peek()
            if t.kind != "name":
                self.error("expected a declaration")
            if t.text == "n" or t.text == "p":
                self.next()
                self.expect("sym", "=")
                val = int(self.expect("int").text)
                self.expect("sym", ";")
                if t.text == "n":
                    n = val
                else:
                    p = val
            elif t.text == "target":
                self.next()
                target = self.name_list()
                self.expect("sym", ";")
            elif t.text == "branch":
                branches.append(self.branch_decl(n, p))
            elif t.text == "unfolding":
                unfolding = self.unfolding_block(n, p)
            elif t.text == "diffeo":
                diffeo = self.diffeo_block(target)
            elif t.text == "fields":
                fd = self.fields_block(target, unfolding)
                if fd.name in fields:
                    self.error(f"duplicate fields block {fd.name!r}", t)
                fields[fd.name] = fd
            elif t.text == "options":
                options = self.options_block()
            else:
                self.error(f"unknown declaration {t.text!r}")
        self.expect("eof")
        if n is None or p is None:
            raise ParseError(f"germ {name!r} must declare n and p", 1, 1)
        if target is None:
            target = tuple(f"X{i+1}" for i in range(p))
        if len(target) != p:
            raise ParseError(
                f"germ {name!r}: target declares {len(target)} variables, p = {p}", 1, 1
            )
        if not branches:
            raise ParseError(f"germ {name!r} has no branches", 1, 1)
        return GermDocument(name, n, p, target, branches, unfolding, diffeo, fields, options)

    def name_list(self) -> tuple[str, ...]:
        self.expect("sym", "(")
        names = [self.expect("name").text]
        while self.accept("sym", ","):
            names.append(self.expect("name").text)
        self.expect("sym", ")")
        return tuple(names)

    def branch_decl(self, n: int | None, p: int | None, extra: int = 0) -> BranchDecl:
        head = self.expect("name", "branch")
        label = self.expect("name").text
        svars = self.name_list()
        if n is not None and len(svars) != n + extra:
            self.error(
                f"branch {label!r}: {len(svars)} source variables, expected {n + extra}",
                head,
            )
        self.expect("sym", "=")
        comps = self.poly_tuple(svars)
        self.expect("sym", ";")
        if p is not None and len(comps) != p + extra:
            self.error(f"branch {label!r}: {len(comps)} components, expected {p + extra}", head)
        for c in comps:
            if c.constant_term():
                self.error(f"branch {label!r}: component has nonzero constant term", head)
        return BranchDecl(label, svars, comps)

    def unfolding_block(self, n: int | None, p: int | None) -> UnfoldingDecl:
        self.expect("name", "unfolding")
        index = p  # default: the parameter is the last target component
        if self.accept("name", "at"):
            tok = self.expect("int")
            index = int(tok.text) - 1
            if p is not None and not 0 <= index <= p:
                self.error(f"parameter position {tok.text} out of range", tok)
        self.expect("sym", "{")
        target: tuple[str, ...] | None = None
        branches: list[BranchDecl] = []
        while not self.accept("sym", "}"):
            t = self.peek()
            if t.kind == "name" and t.text == "target":
                self.next()
                target = self.name_list()
                self.expect("sym", ";")
            elif t.kind == "name" and t.text == "branch":
                branches.append(self.branch_decl(n, p, extra=1))
            else:
                self.error("expected 'target' or 'branch' in unfolding block")
        if not branches:
            self.error("unfolding block has no branches")
        if target is None:
            target = tuple(f"X{i+1}" for i in range(len(branches[0].components)))
        return UnfoldingDecl(index, target, branches)

    def diffeo_block(self, target: tuple[str, ...] | None):
        head = self.expect("name", "diffeo")
        if target is None:
            self.error("diffeo block must come after the target declaration", head)
        self.expect("sym", "{")
        H = Hinv = None
        while not self.accept("sym", "}"):
            key = self.expect("name")
            if key.text not in ("H", "Hinv"):
                self.error("expected 'H' or 'Hinv'", key)
            self.expect("sym", "=")
            comps = self.poly_tuple(target)
            self.expect("sym", ";")
            if len(comps) != len(target):
                self.error(f"{key.text} must have {len(target)} components", key)
            if key.text == "H":
                H = comps
            else:
                Hinv = comps
        if H is None or Hinv is None:
            self.error("diffeo block needs both H and Hinv", head)
        return H, Hinv

    def fields_block(self, target, unfolding) -> FieldsDecl:
        head = self.expect("name", "fields")
        name = self.expect("name").text
        over_unfolding = False
        if self.accept("name", "over"):
            self.expect("name", "unfolding")
            over_unfolding = True
        if over_unfolding:
            if unfolding is None:
                self.error("fields block refers to an unfolding that is not declared", head)
            names = unfolding.target_vars
        else:
            if target is None:
                self.error("fields block must come after the target declaration", head)
            names = target
        self.expect("sym", "{")
        fields = []
        while not self.accept("sym", "}"):
            fields.append(self.poly_tuple(names))
            self.expect("sym", ";")
        return FieldsDecl(name, over_unfolding, fields)

    def options_block(self) -> dict[str, int]:
        self.expect("name", "options")
        self.expect("sym", "{")
        opts: dict[str, int] = {}
        while not self.accept("sym", "}"):
            key = self.expect("name").text
            self.expect("sym", "=")
            sign = -1 if self.accept("sym", "-") else 1
            opts[key] = sign * int(self.expect("int").text)
            self.expect("sym", ";")
        return opts

    # -- polynomial expressions -----------------------------------------
    def poly_tuple(self, names: Sequence[str]) -> tuple[Polynomial, ...]:
        self.expect("sym", "(")
        comps = [self.expr(names)]
        while self.accept("sym", ","):
            comps.append(self.expr(names))
        self.expect("sym", ")")
        return tuple(comps)

    def expr(self, names: Sequence[str]) -> Polynomial:
        value = self.term(names)
        while True:
            if self.accept("sym", "+"):
                value = value + self.term(names)
            elif self.accept("sym", "-"):
                value = value - self.term(names)
            else:
                return value

    def term(self, names: Sequence[str]) -> Polynomial:
        value = self.factor(names)
        while self.accept("sym", "*"):
            value = value * self.factor(names)
        return value

    def factor(self, names: Sequence[str]) -> Polynomial:
        if self.accept("sym", "-"):
            return -self.factor(names)
        value = self.atom(names)
        if self.accept("sym", "^"):
            tok = self.expect("int")
            value = value ** int(tok.text)
        return value

    def atom(self, names: Sequence[str]) -> Polynomial:
        nvars = len(names)
        t = self.peek()
        if t.kind == "int":
            self.next()
            num = int(t.text)
            if self.peek().kind == "sym" and self.peek().text == "/":
                self.next()
                den = self.expect("int")
                if int(den.text) == 0:
                    self.error("zero denominator", den)
                return Polynomial.constant(nvars, Fraction(num, int(den.text)))
            return Polynomial.constant(nvars, num)
        if t.kind == "name":
            self.next()
            try:
                return Polynomial.variable(nvars, list(names).index(t.text))
            except ValueError:
                self.error(f"unknown variable {t.text!r}", t)
        if t.kind == "sym" and t.text == "(":
            self.next()
            value = self.expr(names)
            self.expect("sym", ")")
            return value
        self.error("expected a polynomial atom")


def parse(text: str) -> GermDocument:
    """Parse a germ document; raises ParseError with line/column on failure."""
    return _Parser(tokenize(text)).document()


def parse_polynomial(text: str, var_names: Sequence[str]) -> Polynomial:
    """Parse a standalone polynomial expression over the named variables."""
    parser = _Parser(tokenize(text))
    value = parser.expr(tuple(var_names))
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return value
