"""Lexer and recursive-descent parser for session files.

Grammar (one directive per line, ``#`` starts a comment, ``;`` may also
separate directives)::

    coalgebra NAME = trivial | grouplike(k) | divided_power(k) | matrix(k)
                   | explicit { dim N; delta MATRIX; eps MATRIX }
    comodule NAME over COALG { dim N; rho MATRIX }
    comodule NAME = cofree(COALG, k) | random(COALG, dim, seed)
                  | sub(M, MATRIX) | quotient(M, MATRIX)
    morphism NAME : A -> B = MATRIX
    diagram NAME { objects A, B, ...; arrow f : A -> B; ... }
    limit NAME = limit(D) | product(A, ...) | equalizer(f, g) | pullback(f, g)
    colimit NAME = colimit(D) | coproduct(A, ...) | coequalizer(f, g)
                 | cokernel(f) | coimage(f) | pushout(f, g)
    verify NAME
    mediate NAME from (U; legs f1, f2, ...) [as NAME]
    emit NAME

MATRIX is a row-major nested list of integers, ``p/q`` or ``"p/q"`` strings.
Inside ``{ }`` a line break may stand in for ``;``; inside matrix brackets
newlines are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import ComodError


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    start: int
    end: int

    def merge(self, other: "SourceSpan") -> "SourceSpan":
        return SourceSpan(self.line, self.column, self.start, max(self.end, other.end))

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}"


class ParseError(ComodError):
    def __init__(self, message: str, span: SourceSpan, expected: frozenset = frozenset()):
        self.span = span
        self.expected = frozenset(expected)
        exp = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{span}: {message}{exp}")


class DuplicateName(ParseError):
    pass


class UnknownName(ParseError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT NUMBER STRING PUNCT NEWLINE EOF
    value: str
    span: SourceSpan


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<number>-?\d+(?:/\d+)?)
  | (?P<string>"[^"\n]*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>->|[=:{}\[\]();,])
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", SourceSpan(line, col, pos, pos + 1))
        kind = m.lastgroup
        span = SourceSpan(line, col, m.start(), m.end())
        if kind == "newline":
            tokens.append(Token("NEWLINE", "\n", span))
            line += 1
            line_start = m.end()
        elif kind in ("number", "string", "ident", "punct"):
            tokens.append(Token(kind.upper(), m.group(), span))
        pos = m.end()
    tokens.append(Token("EOF", "", SourceSpan(line, pos - line_start + 1, pos, pos)))
    return tokens


# --- syntax tree ------------------------------------------------------------

@dataclass
class Matrix:
    rows: list[list[Fraction]]
    span: SourceSpan


@dataclass
class Directive:
    kind: str
    name: str | None
    span: SourceSpan


@dataclass
class CoalgebraDef(Directive):
    form: str = "trivial"
    param: int | None = None
    dim: int | None = None
    delta: Matrix | None = None
    eps: Matrix | None = None


@dataclass
class ComoduleDef(Directive):
    form: str = "explicit"            # explicit | cofree | random | sub | quotient
    coalgebra: str | None = None
    dim: int | None = None
    rho: Matrix | None = None
    base: str | None = None          # comodule for sub/quotient
    ints: list[int] = field(default_factory=list)
    vectors: Matrix | None = None


@dataclass
class MorphismDef(Directive):
    src: str = ""
    dst: str = ""
    mat: Matrix | None = None


@dataclass
class ArrowDecl:
    morphism: str
    src: str
    dst: str
    span: SourceSpan


@dataclass
class DiagramDef(Directive):
    objects: list[str] = field(default_factory=list)
    arrows: list[ArrowDecl] = field(default_factory=list)


@dataclass
class ConstructionDef(Directive):
    op: str = ""
    args: list[str] = field(default_factory=list)


@dataclass
class Mediate(Directive):
    apex: str = ""
    legs: list[str] = field(default_factory=list)
    bind: str | None = None


@dataclass
class Session:
    text: str
    directives: list[Directive]
    declared: dict[str, str]        # name -> kind, in binding order


# value kinds each name can be used as
_KIND_OF = {
    "coalgebra": "coalgebra", "comodule": "comodule", "morphism": "morphism",
    "diagram": "diagram", "limit": "limit", "colimit": "colimit",
}
_LIMIT_OPS = {"limit": ["diagram"], "product": ["comodule*"], "equalizer": ["morphism", "morphism"],
              "pullback": ["morphism", "morphism"]}
_COLIMIT_OPS = {"colimit": ["diagram"], "coproduct": ["comodule*"],
                "coequalizer": ["morphism", "morphism"], "cokernel": ["morphism"],
                "coimage": ["morphism"], "pushout": ["morphism", "morphism"]}
_COALGEBRA_FORMS = ("trivial", "grouplike", "divided_power", "matrix", "explicit")
_USABLE_AS_COMODULE = {"comodule", "limit", "colimit"}


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.declared: dict[str, str] = {}

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def at(self, value: str) -> bool:
        return self.tok.value == value and self.tok.kind in ("PUNCT", "IDENT")

    def fail(self, expected, message: str | None = None):
        t = self.tok
        found = "end of input" if t.kind == "EOF" else ("end of line" if t.kind == "NEWLINE" else repr(t.value))
        raise ParseError(message or f"unexpected {found}", t.span, frozenset(expected))

    def expect(self, value: str) -> Token:
        if not self.at(value):
            self.fail({repr(value)})
        return self.advance()

    def skip_newlines(self) -> None:
        while self.tok.kind == "NEWLINE":
            self.advance()

    def ident(self, what: str = "name") -> Token:
        if self.tok.kind != "IDENT":
            self.fail({what})
        return self.advance()

    def integer(self) -> int:
        t = self.tok
        if t.kind != "NUMBER" or "/" in t.value:
            self.fail({"integer"})
        self.advance()
        return int(t.value)

    # name bookkeeping
    def declare(self, tok: Token, kind: str) -> str:
        if tok.value in self.declared:
            raise DuplicateName(f"name {tok.value!r} is already bound", tok.span)
        self.declared[tok.value] = kind
        return tok.value

    def use(self, tok: Token, *kinds: str) -> str:
        kind = self.declared.get(tok.value)
        if kind is None:
            raise UnknownName(f"unknown name {tok.value!r}", tok.span)
        if kinds and kind not in kinds:
            raise ParseError(f"{tok.value!r} is a {kind}, expected {' or '.join(kinds)}", tok.span)
        return tok.value

    # grammar
    def parse(self) -> Session:
        directives = []
        while True:
            self.skip_newlines()
            if self.tok.kind == "EOF":
                break
            directives.append(self.directive())
            if self.at(";"):
                self.advance()
            elif self.tok.kind not in ("NEWLINE", "EOF"):
                self.fail({"end of line", "';'"})
        return Session(self.text, directives, dict(self.declared))

    def directive(self) -> Directive:
        t = self.tok
        handlers = {
            "coalgebra": self.coalgebra, "comodule": self.comodule, "morphism": self.morphism,
            "diagram": self.diagram, "limit": self.construction, "colimit": self.construction,
            "verify": self.simple, "emit": self.simple, "mediate": self.mediate,
        }
        if t.kind != "IDENT" or t.value not in handlers:
            self.fail(set(handlers))
        return handlers[t.value]()

    def _end_span(self, start: SourceSpan) -> SourceSpan:
        return start.merge(self.tokens[self.i - 1].span)

    def coalgebra(self) -> CoalgebraDef:
        start = self.advance().span
        name_tok = self.ident()
        self.expect("=")
        form_tok = self.ident("coalgebra form")
        form = form_tok.value
        if form not in _COALGEBRA_FORMS:
            raise ParseError(f"unknown coalgebra form {form!r}", form_tok.span, frozenset(_COALGEBRA_FORMS))
        node = CoalgebraDef("coalgebra", None, start, form=form)
        if form in ("grouplike", "divided_power", "matrix"):
            self.expect("(")
            node.param = self.integer()
            self.expect(")")
        elif form == "explicit":
            fields = self.block({"dim": "int", "delta": "matrix", "eps": "matrix"})
            node.dim, node.delta, node.eps = fields["dim"], fields["delta"], fields["eps"]
        node.name = self.declare(name_tok, "coalgebra")
        node.span = self._end_span(start)
        return node

    def block(self, fields: dict[str, str]) -> dict:
        """``{ key value; ... }`` with each key of ``fields`` required exactly once."""
        open_tok = self.expect("{")
        out: dict = {}
        while True:
            self.skip_newlines()
            if self.at("}"):
                break
            key = self.ident("field name")
            if key.value not in fields:
                raise ParseError(f"unknown field {key.value!r}", key.span, frozenset(fields))
            if key.value in out:
                raise ParseError(f"field {key.value!r} given twice", key.span)
            out[key.value] = self.integer() if fields[key.value] == "int" else self.matrix()
            self.separator()
        self.advance()
        missing = [k for k in fields if k not in out]
        if missing:
            raise ParseError(f"missing field(s) {', '.join(missing)}", open_tok.span)
        return out

    def separator(self) -> None:
        """Inside braces, entries end with ';' or a line break."""
        broke = self.tok.kind == "NEWLINE"
        self.skip_newlines()
        if self.at(";"):
            self.advance()
        elif not broke and not self.at("}"):
            self.fail({"';'", "'}'", "end of line"})

    def matrix(self) -> Matrix:
        open_tok = self.tok
        self.expect("[")
        rows: list[list[Fraction]] = []
        self.skip_newlines()
        if self.at("]"):
            self.advance()
            return Matrix(rows, self._end_span(open_tok.span))
        while True:
            self.skip_newlines()
            rows.append(self.row())
            self.skip_newlines()
            if self.at(","):
                self.advance()
            elif self.at("]"):
                self.advance()
                return Matrix(rows, self._end_span(open_tok.span))
            else:
                self._unclosed(open_tok)

    def _unclosed(self, open_tok: Token):
        t = self.tok
        found = "end of input" if t.kind == "EOF" else repr(t.value)
        raise ParseError(f"unclosed '[' (found {found} at {t.span})", open_tok.span,
                         frozenset({"','", "']'"}))

    def row(self) -> list[Fraction]:
        open_tok = self.tok
        self.expect("[")
        vals: list[Fraction] = []
        self.skip_newlines()
        if self.at("]"):
            self.advance()
            return vals
        while True:
            self.skip_newlines()
            t = self.tok
            if t.kind == "NUMBER":
                literal = t.value
            elif t.kind == "STRING" and re.fullmatch(r"-?\d+(/\d+)?", t.value[1:-1].strip()):
                literal = t.value[1:-1].strip()
            else:
                self.fail({"rational"})
            if re.search(r"/0+$", literal):
                raise ParseError("zero denominator", t.span)
            vals.append(Fraction(literal))
            self.advance()
            self.skip_newlines()
            if self.at(","):
                self.advance()
            elif self.at("]"):
                self.advance()
                return vals
            else:
                self._unclosed(open_tok)

    def comodule(self) -> ComoduleDef:
        start = self.advance().span
        name_tok = self.ident()
        node = ComoduleDef("comodule", None, start)
        if self.at("over"):
            self.advance()
            node.coalgebra = self.use(self.ident("coalgebra name"), "coalgebra")
            fields = self.block({"dim": "int", "rho": "matrix"})
            node.dim, node.rho = fields["dim"], fields["rho"]
        elif self.at("="):
            self.advance()
            form_tok = self.ident("comodule form")
            node.form = form_tok.value
            self.expect("(")
            if node.form in ("cofree", "random"):
                node.coalgebra = self.use(self.ident("coalgebra name"), "coalgebra")
                count = 1 if node.form == "cofree" else 2
                for _ in range(count):
                    self.expect(",")
                    node.ints.append(self.integer())
            elif node.form in ("sub", "quotient"):
                node.base = self.use(self.ident("comodule name"), *_USABLE_AS_COMODULE)
                self.expect(",")
                node.vectors = self.matrix()
            else:
                raise ParseError(f"unknown comodule form {node.form!r}", form_tok.span,
                                 frozenset({"cofree", "random", "sub", "quotient"}))
            self.expect(")")
        else:
            self.fail({"'over'", "'='"})
        node.name = self.declare(name_tok, "comodule")
        node.span = self._end_span(start)
        return node

    def morphism(self) -> MorphismDef:
        start = self.advance().span
        name_tok = self.ident()
        self.expect(":")
        src = self.use(self.ident("comodule name"), *_USABLE_AS_COMODULE)
        self.expect("->")
        dst = self.use(self.ident("comodule name"), *_USABLE_AS_COMODULE)
        self.expect("=")
        mat = self.matrix()
        node = MorphismDef("morphism", self.declare(name_tok, "morphism"), start, src=src, dst=dst, mat=mat)
        node.span = self._end_span(start)
        return node

    def diagram(self) -> DiagramDef:
        start = self.advance().span
        name_tok = self.ident()
        node = DiagramDef("diagram", None, start)
        self.expect("{")
        while True:
            self.skip_newlines()
            if self.at("}"):
                break
            if self.at("objects"):
                self.advance()
                while True:
                    t = self.ident("comodule name")
                    self.use(t, *_USABLE_AS_COMODULE)
                    if t.value in node.objects:
                        raise DuplicateName(f"object {t.value!r} listed twice", t.span)
                    node.objects.append(t.value)
                    if not self.at(","):
                        break
                    self.advance()
            elif self.at("arrow"):
                a_start = self.advance().span
                f = self.use(self.ident("morphism name"), "morphism")
                self.expect(":")
                s = self.ident("object name")
                self.expect("->")
                d = self.ident("object name")
                for t in (s, d):
                    if t.value not in node.objects:
                        raise UnknownName(f"{t.value!r} is not an object of this diagram", t.span)
                node.arrows.append(ArrowDecl(f, s.value, d.value, self._end_span(a_start)))
            else:
                self.fail({"'objects'", "'arrow'", "'}'"})
            self.separator()
        self.advance()
        node.name = self.declare(name_tok, "diagram")
        node.span = self._end_span(start)
        return node

    def construction(self) -> ConstructionDef:
        kw = self.advance()
        ops = _LIMIT_OPS if kw.value == "limit" else _COLIMIT_OPS
        name_tok = self.ident()
        self.expect("=")
        op_tok = self.ident("construction")
        if op_tok.value not in ops:
            raise ParseError(f"unknown {kw.value} construction {op_tok.value!r}", op_tok.span, frozenset(ops))
        sig = ops[op_tok.value]
        self.expect("(")
        args = []
        if sig == ["comodule*"]:
            if not self.at(")"):
                while True:
                    args.append(self.use(self.ident("comodule name"), *_USABLE_AS_COMODULE))
                    if not self.at(","):
                        break
                    self.advance()
        else:
            for k, kind in enumerate(sig):
                if k:
                    self.expect(",")
                args.append(self.use(self.ident(f"{kind} name"), kind))
        self.expect(")")
        node = ConstructionDef(kw.value, self.declare(name_tok, kw.value), kw.span, op=op_tok.value, args=args)
        node.span = self._end_span(kw.span)
        return node

    def simple(self) -> Directive:
        kw = self.advance()
        name = self.use(self.ident())
        return Directive(kw.value, name, self._end_span(kw.span))

    def mediate(self) -> Mediate:
        kw = self.advance()
        target = self.use(self.ident("limit or colimit name"), "limit", "colimit")
        self.expect("from")
        self.expect("(")
        apex = self.use(self.ident("comodule name"), *_USABLE_AS_COMODULE)
        self.expect(";")
        self.expect("legs")
        legs = []
        while True:
            legs.append(self.use(self.ident("morphism name"), "morphism"))
            if not self.at(","):
                break
            self.advance()
        self.expect(")")
        bind = None
        if self.at("as"):
            self.advance()
            bind = self.declare(self.ident(), "morphism")
        return Mediate("mediate", target, self._end_span(kw.span), apex=apex, legs=legs, bind=bind)


def parse_session(text: str) -> Session:
    return Parser(text).parse()
