"""The ``.ops`` presentation language.

Statements end with ``;`` and ``#`` starts a comment::

    name "pre-Lie";
    op * : 2 plain;                 # also: sym, antisym
    op t : 3;                       # prefix call t(x, y, z)
    (x*y)*z - x*(y*z) = (x*z)*y - x*(z*y);

Families declare parameters, used as coefficients, and sample points::

    param a, b;
    a (x*x)*x + b x*(x*x) = 0;
    sample 1, 0;
    grid a = 1, 2;                  # cartesian product over grids
    split * into o, c;              # x*y = 1/2 (x o y) + 1/2 c(x, y)
    dual_dims 1, 2, 3, 4, 5, 6;

A binary operation named by punctuation is written infix; every operation
may also be called prefix.  Infix chains such as ``x*y*z`` must be
parenthesized.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DSLSyntaxError, PresentationError, UndeclaredGenerator
from .presentation import (
    ANTISYMMETRIC,
    PLAIN,
    SYMMETRIC,
    GeneratorSpec,
    Presentation,
    RawIdentity,
    change_generator_basis,
    split_basis_change,
    validate,
)

OPCHARS = "*.&|^%~!@$?·∘"
_SYMMETRY_WORDS = {
    "plain": PLAIN,
    "sym": SYMMETRIC,
    "symmetric": SYMMETRIC,
    "antisym": ANTISYMMETRIC,
    "antisymmetric": ANTISYMMETRIC,
}
_SYMMETRY_PRINT = {PLAIN: "plain", SYMMETRIC: "sym", ANTISYMMETRIC: "antisym"}
KEYWORDS = {"op", "param", "sample", "grid", "name", "dual_dims", "split", "into"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<punct>[(),;:=+\-/])
  | (?P<opsym>[""" + re.escape(OPCHARS) + r"""]+)
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list:
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass(frozen=True)
class IdentityTemplate:
    """Terms ``((coefficient, params), expr)``; the params multiply in."""

    terms: tuple
    label: str = ""

    def instantiate(self, values: dict) -> RawIdentity:
        out = []
        for (c, params), expr in self.terms:
            v = Fraction(c)
            for p in params:
                v *= values[p]
            if v:
                out.append((v, expr))
        return RawIdentity(tuple(out), self.label)


@dataclass(frozen=True)
class OpsDocument:
    name: str = ""
    generators: tuple = ()
    templates: tuple = ()
    params: tuple = ()
    samples: tuple = ()
    grids: tuple = ()
    dual_dims: tuple = ()
    splits: tuple = ()

    @property
    def is_family(self) -> bool:
        return bool(self.params)

    def sample_points(self) -> list:
        points = [tuple(s) for s in self.samples]
        if self.grids:
            grid = dict(self.grids)
            axes = [grid.get(p, ()) for p in self.params]
            if all(axes):
                points.extend(tuple(pt) for pt in itertools.product(*axes))
        return points

    def instantiate(self, values: Optional[Sequence] = None) -> Presentation:
        """Presentation at a parameter point, before any ``split``."""
        if self.params:
            if values is None or len(values) != len(self.params):
                raise PresentationError(
                    f"presentation has parameters {', '.join(self.params)}; give one value each"
                )
            env = {p: Fraction(v) for p, v in zip(self.params, values)}
        else:
            env = {}
        identities = []
        for t in self.templates:
            identity = t.instantiate(env)
            if not identity.terms and self.params:
                raise PresentationError("all coefficients vanish: the zero identity is rejected")
            identities.append(identity)
        return validate(Presentation(self.generators, tuple(identities), self.name))

    def presentation(self, values: Optional[Sequence] = None) -> Presentation:
        """Presentation at a parameter point with every ``split`` applied."""
        p = self.instantiate(values)
        for old, sym, anti in self.splits:
            p = change_generator_basis(p, split_basis_change(old, sym, anti))
        return p


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.ops: dict = {}
        self.params: list = []
        self.doc = dict(name="", generators=[], templates=[], samples=[], grids=[], dual_dims=(), splits=[])

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        shown = tok.text or "end of input"
        return DSLSyntaxError(f"{msg} (at {shown!r})", tok.line, tok.col)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            raise self.error(f"expected {text or kind}")
        return self.advance()

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    # -- statements
    def parse(self) -> OpsDocument:
        while not self.at("eof"):
            self.statement()
        return OpsDocument(
            name=self.doc["name"],
            generators=tuple(self.doc["generators"]),
            templates=tuple(self.doc["templates"]),
            params=tuple(self.params),
            samples=tuple(self.doc["samples"]),
            grids=tuple(self.doc["grids"]),
            dual_dims=tuple(self.doc["dual_dims"]),
            splits=tuple(self.doc["splits"]),
        )

    def statement(self):
        t = self.tok
        if t.kind == "ident" and t.text in KEYWORDS and not self.at_call():
            getattr(self, "stmt_" + t.text)()
        else:
            self.identity()
        self.expect("punct", ";")

    def at_call(self) -> bool:
        return self.peek().kind == "punct" and self.peek().text == "("

    def stmt_name(self):
        self.advance()
        self.doc["name"] = self.expect("string").text[1:-1]

    def stmt_op(self):
        self.advance()
        t = self.tok
        if t.kind not in ("ident", "opsym"):
            raise self.error("expected an operation name")
        self.advance()
        if t.text in self.ops:
            raise self.error(f"operation {t.text!r} declared twice", t)
        self.expect("punct", ":")
        k = int(self.expect("number").text)
        sym = PLAIN
        if self.at("ident"):
            w = self.advance()
            if w.text not in _SYMMETRY_WORDS:
                raise self.error("expected plain, sym or antisym", w)
            sym = _SYMMETRY_WORDS[w.text]
        try:
            g = validate(Presentation((GeneratorSpec(t.text, k, sym),))).generators[0]
        except PresentationError as exc:
            raise DSLSyntaxError(str(exc), t.line, t.col) from None
        self.ops[t.text] = g
        self.doc["generators"].append(g)

    def stmt_param(self):
        self.advance()
        while True:
            t = self.expect("ident")
            if t.text in self.params or t.text in self.ops:
                raise self.error(f"name {t.text!r} already in use", t)
            self.params.append(t.text)
            if not self.at("punct", ","):
                break
            self.advance()

    def signed_number(self) -> Fraction:
        sign = 1
        while self.at("punct", "-") or self.at("punct", "+"):
            if self.advance().text == "-":
                sign = -sign
        num = Fraction(int(self.expect("number").text))
        if self.at("punct", "/"):
            self.advance()
            den = self.expect("number")
            if int(den.text) == 0:
                raise self.error("division by zero", den)
            num /= int(den.text)
        return sign * num

    def number_list(self) -> list:
        out = [self.signed_number()]
        while self.at("punct", ","):
            self.advance()
            out.append(self.signed_number())
        return out

    def stmt_sample(self):
        t = self.advance()
        vals = self.number_list()
        if len(vals) != len(self.params):
            raise self.error(f"sample has {len(vals)} values for {len(self.params)} parameters", t)
        self.doc["samples"].append(tuple(vals))

    def stmt_grid(self):
        self.advance()
        p = self.expect("ident")
        if p.text not in self.params:
            raise self.error(f"unknown parameter {p.text!r}", p)
        self.expect("punct", "=")
        self.doc["grids"].append((p.text, tuple(self.number_list())))

    def stmt_dual_dims(self):
        self.advance()
        vals = self.number_list()
        if any(v.denominator != 1 or v < 0 for v in vals):
            raise self.error("dual dimensions must be non-negative integers")
        self.doc["dual_dims"] = tuple(int(v) for v in vals)

    def stmt_split(self):
        self.advance()
        t = self.tok
        if t.kind not in ("ident", "opsym") or t.text not in self.ops:
            raise UndeclaredGenerator(f"line {t.line}, column {t.col}: cannot split undeclared {t.text!r}")
        self.advance()
        self.expect("ident", "into")
        a = self.op_name()
        self.expect("punct", ",")
        b = self.op_name()
        self.doc["splits"].append((t.text, a, b))

    def op_name(self) -> str:
        t = self.tok
        if t.kind not in ("ident", "opsym"):
            raise self.error("expected an operation name")
        self.advance()
        return t.text

    # -- identities
    def identity(self):
        lhs = self.sum()
        self.expect("punct", "=")
        rhs = self.sum()
        terms = tuple(lhs) + tuple(((-c, ps), e) for (c, ps), e in rhs)
        self.doc["templates"].append(IdentityTemplate(terms))

    def sum(self) -> list:
        terms = []
        if self.at("number", "0") and self.peek().kind == "punct" and self.peek().text in ("=", ";"):
            self.advance()
            return terms
        sign = 1
        if self.at("punct", "-") or self.at("punct", "+"):
            sign = -1 if self.advance().text == "-" else 1
        terms.append(self.term(sign))
        while self.at("punct", "+") or self.at("punct", "-"):
            sign = -1 if self.advance().text == "-" else 1
            terms.append(self.term(sign))
        return terms

    def term(self, sign: int):
        coef = Fraction(sign)
        params = []
        while True:
            if self.at("number"):
                n = Fraction(int(self.advance().text))
                if self.at("punct", "/"):
                    self.advance()
                    den = self.expect("number")
                    if int(den.text) == 0:
                        raise self.error("division by zero", den)
                    n /= int(den.text)
                coef *= n
            elif self.at("ident") and self.tok.text in self.params:
                params.append(self.advance().text)
            else:
                break
        expr = self.product()
        return (coef, tuple(params)), expr

    def product(self):
        left = self.atom()
        if self.at("opsym"):
            op = self.advance()
            g = self.ops.get(op.text)
            if g is None:
                raise UndeclaredGenerator(
                    f"line {op.line}, column {op.col}: undeclared operation {op.text!r}"
                )
            if g.arity != 2:
                raise self.error(f"operation {op.text!r} is not binary and cannot be infix", op)
            right = self.atom()
            if self.at("opsym"):
                raise self.error("chained infix operations need parentheses")
            return (op.text, left, right)
        return left

    def atom(self):
        t = self.tok
        if t.kind == "punct" and t.text == "(":
            self.advance()
            e = self.product()
            self.expect("punct", ")")
            return e
        if t.kind in ("ident", "opsym") and self.at_call():
            self.advance()
            g = self.ops.get(t.text)
            if g is None:
                raise UndeclaredGenerator(
                    f"line {t.line}, column {t.col}: undeclared operation {t.text!r}"
                )
            self.advance()
            args = [self.product()]
            while self.at("punct", ","):
                self.advance()
                args.append(self.product())
            self.expect("punct", ")")
            if len(args) != g.arity:
                raise self.error(f"{t.text!r} takes {g.arity} arguments, got {len(args)}", t)
            return (t.text, *args)
        if t.kind == "ident":
            if t.text in self.ops:
                raise self.error(f"operation {t.text!r} used without arguments", t)
            if t.text in self.params:
                raise self.error(f"parameter {t.text!r} used as a variable", t)
            if t.text in KEYWORDS:
                raise self.error(f"keyword {t.text!r} cannot be a variable", t)
            self.advance()
            return t.text
        raise self.error("expected a variable, a call or '('")


def parse_document(text: str) -> OpsDocument:
    return _Parser(text).parse()


def parse_dsl(text: str) -> Presentation:
    """Parse a presentation without parameters, applying any ``split``."""
    doc = parse_document(text)
    if doc.is_family:
        raise PresentationError("text declares parameters; use parse_document and pick a sample")
    return doc.presentation()


def parse_identity(text: str, generators: Sequence[GeneratorSpec]) -> RawIdentity:
    """Parse ``lhs = rhs`` against already declared generators."""
    p = _Parser(text if text.rstrip().endswith(";") else text + ";")
    for g in generators:
        p.ops[g.name] = g
    p.identity()
    p.expect("punct", ";")
    if not p.at("eof"):
        raise p.error("trailing input")
    return p.doc["templates"][0].instantiate({})


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def _is_infix(name: str) -> bool:
    return all(ch in OPCHARS for ch in name)


def _is_infix_node(expr) -> bool:
    return isinstance(expr, tuple) and len(expr) == 3 and _is_infix(expr[0])


def format_expr(expr) -> str:
    if isinstance(expr, (str, int)):
        return str(expr)
    name, args = expr[0], expr[1:]
    if _is_infix(name) and len(args) == 2:
        parts = [f"({format_expr(a)})" if _is_infix_node(a) else format_expr(a) for a in args]
        return f"{parts[0]}{name}{parts[1]}"
    return f"{name}(" + ", ".join(format_expr(a) for a in args) + ")"


def _format_coef(c: Fraction, params: tuple, first: bool) -> str:
    sign = "-" if c < 0 else "+"
    mag = abs(c)
    pieces = [str(mag)] if mag != 1 else []
    pieces.extend(params)
    body = " ".join(pieces)
    lead = ("-" if c < 0 else "") if first else f" {sign} "
    return lead + (body + " " if body else "")


def format_terms(terms) -> str:
    if not terms:
        return "0"
    out = []
    for i, ((c, params), expr) in enumerate(terms):
        out.append(_format_coef(c, params, i == 0) + format_expr(expr))
    return "".join(out)


def _generator_lines(generators) -> list:
    return [f"op {g.name} : {g.arity} {_SYMMETRY_PRINT[g.symmetry]};" for g in generators]


def format_presentation(p: Presentation) -> str:
    lines = []
    if p.name:
        lines.append(f'name "{p.name}";')
    lines.extend(_generator_lines(p.generators))
    for identity in p.identities:
        terms = tuple(((c, ()), e) for c, e in identity.terms)
        lines.append(f"{format_terms(terms)} = 0;")
    return "\n".join(lines) + "\n"


def format_document(doc: OpsDocument) -> str:
    lines = []
    if doc.name:
        lines.append(f'name "{doc.name}";')
    lines.extend(_generator_lines(doc.generators))
    if doc.params:
        lines.append("param " + ", ".join(doc.params) + ";")
    for t in doc.templates:
        lines.append(f"{format_terms(t.terms)} = 0;")
    for s in doc.samples:
        lines.append("sample " + ", ".join(str(v) for v in s) + ";")
    for p, vals in doc.grids:
        lines.append(f"grid {p} = " + ", ".join(str(v) for v in vals) + ";")
    for old, a, b in doc.splits:
        lines.append(f"split {old} into {a}, {b};")
    if doc.dual_dims:
        lines.append("dual_dims " + ", ".join(str(d) for d in doc.dual_dims) + ";")
    return "\n".join(lines) + "\n"
