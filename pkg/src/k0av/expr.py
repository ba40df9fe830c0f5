"""Surface syntax for Grothendieck-group arithmetic.

Grammar (whitespace insignificant):

    expr     := term { ("+" | "-") term }
    term     := [ integer "*" ] atom
    atom     := class | "dual" "(" expr ")"
    class    := "[" nat ";" degspec "]"
    degspec  := rational | kernel
    rational := nat [ "/" nat ]
    kernel   := "{" pair { "," pair } "}"
    pair     := ("zp" | "mup" | "alphap" | "coprime") ":" nat

Literals are arbitrary precision.  `print_expression` emits a canonical
rendering; parse(print(parse(s))) = parse(s) for every valid s.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .contexts import IsogenyContext
from .errors import ContextMismatchError, ParseError
from .k0 import K0Element, k0_class
from .kernels import kernel_from_counts, parse_kernel_literal


@dataclass(frozen=True)
class KernelSpec:
    """Kernel literal before a context supplies the characteristic."""

    zp: int = 0
    mup: int = 0
    alphap: int = 0
    coprime: int = 1

    def counts(self) -> dict[str, int]:
        return {"zp": self.zp, "mup": self.mup, "alphap": self.alphap, "coprime": self.coprime}


@dataclass(frozen=True)
class ClassAtom:
    n: int
    spec: Union[Fraction, KernelSpec]


@dataclass(frozen=True)
class Dual:
    inner: "Sum"


@dataclass(frozen=True)
class Sum:
    terms: tuple[tuple[int, Union[ClassAtom, Dual]], ...]


Node = Union[Sum, Dual, ClassAtom]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(.))", re.DOTALL)
_SYMBOLS = set("[];*+-/(){}:,")


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int" | "name" | symbol | "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            toks.append(_Tok("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(_Tok("name", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in _SYMBOLS:
                raise ParseError(f"unexpected character {ch!r}", m.start(3), "expression syntax")
            toks.append(_Tok(ch, ch, m.start(3)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, expected: str) -> _Tok:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"found {t.text!r}" if t.text else "input ended", t.pos, expected)
        return self.take()

    def parse(self) -> Sum:
        node = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"trailing input {t.text!r}", t.pos, "'+', '-', or end of input")
        return node

    def expr(self) -> Sum:
        terms = [self.term(1)]
        while self.peek().kind in ("+", "-"):
            sign = 1 if self.take().kind == "+" else -1
            terms.append(self.term(sign))
        return Sum(tuple(terms))

    def term(self, sign: int) -> tuple[int, Union[ClassAtom, Dual]]:
        coef = 1
        t = self.peek()
        if t.kind == "-" or t.kind == "int":
            neg = False
            if t.kind == "-":
                self.take()
                neg = True
            lit = self.expect("int", "integer coefficient")
            coef = -int(lit.text) if neg else int(lit.text)
            if coef == 0:
                raise ParseError("zero coefficient", lit.pos, "nonzero integer")
            self.expect("*", "'*' after coefficient")
        return (sign * coef, self.atom())

    def atom(self) -> Union[ClassAtom, Dual]:
        t = self.peek()
        if t.kind == "name":
            if t.text != "dual":
                raise ParseError(f"unknown name {t.text!r}", t.pos, "'dual'")
            self.take()
            self.expect("(", "'(' after dual")
            inner = self.expr()
            self.expect(")", "')'")
            return Dual(inner)
        if t.kind == "[":
            return self.class_atom()
        raise ParseError(
            f"found {t.text!r}" if t.text else "input ended", t.pos, "'[' or 'dual'"
        )

    def class_atom(self) -> ClassAtom:
        self.expect("[", "'['")
        lit = self.expect("int", "positive multiplicity")
        n = int(lit.text)
        if n < 1:
            raise ParseError("multiplicity must be positive", lit.pos, "positive integer")
        self.expect(";", "';' between multiplicity and degree")
        spec = self.degspec()
        self.expect("]", "']'")
        return ClassAtom(n, spec)

    def degspec(self) -> Union[Fraction, KernelSpec]:
        t = self.peek()
        if t.kind == "int":
            num = int(self.take().text)
            den = 1
            if self.peek().kind == "/":
                self.take()
                den = int(self.expect("int", "denominator").text)
            if num == 0 or den == 0:
                raise ParseError("degree must be a positive rational", t.pos, "positive rational")
            return Fraction(num, den)
        if t.kind == "{":
            start = t.pos
            end = self.text.find("}", start)
            if end < 0:
                raise ParseError("unterminated kernel literal", start, "'}'")
            try:
                counts = parse_kernel_literal(self.text[start : end + 1])
            except ParseError as exc:
                raise ParseError(exc.message, start + exc.pos, exc.expected) from None
            while self.peek().kind != "end" and self.peek().pos <= end:
                self.take()
            return KernelSpec(**counts)
        raise ParseError(
            f"found {t.text!r}" if t.text else "input ended", t.pos, "rational or kernel literal"
        )


def parse_expression(text: str) -> Sum:
    return _Parser(text).parse()


def _print_spec(spec: Union[Fraction, KernelSpec]) -> str:
    if isinstance(spec, Fraction):
        return str(spec.numerator) if spec.denominator == 1 else f"{spec.numerator}/{spec.denominator}"
    fields = []
    for key, val, default in (
        ("zp", spec.zp, 0),
        ("mup", spec.mup, 0),
        ("alphap", spec.alphap, 0),
        ("coprime", spec.coprime, 1),
    ):
        if val != default:
            fields.append(f"{key}:{val}")
    return "{" + ", ".join(fields) + "}"


def _print_atom(node: Union[ClassAtom, Dual]) -> str:
    if isinstance(node, Dual):
        return f"dual({print_expression(node.inner)})"
    return f"[{node.n}; {_print_spec(node.spec)}]"


def print_expression(node: Node) -> str:
    """Canonical rendering; inverse of parse_expression up to AST equality."""
    if isinstance(node, (ClassAtom, Dual)):
        node = Sum(((1, node),))
    parts: list[str] = []
    for i, (coef, atom) in enumerate(node.terms):
        body = _print_atom(atom) if abs(coef) == 1 else f"{abs(coef)}*{_print_atom(atom)}"
        if i == 0:
            parts.append(body if coef > 0 else f"-1*{_print_atom(atom)}" if coef == -1 else f"-{abs(coef)}*{_print_atom(atom)}")
        else:
            parts.append(("+ " if coef > 0 else "- ") + body)
    return " ".join(parts)


def eval_expression(ctx: IsogenyContext, node: Node) -> K0Element:
    """Evaluate to canonical form; dual distributes over sums."""
    if isinstance(node, Sum):
        acc = K0Element(0, ctx.identity())
        for coef, atom in node.terms:
            acc = acc + eval_expression(ctx, atom).scale(coef)
        return acc
    if isinstance(node, Dual):
        return eval_expression(ctx, node.inner).dual()
    spec = node.spec
    if isinstance(spec, KernelSpec):
        p = getattr(ctx, "p", None)
        if p is None:
            raise ContextMismatchError("kernel literal requires a characteristic-p context")
        return k0_class(ctx, node.n, kernel_from_counts(p, spec.counts()))
    return k0_class(ctx, node.n, spec)
