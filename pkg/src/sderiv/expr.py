"""Parser and printer for the textual language of the toolkit.

Grammar (whitespace between tokens is ignored):

    poly       :=  expression over +, -, * and ^ with atoms:
                     integer        123
                     rational       3/2        ('/' joins integer constants only)
                     variable       x | y
                     parentheses    ( poly )
                     unary minus    -atom
                   '^' takes a literal nonnegative integer exponent;
                   multiplication is always explicit ("2*x", never "2x").
    derivation :=  "dx=" poly ";" "dy=" poly
                |  "shamsuddin" "a=" poly ";" "b=" poly     (polys in x only)
    map        :=  "(" poly "," poly ")"

Parsing is total: every input produces a value or a ``ParseError`` whose
``span`` points back into the source text.  Printing is canonical
(graded-lex term order, x before y) and round-trips through the parser.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .derivation import Derivation
from .dynamics import PolyMap
from .polyring import BPoly, UPoly, Y

__all__ = ["SourceSpan", "ParseError", "parse_poly", "parse_derivation", "parse_map", "format"]

_MAX_DEPTH = 64


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int

    def __post_init__(self):
        if not (0 <= self.start <= self.end):
            raise ValueError("invalid span")

    def __str__(self) -> str:
        return f"{self.start}..{self.end}"


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{message} at {span}")
        self.message = message
        self.span = span


@dataclass(frozen=True)
class _Token:
    kind: str  # int | var | ident | op | eof
    text: str
    span: SourceSpan
    value: Optional[int] = None


_OPS = set("+-*^()/;=,")


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        start = pos
        if ch.isdigit():
            while pos < n and text[pos].isdigit():
                pos += 1
            tokens.append(_Token("int", text[start:pos], SourceSpan(start, pos), int(text[start:pos])))
            continue
        if ch.isalpha():
            while pos < n and text[pos].isalnum():
                pos += 1
            word = text[start:pos]
            kind = "var" if word in ("x", "y") else "ident"
            tokens.append(_Token(kind, word, SourceSpan(start, pos)))
            continue
        if ch in _OPS:
            pos += 1
            tokens.append(_Token("op", ch, SourceSpan(start, pos)))
            continue
        raise ParseError(f"unknown symbol {ch!r}", SourceSpan(start, start + 1))
    tokens.append(_Token("eof", "", SourceSpan(n, n)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect_op(self, op: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind == "op" and tok.text == op:
            return self.next()
        raise ParseError(f"expected {what}", tok.span)

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text in ops

    # precedence: 1 for + and -, 2 for * and /, 3 for ^ and unary minus
    def expression(self, min_prec: int = 1, depth: int = 0) -> BPoly:
        if depth > _MAX_DEPTH:
            raise ParseError("expression too deeply nested", self.peek().span)
        lhs = self.atom(depth)
        while True:
            tok = self.peek()
            if tok.kind != "op":
                break
            if tok.text in "+-":
                prec = 1
            elif tok.text in "*/":
                prec = 2
            elif tok.text == "^":
                prec = 3
            else:
                break
            if prec < min_prec:
                break
            self.next()
            if tok.text == "^":
                lhs = lhs ** self._exponent(tok)
                continue
            if tok.text == "/":
                rhs = self.expression(prec + 1, depth + 1)
                lhs = self._rational(lhs, rhs, tok)
                continue
            rhs = self.expression(prec + 1, depth + 1)
            if tok.text == "+":
                lhs = lhs + rhs
            elif tok.text == "-":
                lhs = lhs - rhs
            else:
                lhs = lhs * rhs
        return lhs

    def atom(self, depth: int) -> BPoly:
        tok = self.next()
        if tok.kind == "int":
            return BPoly.const(tok.value)
        if tok.kind == "var":
            return BPoly.variable(tok.text)
        if tok.kind == "op" and tok.text == "(":
            if depth > _MAX_DEPTH:
                raise ParseError("expression too deeply nested", tok.span)
            inner = self.expression(1, depth + 1)
            close = self.peek()
            if not (close.kind == "op" and close.text == ")"):
                raise ParseError("unbalanced parentheses", tok.span)
            self.next()
            return inner
        if tok.kind == "op" and tok.text == "-":
            # unary minus binds below ^ so that -x^2 means -(x^2)
            return -self.expression(3, depth + 1)
        if tok.kind == "eof":
            raise ParseError("unexpected end of input", tok.span)
        if tok.kind == "ident":
            raise ParseError(f"unknown symbol {tok.text!r}", tok.span)
        raise ParseError(f"unexpected token {tok.text!r}", tok.span)

    def _exponent(self, caret: _Token) -> int:
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return tok.value
        if tok.kind == "op" and tok.text == "-":
            raise ParseError("exponent must be a nonnegative integer", tok.span)
        span = caret.span if tok.kind == "eof" else tok.span
        raise ParseError("expected integer exponent after '^'", span)

    def _rational(self, lhs: BPoly, rhs: BPoly, slash: _Token) -> BPoly:
        if lhs.total_degree not in (None, 0) or rhs.total_degree not in (None, 0):
            raise ParseError("'/' builds rational constants only (write 1/2*x, not x/2)", slash.span)
        d = rhs.coefficient(0, 0)
        if d == 0:
            raise ParseError("division by zero", slash.span)
        return BPoly.const(Fraction(lhs.coefficient(0, 0), 1) / d)


def _parse_all(parser: _Parser) -> BPoly:
    value = parser.expression()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected token {tok.text!r}", tok.span)
    return value


def parse_poly(text: str) -> BPoly:
    """Parse a polynomial in x and y; raises ParseError on bad input."""
    tokens = _tokenize(text)
    if tokens[0].kind == "eof":
        raise ParseError("empty input", SourceSpan(0, 0))
    return _parse_all(_Parser(tokens))


def _parse_clause(parser: _Parser, keyword: str) -> tuple[BPoly, SourceSpan]:
    tok = parser.peek()
    if not (tok.kind in ("ident", "var") and tok.text == keyword):
        raise ParseError(f"expected '{keyword}='", tok.span)
    parser.next()
    parser.expect_op("=", f"'=' after '{keyword}'")
    start = parser.peek().span.start
    value = parser.expression()
    end = parser.tokens[parser.pos - 1].span.end if parser.pos else start
    return value, SourceSpan(start, max(start, end))


def parse_derivation(text: str) -> Derivation:
    """Parse "dx=...; dy=..." or the shorthand "shamsuddin a=...; b=..."."""
    tokens = _tokenize(text)
    if tokens[0].kind == "eof":
        raise ParseError("empty input", SourceSpan(0, 0))
    parser = _Parser(tokens)
    head = parser.peek()
    if head.kind == "ident" and head.text == "shamsuddin":
        parser.next()
        a_poly, a_span = _parse_clause(parser, "a")
        parser.expect_op(";", "';' between clauses")
        b_poly, b_span = _parse_clause(parser, "b")
        _expect_eof(parser)
        for poly, span in ((a_poly, a_span), (b_poly, b_span)):
            if not poly.is_zero and poly.deg_y > 0:
                raise ParseError("y not allowed in shamsuddin coefficients", span)
        dy = a_poly * Y + b_poly
        return Derivation(BPoly.const(1), dy)
    dx_poly, _ = _parse_clause(parser, "dx")
    parser.expect_op(";", "';' between clauses")
    dy_poly, _ = _parse_clause(parser, "dy")
    _expect_eof(parser)
    return Derivation(dx_poly, dy_poly)


def parse_map(text: str) -> PolyMap:
    """Parse a polynomial map "(f, g)"."""
    tokens = _tokenize(text)
    if tokens[0].kind == "eof":
        raise ParseError("empty input", SourceSpan(0, 0))
    parser = _Parser(tokens)
    parser.expect_op("(", "'('")
    f = parser.expression()
    tok = parser.peek()
    if tok.kind == "op" and tok.text == ")":
        raise ParseError("expected two components", tok.span)
    parser.expect_op(",", "',' between components")
    g = parser.expression()
    close = parser.peek()
    if close.kind == "op" and close.text == ",":
        raise ParseError("expected two components", close.span)
    parser.expect_op(")", "')'")
    _expect_eof(parser)
    return PolyMap(f, g)


def _expect_eof(parser: _Parser) -> None:
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected token {tok.text!r}", tok.span)


def format(value) -> str:
    """Canonical text for polynomials, derivations, maps and verdicts.

    The polynomial forms round-trip: parse(format(v)) == v.
    """
    if isinstance(value, (BPoly, UPoly)):
        return str(value)
    if isinstance(value, Derivation):
        return f"dx={value.dx}; dy={value.dy}"
    if isinstance(value, PolyMap):
        return f"({value.f}, {value.g})"
    from .derivation import DarbouxWitness, ShamsuddinForm

    if isinstance(value, ShamsuddinForm):
        return f"shamsuddin a={value.a}; b={value.b}"
    if isinstance(value, DarbouxWitness):
        return f"f = {value.f}; cofactor = {value.cofactor}"
    from .simplicity import OdeVerdict, SimplicityVerdict

    if isinstance(value, OdeVerdict):
        return "NoSolution" if value.solution is None else f"Solution(r = {value.solution})"
    if isinstance(value, SimplicityVerdict):
        if value.simple:
            return "Simple"
        lines = ["NotSimple", f"witness: {value.witness.f}", f"cofactor: {value.witness.cofactor}"]
        if value.ode_solution is not None:
            lines.append(f"ode solution: r = {value.ode_solution}")
        return "\n".join(lines)
    from .isotropy import IsotropyCertificate, IsotropyEnumeration

    if isinstance(value, IsotropyCertificate):
        lines = [f"isotropy certificate for {format(value.form)}"]
        for step in value.steps:
            lines.append(f"  [{step.key}] {step.claim} -- {'ok' if step.passed else 'FAILED'}")
        lines.append(f"conclusion: {value.conclusion}")
        return "\n".join(lines)
    if isinstance(value, IsotropyEnumeration):
        lines = [f"{len(value.maps)} map(s) in the box (deg_bound={value.deg_bound}, "
                 f"grid={{{', '.join(str(c) for c in value.grid)}}})"]
        lines.extend(format(m) for m in value.maps)
        return "\n".join(lines)
    from .dynamics import AutomorphismCert, DynDegreeEstimate, FixedPointReport, JacobianRejection

    if isinstance(value, DynDegreeEstimate):
        seq = ", ".join(str(d) for d in value.degrees)
        return (f"degrees: [{seq}]\nbounded: {'true' if value.bounded else 'false'}\n"
                f"dynamical degree estimate: {value.estimate}")
    if isinstance(value, FixedPointReport):
        pts = "; ".join(f"({p}, {q})" for p, q in value.rational_points) or "none"
        return f"rational fixed points: {pts}\nover the algebraic closure: {value.closure_verdict.value}"
    if isinstance(value, AutomorphismCert):
        lines = [f"automorphism certificate: jacobian determinant = {value.jacobian_det}"]
        if value.inverse is not None:
            lines.append(f"inverse: {format(value.inverse)}")
        else:
            lines.append("inverse: not constructed (constant Jacobian is necessary, not sufficient)")
        return "\n".join(lines)
    if isinstance(value, JacobianRejection):
        return f"rejected: jacobian determinant is not a nonzero constant: {value.det}"
    raise TypeError(f"cannot format {type(value).__name__}")
