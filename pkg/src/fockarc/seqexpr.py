"""Closed-form expression language for user-defined sequences.

Grammar (EBNF, also in docs/expression-grammar.md):

    expr   = term { ("+" | "-") term } ;
    term   = unary { ("*" | "/") unary } ;
    unary  = "-" unary | power ;
    power  = atom [ "^" unary ] ;
    atom   = NUMBER | NAME | NAME "(" expr { "," expr } ")" | "(" expr ")" ;
    NUMBER = DIGIT { DIGIT } [ "." DIGIT { DIGIT } ] ;
    NAME   = LETTER { LETTER | DIGIT | "_" } ;

``+ - * /`` associate to the left, ``^`` to the right.  The exponent of
``^`` must evaluate to a nonnegative integer so that exact evaluation is
closed under the rationals.  NAME is the index variable ``n``, a bound
parameter, or one of the functions ``sqrt(x)`` and ``qsum(q, m)`` =
1 + q + ... + q^m.  There is no implicit multiplication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

Scalar = Union[Fraction, float]

_FUNCTIONS = {"sqrt": 1, "qsum": 2}


class ExprSyntaxError(ValueError):
    """Malformed expression text; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int, expected: str | None = None):
        self.offset = offset
        self.expected = expected
        hint = f"; expected {expected}" if expected else ""
        super().__init__(f"{message} at offset {offset}{hint}")


class ExprEvalError(ValueError):
    """Evaluation failure: division by zero, unbound parameter, or a value
    that cannot be represented exactly in exact mode."""


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Name:
    ident: str


@dataclass(frozen=True)
class Neg:
    operand: "Expression"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


Expression = Union[Num, Name, Neg, BinOp, Call]


# ---------------------------------------------------------------------------
# Lexer

_TOK_NUMBER = "number"
_TOK_NAME = "name"
_TOK_OP = "op"
_TOK_LPAREN = "("
_TOK_RPAREN = ")"
_TOK_COMMA = ","
_TOK_END = "end"


def _tokenize(text: str):
    tokens = []
    i, size = 0, len(text)
    while i < size:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            start = i
            while i < size and text[i].isdigit():
                i += 1
            if i < size and text[i] == ".":
                i += 1
                if i >= size or not text[i].isdigit():
                    raise ExprSyntaxError("malformed number", i - 1, "digits after '.'")
                while i < size and text[i].isdigit():
                    i += 1
            tokens.append((_TOK_NUMBER, text[start:i], start))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < size and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append((_TOK_NAME, text[start:i], start))
            continue
        if ch in "+-*/^":
            tokens.append((_TOK_OP, ch, i))
            i += 1
            continue
        if ch == "(":
            tokens.append((_TOK_LPAREN, ch, i))
            i += 1
            continue
        if ch == ")":
            tokens.append((_TOK_RPAREN, ch, i))
            i += 1
            continue
        if ch == ",":
            tokens.append((_TOK_COMMA, ch, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append((_TOK_END, "", size))
    return tokens


# ---------------------------------------------------------------------------
# Parser (recursive descent, standard precedence)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected: str):
        kind, text, offset = self.peek()
        what = "end of input" if kind == _TOK_END else repr(text)
        raise ExprSyntaxError(f"unexpected {what}", offset, expected)

    def expect(self, kind: str, expected: str):
        if self.peek()[0] != kind:
            self.fail(expected)
        return self.advance()

    def parse(self) -> Expression:
        node = self.expr()
        if self.peek()[0] != _TOK_END:
            self.fail("operator or end of input")
        return node

    def expr(self) -> Expression:
        node = self.term()
        while self.peek()[0] == _TOK_OP and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expression:
        node = self.unary()
        while self.peek()[0] == _TOK_OP and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expression:
        if self.peek()[0] == _TOK_OP and self.peek()[1] == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        if self.peek()[0] == _TOK_OP and self.peek()[1] == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expression:
        kind, text, offset = self.peek()
        if kind == _TOK_NUMBER:
            self.advance()
            return Num(Fraction(text))
        if kind == _TOK_NAME:
            self.advance()
            if self.peek()[0] == _TOK_LPAREN:
                if text not in _FUNCTIONS:
                    raise ExprSyntaxError(f"unknown function {text!r}", offset)
                self.advance()
                args = [self.expr()]
                while self.peek()[0] == _TOK_COMMA:
                    self.advance()
                    args.append(self.expr())
                self.expect(_TOK_RPAREN, "')'")
                if len(args) != _FUNCTIONS[text]:
                    raise ExprSyntaxError(
                        f"{text} takes {_FUNCTIONS[text]} argument(s), got {len(args)}",
                        offset,
                    )
                return Call(text, tuple(args))
            return Name(text)
        if kind == _TOK_LPAREN:
            self.advance()
            node = self.expr()
            self.expect(_TOK_RPAREN, "')'")
            return node
        self.fail("a number, name, '(' or '-'")


def parse(text: str) -> Expression:
    """Parse expression text into an AST.

    Raises ExprSyntaxError with the byte offset and an expected-token hint
    on malformed input.
    """
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0, "an expression")
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Pretty printer.  to_text(parse(s)) reparses to a structurally identical
# tree; parenthesization is driven by a minimal-precedence context.  Unary
# minus sits between the multiplicative level and ^ in this grammar:
# "-a*b" parses as (-a)*b while "-a^b" parses as -(a^b).

_PREC_ADD = 10
_PREC_MUL = 20
_PREC_NEG = 25
_PREC_POW = 30
_PREC_ATOM = 100


def _num_literal(value: Fraction) -> str:
    if value < 0:
        raise ValueError("negative literals are printed via unary minus")
    if value.denominator == 1:
        return str(value.numerator)
    # Terminating decimals only: denominator 2^a * 5^b.
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        raise ValueError(f"{value} has no literal form (non-terminating decimal)")
    k = max(twos, fives)
    digits = value.numerator * 10**k // value.denominator
    text = str(digits).rjust(k + 1, "0")
    return f"{text[:-k]}.{text[-k:]}"


def to_text(node: Expression) -> str:
    return _render(node, 0)


def _render(node: Expression, min_prec: int) -> str:
    if isinstance(node, Num):
        text, prec = _num_literal(node.value), _PREC_ATOM
    elif isinstance(node, Name):
        text, prec = node.ident, _PREC_ATOM
    elif isinstance(node, Call):
        text = f"{node.func}({', '.join(_render(a, 0) for a in node.args)})"
        prec = _PREC_ATOM
    elif isinstance(node, Neg):
        text, prec = "-" + _render(node.operand, _PREC_NEG + 1), _PREC_NEG
    elif node.op in "+-":
        text = _render(node.left, _PREC_ADD) + node.op + _render(node.right, _PREC_ADD + 1)
        prec = _PREC_ADD
    elif node.op in "*/":
        text = _render(node.left, _PREC_MUL) + node.op + _render(node.right, _PREC_MUL + 1)
        prec = _PREC_MUL
    else:  # ^
        text = _render(node.left, _PREC_POW + 1) + "^" + _render(node.right, _PREC_POW)
        prec = _PREC_POW
    if prec < min_prec:
        return f"({text})"
    return text


# ---------------------------------------------------------------------------
# Evaluation


def _exact_sqrt(value: Fraction) -> Fraction:
    if value < 0:
        raise ExprEvalError("sqrt of a negative value")
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise ExprEvalError(f"sqrt({value}) is irrational; not exact-representable")
    return Fraction(rn, rd)


def evaluate(
    node: Expression,
    n: int,
    params: Mapping[str, Scalar] | None = None,
    mode: str = "exact",
) -> Scalar:
    """Evaluate an AST at integer index ``n`` with all parameters bound.

    Exact mode works in Fractions and raises ExprEvalError when a value
    leaves the rationals (sqrt of a non-square).  Float mode works in
    doubles.  Division by zero and unbound parameters raise ExprEvalError
    in both modes.
    """
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    if n < 0:
        raise ValueError("sequence index must be nonnegative")
    exact = mode == "exact"
    env = {"n": Fraction(n) if exact else float(n)}
    for key, val in (params or {}).items():
        env[key] = Fraction(val) if exact else float(val)
    return _eval(node, env, exact)


def _as_exponent(value: Scalar) -> int:
    if isinstance(value, Fraction):
        if value.denominator != 1 or value < 0:
            raise ExprEvalError(f"exponent must be a nonnegative integer, got {value}")
        return value.numerator
    if value < 0 or value != int(value):
        raise ExprEvalError(f"exponent must be a nonnegative integer, got {value}")
    return int(value)


def _eval(node: Expression, env, exact: bool) -> Scalar:
    if isinstance(node, Num):
        return node.value if exact else float(node.value)
    if isinstance(node, Name):
        try:
            return env[node.ident]
        except KeyError:
            raise ExprEvalError(f"unbound parameter {node.ident!r}") from None
    if isinstance(node, Neg):
        return -_eval(node.operand, env, exact)
    if isinstance(node, Call):
        args = [_eval(a, env, exact) for a in node.args]
        if node.func == "sqrt":
            if exact:
                return _exact_sqrt(args[0])
            if args[0] < 0:
                raise ExprEvalError("sqrt of a negative value")
            return math.sqrt(args[0])
        # qsum(q, m) = 1 + q + ... + q^m
        m = _as_exponent(args[1])
        q = args[0]
        if q == 1:
            return Fraction(m + 1) if exact else float(m + 1)
        return (1 - q ** (m + 1)) / (1 - q)
    left = _eval(node.left, env, exact)
    if node.op == "^":
        return left ** _as_exponent(_eval(node.right, env, exact))
    right = _eval(node.right, env, exact)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if right == 0:
        raise ExprEvalError(f"division by zero at n={int(env['n'])}")
    return left / right
