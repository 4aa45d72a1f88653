"""A tiny recursive-descent parser for scalar expressions in ``t``.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := unary ('^' factor)?
    unary  := '-'? atom
    atom   := number | 't' | 'pi' | fn '(' expr ')' | '(' expr ')'
    fn     := sin | cos | exp | ln | sqrt | abs

``^`` is right associative and binds tighter than ``*``, but a leading minus
belongs to the atom, so ``-t^2`` is ``(-t)^2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from fmgl.errors import DomainError, FmglError

FUNCTIONS = ("sin", "cos", "exp", "ln", "sqrt", "abs")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


class ParseError(FmglError, ValueError):
    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        if expected:
            message = f"{message} (expected one of: {', '.join(sorted(expected))})"
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.expected = expected


class UnknownIdentifierError(ParseError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r}", offset)
        self.name = name


# {{{ ast


Span = tuple[int, int]


@dataclass(frozen=True)
class Num:
    value: float
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Pi:
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    operand: Node
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Node
    right: Node
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    name: str
    arg: Node
    span: Span = field(default=(0, 0), compare=False, repr=False)


Node = Union[Num, Var, Pi, Neg, BinOp, Call]

# }}}


# {{{ parser


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        assert kind is not None
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()

    tokens.append(_Token("eof", "", len(src)))
    return tokens


_ATOM_START = frozenset({"number", "t", "pi", "(", *FUNCTIONS})


class _Parser:
    def __init__(self, src: str) -> None:
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        if self.tok.text != text or self.tok.kind == "eof":
            self.fail(frozenset({text}))
        return self.advance()

    def fail(self, expected: frozenset[str]) -> None:
        tok = self.tok
        what = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"unexpected {what}", tok.offset, expected)

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "eof":
            self.fail(frozenset({"+", "-", "*", "/", "^", "end of input"}))
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.advance().text
            rhs = self.term()
            node = BinOp(op, node, rhs, (node.span[0], rhs.span[1]))
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op = self.advance().text
            rhs = self.factor()
            node = BinOp(op, node, rhs, (node.span[0], rhs.span[1]))
        return node

    def factor(self) -> Node:
        base = self.unary()
        if self.tok.text == "^" and self.tok.kind == "op":
            self.advance()
            exponent = self.factor()
            return BinOp("^", base, exponent, (base.span[0], exponent.span[1]))
        return base

    def unary(self) -> Node:
        if self.tok.text == "-" and self.tok.kind == "op":
            start = self.advance().offset
            operand = self.atom()
            return Neg(operand, (start, operand.span[1]))
        return self.atom()

    def atom(self) -> Node:
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return Num(float(tok.text), (tok.offset, tok.offset + len(tok.text)))

        if tok.kind == "ident":
            end = tok.offset + len(tok.text)
            if tok.text == "t":
                self.advance()
                return Var((tok.offset, end))
            if tok.text == "pi":
                self.advance()
                return Pi((tok.offset, end))
            if tok.text in FUNCTIONS:
                self.advance()
                self.expect("(")
                arg = self.expr()
                close = self.expect(")")
                return Call(tok.text, arg, (tok.offset, close.offset + 1))
            raise UnknownIdentifierError(tok.text, tok.offset)

        if tok.text == "(" and tok.kind == "op":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node

        self.fail(_ATOM_START)
        raise AssertionError("unreachable")


def parse(src: str) -> Node:
    """Parse *src* into an expression tree.

    :raises ParseError: with the offset of the offending token and the set of
        tokens that would have been accepted there.
    :raises UnknownIdentifierError: for names other than ``t``, ``pi`` and
        the supported functions.
    """
    if not src.strip():
        raise ParseError("empty expression", 0, _ATOM_START)
    return _Parser(src).parse()


# }}}


# {{{ evaluation


def _check_domain(name: str, x: np.ndarray, ok: np.ndarray) -> None:
    if not np.all(ok):
        bad = np.asarray(x)[~ok].flat[0]
        raise DomainError(f"{name}({bad!r}) is undefined")


def evaluate(node: Node, t):
    """Evaluate *node* at *t* (a float or a numpy array)."""
    if isinstance(node, Num):
        return node.value + 0.0 * t
    if isinstance(node, Var):
        return t + 0.0
    if isinstance(node, Pi):
        return np.pi + 0.0 * t
    if isinstance(node, Neg):
        return -evaluate(node.operand, t)

    if isinstance(node, BinOp):
        a = evaluate(node.left, t)
        b = evaluate(node.right, t)
        with np.errstate(all="ignore"):
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            if node.op == "/":
                _check_domain("1/", b, np.asarray(b) != 0)
                return a / b
            if node.op == "^":
                r = np.power(np.asarray(a, dtype=np.float64), b)
                _check_domain("pow", a, np.isfinite(r) | ~np.isfinite(np.asarray(a)))
                return r if np.ndim(r) else float(r)
        raise ValueError(f"unknown operator: {node.op!r}")

    if isinstance(node, Call):
        x = evaluate(node.arg, t)
        if node.name == "sin":
            return np.sin(x)
        if node.name == "cos":
            return np.cos(x)
        if node.name == "exp":
            return np.exp(x)
        if node.name == "abs":
            return np.abs(x)
        if node.name == "ln":
            _check_domain("ln", x, np.asarray(x) > 0)
            return np.log(x)
        if node.name == "sqrt":
            _check_domain("sqrt", x, np.asarray(x) >= 0)
            return np.sqrt(x)
        raise ValueError(f"unknown function: {node.name!r}")

    raise TypeError(f"not an expression node: {type(node).__name__}")


# }}}


# {{{ printing


def to_source(node: Node) -> str:
    """Print *node* back to source; every binary operation is parenthesized,
    so ``parse(to_source(node)) == node``.
    """
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "t"
    if isinstance(node, Pi):
        return "pi"
    if isinstance(node, Neg):
        return f"-({to_source(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({to_source(node.arg)})"
    raise TypeError(f"not an expression node: {type(node).__name__}")


# }}}


# {{{ random expressions


def random_expression(rng, depth: int = 4) -> Node:
    """A random tree of at most *depth* levels, drawn with ``rng`` (a
    :class:`random.Random`). Used to build parser test corpora.
    """
    if depth <= 1 or rng.random() < 0.25:
        kind = rng.randrange(3)
        if kind == 0:
            return Var()
        if kind == 1:
            return Pi()
        return Num(round(rng.uniform(0.0, 10.0), rng.randrange(4)))

    kind = rng.randrange(4)
    if kind == 0:
        return Neg(random_expression(rng, depth - 1))
    if kind == 1:
        return Call(rng.choice(FUNCTIONS), random_expression(rng, depth - 1))
    op = rng.choice("+-*/^")
    return BinOp(op, random_expression(rng, depth - 1), random_expression(rng, depth - 1))


# }}}
