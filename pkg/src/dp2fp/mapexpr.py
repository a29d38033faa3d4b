"""A small expression language for user-supplied plane maps.

Grammar (left associative within each level, '^' binds tightest):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' NAT)?
    atom   := NAT | NAT '/' NAT | 'x' | 'y' | 'n' | IDENT | '(' expr ')'

A NAT '/' NAT pair is one rational literal; '^' takes a nonnegative integer
literal exponent only.  Free identifiers other than x, y, n are parameters
bound at map-construction time.  Evaluation is carrier-generic: constants
are embedded through a per-carrier lift so results always live in the field
of the state variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .epsfield import EpsRational
from .errors import DivisionByZeroError, ParseError
from .padic import FpElem, check_odd_prime, reduce_mod

_VARS = ("x", "y", "n")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Ident:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(source: str):
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(source):
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(source) and source[j].isdigit():
                j += 1
            tokens.append(_Token("NAT", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(source) and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(_Token("IDENT", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append(_Token(ch, ch, line, col))
            col += 1
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col,
                         expected=("NAT", "IDENT", "operator", "'('"))
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self, ahead=0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def fail(self, message, expected):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.column, expected=expected)

    def parse(self):
        node = self.expr()
        if self.peek().kind != "EOF":
            self.fail(f"trailing input {self.peek().text!r}",
                      ("'+'", "'-'", "'*'", "'/'", "EOF"))
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind in ("*", "/"):
            op = self.advance().kind
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        if self.peek().kind == "-":
            self.advance()
            return Neg(self.factor())
        node = self.atom()
        if self.peek().kind == "^":
            self.advance()
            if self.peek().kind != "NAT":
                self.fail("exponent must be a nonnegative integer literal",
                          ("NAT",))
            node = Pow(node, int(self.advance().text))
        return node

    def atom(self):
        tok = self.peek()
        if tok.kind == "NAT":
            self.advance()
            if self.peek().kind == "/" and self.peek(1).kind == "NAT":
                self.advance()
                den = int(self.advance().text)
                if den == 0:
                    raise ParseError("zero denominator in rational literal",
                                     tok.line, tok.column)
                return Num(Fraction(int(tok.text), den))
            return Num(Fraction(int(tok.text)))
        if tok.kind == "IDENT":
            self.advance()
            if tok.text in _VARS:
                return Var(tok.text)
            return Ident(tok.text)
        if tok.kind == "(":
            self.advance()
            node = self.expr()
            if self.peek().kind != ")":
                self.fail("unclosed parenthesis", ("')'",))
            self.advance()
            return node
        self.fail(f"expected an operand, found {tok.text or 'end of input'!r}",
                  ("NAT", "IDENT", "'('", "'-'"))


def parse_map_expr(source: str):
    """Parse one expression into its syntax tree."""
    return _Parser(source).parse()


def print_map_expr(node) -> str:
    """Fully parenthesized rendering; re-parsing gives the same tree.

    Operands are parenthesized individually so a printed quotient of two
    integer atoms cannot be re-read as one rational literal.
    """
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, (Var, Ident)):
        return node.name
    if isinstance(node, Neg):
        return f"(-({print_map_expr(node.arg)}))"
    if isinstance(node, Pow):
        return f"(({print_map_expr(node.base)})^{node.exponent})"
    if isinstance(node, BinOp):
        return (f"(({print_map_expr(node.left)}){node.op}"
                f"({print_map_expr(node.right)}))")
    raise TypeError(f"not a map expression node: {node!r}")


def free_idents(node) -> set:
    if isinstance(node, Ident):
        return {node.name}
    if isinstance(node, Neg):
        return free_idents(node.arg)
    if isinstance(node, Pow):
        return free_idents(node.base)
    if isinstance(node, BinOp):
        return free_idents(node.left) | free_idents(node.right)
    return set()


def uses_variable(node, name: str) -> bool:
    if isinstance(node, Var):
        return node.name == name
    if isinstance(node, Neg):
        return uses_variable(node.arg, name)
    if isinstance(node, Pow):
        return uses_variable(node.base, name)
    if isinstance(node, BinOp):
        return uses_variable(node.left, name) or uses_variable(node.right, name)
    return False


def eval_map_expr(node, x, y, n, bindings, const):
    """Evaluate with state (x, y), time n, parameter bindings, and a lift
    ``const`` embedding Fractions into the carrier of x and y."""
    if isinstance(node, Num):
        return const(node.value)
    if isinstance(node, Var):
        if node.name == "x":
            return x
        if node.name == "y":
            return y
        return const(Fraction(n))
    if isinstance(node, Ident):
        return const(bindings[node.name])
    if isinstance(node, Neg):
        return -eval_map_expr(node.arg, x, y, n, bindings, const)
    if isinstance(node, Pow):
        base = eval_map_expr(node.base, x, y, n, bindings, const)
        if node.exponent == 0:
            return const(Fraction(1))
        return base ** node.exponent
    left = eval_map_expr(node.left, x, y, n, bindings, const)
    right = eval_map_expr(node.right, x, y, n, bindings, const)
    try:
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        return left / right
    except ZeroDivisionError as exc:
        raise DivisionByZeroError("division by zero in custom map") from exc


def _const_for(value):
    if isinstance(value, EpsRational):
        return EpsRational.from_const
    if isinstance(value, FpElem):
        return lambda c, p=value.p: reduce_mod(c, p)
    return Fraction


class CustomMap:
    """A user map (expr_x, expr_y) run through the generic engines.

    Custom maps evolve over exact rationals and the perturbation field
    only; the finite-field fast path is specific to dP-II.
    """

    kind = "custom"

    def __init__(self, expr_x, expr_y, p: int, bindings=None):
        check_odd_prime(p)
        self.expr_x = parse_map_expr(expr_x) if isinstance(expr_x, str) else expr_x
        self.expr_y = parse_map_expr(expr_y) if isinstance(expr_y, str) else expr_y
        self.p = p
        self.bindings = {k: Fraction(v) for k, v in (bindings or {}).items()}
        unbound = (free_idents(self.expr_x) | free_idents(self.expr_y)) \
            - set(self.bindings)
        if unbound:
            raise ParseError(
                f"unbound parameters: {', '.join(sorted(unbound))}", 1, 1,
                expected=("--param name=value",))

    def step(self, x, y, n: int):
        const = _const_for(x)
        return (eval_map_expr(self.expr_x, x, y, n, self.bindings, const),
                eval_map_expr(self.expr_y, x, y, n, self.bindings, const))

    def scan_points(self):
        """Probe the reduced map for singular states: any (x, y, n) where
        the finite-field evaluation divides by zero gets lifted and
        confined.  Autonomous maps are probed at n = 0 only."""
        p = self.p
        autonomous = not (uses_variable(self.expr_x, "n")
                          or uses_variable(self.expr_y, "n"))
        for x_res in range(p):
            for y_res in range(p):
                for n in range(1 if autonomous else p):
                    try:
                        self.step(FpElem(x_res, p), FpElem(y_res, p), n)
                    except DivisionByZeroError:
                        yield (str(x_res), y_res, n,
                               Fraction(x_res), Fraction(y_res), False)
