"""A small operator-expression language for Hamiltonians and observables.

Grammar (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = atom [ "^" INTEGER ] ;
    atom    = NUMBER | NAME | FUNC "(" expr ")" | "(" expr ")" ;

``x`` and ``p`` are the position and momentum operators; ``Phi`` and ``A``
are the (diagonal) scalar and vector potentials at time ``t``; ``m``, ``e``,
``c``, ``hbar`` and ``t`` are scalars. Functions (sin, cos, exp, sqr) only
accept arguments that are diagonal in position. Products compose operators
left to right, so ``x*p`` and ``p*x`` differ.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .grid1d import Grid, HamiltonianSpec, _potential_samples, build_momentum, derivative_matrix
from .operators import GeneralOperator

SYMBOLS = ("x", "p", "Phi", "A")
PARAMETERS = ("m", "e", "c", "hbar", "t")
FUNCTIONS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "sqr": np.square}


class ExprError(ValueError):
    def __init__(self, message: str, column: int | None = None):
        where = f" at column {column}" if column is not None else ""
        super().__init__(f"{message}{where}")
        self.column = column


class UnsupportedConstruct(ExprError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # number | identifier | operator | paren | comma | end
    lexeme: str
    column: int  # 1-based


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<identifier>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<operator>[-+*/^])
  | (?P<paren>[()])
  | (?P<comma>,)
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprError(f"illegal character {text[pos]!r}", pos + 1)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    return tokens


# -- AST --------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Num, Param, Sym, Call, Neg, Add, Sub, Mul, Div, Pow]
_BINARY = {"+": Add, "-": Sub, "*": Mul, "/": Div}
_BINARY_SYMBOL = {cls: op for op, cls in _BINARY.items()}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ExprError("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, lexeme: str) -> Token:
        tok = self.peek()
        if tok is None:
            raise ExprError(f"expected {lexeme!r} but input ended")
        if tok.lexeme != lexeme:
            raise ExprError(f"expected {lexeme!r}, found {tok.lexeme!r}", tok.column)
        self.i += 1
        return tok

    def at(self, *lexemes: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "operator" and tok.lexeme in lexemes

    def expr(self) -> Expr:
        node = self.term()
        while self.at("+", "-"):
            op = self.next().lexeme
            node = _BINARY[op](node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.at("*", "/"):
            op = self.next().lexeme
            node = _BINARY[op](node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.at("-"):
            self.next()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at("^"):
            self.next()
            tok = self.next()
            if tok.kind != "number" or not tok.lexeme.isdigit():
                raise ExprError(f"exponent must be a non-negative integer literal, found {tok.lexeme!r}", tok.column)
            return Pow(base, int(tok.lexeme))
        return base

    def atom(self) -> Expr:
        tok = self.next()
        if tok.kind == "number":
            return Num(float(tok.lexeme))
        if tok.lexeme == "(":
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "identifier":
            name = tok.lexeme
            if name in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                if self.peek() is not None and self.peek().kind == "comma":
                    raise ExprError(f"{name} takes exactly one argument", self.peek().column)
                self.expect(")")
                return Call(name, arg)
            if name in SYMBOLS:
                return Sym(name)
            if name in PARAMETERS:
                return Param(name)
            raise ExprError(f"unknown identifier {name!r}", tok.column)
        raise ExprError(f"unexpected token {tok.lexeme!r}", tok.column)


def parse(tokens: list[Token] | str) -> Expr:
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    parser = _Parser(list(tokens))
    if not parser.tokens:
        raise ExprError("empty expression")
    node = parser.expr()
    extra = parser.peek()
    if extra is not None:
        msg = "unbalanced ')'" if extra.lexeme == ")" else f"unexpected token {extra.lexeme!r}"
        raise ExprError(msg, extra.column)
    return node


def to_text(node: Expr) -> str:
    """Render an AST as text that parses back to the same AST."""
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, (Param, Sym)):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    if isinstance(node, Neg):
        return f"-{_wrap(node.operand)}"
    if isinstance(node, Pow):
        return f"{_wrap(node.base)}^{node.exponent}"
    return f"{_wrap(node.left)} {_BINARY_SYMBOL[type(node)]} {_wrap(node.right)}"


def _wrap(node: Expr) -> str:
    text = to_text(node)
    if isinstance(node, (Param, Sym, Call)) or (isinstance(node, Num) and "e" not in text):
        return text
    return f"({text})"


def mentions(node: Expr, names: set[str]) -> bool:
    if isinstance(node, (Param, Sym)):
        return node.name in names
    if isinstance(node, Num):
        return False
    if isinstance(node, (Call,)):
        return mentions(node.arg, names)
    if isinstance(node, Neg):
        return mentions(node.operand, names)
    if isinstance(node, Pow):
        return mentions(node.base, names)
    return mentions(node.left, names) or mentions(node.right, names)


# -- compilation ------------------------------------------------------


@dataclass(frozen=True)
class _Value:
    """Intermediate compile value: scalar, diagonal samples, or full matrix."""

    kind: str  # scalar | diag | full
    data: object

    def as_matrix(self, n: int) -> np.ndarray:
        if self.kind == "scalar":
            return self.data * np.eye(n, dtype=complex)
        if self.kind == "diag":
            return np.diag(np.asarray(self.data, dtype=complex))
        return self.data


@dataclass(frozen=True)
class CompiledOperator:
    operator: GeneralOperator
    source: str

    @property
    def matrix(self) -> np.ndarray:
        return self.operator.matrix


def compile_expr(
    ast: Expr | str, grid: Grid, params: HamiltonianSpec, t: float = 0.0
) -> CompiledOperator:
    """Compile to a linear operator on ``grid`` with ``params`` supplying
    m, e, c, hbar and the potentials."""
    if isinstance(ast, str):
        ast = parse(ast)
    value = _Compiler(grid, params, t).visit(ast)
    return CompiledOperator(GeneralOperator(value.as_matrix(grid.n)), to_text(ast))


class _Compiler:
    def __init__(self, grid: Grid, params: HamiltonianSpec, t: float):
        self.grid = grid
        self.params = params
        self.t = t

    def visit(self, node: Expr) -> _Value:
        method = getattr(self, "visit_" + type(node).__name__)
        return method(node)

    def visit_Num(self, node: Num) -> _Value:
        return _Value("scalar", node.value)

    def visit_Param(self, node: Param) -> _Value:
        if node.name == "t":
            return _Value("scalar", self.t)
        if node.name == "hbar":
            return _Value("scalar", self.params.hbar_signed)
        return _Value("scalar", getattr(self.params, node.name))

    def visit_Sym(self, node: Sym) -> _Value:
        if node.name == "x":
            return _Value("diag", self.grid.x.copy())
        if node.name == "p":
            return _Value("full", build_momentum(self.grid, self.params.hbar_signed).matrix)
        fn = self.params.phi if node.name == "Phi" else self.params.A
        return _Value("diag", _potential_samples(fn, self.grid, self.t, node.name))

    def visit_Call(self, node: Call) -> _Value:
        arg = self.visit(node.arg)
        if arg.kind == "full":
            raise UnsupportedConstruct(f"{node.func}() of a non-diagonal operator is not supported")
        fn = FUNCTIONS[node.func]
        if arg.kind == "scalar":
            return _Value("scalar", float(fn(arg.data)))
        return _Value("diag", fn(arg.data))

    def visit_Neg(self, node: Neg) -> _Value:
        v = self.visit(node.operand)
        return _Value(v.kind, -v.data)

    def visit_Add(self, node: Add) -> _Value:
        return self._sum(self.visit(node.left), self.visit(node.right), 1.0)

    def visit_Sub(self, node: Sub) -> _Value:
        return self._sum(self.visit(node.left), self.visit(node.right), -1.0)

    def _sum(self, a: _Value, b: _Value, sign: float) -> _Value:
        if a.kind == b.kind:
            return _Value(a.kind, a.data + sign * b.data if sign > 0 else a.data - b.data)
        if "full" not in (a.kind, b.kind):
            # scalar + diag
            return _Value("diag", a.data + b.data if sign > 0 else a.data - b.data)
        n = self.grid.n
        left, right = a.as_matrix(n), b.as_matrix(n)
        return _Value("full", left + right if sign > 0 else left - right)

    def visit_Mul(self, node: Mul) -> _Value:
        return self._product(self.visit(node.left), self.visit(node.right))

    def _product(self, a: _Value, b: _Value) -> _Value:
        if a.kind == "scalar" or b.kind == "scalar" or (a.kind == b.kind == "diag"):
            kind = "full" if "full" in (a.kind, b.kind) else ("diag" if "diag" in (a.kind, b.kind) else "scalar")
            return _Value(kind, a.data * b.data)
        if a.kind == "diag":
            return _Value("full", a.data[:, None] * b.data)
        if b.kind == "diag":
            return _Value("full", a.data * b.data[None, :])
        return _Value("full", a.data @ b.data)

    def visit_Div(self, node: Div) -> _Value:
        a, b = self.visit(node.left), self.visit(node.right)
        if b.kind == "full":
            raise UnsupportedConstruct("division by a non-diagonal operator is not supported")
        if np.any(np.asarray(b.data) == 0):
            raise ExprError("division by an operator or scalar with a zero sample")
        if b.kind == "scalar":
            return _Value(a.kind, a.data / b.data)
        return self._product(a, _Value("diag", 1.0 / b.data))

    def visit_Pow(self, node: Pow) -> _Value:
        base = self.visit(node.base)
        if base.kind != "full":
            return _Value(base.kind, base.data**node.exponent)
        out = np.eye(self.grid.n, dtype=complex)
        for _ in range(node.exponent):
            out = out @ base.data
        return _Value("full", out)


class ExpressionHamiltonian:
    """``H(t)`` from an expression, applied to vectors without assembling it.

    Subtrees free of ``p`` are evaluated once per time as diagonals; ``p``
    acts through the real derivative matrix. ``matrix()`` compiles the dense
    operator and is meant for the occasional factorisation in the solver.
    """

    def __init__(self, ast: Expr | str, grid: Grid, params: HamiltonianSpec):
        self.ast = parse(ast) if isinstance(ast, str) else ast
        self.grid = grid
        self.params = params
        self.d = derivative_matrix(grid)
        self.at(0.0)

    def at(self, t: float) -> ExpressionHamiltonian:
        self.t = t
        self._compiler = _Compiler(self.grid, self.params, t)
        self._diagonal: dict[int, _Value] = {}
        return self

    def matrix(self) -> np.ndarray:
        return compile_expr(self.ast, self.grid, self.params, self.t).matrix

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self._act(self.ast, np.asarray(v, dtype=complex))

    def _diag(self, node: Expr) -> _Value:
        key = id(node)
        if key not in self._diagonal:
            self._diagonal[key] = self._compiler.visit(node)
        return self._diagonal[key]

    def _act(self, node: Expr, v: np.ndarray) -> np.ndarray:
        if not mentions(node, {"p"}):
            return self._diag(node).data * v
        if isinstance(node, Sym):  # p
            d = self.d
            return -1j * self.params.hbar_signed * (d @ v.real + 1j * (d @ v.imag))
        if isinstance(node, Neg):
            return -self._act(node.operand, v)
        if isinstance(node, Add):
            return self._act(node.left, v) + self._act(node.right, v)
        if isinstance(node, Sub):
            return self._act(node.left, v) - self._act(node.right, v)
        if isinstance(node, Mul):
            return self._act(node.left, self._act(node.right, v))
        if isinstance(node, Div):
            if mentions(node.right, {"p"}):
                raise UnsupportedConstruct("division by a non-diagonal operator is not supported")
            b = self._diag(node.right).data
            if np.any(np.asarray(b) == 0):
                raise ExprError("division by an operator or scalar with a zero sample")
            return self._act(node.left, v / b)
        if isinstance(node, Pow):
            for _ in range(node.exponent):
                v = self._act(node.base, v)
            return v
        # a function call containing p
        raise UnsupportedConstruct(f"{node.func}() of a non-diagonal operator is not supported")


def is_time_dependent(ast: Expr, params: HamiltonianSpec) -> bool:
    if mentions(ast, {"t"}):
        return True
    if mentions(ast, {"Phi"}) and getattr(params.phi, "time_dependent", True):
        return True
    return mentions(ast, {"A"}) and getattr(params.A, "time_dependent", True)

