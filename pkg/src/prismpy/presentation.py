"""Ring presentations: ``x^±1, y`` for the generators and ``x -> x*(1+p*x)`` for a coordinate change."""

import re
from abc import ABC
from enum import Enum
from functools import singledispatchmethod
from typing import Self

from pydantic import BaseModel, ConfigDict, Field
from sympy.polys.rings import PolyElement

from .algebra import intpoly
from .algebra.basering import BaseRing
from .algebra.qderham import FramedAlgebra, Framing, Generator

Laurent = dict[int, PolyElement]

TOKEN_PATTERN = re.compile(
    r"(?P<newline>\n)|(?P<space>[ \t\r]+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<integer>\d+)"
    r"|(?P<symbol>->|±|[-+*^(),])|(?P<error>.)"
)


class ParseError(ValueError):
    """Presentation text does not follow the grammar"""

    def __init__(self, line: int, col: int, expected: str, found: str) -> None:
        super().__init__(f"{line}:{col}: expected {expected}, found {found or 'end of input'!r}")
        self.line = line
        self.col = col
        self.expected = expected


class Token(BaseModel):
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start = 1, 0

    for match in TOKEN_PATTERN.finditer(text):
        kind, value = match.lastgroup, match.group()
        col = match.start() - line_start + 1

        if kind == "newline":
            line, line_start = line + 1, match.end()
        elif kind == "error":
            raise ParseError(line, col, "a name, an integer or an operator", value)
        elif kind != "space":
            tokens.append(Token(kind=kind, text=value, line=line, col=col))

    tokens.append(Token(kind="end", text="", line=line, col=len(text) - line_start + 1))
    return tokens


class AST(BaseModel, ABC):
    """Base class for all AST nodes"""

    model_config = ConfigDict(frozen=True)


class Expression(AST, ABC):
    """Base class for all expression nodes"""


class Integer(Expression):
    value: int


class Symbol(Expression):
    name: str


class UnaryOp(Expression):
    class Operator(str, Enum):
        PLUS = "+"
        MINUS = "-"

        @property
        def precedence(self) -> int:
            return 11

    operand: Expression
    operator: Operator


class BinaryOp(Expression):
    class Operator(str, Enum):
        SUM = "+"
        SUB = "-"
        MUL = "*"
        POW = "^"

        @property
        def precedence(self) -> int:
            return {
                self.SUM: 9,
                self.SUB: 9,
                self.MUL: 10,
                self.POW: 12,
            }[self]

        @property
        def right_associative(self) -> bool:
            return self is self.POW

    left: Expression
    right: Expression
    operator: Operator


class CoordinateChange(AST):
    generator: str
    expression: Expression


class Parser:
    """Recursive descent over the token list, with precedence climbing for expressions"""

    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.position = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.current
        self.position += 1
        return token

    def accept(self, text: str) -> bool:
        if self.current.kind == "symbol" and self.current.text == text:
            self.advance()
            return True
        return False

    def expect(self, kind: str, expected: str, text: str | None = None) -> Token:
        token = self.current
        if token.kind != kind or (text is not None and token.text != text):
            raise ParseError(token.line, token.col, expected, token.text)
        return self.advance()

    def finish(self) -> None:
        self.expect("end", "end of input")

    def parse_ring(self) -> tuple[Generator, ...]:
        generators = [self.parse_generator()]
        while self.accept(","):
            generators.append(self.parse_generator())
        return tuple(generators)

    def parse_generator(self) -> Generator:
        name = self.expect("name", "a generator name").text
        if not self.accept("^"):
            return Generator(name=name)

        if not self.accept("±"):
            self.expect("symbol", "'±' or '+-'", text="+")
            self.expect("symbol", "'-'", text="-")
        self.expect("integer", "'1'", text="1")
        return Generator(name=name, laurent=True)

    def parse_change(self) -> CoordinateChange:
        generator = self.expect("name", "a generator name").text
        self.expect("symbol", "'->'", text="->")
        return CoordinateChange(generator=generator, expression=self.parse_expression())

    def parse_expression(self, min_precedence: int = 0) -> Expression:
        left = self.parse_unary()

        while self.current.kind == "symbol" and self.current.text in {"+", "-", "*", "^"}:
            operator = BinaryOp.Operator(self.current.text)
            if operator.precedence < min_precedence:
                break

            self.advance()
            next_precedence = operator.precedence + (0 if operator.right_associative else 1)
            right = self.parse_expression(next_precedence)
            left = BinaryOp(left=left, right=right, operator=operator)

        return left

    def parse_unary(self) -> Expression:
        if self.current.kind == "symbol" and self.current.text in {"+", "-"}:
            operator = UnaryOp.Operator(self.advance().text)
            return UnaryOp(operand=self.parse_expression(operator.precedence), operator=operator)
        return self.parse_atom()

    def parse_atom(self) -> Expression:
        token = self.current

        if token.kind == "integer":
            self.advance()
            return Integer(value=int(token.text))

        if token.kind == "name":
            self.advance()
            return Symbol(name=token.text)

        if self.accept("("):
            expression = self.parse_expression()
            self.expect("symbol", "')'", text=")")
            return expression

        raise ParseError(token.line, token.col, "an integer, a name or '('", token.text)


class RingPresentation(BaseModel):
    model_config = ConfigDict(frozen=True)

    generators: tuple[Generator, ...]
    change: CoordinateChange | None = Field(default=None)

    @classmethod
    def parse(cls, ring: str, framing: str | None = None) -> Self:
        parser = Parser(ring)
        generators = parser.parse_ring()
        parser.finish()

        change = None
        if framing is not None:
            parser = Parser(framing)
            change = parser.parse_change()
            parser.finish()

            if change.generator not in {g.name for g in generators}:
                raise ValueError(f"Framing names {change.generator}, which is not a generator of {ring}")

        return cls(generators=generators, change=change)

    def model_dump_ring(self) -> str:
        return ", ".join(f"{g.name}^±1" if g.laurent else g.name for g in self.generators)

    def model_dump_framing(self) -> str | None:
        if self.change is None:
            return None
        return f"{self.change.generator} -> {self.to_str(self.change.expression)}"

    @singledispatchmethod
    def to_str(self, node: AST, parent_precedence: int = 0) -> str:
        raise NotImplementedError(f"Unsupported node type: {type(node)}")

    @to_str.register
    def _(self, node: Integer, parent_precedence: int = 0) -> str:  # noqa: ARG002
        return str(node.value)

    @to_str.register
    def _(self, node: Symbol, parent_precedence: int = 0) -> str:  # noqa: ARG002
        return node.name

    @to_str.register
    def _(self, node: UnaryOp, parent_precedence: int = 0) -> str:
        string = f"{node.operator.value}{self.to_str(node.operand, node.operator.precedence)}"
        return f"({string})" if node.operator.precedence < parent_precedence else string

    @to_str.register
    def _(self, node: BinaryOp, parent_precedence: int = 0) -> str:
        precedence = node.operator.precedence
        left_string = self.to_str(node.left, precedence + (1 if node.operator.right_associative else 0))
        right_string = self.to_str(node.right, precedence + (0 if node.operator.right_associative else 1))

        if node.operator is BinaryOp.Operator.POW:
            string = f"{left_string}^{right_string}"
        else:
            string = f"{left_string} {node.operator.value} {right_string}"

        return f"({string})" if precedence < parent_precedence else string

    def coordinate(self, p: int) -> Laurent:
        """The new coordinate as a Laurent polynomial in its generator with Z[q] coefficients"""
        if self.change is None:
            return {1: intpoly.q_ring().one}
        return Expander(p=p, generator=self.change.generator).expand(self.change.expression)

    def framing(self, p: int) -> Framing:
        return Framing() if self.change is None else Framing.from_coordinate(self.coordinate(p))

    def to_algebra(self, base: BaseRing, window: int) -> FramedAlgebra:
        return FramedAlgebra(base=base, generators=self.generators, framing=self.framing(base.p), window=window)


def _add(a: Laurent, b: Laurent, sign: int = 1) -> Laurent:
    result = dict(a)
    for k, c in b.items():
        result[k] = result.get(k, intpoly.q_ring().zero) + sign * c
    return {k: c for k, c in result.items() if c}


def _mul(a: Laurent, b: Laurent) -> Laurent:
    result: Laurent = {}
    for i, c in a.items():
        for j, d in b.items():
            result[i + j] = result.get(i + j, intpoly.q_ring().zero) + c * d
    return {k: c for k, c in result.items() if c}


class Expander:
    """Expands an expression into sum_k a_k(q) x^k"""

    def __init__(self, p: int, generator: str) -> None:
        self.p = p
        self.generator = generator

    def constant(self, value: int | PolyElement) -> Laurent:
        poly = intpoly.q_ring()(value)
        return {0: poly} if poly else {}

    @singledispatchmethod
    def expand(self, node: Expression) -> Laurent:
        raise NotImplementedError(f"Unsupported node type: {type(node)}")

    @expand.register
    def _(self, node: Integer) -> Laurent:
        return self.constant(node.value)

    @expand.register
    def _(self, node: Symbol) -> Laurent:
        match node.name:
            case "p":
                return self.constant(self.p)
            case "q":
                return self.constant(intpoly.q_ring().gens[0])
            case self.generator:
                return {1: intpoly.q_ring().one}
        raise ValueError(f"Unknown symbol {node.name} in a coordinate change of {self.generator}")

    @expand.register
    def _(self, node: UnaryOp) -> Laurent:
        operand = self.expand(node.operand)
        return operand if node.operator is UnaryOp.Operator.PLUS else _add({}, operand, sign=-1)

    @expand.register
    def _(self, node: BinaryOp) -> Laurent:
        left = self.expand(node.left)

        match node.operator:
            case BinaryOp.Operator.SUM:
                return _add(left, self.expand(node.right))
            case BinaryOp.Operator.SUB:
                return _add(left, self.expand(node.right), sign=-1)
            case BinaryOp.Operator.MUL:
                return _mul(left, self.expand(node.right))

        return self.power(left, self.exponent(node.right))

    def exponent(self, node: Expression) -> int:
        value = self.expand(node)
        if set(value) - {0} or not value.get(0, intpoly.q_ring().zero).is_ground:
            raise ValueError("Exponents must be integers")
        return int(value[0].LC) if value else 0

    def power(self, base: Laurent, n: int) -> Laurent:
        if n < 0:
            if len(base) != 1 or next(iter(base.values())) != intpoly.q_ring().one:
                raise ValueError("Only a bare generator can carry a negative exponent")
            ((k, one),) = base.items()
            return {k * n: one}

        result = self.constant(1)
        for _ in range(n):
            result = _mul(result, base)
        return result
