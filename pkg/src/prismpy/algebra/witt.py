"""Truncated p-typical Witt vectors over small coefficient rings.

Sums, products, negatives and the Frobenius are evaluated from universal integer structure polynomials.
They are solved once per (p, length) from the ghost equations with exact integer division.
"""

import itertools
import logging
from abc import ABC, abstractmethod
from collections.abc import Iterator, Sequence
from functools import cache, cached_property
from typing import Any, Self

import galois
import numpy as np
from pydantic import NonNegativeInt, PositiveInt, field_validator, model_validator
from sympy.polys.rings import PolyElement, PolyRing

from . import intpoly
from .base import AlgebraModel, MixedRings, NonIntegralCoefficient, NotDivisible
from .chainring import ZmodRing
from .homology import ChainMatrix, InvariantFactors, complex_cohomology

logger = logging.getLogger(__name__)


class CoefficientRing(AlgebraModel, ABC):
    @property
    @abstractmethod
    def name(self) -> str: ...

    @abstractmethod
    def from_int(self, value: int) -> Any: ...

    @abstractmethod
    def add(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def neg(self, a: Any) -> Any: ...

    @abstractmethod
    def mul(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def is_unit(self, a: Any) -> bool: ...

    def elements(self) -> list[Any]:
        raise NotImplementedError(f"{self.name} is not enumerable")

    def to_json(self, a: Any) -> Any:
        return a

    @property
    def zero(self) -> Any:
        return self.from_int(0)

    @property
    def one(self) -> Any:
        return self.from_int(1)

    def sub(self, a: Any, b: Any) -> Any:
        return self.add(a, self.neg(b))

    def power(self, a: Any, exponent: int) -> Any:
        result = self.one
        while exponent:
            if exponent & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            exponent >>= 1
        return result

    def evaluate(self, poly: PolyElement, values: Sequence[Any]) -> Any:
        """Evaluate an integer polynomial at ring elements"""
        powers: dict[tuple[int, int], Any] = {}
        result = self.zero

        for monom, coeff in poly.items():
            term = self.from_int(int(coeff))

            if term == self.zero:
                continue

            for index, exponent in enumerate(monom):
                if exponent:
                    if (index, exponent) not in powers:
                        powers[index, exponent] = self.power(values[index], exponent)
                    term = self.mul(term, powers[index, exponent])

            result = self.add(result, term)

        return result


class Integers(CoefficientRing):
    @property
    def name(self) -> str:
        return "Z"

    def from_int(self, value: int) -> int:
        return value

    def add(self, a: int, b: int) -> int:
        return a + b

    def neg(self, a: int) -> int:
        return -a

    def mul(self, a: int, b: int) -> int:
        return a * b

    def is_unit(self, a: int) -> bool:
        return a in {1, -1}


class IntegersMod(CoefficientRing):
    p: PositiveInt
    N: PositiveInt

    @property
    def modulus(self) -> int:
        return self.p**self.N

    @property
    def name(self) -> str:
        return f"Z/{self.modulus}"

    def from_int(self, value: int) -> int:
        return value % self.modulus

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.modulus

    def neg(self, a: int) -> int:
        return -a % self.modulus

    def mul(self, a: int, b: int) -> int:
        return a * b % self.modulus

    def is_unit(self, a: int) -> bool:
        return a % self.p != 0

    def elements(self) -> list[int]:
        return list(range(self.modulus))


class GaloisField(CoefficientRing):
    """F_q with elements stored as their galois integer representation"""

    order: PositiveInt

    # noinspection PyNestedDecorators
    @field_validator("order", mode="after")
    @classmethod
    def is_prime_power(cls, value: int) -> int:
        if not galois.is_prime_power(value):
            raise ValueError(f"{value} is not a prime power")
        return value

    @cached_property
    def field(self) -> type[galois.FieldArray]:
        return galois.GF(self.order)

    @property
    def p(self) -> int:
        return int(self.field.characteristic)

    @property
    def degree(self) -> int:
        return int(self.field.degree)

    @cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        elements = self.field.elements
        return (
            (elements[:, None] + elements[None, :]).view(np.ndarray).astype(np.int64),
            (elements[:, None] * elements[None, :]).view(np.ndarray).astype(np.int64),
            (-elements).view(np.ndarray).astype(np.int64),
        )

    @property
    def name(self) -> str:
        return f"GF({self.order})"

    def from_int(self, value: int) -> int:
        return value % self.p

    def add(self, a: int, b: int) -> int:
        return int(self.tables[0][a, b])

    def neg(self, a: int) -> int:
        return int(self.tables[2][a])

    def mul(self, a: int, b: int) -> int:
        return int(self.tables[1][a, b])

    def is_unit(self, a: int) -> bool:
        return a != 0

    def p_root(self, a: int) -> int:
        return self.power(a, self.order // self.p)

    def elements(self) -> list[int]:
        return list(range(self.order))


class DualNumbers(CoefficientRing):
    """F_q[x]/(x^2), elements (a, b) meaning a + b*x"""

    order: PositiveInt

    @cached_property
    def field(self) -> GaloisField:
        return GaloisField(order=self.order)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def x(self) -> tuple[int, int]:
        return 0, 1

    @property
    def name(self) -> str:
        return f"GF({self.order})[x]/(x^2)"

    def from_int(self, value: int) -> tuple[int, int]:
        return self.field.from_int(value), 0

    def add(self, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
        return self.field.add(a[0], b[0]), self.field.add(a[1], b[1])

    def neg(self, a: tuple[int, int]) -> tuple[int, int]:
        return self.field.neg(a[0]), self.field.neg(a[1])

    def mul(self, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
        f = self.field
        return f.mul(a[0], b[0]), f.add(f.mul(a[0], b[1]), f.mul(a[1], b[0]))

    def is_unit(self, a: tuple[int, int]) -> bool:
        return a[0] != 0

    def elements(self) -> list[tuple[int, int]]:
        return list(itertools.product(self.field.elements(), repeat=2))

    def to_json(self, a: tuple[int, int]) -> list[int]:
        return list(a)


class Polynomials(CoefficientRing):
    ring: PolyRing

    @property
    def name(self) -> str:
        return f"{self.ring.domain}[{','.join(str(g) for g in self.ring.symbols)}]"

    def from_int(self, value: int) -> PolyElement:
        return self.ring(value)

    def add(self, a: PolyElement, b: PolyElement) -> PolyElement:
        return a + b

    def neg(self, a: PolyElement) -> PolyElement:
        return -a

    def mul(self, a: PolyElement, b: PolyElement) -> PolyElement:
        return a * b

    def is_unit(self, a: PolyElement) -> bool:
        return a.is_ground and abs(a.LC) == 1

    def to_json(self, a: PolyElement) -> list:
        return intpoly.to_json(a)


class StructurePolynomials(AlgebraModel):
    p: PositiveInt
    length: PositiveInt
    ring: PolyRing
    sum: tuple[PolyElement, ...]
    product: tuple[PolyElement, ...]
    negation: tuple[PolyElement, ...]
    frobenius: tuple[PolyElement, ...]


def ghost_components(p: int, values: Sequence[Any], add: Any, mul: Any, power: Any, scale: Any) -> list[Any]:
    """gh_i = sum over j <= i of p^j * a_j^(p^(i-j))"""
    result = []
    for i in range(len(values)):
        total = scale(0)
        for j in range(i + 1):
            total = add(total, mul(scale(p**j), power(values[j], p ** (i - j))))
        result.append(total)
    return result


def solve_ghost_equations(p: int, targets: Sequence[PolyElement]) -> tuple[PolyElement, ...]:
    solution: list[PolyElement] = []

    for i, target in enumerate(targets):
        remainder = target - sum((p**j * solution[j] ** (p ** (i - j)) for j in range(i)), start=target.ring.zero)
        try:
            solution.append(intpoly.exact_div_ground(remainder, p**i))
        except NotDivisible as e:
            raise NonIntegralCoefficient(f"Ghost component {i} is not divisible by {p}^{i}", witness=str(e)) from e

    return tuple(solution)


@cache
def structure_polynomials(p: int, length: int) -> StructurePolynomials:
    ring = intpoly.polynomial_ring(tuple(f"x{i}" for i in range(length)) + tuple(f"y{i}" for i in range(length)))
    x, y = ring.gens[:length], ring.gens[length:]

    def ghost(values: Sequence[PolyElement]) -> list[PolyElement]:
        return ghost_components(
            p,
            values,
            add=lambda a, b: a + b,
            mul=lambda a, b: a * b,
            power=lambda a, e: a**e,
            scale=ring,
        )

    ghost_x, ghost_y = ghost(x), ghost(y)

    polynomials = StructurePolynomials(
        p=p,
        length=length,
        ring=ring,
        sum=solve_ghost_equations(p, [a + b for a, b in zip(ghost_x, ghost_y, strict=True)]),
        product=solve_ghost_equations(p, [a * b for a, b in zip(ghost_x, ghost_y, strict=True)]),
        negation=solve_ghost_equations(p, [-a for a in ghost_x]),
        frobenius=solve_ghost_equations(p, ghost_x[1:]),
    )

    logger.debug("Solved structure polynomials for p=%s, length=%s", p, length)

    return polynomials


class WittVec(AlgebraModel):
    ring: Integers | IntegersMod | GaloisField | DualNumbers | Polynomials
    p: PositiveInt
    components: tuple[Any, ...]

    @model_validator(mode="after")
    def is_valid(self) -> Self:
        if not self.components:
            raise ValueError("Witt vectors have at least one component")
        return self

    @property
    def length(self) -> int:
        return len(self.components)

    @property
    def polynomials(self) -> StructurePolynomials:
        return structure_polynomials(self.p, self.length)

    def _check(self, other: "WittVec") -> None:
        if other.ring != self.ring or other.p != self.p or other.length != self.length:
            raise MixedRings(
                f"Cannot combine W_{self.length}({self.ring.name}) and W_{other.length}({other.ring.name})"
            )

    def _apply(self, polynomials: Sequence[PolyElement], values: Sequence[Any]) -> "WittVec":
        padded = list(values) + [self.ring.zero] * (2 * self.length - len(values))
        return self.model_copy(update={"components": tuple(self.ring.evaluate(f, padded) for f in polynomials)})

    def __add__(self, other: "WittVec") -> "WittVec":
        self._check(other)
        return self._apply(self.polynomials.sum, self.components + other.components)

    def __mul__(self, other: "WittVec") -> "WittVec":
        self._check(other)
        return self._apply(self.polynomials.product, self.components + other.components)

    def __neg__(self) -> "WittVec":
        return self._apply(self.polynomials.negation, self.components)

    def __sub__(self, other: "WittVec") -> "WittVec":
        return self + (-other)

    def __pow__(self, exponent: int) -> "WittVec":
        result, base = one(self.ring, self.p, self.length), self
        while exponent:
            if exponent & 1:
                result *= base
            base *= base
            exponent >>= 1
        return result

    def is_zero(self) -> bool:
        return all(c == self.ring.zero for c in self.components)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.components[0])

    def truncate(self, length: int) -> "WittVec":
        return self.model_copy(update={"components": self.components[:length]})

    def frobenius(self) -> "WittVec":
        """Universal Frobenius W_m -> W_(m-1)"""
        if self.length == 1:
            raise ValueError("The Frobenius of a length one Witt vector is empty")
        polynomials = self.polynomials.frobenius
        padded = list(self.components) + [self.ring.zero] * self.length
        return self.model_copy(update={"components": tuple(self.ring.evaluate(f, padded) for f in polynomials)})

    def frobenius_perfect(self) -> "WittVec":
        """Coordinatewise p-power, the Frobenius over rings of characteristic p"""
        return self.model_copy(update={"components": tuple(self.ring.power(c, self.p) for c in self.components)})

    def verschiebung(self) -> "WittVec":
        """V: W_m -> W_(m+1)"""
        return self.model_copy(update={"components": (self.ring.zero, *self.components)})

    def ghost(self) -> list[Any]:
        return ghost_components(
            self.p,
            self.components,
            add=self.ring.add,
            mul=self.ring.mul,
            power=self.ring.power,
            scale=self.ring.from_int,
        )

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "length": self.length,
            "ring": self.ring.name,
            "components": [self.ring.to_json(c) for c in self.components],
        }


def from_components(ring: CoefficientRing, p: int, components: Sequence[Any]) -> WittVec:
    return WittVec(ring=ring, p=p, components=tuple(components))


def zero(ring: CoefficientRing, p: int, length: int) -> WittVec:
    return from_components(ring, p, [ring.zero] * length)


def one(ring: CoefficientRing, p: int, length: int) -> WittVec:
    return teichmuller(ring, p, ring.one, length)


def teichmuller(ring: CoefficientRing, p: int, a: Any, length: int) -> WittVec:
    return from_components(ring, p, [a] + [ring.zero] * (length - 1))


@cache
def integer_components(p: int, value: int, length: int) -> tuple[int, ...]:
    """Witt components over Z of the integer value, every ghost component equal to value"""
    components: list[int] = []
    for i in range(length):
        rest = value - sum(p**j * components[j] ** (p ** (i - j)) for j in range(i))
        if rest % p**i:
            raise NonIntegralCoefficient(f"Integer {value} has no integral Witt component {i}")
        components.append(rest // p**i)
    return tuple(components)


def from_integer(ring: CoefficientRing, p: int, value: int, length: int) -> WittVec:
    return from_components(ring, p, [ring.from_int(c) for c in integer_components(p, value, length)])


def enumerate_vectors(ring: CoefficientRing, p: int, length: int) -> Iterator[WittVec]:
    for components in itertools.product(ring.elements(), repeat=length):
        yield from_components(ring, p, components)


def teichmuller_digit(d: WittVec) -> int:
    """Coefficient of p in the Teichmueller expansion d = [d_0] + p[d_1] + ... over a finite field"""
    if not isinstance(d.ring, GaloisField) or d.length < 2:  # noqa: PLR2004
        raise ValueError("Teichmueller digits need a finite field and length at least 2")
    rest = d - teichmuller(d.ring, d.p, d.components[0], d.length)
    return d.ring.p_root(rest.components[1])


def divide_by_p(e: WittVec) -> WittVec:
    """Some w in W_(m-1) with p * w = e, over a perfect field"""
    if not isinstance(e.ring, GaloisField):
        raise TypeError("Division by p needs a perfect coefficient field")
    if e.components[0] != e.ring.zero:
        raise NotDivisible(f"{e.to_json()} is not divisible by p", remainder=e.components[0])
    return e.model_copy(update={"components": tuple(e.ring.p_root(c) for c in e.components[1:])})


def times_p(d: WittVec) -> WittVec:
    """p * d = V(F(d)) over a perfect field, kept at the length of d"""
    if not isinstance(d.ring, GaloisField):
        raise TypeError("Multiplication by p as V F needs a perfect coefficient field")
    return d.frobenius_perfect().verschiebung().truncate(d.length)


def delta_perfect(d: WittVec) -> WittVec:
    """delta(d) = (F(d) - d^p)/p in W_(m-1) with the coordinatewise Frobenius"""
    return divide_by_p(d.frobenius_perfect() - d**d.p)


def delta_universal(d: WittVec) -> WittVec:
    """delta(d) in W_(m-2) with the universal Frobenius"""
    return divide_by_p(d.frobenius() - (d**d.p).truncate(d.length - 1))


class NonzerodivisorReport(AlgebraModel):
    p: PositiveInt
    length: PositiveInt
    size: NonNegativeInt
    units: NonNegativeInt
    maximal_ideal: NonNegativeInt
    annihilators: tuple[tuple[WittVec, WittVec], ...]

    @property
    def holds(self) -> bool:
        return self.units == self.size - self.maximal_ideal and len(self.annihilators) == self.maximal_ideal


def no_nonzerodivisor_witness(p: int = 2, length: int = 2) -> NonzerodivisorReport:
    """Every non-unit of W_m(F_p[x]/(x^2)) is killed by some nonzero element"""
    ring = DualNumbers(order=p)
    vectors = list(enumerate_vectors(ring, p, length))
    x = teichmuller(ring, p, ring.x, length)
    nonzero = [v for v in vectors if not v.is_zero()]
    annihilators = []

    for w in vectors:
        if w.is_unit():
            continue

        if (x * w).is_zero():
            annihilators.append((w, x))
            continue

        witness = next((v for v in nonzero if (v * w).is_zero()), None)
        if witness is not None:
            annihilators.append((w, witness))

    units = sum(1 for w in vectors if w.is_unit())

    return NonzerodivisorReport(
        p=p,
        length=length,
        size=len(vectors),
        units=units,
        maximal_ideal=len(vectors) - units,
        annihilators=tuple(annihilators),
    )


class TateTwist(AlgebraModel):
    order: PositiveInt
    length: PositiveInt
    twist: NonNegativeInt
    working_length: PositiveInt
    h0: InvariantFactors
    h1: InvariantFactors


def frobenius_twist_map(field: GaloisField, length: int, twist: int) -> list[list[int]]:
    """Matrix of y -> F(y) - p^twist * y on W_length(F_q) in the basis of Teichmueller lifts [x^i]"""
    p = field.p
    basis = [teichmuller(field, p, p**i, length) for i in range(field.degree)]
    scalars = [from_integer(field, p, c, length) for c in range(p**length)]

    coordinates: dict[tuple[int, ...], tuple[int, ...]] = {}
    multiples = [[scalar * vector for scalar in scalars] for vector in basis]

    for coords in itertools.product(range(p**length), repeat=field.degree):
        total = zero(field, p, length)
        for i, c in enumerate(coords):
            total += multiples[i][c]
        coordinates[total.components] = coords

    scale = from_integer(field, p, p**twist, length)
    columns = [coordinates[(vector.frobenius_perfect() - scale * vector).components] for vector in basis]

    return [[column[row] for column in columns] for row in range(field.degree)]


def tate_twist_invariants(order: int, length: int, twist: int) -> TateTwist:
    """Cohomology of p^n W_m(F_q) -> W_m(F_q), x -> phi(x)/p^n - x, computed on y-coordinates x = p^n y"""
    if length < twist + 1:
        raise ValueError(f"Length {length} must exceed the twist {twist}")

    field = GaloisField(order=order)
    working_length = length - twist
    chain_ring = ZmodRing(p=field.p, N=working_length)
    matrix = ChainMatrix.from_ints(chain_ring, frobenius_twist_map(field, working_length, twist))
    rank = field.degree

    return TateTwist(
        order=order,
        length=length,
        twist=twist,
        working_length=working_length,
        h0=complex_cohomology(ChainMatrix.zeros(chain_ring, rank, 0), matrix),
        h1=complex_cohomology(matrix, ChainMatrix.zeros(chain_ring, 0, rank)),
    )
