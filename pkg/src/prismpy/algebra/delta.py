"""Free delta-rings over Z (or Q) and the distinguished-element tests on the truncated base.

The free delta-ring on generators x_i is the polynomial ring on the symbols ``x_i_j`` standing for delta^j(x_i).
Frobenius acts by x_i_j -> x_i_j^p + p * x_i_(j+1), and delta(f) = (phi(f) - f^p) / p is an exact division.
"""

import logging
import random
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Literal

from pydantic import PositiveInt, field_validator
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, PolyRing

from . import intpoly
from .base import AlgebraModel, DepthExceeded, NonIntegralCoefficient, PrecisionLoss
from .basering import BaseElem
from .chainring import ZmodRing
from .homology import ChainMatrix, solve
from .witt import Polynomials, WittVec, from_components

logger = logging.getLogger(__name__)

DEFAULT_DEPTH = 4


class DeltaRing(AlgebraModel):
    p: PositiveInt
    generators: tuple[str, ...] = ("x",)
    depth: PositiveInt = DEFAULT_DEPTH
    domain: Literal["ZZ", "QQ"] = "ZZ"

    # noinspection PyNestedDecorators
    @field_validator("generators", mode="after")
    @classmethod
    def is_not_empty(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        if not value:
            raise ValueError("A free delta-ring needs at least one generator")
        return value

    @cached_property
    def poly_ring(self) -> PolyRing:
        symbols = tuple(f"{name}_{j}" for name in self.generators for j in range(self.depth))
        return intpoly.polynomial_ring(symbols, self.domain)

    def index(self, generator: int, level: int) -> int:
        return generator * self.depth + level

    def variable(self, generator: int, level: int = 0) -> "DeltaPoly":
        if level >= self.depth:
            raise DepthExceeded(f"delta^{level} exceeds depth {self.depth}")
        return self.element(self.poly_ring.gens[self.index(generator, level)])

    @property
    def gens(self) -> tuple["DeltaPoly", ...]:
        return tuple(self.variable(i) for i in range(len(self.generators)))

    def element(self, poly: PolyElement | int) -> "DeltaPoly":
        return DeltaPoly(ring=self, poly=self.poly_ring(poly))

    def from_int(self, value: int) -> "DeltaPoly":
        return self.element(value)

    def random_element(self, rng: random.Random, terms: int = 3, degree: int = 2, level: int = 1) -> "DeltaPoly":
        """Random integer polynomial in the variables of delta-depth below level"""
        variables = [self.index(i, j) for i in range(len(self.generators)) for j in range(min(level, self.depth))]
        result = self.poly_ring.zero

        for _ in range(terms):
            monom = [0] * self.poly_ring.ngens
            for _ in range(rng.randint(0, degree)):
                monom[rng.choice(variables)] += 1
            result += self.poly_ring({tuple(monom): rng.randint(-3, 3)})

        return self.element(result)


class DeltaPoly(AlgebraModel):
    ring: DeltaRing
    poly: PolyElement

    def _coerce(self, other: "DeltaPoly | int") -> "DeltaPoly":
        return self.ring.from_int(other) if isinstance(other, int) else other

    def __add__(self, other: "DeltaPoly | int") -> "DeltaPoly":
        return self.ring.element(self.poly + self._coerce(other).poly)

    __radd__ = __add__

    def __neg__(self) -> "DeltaPoly":
        return self.ring.element(-self.poly)

    def __sub__(self, other: "DeltaPoly | int") -> "DeltaPoly":
        return self.ring.element(self.poly - self._coerce(other).poly)

    def __rsub__(self, other: int) -> "DeltaPoly":
        return self._coerce(other) - self

    def __mul__(self, other: "DeltaPoly | int") -> "DeltaPoly":
        return self.ring.element(self.poly * self._coerce(other).poly)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "DeltaPoly":
        return self.ring.element(self.poly**exponent)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.poly == other
        if not isinstance(other, DeltaPoly):
            return NotImplemented
        return self.ring == other.ring and self.poly == other.poly

    def __hash__(self) -> int:
        return hash((self.ring, self.poly))

    def level(self) -> int:
        """Largest delta-depth of a variable occurring in the polynomial, -1 for constants"""
        levels = [
            index % self.ring.depth
            for monom in self.poly.itermonoms()
            for index, exponent in enumerate(monom)
            if exponent
        ]
        return max(levels, default=-1)

    def phi(self) -> "DeltaPoly":
        if self.level() >= self.ring.depth - 1:
            raise DepthExceeded(f"phi needs delta-depth {self.level() + 2}, the ring has {self.ring.depth}")

        gens, p = self.ring.poly_ring.gens, self.ring.p
        images = [
            gens[k] ** p + p * gens[k + 1] if k % self.ring.depth < self.ring.depth - 1 else gens[k] ** p
            for k in range(len(gens))
        ]
        return self.ring.element(intpoly.substitute(self.poly, images))

    def phi_power(self, n: int) -> "DeltaPoly":
        result = self
        for _ in range(n):
            result = result.phi()
        return result

    def delta(self) -> "DeltaPoly":
        return self.ring.element(intpoly.exact_div_ground(self.phi().poly - self.poly**self.ring.p, self.ring.p))

    def joyal(self, n: int) -> "DeltaPoly":
        """delta_n from phi^n(f) = sum over k <= n of p^k * delta_k(f)^(p^(n-k))"""
        return joyal_operations(self, n)[n]

    def is_frobenius_lift(self) -> bool:
        """phi(f) = f^p mod p"""
        difference = self.phi().poly - self.poly**self.ring.p
        return all(coeff % self.ring.p == 0 for coeff in difference.values())

    def to_json(self) -> list[list]:
        return intpoly.to_json(self.poly)


def joyal_operations(f: DeltaPoly, n: int) -> list[DeltaPoly]:
    """[delta_0(f), ..., delta_n(f)]"""
    p = f.ring.p
    operations = [f]
    frobenius = f

    for k in range(1, n + 1):
        frobenius = frobenius.phi()
        known = sum(
            (p**j * operations[j].poly ** (p ** (k - j)) for j in range(k)),
            start=f.ring.poly_ring.zero,
        )
        operations.append(f.ring.element(intpoly.exact_div_ground(frobenius.poly - known, p**k)))

    return operations


def witt_embedding(f: DeltaPoly, length: int) -> WittVec:
    """w(f) = (delta_0(f), ..., delta_(m-1)(f)) in W_m of the free delta-ring"""
    components = [op.poly for op in joyal_operations(f, length - 1)]
    return from_components(Polynomials(ring=f.ring.poly_ring), f.ring.p, components)


def witt_embedding_check(f: DeltaPoly, g: DeltaPoly, length: int = 2) -> bool:
    """w is additive, multiplicative and unital on the pair (f, g)"""
    w_f, w_g = witt_embedding(f, length), witt_embedding(g, length)
    one = witt_embedding(f.ring.from_int(1), length)

    return (
        witt_embedding(f + g, length) == w_f + w_g
        and witt_embedding(f * g, length) == w_f * w_g
        and one.components == (f.ring.poly_ring.one,) + (f.ring.poly_ring.zero,) * (length - 1)
    )


def w2_check(f: DeltaPoly, g: DeltaPoly) -> bool:
    return witt_embedding_check(f, g, length=2)


def is_distinguished(d: BaseElem) -> bool:
    """delta(d) is a unit; consumes one p-adic digit"""
    return d.delta().is_unit()


def is_distinguished_at_one(d: BaseElem) -> bool:
    """delta(d) is congruent to delta(d(1)) modulo q - 1, so test d(1) in Z/p^N and reduce mod p"""
    p = d.ring.p
    if d.ring.N == 1:
        raise PrecisionLoss("delta of d(1) needs N >= 2")
    value = d.coeffs[0]
    return (value - value**p) // p % p != 0


class Membership(AlgebraModel):
    holds: bool
    witness: tuple[BaseElem, BaseElem] | None = None


def multiplication_matrix(d: BaseElem) -> list[list[int]]:
    """Columns hold the s-coefficients of d * s^k"""
    ring = d.ring
    columns = [(d * ring.element([0] * k + [1])).coeffs for k in range(ring.M)]
    return [[column[row] for column in columns] for row in range(ring.M)]


def ideal_membership(first: BaseElem, second: BaseElem) -> Membership:
    """Solve p = a * first + b * second over (Z/p^N)[s]/(s^M)"""
    ring = first.ring
    chain_ring = ZmodRing(p=ring.p, N=ring.N)
    left, right = multiplication_matrix(first), multiplication_matrix(second)
    system = ChainMatrix.from_ints(chain_ring, [a + b for a, b in zip(left, right, strict=True)])
    target = chain_ring.zeros(ring.M)
    target[0] = chain_ring.element(ring.p)

    solution = solve(system, target)

    if solution is None:
        return Membership(holds=False)

    coords = [int(c) for c in solution[:, 0]]
    return Membership(holds=True, witness=(ring.element(coords[: ring.M]), ring.element(coords[ring.M :])))


def distinguished_membership_check(d: BaseElem) -> Membership:
    """p in (d, phi(d))"""
    if d.is_unit():
        return Membership(holds=True, witness=(d.inverse() * d.ring.p, d.ring.zero))
    return ideal_membership(d, d.frobenius())


def distinguished_power_membership_check(d: BaseElem) -> Membership:
    """p in (d^p, phi(d)), the sharper form of the membership test"""
    if d.is_unit():
        return Membership(holds=True, witness=((d**d.ring.p).inverse() * d.ring.p, d.ring.zero))
    return ideal_membership(d**d.ring.p, d.frobenius())


def delta_power_divisibility(p: int, n: int) -> DeltaPoly:
    """delta(x^(p^n)) / p^n in the free delta-ring on one generator"""
    ring = DeltaRing(p=p, depth=2)
    (x,) = ring.gens
    return ring.element(intpoly.exact_div_ground((x ** (p**n)).delta().poly, p**n))


class DividedPowerCertificate(AlgebraModel):
    p: PositiveInt
    n: int
    polynomial: DeltaPoly
    levels: tuple[DeltaPoly, ...]
    unit: Fraction | None = None


class DividedPowerModel(AlgebraModel):
    """Q[X_0, ..., X_depth] with phi(X_i) = X_(i+1), where X_0 = x"""

    p: PositiveInt
    depth: PositiveInt = DEFAULT_DEPTH

    @cached_property
    def poly_ring(self) -> PolyRing:
        return intpoly.polynomial_ring(tuple(f"X{i}" for i in range(self.depth + 1)), "QQ")

    def phi(self, f: PolyElement) -> PolyElement:
        gens = self.poly_ring.gens
        if any(monom[-1] for monom in f.itermonoms()):
            raise DepthExceeded(f"phi leaves the model Q[X_0..X_{self.depth}]")
        return intpoly.substitute(f, [*gens[1:], gens[-1]])

    def delta(self, f: PolyElement) -> PolyElement:
        return (self.phi(f) - f**self.p).quo_ground(QQ(self.p))

    def images(self, ring: DeltaRing) -> list[PolyElement]:
        """delta^j(x) and delta^j(phi(x)/p) for every variable of the free delta-ring on x, z"""
        x, z = self.poly_ring.gens[0], self.poly_ring.gens[1].quo_ground(QQ(self.p))
        images = []

        for start in (x, z):
            value = start
            images.append(value)
            for _ in range(ring.depth - 1):
                value = self.delta(value)
                images.append(value)

        return images


def divided_power_tower(ring: DeltaRing, count: int) -> list[DeltaPoly]:
    """w_0 = x, w_1 = x^p / p and w_(k+1) = w_k^p / p, each an integral polynomial"""
    p = ring.p
    x, z = ring.gens
    tower = [x, z - x.delta()]

    # w^p/p = p^(p-2) * (w + delta(v))^p - delta(w) whenever w = v^p/p
    while len(tower) < count:
        tower.append(p ** (p - 2) * (tower[-1] + tower[-2].delta()) ** p - tower[-1].delta())

    return tower[:count]


def divided_power_certificate(p: int, n: int) -> DividedPowerCertificate:
    """x^n / n! as a p-integral polynomial in delta^j(x) and delta^j(phi(x)/p)"""
    ring = DeltaRing(p=p, generators=("x", "z"), domain="QQ")
    digits = []
    rest = n

    while rest >= p:
        digits.append(rest % p)
        rest //= p

    tower = divided_power_tower(ring, len(digits) + 1)

    # gamma_n(w) = gamma_k(w^p/p) * w^r * k! p^k / n! for n = k p + r
    polynomial = tower[len(digits)].poly ** rest * QQ(1, factorial(rest))
    top = rest

    for level in reversed(range(len(digits))):
        r = digits[level]
        current = top * p + r
        polynomial *= tower[level].poly ** r * QQ(factorial(top) * p**top, factorial(current))
        top = current

    for coeff in polynomial.values():
        if int(coeff.denominator) % p == 0:
            raise NonIntegralCoefficient(f"Coefficient {coeff} of gamma_{n} is not p-integral", witness=str(coeff))

    unit = None
    if n % p == 0 and n > 0:
        k = n // p
        unit = Fraction(factorial(k) * factorial(p) ** k, factorial(n))

    logger.debug("Certified gamma_%s at p=%s with %s terms", n, p, len(polynomial))

    return DividedPowerCertificate(
        p=p,
        n=n,
        polynomial=ring.element(polynomial),
        levels=tuple(tower[1:]),
        unit=unit,
    )


def evaluate_certificate(certificate: DividedPowerCertificate, rng: random.Random, points: int = 3) -> bool:
    """Compare the certificate with x^n / n! at random rational points of the model"""
    model = DividedPowerModel(p=certificate.p)
    images = model.images(certificate.polynomial.ring)
    expected = model.poly_ring.gens[0] ** certificate.n * QQ(1, factorial(certificate.n))
    variables = certificate.polynomial.ring.poly_ring.gens

    for _ in range(points):
        point = [(g, QQ(rng.randint(-9, 9), rng.randint(1, 5))) for g in model.poly_ring.gens]
        values = [QQ(image.evaluate(point)) for image in images]
        left = certificate.polynomial.poly.evaluate(list(zip(variables, values, strict=True)))
        if QQ(left) != QQ(expected.evaluate(point)):
            return False

    return True
