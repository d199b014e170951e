"""The perfected q-divided power envelope as a based module over the truncated base.

A basis symbol ``e_i`` for ``i`` in (N[1/p^K])^r stands for the product of Y_s^(i_s) / [floor(i_s)]_q!.
Exponents are stored as integer numerators over the common denominator p^K. Structure constants and Frobenius
factors are computed exactly in Z[q] and only then embedded into the truncated base.
"""

import itertools
import logging
from collections.abc import Iterator
from fractions import Fraction
from functools import cache, cached_property
from math import prod
from typing import Self

from pydantic import NonNegativeInt, PositiveInt, model_validator
from sympy.polys.rings import PolyElement

from . import intpoly, qcalc
from .base import AlgebraModel, DegreeOverflow, MixedBases, NotDivisible, PrecisionLoss
from .basering import BaseElem, BaseRing

logger = logging.getLogger(__name__)

Exponent = tuple[int, ...]


@cache
def structure_constant(p: int, root_depth: int, a: int, b: int) -> PolyElement:
    """[floor(a+b)]_q! / ([floor(a)]_q! [floor(b)]_q!) for numerators a, b over p^K"""
    scale = p**root_depth
    return intpoly.exact_div(
        qcalc.q_factorial((a + b) // scale),
        qcalc.q_factorial(a // scale) * qcalc.q_factorial(b // scale),
    )


@cache
def frobenius_factor(p: int, root_depth: int, a: int) -> PolyElement:
    """lambda = [floor(ip)]_q! / phi([floor(i)]_q!) for i = a / p^K"""
    scale = p**root_depth
    return intpoly.exact_div(
        qcalc.q_factorial(a * p // scale),
        qcalc.frobenius(qcalc.q_factorial(a // scale), p),
    )


def bracket_p_valuation(poly: PolyElement, p: int) -> tuple[int, PolyElement]:
    """Return (v, u) with poly = [p]_q^v * u and [p]_q not dividing u"""
    if not poly:
        raise ValueError("The zero polynomial has infinite [p]_q-valuation")

    phi_p = qcalc.cyclotomic(p)
    valuation = 0

    while not poly.rem(phi_p):
        poly = intpoly.exact_div(poly, phi_p)
        valuation += 1

    return valuation, poly


def bracket_root_lift(p: int, root_depth: int) -> PolyElement:
    """[p]_{q^(1/p)} in Z[t] for q = t^(p^K)"""
    if root_depth == 0:
        raise PrecisionLoss("[p]_{q^{1/p}} needs root depth K >= 1")
    return intpoly.t_ring().from_dict({(e * p ** (root_depth - 1),): c for (e,), c in qcalc.cyclotomic(p).items()})


def q_to_t(poly: PolyElement, p: int, root_depth: int) -> PolyElement:
    return intpoly.t_ring().from_dict({(e * p**root_depth,): c for (e,), c in poly.items()})


class QPDModule(AlgebraModel):
    base: BaseRing
    r: PositiveInt = 1
    D: PositiveInt

    @model_validator(mode="after")
    def has_roots(self) -> Self:
        if self.base.K == 0:
            raise ValueError("The perfected envelope needs root depth K >= 1")
        return self

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def scale(self) -> int:
        """Common denominator p^K of all exponents"""
        return self.p**self.base.K

    @property
    def bound(self) -> int:
        """Degree bound as a numerator"""
        return self.D * self.scale

    def floor(self, exponent: Exponent) -> int:
        return sum(a // self.scale for a in exponent)

    def degree(self, exponent: Exponent) -> Fraction:
        return Fraction(sum(exponent), self.scale)

    def within(self, exponent: Exponent) -> bool:
        return sum(exponent) <= self.bound

    def exponents(self, bound: int | None = None) -> Iterator[Exponent]:
        """All exponent numerators with total at most bound, in lexicographic order"""
        bound = self.bound if bound is None else bound
        for exponent in itertools.product(range(bound + 1), repeat=self.r):
            if sum(exponent) <= bound:
                yield exponent

    @cached_property
    def frobenius_domain(self) -> tuple[Exponent, ...]:
        """Exponents whose Frobenius image stays within the degree bound"""
        return tuple(self.exponents(self.bound // self.p))

    def element(self, terms: dict[Exponent, BaseElem]) -> "QPDElem":
        return QPDElem(module=self, terms={i: c for i, c in terms.items() if c})

    def basis(self, exponent: Exponent) -> "QPDElem":
        if len(exponent) != self.r:
            raise ValueError(f"Expected {self.r} exponents, got {exponent}")
        if not self.within(exponent):
            raise DegreeOverflow(f"e_{exponent} exceeds degree bound {self.D}")
        return self.element({exponent: self.base.one})

    @property
    def zero(self) -> "QPDElem":
        return self.element({})

    @property
    def one(self) -> "QPDElem":
        return self.basis((0,) * self.r)

    def from_q_poly(self, poly: PolyElement) -> BaseElem:
        return self.base.from_q_poly(poly)

    def product_constant(self, i: Exponent, j: Exponent) -> PolyElement:
        return prod(
            (structure_constant(self.p, self.base.K, a, b) for a, b in zip(i, j, strict=True)),
            start=qcalc.q_ring().one,
        )

    def frobenius_constant(self, i: Exponent) -> PolyElement:
        return prod((frobenius_factor(self.p, self.base.K, a) for a in i), start=qcalc.q_ring().one)

    def nygaard_exponent(self, i: Exponent, n: int) -> int:
        """Power of [p]_{q^(1/p)} in the degree i generator of Fil^n"""
        return max(0, n - self.floor(i))

    def nygaard_lifts(self, n: int) -> dict[Exponent, PolyElement]:
        """Z[t] lifts of the Fil^n generator coefficients [p]_{q^(1/p)}^max(0, n - sum floor(i_s))"""
        if n < 0:
            raise ValueError(f"Nygaard level {n} is negative")
        root = bracket_root_lift(self.p, self.base.K)
        return {i: root ** self.nygaard_exponent(i, n) for i in self.exponents()}

    def nygaard_generators(self, n: int) -> list["QPDElem"]:
        """One generator of Fil^n per basis exponent, in the order of exponents()"""
        return [self.element({i: self.base.from_t_poly(lift)}) for i, lift in self.nygaard_lifts(n).items()]

    def conjugate_level(self, j: Exponent) -> int:
        """Smallest n with e_j in the conjugate filtration Fil_n"""
        return sum(a // (self.p * self.scale) for a in j)

    def describe(self) -> dict:
        return {"p": self.p, "N": self.base.N, "M": self.base.M, "K": self.base.K, "r": self.r, "D": self.D}


class QPDElem(AlgebraModel):
    module: QPDModule
    terms: dict[Exponent, BaseElem]

    def _check(self, other: "QPDElem") -> None:
        if other.module != self.module:
            raise MixedBases(f"Cannot combine elements of {self.module} and {other.module}")

    def __add__(self, other: "QPDElem") -> "QPDElem":
        self._check(other)
        terms = dict(self.terms)
        for i, c in other.terms.items():
            terms[i] = terms[i] + c if i in terms else c
        return self.module.element(terms)

    def __neg__(self) -> "QPDElem":
        return self.module.element({i: -c for i, c in self.terms.items()})

    def __sub__(self, other: "QPDElem") -> "QPDElem":
        return self + (-other)

    def scale(self, factor: BaseElem | int) -> "QPDElem":
        return self.module.element({i: c * factor for i, c in self.terms.items()})

    def __mul__(self, other: "QPDElem") -> "QPDElem":
        """e_i * e_j = c(i, j) e_(i+j)"""
        self._check(other)
        module = self.module
        terms: dict[Exponent, BaseElem] = {}

        for (i, a), (j, b) in itertools.product(self.terms.items(), other.terms.items()):
            k = tuple(x + y for x, y in zip(i, j, strict=True))
            if not module.within(k):
                raise DegreeOverflow(f"e_{i} * e_{j} exceeds degree bound {module.D}")
            value = a * b * module.from_q_poly(module.product_constant(i, j))
            terms[k] = terms[k] + value if k in terms else value

        return module.element(terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QPDElem):
            return NotImplemented
        return self.module == other.module and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.module, tuple(sorted(self.terms.items()))))

    def frobenius(self) -> "QPDElem":
        """phi(c e_i) = phi(c) lambda_i e_(pi)"""
        module = self.module
        terms: dict[Exponent, BaseElem] = {}

        for i, c in self.terms.items():
            k = tuple(module.p * a for a in i)
            if not module.within(k):
                raise DegreeOverflow(f"phi(e_{i}) exceeds degree bound {module.D}")
            terms[k] = c.frobenius() * module.from_q_poly(module.frobenius_constant(i))

        return module.element(terms)

    def to_json(self) -> dict:
        return {
            "module": self.module.describe(),
            "terms": [[list(i), c.to_json()] for i, c in sorted(self.terms.items())],
        }


class NygaardReport(AlgebraModel):
    p: PositiveInt
    r: PositiveInt
    level: NonNegativeInt
    image_degrees: tuple[Exponent, ...]
    expected_degrees: tuple[Exponent, ...]
    graded_rank: NonNegativeInt
    failures: tuple[dict, ...] = ()

    @property
    def holds(self) -> bool:
        return (
            not self.failures
            and self.image_degrees == self.expected_degrees
            and self.graded_rank == len(self.expected_degrees)
        )


def nygaard_verify(module: QPDModule, n: int) -> NygaardReport:
    """Apply phi to the Fil^n generators and divide by [p]_q^n, with every division done on the Z[t] lifts"""
    p, depth, base = module.p, module.base.K, module.base
    root = bracket_root_lift(p, depth)
    bracket = intpoly.inflate(root, p)
    divisor = bracket**n
    domain = set(module.frobenius_domain)

    lifts, next_lifts = module.nygaard_lifts(n), module.nygaard_lifts(n + 1)
    generators = dict(zip(lifts, module.nygaard_generators(n), strict=True))
    failures: list[dict] = []
    image_degrees: list[Exponent] = []
    expected_degrees: list[Exponent] = []
    graded_rank = 0

    for i, generator in generators.items():
        if i not in domain:
            continue

        image = generator.frobenius().terms.get(tuple(p * a for a in i), base.zero)
        exact = intpoly.inflate(lifts[i], p) * q_to_t(module.frobenius_constant(i), p, depth)

        if image != base.from_t_poly(exact):
            failures.append({"part": "frobenius", "degree": list(i)})

        try:
            quotient = intpoly.exact_div(exact, divisor)
        except NotDivisible:
            failures.append({"part": "divisible", "degree": list(i)})
            continue

        if base.from_t_poly(quotient) * base.bracket_p**n != image:
            failures.append({"part": "quotient", "degree": list(i)})

        if intpoly.reduce_mod(quotient.rem(bracket), p**base.N):
            image_degrees.append(i)

        if module.floor(i) <= n:
            expected_degrees.append(i)

        if lifts[i] != 1 and not intpoly.exact_div(exact, bracket).rem(divisor):
            failures.append({"part": "minimal", "degree": list(i)})

        # Fil^n / Fil^(n+1) in degree i is A / (ratio)
        ratio = intpoly.exact_div(next_lifts[i], lifts[i])
        if ratio == root:
            graded_rank += 1
        elif ratio != 1:
            failures.append({"part": "graded", "degree": list(i)})

    logger.debug("Nygaard level %s: %s image degrees, %s failures", n, len(image_degrees), len(failures))

    return NygaardReport(
        p=p,
        r=module.r,
        level=n,
        image_degrees=tuple(image_degrees),
        expected_degrees=tuple(expected_degrees),
        graded_rank=graded_rank,
        failures=tuple(failures),
    )


def nygaard_multiplicative(module: QPDModule, n: int, m: int) -> bool:
    """Fil^n * Fil^m lies in Fil^(n+m) on generators, decided in Z[t]"""
    p, depth = module.p, module.base.K
    root = bracket_root_lift(p, depth)

    for i, j in itertools.product(module.exponents(module.bound // 2), repeat=2):
        k = tuple(a + b for a, b in zip(i, j, strict=True))
        if not module.within(k):
            continue
        power = module.nygaard_exponent(i, n) + module.nygaard_exponent(j, m)
        coefficient = root**power * q_to_t(module.product_constant(i, j), p, depth)
        if coefficient.rem(root ** module.nygaard_exponent(k, n + m)):
            return False

    return True


def nygaard_decreasing(module: QPDModule, n: int) -> bool:
    return all(module.nygaard_exponent(i, n + 1) >= module.nygaard_exponent(i, n) for i in module.exponents())


def kunneth_product(first: QPDModule, second: QPDModule) -> QPDModule:
    if first.base != second.base:
        raise MixedBases(f"Cannot tensor modules over {first.base} and {second.base}")
    return QPDModule(base=first.base, r=first.r + second.r, D=first.D + second.D)


def tensor(a: QPDElem, b: QPDElem) -> QPDElem:
    """e_i (x) e_j -> e_(i, j) in the Kunneth product"""
    module = kunneth_product(a.module, b.module)
    terms: dict[Exponent, BaseElem] = {}
    for (i, x), (j, y) in itertools.product(a.terms.items(), b.terms.items()):
        terms[i + j] = x * y
    return module.element(terms)


def gamma_envelope(module: QPDModule, exponent: Exponent) -> QPDElem:
    """gamma(Y^i) = phi(Y^i)/[p]_q for Y^i = prod [floor(i_s)]_q! e_i, where delta(Y) = 0"""
    target = tuple(module.p * a for a in exponent)
    if not module.within(target):
        raise DegreeOverflow(f"gamma(Y^{exponent}) exceeds degree bound {module.D}")
    numerator = prod(
        (qcalc.q_factorial(a * module.p // module.scale) for a in exponent),
        start=qcalc.q_ring().one,
    )
    coefficient = intpoly.exact_div(numerator, qcalc.q_int(module.p))
    return module.element({target: module.from_q_poly(coefficient)})


class QPowerCertificate(AlgebraModel):
    p: PositiveInt
    n: NonNegativeInt
    coefficient: PolyElement
    matches: bool
    nonzerodivisors: tuple[qcalc.NonzerodivisorCertificate, ...]

    @property
    def holds(self) -> bool:
        return self.matches and all(c.holds for c in self.nonzerodivisors)


def q_power_divisibility(module: QPDModule, n: int) -> QPowerCertificate:
    """Y^n = [n]_q! e_n, together with phi([m]_q!) nonzero mod [p]_q for m <= n/p"""
    if module.r != 1:
        raise ValueError("q-power divisibility is stated for one variable")

    unit = (module.scale,)
    coefficient = qcalc.q_ring().one
    power = module.one

    for k in range(n):
        coefficient *= module.product_constant((k * module.scale,), unit)
        power *= module.basis(unit)

    expected = module.basis((n * module.scale,)).scale(module.from_q_poly(qcalc.q_factorial(n)))

    return QPowerCertificate(
        p=module.p,
        n=n,
        coefficient=coefficient,
        matches=coefficient == qcalc.q_factorial(n) and power == expected,
        nonzerodivisors=tuple(qcalc.frobenius_factorial_nonzerodivisor(module.p, m) for m in range(n // module.p + 1)),
    )
