"""Sparse exact integer polynomials.

Polynomials are sympy ``PolyElement`` values; this module adds exact division with remainder witnesses,
canonical residue reduction and cached-power substitution on top of them.
"""

from collections.abc import Sequence
from fractions import Fraction
from functools import cache

from sympy.ntheory import multiplicity
from sympy.polys.domains import QQ, ZZ
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing, ring

from .base import NotDivisible

type IntPoly = PolyElement


@cache
def polynomial_ring(symbols: tuple[str, ...], domain: str = "ZZ") -> PolyRing:
    return ring(",".join(symbols), {"ZZ": ZZ, "QQ": QQ}[domain])[0]


def q_ring() -> PolyRing:
    return polynomial_ring(("q",))


def t_ring() -> PolyRing:
    return polynomial_ring(("t",))


def exact_div(x: IntPoly, y: IntPoly) -> IntPoly:
    if not y:
        raise ZeroDivisionError("Division by the zero polynomial")

    try:
        return x.exquo(y)
    except ExactQuotientFailed:
        raise NotDivisible(f"{y.as_expr()} does not divide {x.as_expr()}", remainder=x.rem(y)) from None


def exact_div_ground(x: IntPoly, n: int) -> IntPoly:
    if n == 0:
        raise ZeroDivisionError("Division by zero")

    if x.ring.domain.is_Field:
        return x.quo_ground(x.ring.domain(n))

    remainder = {monom: coeff % n for monom, coeff in x.items() if coeff % n}

    if remainder:
        raise NotDivisible(f"{n} does not divide {x.as_expr()}", remainder=x.ring.from_dict(remainder))

    return x.quo_ground(n)


def reduce_mod(x: IntPoly, modulus: int) -> IntPoly:
    return x.ring.from_dict({monom: coeff % modulus for monom, coeff in x.items() if coeff % modulus})


def inflate(x: IntPoly, factor: int) -> IntPoly:
    """Substitute ``var -> var**factor`` in a univariate polynomial"""
    return x.ring.from_dict({(monom[0] * factor,): coeff for monom, coeff in x.items()})


def value_at_one(x: IntPoly) -> int | Fraction:
    total = sum(x.values(), start=x.ring.domain.zero)
    return int(total) if x.ring.domain == ZZ else Fraction(int(total.numerator), int(total.denominator))


def p_valuation(n: int, p: int) -> int:
    return multiplicity(p, n)


def is_p_integral(x: IntPoly, p: int) -> bool:
    if x.ring.domain == ZZ:
        return True

    return all(int(coeff.denominator) % p != 0 for coeff in x.values())


def substitute(x: IntPoly, images: Sequence[PolyElement]) -> PolyElement:
    """Evaluate ``x`` at ``images`` (one image per generator), caching generator powers"""
    if len(images) != x.ring.ngens:
        raise ValueError(f"Expected {x.ring.ngens} images, got {len(images)}")

    target = images[0].ring
    powers: list[dict[int, PolyElement]] = [{0: target.one} for _ in images]
    result = target.zero

    for monom, coeff in x.items():
        term = target.ground_new(target.domain.convert_from(coeff, x.ring.domain))

        for index, exponent in enumerate(monom):
            if not exponent:
                continue

            cache_ = powers[index]

            if exponent not in cache_:
                cache_[exponent] = images[index] ** exponent

            term *= cache_[exponent]

        result += term

    return result


def to_json(x: IntPoly) -> list[list]:
    return [[list(monom), str(coeff)] for monom, coeff in sorted(x.items())]
