"""q-integers, q-factorials, q-binomials and the q-divided power operator on the base.

Every identity is decided in Z[q] (or Z[t] with q = t^(p^K)) by exact division. A polynomial is certified as a unit of
Z_p[[q-1]] by its value at q = 1 being prime to p.
"""

from fractions import Fraction
from functools import cache, cached_property

from pydantic import NonNegativeInt, PositiveInt
from sympy import cyclotomic_poly
from sympy.polys.rings import PolyElement

from . import intpoly
from .base import AlgebraModel, NonUnit
from .basering import BaseElem

q_ring = intpoly.q_ring


@cache
def q_int(n: int) -> PolyElement:
    """[n]_q = (q^n - 1)/(q - 1), with [-n]_q = -q^(-n)[n]_q left to callers"""
    if n < 0:
        raise ValueError(f"[{n}]_q is not a polynomial")
    q = q_ring().gens[0]
    return intpoly.exact_div(q**n - 1, q - 1)


@cache
def q_factorial(n: int) -> PolyElement:
    if n < 0:
        raise ValueError(f"[{n}]_q! is undefined")
    return q_ring().one if n == 0 else q_factorial(n - 1) * q_int(n)


@cache
def q_binomial(a: int, b: int) -> PolyElement:
    if not 0 <= b <= a:
        raise ValueError(f"q-binomial ({a} choose {b}) needs 0 <= b <= a")
    return intpoly.exact_div(q_factorial(a), q_factorial(b) * q_factorial(a - b))


def q_pascal(a: int, b: int) -> PolyElement:
    """[a choose b] from [a-1 choose b-1] + q^b [a-1 choose b]"""
    if b in {0, a}:
        return q_ring().one
    q = q_ring().gens[0]
    return q_binomial(a - 1, b - 1) + q**b * q_binomial(a - 1, b)


def frobenius(poly: PolyElement, p: int) -> PolyElement:
    """q -> q^p"""
    return intpoly.inflate(poly, p)


@cache
def cyclotomic(p: int) -> PolyElement:
    """Phi_p(q) = [p]_q"""
    ring = q_ring()
    return ring.from_list([int(c) for c in cyclotomic_poly(p, polys=True).all_coeffs()])


class QFactorialTable(AlgebraModel):
    """[n]_q! for n up to a bound, and the same factorials in q^(1/p) written in t with q = t^p"""

    p: PositiveInt
    bound: NonNegativeInt

    @cached_property
    def entries(self) -> dict[int, PolyElement]:
        return {n: q_factorial(n) for n in range(self.bound + 1)}

    @cached_property
    def root_entries(self) -> dict[int, PolyElement]:
        t_ring = intpoly.t_ring()
        return {n: t_ring.from_dict(dict(poly.items())) for n, poly in self.entries.items()}

    def __getitem__(self, n: int) -> PolyElement:
        return self.entries[n] if n <= self.bound else q_factorial(n)


class UnitCertificate(AlgebraModel):
    p: PositiveInt
    cofactor: PolyElement
    value_at_one: int

    @property
    def holds(self) -> bool:
        return self.value_at_one % self.p != 0

    def to_json(self) -> dict:
        return {"cofactor": intpoly.to_json(self.cofactor), "value_at_one": self.value_at_one}


def unit_certificate(poly: PolyElement, p: int) -> UnitCertificate:
    certificate = UnitCertificate(p=p, cofactor=poly, value_at_one=int(intpoly.value_at_one(poly)))
    if not certificate.holds:
        raise NonUnit(f"{poly.as_expr()} is {certificate.value_at_one} at q = 1", witness=certificate.to_json())
    return certificate


def verify_frobenius_factorial(p: int, m: int) -> UnitCertificate:
    """[mp]_q! = u * phi([m]_q!) * [p]_q^m with u a unit"""
    u = intpoly.exact_div(q_factorial(m * p), frobenius(q_factorial(m), p) * q_int(p) ** m)
    return unit_certificate(u, p)


def verify_floor_factorial(p: int, numerator: int, root_depth: int) -> UnitCertificate:
    """[floor(i) p]_q! and [floor(i p)]_q! differ by a unit, for i = numerator / p^K"""
    if numerator < 0:
        raise ValueError(f"Exponent {numerator}/{p}^{root_depth} is negative")

    lower = numerator // p**root_depth * p
    upper = numerator * p // p**root_depth
    return unit_certificate(intpoly.exact_div(q_factorial(upper), q_factorial(lower)), p)


class NonzerodivisorCertificate(AlgebraModel):
    p: PositiveInt
    m: NonNegativeInt
    remainder: PolyElement
    gcd: PolyElement

    @property
    def holds(self) -> bool:
        return self.remainder.is_ground and bool(self.remainder) and self.gcd == self.gcd.ring.one


def frobenius_factorial_nonzerodivisor(p: int, m: int) -> NonzerodivisorCertificate:
    """phi([m]_q!) is nonzero in Z[q]/([p]_q), a domain, with residue m!"""
    value = frobenius(q_factorial(m), p)
    phi_p = cyclotomic(p)
    rational = intpoly.polynomial_ring(("q",), "QQ")
    gcd = rational.from_dict(dict(value.items())).gcd(rational.from_dict(dict(phi_p.items())))
    return NonzerodivisorCertificate(p=p, m=m, remainder=value.rem(phi_p), gcd=gcd)


def bracket_p_lift(p: int, root_depth: int) -> PolyElement:
    """[p]_q in Z[t] for q = t^(p^K)"""
    return intpoly.t_ring().from_dict({(e * p**root_depth,): c for (e,), c in cyclotomic(p).items()})


def delta_lift(x: PolyElement, p: int) -> PolyElement:
    """(phi(x) - x^p)/p in Z[t], phi: t -> t^p"""
    return intpoly.exact_div_ground(intpoly.inflate(x, p) - x**p, p)


def gamma_lift(x: PolyElement, p: int, root_depth: int = 0) -> PolyElement:
    """gamma(x) = phi(x)/[p]_q - delta(x) in Z[t]; NotDivisible if x admits no q-divided power"""
    return intpoly.exact_div(intpoly.inflate(x, p), bracket_p_lift(p, root_depth)) - delta_lift(x, p)


def gamma(x: BaseElem) -> BaseElem:
    """gamma on the canonical lift, reduced with one p-adic digit less"""
    ring = x.ring
    value = gamma_lift(x.to_t_poly(), ring.p, ring.K)
    return ring.truncate(N=max(ring.N - 1, 1)).from_t_poly(value)


def gamma_at_one(x: PolyElement, p: int) -> Fraction:
    """q = 1 value of gamma(x), to be compared with x(1)^p / p"""
    return Fraction(int(intpoly.value_at_one(gamma_lift(x, p))))


def binomial_defect(x: PolyElement, y: PolyElement, p: int) -> PolyElement:
    """((x+y)^p - x^p - y^p) / p"""
    return intpoly.exact_div_ground((x + y) ** p - x**p - y**p, p)


def gamma_sum_identity(x: PolyElement, y: PolyElement, p: int) -> bool:
    """gamma(x+y) = gamma(x) + gamma(y) + ((x+y)^p - x^p - y^p)/p"""
    return gamma_lift(x + y, p) == gamma_lift(x, p) + gamma_lift(y, p) + binomial_defect(x, y, p)


def gamma_scale_identity(f: PolyElement, x: PolyElement, p: int) -> bool:
    """gamma(f x) = phi(f) gamma(x) - x^p delta(f)"""
    return gamma_lift(f * x, p) == intpoly.inflate(f, p) * gamma_lift(x, p) - x**p * delta_lift(f, p)


def smallest_qpd_ideal_check(p: int) -> bool:
    """(q-1) is stable under gamma and phi(q-1) lies in ([p]_q)"""
    t = intpoly.t_ring().gens[0]
    generator = t - 1
    gamma_value = gamma_lift(generator, p)
    return gamma_value.rem(generator) == 0 and intpoly.inflate(generator, p).rem(bracket_p_lift(p, 0)) == 0
