"""Truncated q-deformation ring ``B(p, N, M, K) = (Z/p^N)[t]/((t-1)^M)`` with ``q = t^(p^K)``.

Elements are stored in the ``s = t - 1`` basis, so the (t-1)-adic order and the unit test read off the
leading coefficients. Products are truncated series products in ``s``.
"""

from functools import cached_property
from math import comb
from typing import Self

from pydantic import NonNegativeInt, PositiveInt, field_validator, model_validator
from sympy import isprime
from sympy.polys.ring_series import rs_mul
from sympy.polys.rings import PolyElement, PolyRing

from . import intpoly
from .base import AlgebraModel, MixedRings, NotDivisible, PrecisionLoss


class BaseRing(AlgebraModel):
    p: PositiveInt
    N: PositiveInt
    M: PositiveInt
    K: NonNegativeInt = 0

    # noinspection PyNestedDecorators
    @field_validator("p", mode="after")
    @classmethod
    def is_prime(cls, value: int) -> int:
        if not isprime(value):
            raise ValueError(f"{value} is not a prime")
        return value

    @property
    def modulus(self) -> int:
        return self.p**self.N

    @cached_property
    def series_ring(self) -> PolyRing:
        return intpoly.polynomial_ring(("s",))

    @cached_property
    def q(self) -> "BaseElem":
        return self.from_t_poly(intpoly.t_ring().gens[0] ** (self.p**self.K))

    @cached_property
    def bracket_p(self) -> "BaseElem":
        """[p]_q"""
        return self.from_q_poly(intpoly.q_ring().from_list([1] * self.p))

    @cached_property
    def bracket_p_root(self) -> "BaseElem":
        """[p]_{q^{1/p}}, defined for root depth at least one"""
        if self.K == 0:
            raise PrecisionLoss("[p]_{q^{1/p}} needs root depth K >= 1")
        t = intpoly.t_ring().gens[0]
        return self.from_t_poly(sum((t ** (k * self.p ** (self.K - 1)) for k in range(self.p)), start=t.ring.zero))

    def truncate(self, N: int | None = None, M: int | None = None) -> Self:  # noqa: N803
        return type(self)(p=self.p, N=N or self.N, M=M or self.M, K=self.K)

    def element(self, coeffs: list[int] | tuple[int, ...]) -> "BaseElem":
        padded = [int(c) % self.modulus for c in coeffs[: self.M]]
        padded += [0] * (self.M - len(padded))
        return BaseElem(ring=self, coeffs=tuple(padded))

    def from_int(self, value: int) -> "BaseElem":
        return self.element([value])

    @property
    def zero(self) -> "BaseElem":
        return self.from_int(0)

    @property
    def one(self) -> "BaseElem":
        return self.from_int(1)

    @property
    def s(self) -> "BaseElem":
        return self.element([0, 1])

    def from_t_poly(self, poly: PolyElement) -> "BaseElem":
        """Embed an integer polynomial in t; t^k = (1+s)^k has s-coefficients binom(k, j)"""
        coeffs = [0] * self.M

        for (degree,), coeff in poly.items():
            for j in range(min(degree + 1, self.M)):
                coeffs[j] += int(coeff) * comb(degree, j)

        return self.element(coeffs)

    def from_q_poly(self, poly: PolyElement) -> "BaseElem":
        scale = self.p**self.K
        return self.from_t_poly(intpoly.t_ring().from_dict({(e * scale,): c for (e,), c in poly.items()}))

    def from_series(self, poly: PolyElement) -> "BaseElem":
        coeffs = [0] * self.M
        for (degree,), coeff in poly.items():
            if degree < self.M:
                coeffs[degree] = int(coeff)
        return self.element(coeffs)

    def elements(self) -> list["BaseElem"]:
        values = [()]
        for _ in range(self.M):
            values = [(*value, c) for value in values for c in range(self.modulus)]
        return [BaseElem(ring=self, coeffs=value) for value in values]


class BaseElem(AlgebraModel):
    ring: BaseRing
    coeffs: tuple[int, ...]

    @model_validator(mode="after")
    def is_canonical(self) -> Self:
        if len(self.coeffs) != self.ring.M:
            raise ValueError(f"Expected {self.ring.M} coefficients, got {len(self.coeffs)}")

        if any(not 0 <= c < self.ring.modulus for c in self.coeffs):
            raise ValueError(f"Coefficients {self.coeffs} are not canonical residues mod {self.ring.modulus}")

        return self

    def _coerce(self, other: "BaseElem | int") -> "BaseElem":
        if isinstance(other, int):
            return self.ring.from_int(other)

        if other.ring != self.ring:
            raise MixedRings(f"Cannot combine elements of {self.ring} and {other.ring}")

        return other

    @property
    def series(self) -> PolyElement:
        return self.ring.series_ring.from_dict({(j,): c for j, c in enumerate(self.coeffs) if c})

    def __add__(self, other: "BaseElem | int") -> "BaseElem":
        other = self._coerce(other)
        return self.ring.element([a + b for a, b in zip(self.coeffs, other.coeffs, strict=True)])

    __radd__ = __add__

    def __neg__(self) -> "BaseElem":
        return self.ring.element([-a for a in self.coeffs])

    def __sub__(self, other: "BaseElem | int") -> "BaseElem":
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> "BaseElem":
        return self._coerce(other) - self

    def __mul__(self, other: "BaseElem | int") -> "BaseElem":
        other = self._coerce(other)
        s = self.ring.series_ring.gens[0]
        return self.ring.from_series(rs_mul(self.series, other.series, s, self.ring.M))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "BaseElem":
        if exponent < 0:
            return self.inverse() ** (-exponent)

        result, base = self.ring.one, self
        while exponent:
            if exponent & 1:
                result *= base
            base *= base
            exponent >>= 1
        return result

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_unit(self) -> bool:
        return self.coeffs[0] % self.ring.p != 0

    def inverse(self) -> "BaseElem":
        if not self.is_unit():
            raise NotDivisible(f"{self.coeffs} is not a unit", remainder=self)

        scale = pow(self.coeffs[0], -1, self.ring.modulus)
        nilpotent = self.ring.one - self * scale
        result, power = self.ring.one, self.ring.one

        for _ in range(1, self.ring.M * self.ring.N + 1):
            power *= nilpotent
            if not power:
                break
            result += power

        return result * scale

    def order(self) -> int:
        """(t-1)-adic order, M for zero"""
        return next((j for j, c in enumerate(self.coeffs) if c), self.ring.M)

    def frobenius(self) -> "BaseElem":
        s = self.ring.series_ring.gens[0]
        image = (1 + s) ** self.ring.p - 1
        result = self.ring.series_ring.zero

        for coeff in reversed(self.coeffs):
            result = rs_mul(result, image, s, self.ring.M) + coeff

        return self.ring.from_series(result)

    def to_t_poly(self) -> PolyElement:
        """Canonical lift to Z[t]"""
        t = intpoly.t_ring().gens[0]
        return sum((coeff * (t - 1) ** j for j, coeff in enumerate(self.coeffs) if coeff), start=t.ring.zero)

    def delta(self) -> "BaseElem":
        """(phi(F) - F^p)/p on the canonical lift, well-defined modulo p^(N-1)"""
        if self.ring.N == 1:
            raise PrecisionLoss("delta on the truncated base needs N >= 2")

        lift = self.to_t_poly()
        value = intpoly.exact_div_ground(intpoly.inflate(lift, self.ring.p) - lift**self.ring.p, self.ring.p)
        return self.ring.truncate(N=self.ring.N - 1).from_t_poly(value)

    def divide_by_s(self) -> "BaseElem":
        """Exact division by s = t - 1; consumes one (t-1)-digit"""
        if self.coeffs[0]:
            raise NotDivisible(f"{self.coeffs} is not divisible by (t-1)", remainder=self.coeffs[0])

        if self.ring.M == 1:
            raise PrecisionLoss("division by (t-1) needs M >= 2")

        return self.ring.truncate(M=self.ring.M - 1).element(self.coeffs[1:])

    def reduce(self, ring: BaseRing) -> "BaseElem":
        if ring.p != self.ring.p or ring.K != self.ring.K or ring.N > self.ring.N or ring.M > self.ring.M:
            raise MixedRings(f"{ring} is not a quotient of {self.ring}")
        return ring.element(self.coeffs)

    def to_json(self) -> list[int]:
        return list(self.coeffs)
