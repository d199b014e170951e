"""Finite chain rings ``Z/p^N`` and ``Z[u]/(Phi_p(u), p^N)``.

Elements are numpy integer arrays whose last axis holds coordinates, so every operation is vectorized
over matrices of elements. Cyclotomic elements use the basis ``1, pi, ..., pi^(p-2)`` with uniformizer
``pi = u - 1``.
"""

import itertools
from abc import ABC, abstractmethod
from functools import cached_property
from typing import Self

import numpy as np
from pydantic import PositiveInt, field_validator, model_validator
from sympy import cyclotomic_poly, isprime

from . import intpoly
from .base import AlgebraModel, NotDivisible
from .basering import BaseElem

MAX_MODULUS = 2**20


class ChainRing(AlgebraModel, ABC):
    p: PositiveInt
    N: PositiveInt

    # noinspection PyNestedDecorators
    @field_validator("p", mode="after")
    @classmethod
    def is_prime(cls, value: int) -> int:
        if not isprime(value):
            raise ValueError(f"{value} is not a prime")
        return value

    @model_validator(mode="after")
    def is_small(self) -> Self:
        if self.p**self.N > MAX_MODULUS:
            raise ValueError(f"Modulus {self.p}^{self.N} is too large for machine-word chain ring arithmetic")
        return self

    @property
    def modulus(self) -> int:
        return self.p**self.N

    @property
    @abstractmethod
    def dim(self) -> int:
        """Number of coordinates per element"""

    @property
    @abstractmethod
    def nilpotency(self) -> int:
        """Smallest e with uniformizer^e = 0"""

    @property
    @abstractmethod
    def uniformizer(self) -> np.ndarray: ...

    @abstractmethod
    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def valuation(self, a: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def divide_by_uniformizer(self, a: np.ndarray) -> np.ndarray:
        """Some c with c * pi = a, for a of positive valuation"""

    @abstractmethod
    def specialize(self, value: BaseElem) -> np.ndarray:
        """Image of a K = 0 base element under q -> 1 or q -> zeta_p"""

    def element(self, coords: int | list[int]) -> np.ndarray:
        coords = [coords] if isinstance(coords, int) else list(coords)
        coords += [0] * (self.dim - len(coords))
        return np.array(coords, dtype=np.int64) % self.modulus

    def zeros(self, *shape: int) -> np.ndarray:
        return np.zeros((*shape, self.dim), dtype=np.int64)

    def identity(self, size: int) -> np.ndarray:
        matrix = self.zeros(size, size)
        matrix[np.arange(size), np.arange(size), 0] = 1
        return matrix

    @property
    def zero(self) -> np.ndarray:
        return self.element(0)

    @property
    def one(self) -> np.ndarray:
        return self.element(1)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a + b) % self.modulus

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a - b) % self.modulus

    def neg(self, a: np.ndarray) -> np.ndarray:
        return (-a) % self.modulus

    def is_zero(self, a: np.ndarray) -> np.ndarray:
        return np.all(a == 0, axis=-1)

    def is_unit(self, a: np.ndarray) -> np.ndarray:
        return self.valuation(a) == 0

    def divide_by_uniformizer_power(self, a: np.ndarray, power: int) -> np.ndarray:
        """Always a fresh array, never a view of a"""
        result = a.copy()
        for _ in range(power):
            result = self.divide_by_uniformizer(result)
        return result

    def uniformizer_power(self, power: int) -> np.ndarray:
        result = self.one
        for _ in range(power):
            result = self.mul(result, self.uniformizer)
        return result

    def inverse(self, a: np.ndarray) -> np.ndarray:
        """Inverse of a unit by Newton iteration x <- x(2 - ax)"""
        if int(self.valuation(a)) != 0:
            raise NotDivisible(f"{a.tolist()} is not a unit", remainder=a.tolist())

        x = self.element(pow(int(a[0]), -1, self.modulus))
        two = self.element(2)
        precision = 1

        while precision < self.nilpotency:
            x = self.mul(x, self.sub(two, self.mul(a, x)))
            precision *= 2

        return x

    def unit_part(self, a: np.ndarray) -> tuple[np.ndarray, int]:
        """Return (w, v) with a = w * pi^v and w a unit (w = 1 for a = 0)"""
        v = int(self.valuation(a))
        if v == self.nilpotency:
            return self.one, v
        return self.divide_by_uniformizer_power(a, v), v

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        rows, inner, cols = a.shape[0], a.shape[1], b.shape[1]
        if inner != b.shape[0]:
            raise ValueError(f"Cannot multiply {a.shape[:2]} by {b.shape[:2]}")

        product = np.zeros((rows, cols, 2 * self.dim - 1), dtype=np.int64)
        for i, j in itertools.product(range(self.dim), repeat=2):
            product[:, :, i + j] += (a[:, :, i] @ b[:, :, j]) % self.modulus

        return self.fold(product)

    def fold(self, convolution: np.ndarray) -> np.ndarray:
        return convolution[..., : self.dim] % self.modulus

    def elements(self) -> list[np.ndarray]:
        return [np.array(c, dtype=np.int64) for c in itertools.product(range(self.modulus), repeat=self.dim)]


class ZmodRing(ChainRing):
    @property
    def dim(self) -> int:
        return 1

    @property
    def nilpotency(self) -> int:
        return self.N

    @property
    def uniformizer(self) -> np.ndarray:
        return self.element(self.p)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a * b) % self.modulus

    def valuation(self, a: np.ndarray) -> np.ndarray:
        value = a[..., 0] % self.modulus
        result = np.zeros(value.shape, dtype=np.int64)
        for k in range(1, self.N + 1):
            result += value % self.p**k == 0
        return result

    def divide_by_uniformizer(self, a: np.ndarray) -> np.ndarray:
        if np.any(a % self.p):
            raise NotDivisible(f"{a.tolist()} is not divisible by {self.p}", remainder=(a % self.p).tolist())
        return (a // self.p) % self.modulus

    def specialize(self, value: BaseElem) -> np.ndarray:
        return self.element(value.coeffs[0])


class CyclotomicRing(ChainRing):
    @property
    def dim(self) -> int:
        return self.p - 1

    @property
    def nilpotency(self) -> int:
        return self.N * (self.p - 1)

    @cached_property
    def eisenstein(self) -> intpoly.IntPoly:
        """Phi_p(1 + pi)"""
        pi = intpoly.polynomial_ring(("pi",)).gens[0]
        phi = pi.ring.from_list([int(c) for c in cyclotomic_poly(self.p, polys=True).all_coeffs()])
        return phi.compose(pi, pi + 1)

    @cached_property
    def reduction(self) -> np.ndarray:
        """Row k holds the coordinates of pi^k, for k < 2 * dim"""
        pi = self.eisenstein.ring.gens[0]
        table = np.zeros((2 * self.dim, self.dim), dtype=np.int64)

        for k in range(2 * self.dim):
            for (j,), c in (pi**k).rem(self.eisenstein).items():
                table[k, j] = int(c) % self.modulus

        return table

    @cached_property
    def uniformizer(self) -> np.ndarray:
        return self.reduction[1].copy()

    @cached_property
    def p_over_uniformizer(self) -> np.ndarray:
        """p / pi = -pi^(p-2) * g^(-1) where Phi_p(1 + pi) = pi^(p-1) + p * g(pi)"""
        pi = self.eisenstein.ring.gens[0]
        g = intpoly.exact_div_ground(self.eisenstein - pi**self.dim, self.p)
        g_inverse = self.inverse(self.element([int(g.coeff(pi**j)) for j in range(self.dim)]))
        return self.neg(self.mul(self.uniformizer_power(self.dim - 1), g_inverse))

    def fold(self, convolution: np.ndarray) -> np.ndarray:
        width = convolution.shape[-1]
        return (convolution @ self.reduction[:width]) % self.modulus

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(a, b)
        convolution = np.zeros((*a.shape[:-1], 2 * self.dim - 1), dtype=np.int64)
        for i, j in itertools.product(range(self.dim), repeat=2):
            convolution[..., i + j] += (a[..., i] * b[..., j]) % self.modulus
        return self.fold(convolution)

    def valuation(self, a: np.ndarray) -> np.ndarray:
        """min over coordinates of (p-1) * v_p(a_j) + j; the Eisenstein basis has no cancellation"""
        coords = a % self.modulus
        digits = np.zeros(coords.shape, dtype=np.int64)
        for k in range(1, self.N + 1):
            digits += coords % self.p**k == 0
        weights = digits * (self.p - 1) + np.arange(self.dim)
        return np.minimum(weights.min(axis=-1), self.nilpotency)

    def divide_by_uniformizer(self, a: np.ndarray) -> np.ndarray:
        if np.any(a[..., 0] % self.p):
            raise NotDivisible(f"{a.tolist()} is not divisible by the uniformizer", remainder=a.tolist())

        shifted = np.zeros(a.shape, dtype=np.int64)
        shifted[..., :-1] = a[..., 1:]
        carry = (a[..., 0] // self.p)[..., None] * self.p_over_uniformizer
        return (shifted + carry) % self.modulus

    def specialize(self, value: BaseElem) -> np.ndarray:
        result = self.zero
        for coeff in reversed(value.coeffs):
            result = self.add(self.mul(result, self.uniformizer), self.element(coeff))
        return result
