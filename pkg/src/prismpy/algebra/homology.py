"""Smith normal form and cohomology of finite free complexes over chain rings."""

import logging
from collections.abc import Iterable
from typing import Self

import numpy as np
from pydantic import NonNegativeInt, field_validator
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.domains import ZZ

from . import intpoly
from .base import AlgebraModel, NotAComplex
from .chainring import ChainRing, CyclotomicRing, ZmodRing

logger = logging.getLogger(__name__)


class InvariantFactors(AlgebraModel):
    """H = R^free_rank + sum of R/pi^a over the torsion exponents, tagged with a twist"""

    free_rank: NonNegativeInt = 0
    torsion: tuple[int, ...] = ()
    twist: int = 0

    # noinspection PyNestedDecorators
    @field_validator("torsion", mode="after")
    @classmethod
    def is_sorted(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if any(exponent <= 0 for exponent in value):
            raise ValueError(f"Torsion exponents must be positive, got {value}")
        return tuple(sorted(value))

    @classmethod
    def from_exponents(cls, exponents: Iterable[int], nilpotency: int, twist: int = 0) -> Self:
        exponents = list(exponents)
        return cls(
            free_rank=sum(1 for a in exponents if a >= nilpotency),
            torsion=tuple(a for a in exponents if 0 < a < nilpotency),
            twist=twist,
        )

    def direct_sum(self, other: "InvariantFactors") -> "InvariantFactors":
        return InvariantFactors(
            free_rank=self.free_rank + other.free_rank,
            torsion=self.torsion + other.torsion,
            twist=self.twist,
        )

    def with_twist(self, twist: int) -> "InvariantFactors":
        return self.model_copy(update={"twist": twist})

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def length(self, nilpotency: int) -> int:
        """Composition length, nilpotency per free summand"""
        return self.free_rank * nilpotency + sum(self.torsion)

    def torsion_length(self, nilpotency: int, k: int) -> int:
        """Composition length of the pi^k-torsion submodule"""
        return self.free_rank * min(k, nilpotency) + sum(min(a, k) for a in self.torsion)


class ChainMatrix(AlgebraModel):
    ring: ZmodRing | CyclotomicRing
    entries: np.ndarray

    @classmethod
    def zeros(cls, ring: ChainRing, rows: int, cols: int) -> Self:
        return cls(ring=ring, entries=ring.zeros(rows, cols))

    @classmethod
    def identity(cls, ring: ChainRing, size: int) -> Self:
        return cls(ring=ring, entries=ring.identity(size))

    @classmethod
    def from_ints(cls, ring: ChainRing, rows: list[list[int]], cols: int | None = None) -> Self:
        cols = len(rows[0]) if rows else (cols or 0)
        matrix = ring.zeros(len(rows), cols)
        matrix[..., 0] = np.array(rows, dtype=np.int64).reshape(len(rows), cols) % ring.modulus
        return cls(ring=ring, entries=matrix)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __matmul__(self, other: "ChainMatrix") -> "ChainMatrix":
        return ChainMatrix(ring=self.ring, entries=self.ring.matmul(self.entries, other.entries))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChainMatrix):
            return NotImplemented
        return self.ring == other.ring and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.ring, self.entries.tobytes()))

    def is_zero(self) -> bool:
        return not np.any(self.entries)

    def transpose(self) -> "ChainMatrix":
        return ChainMatrix(ring=self.ring, entries=self.entries.transpose(1, 0, 2).copy())

    def permuted(self, rows: list[int], cols: list[int]) -> "ChainMatrix":
        return ChainMatrix(ring=self.ring, entries=self.entries[np.ix_(rows, cols)].copy())

    def to_json(self) -> dict:
        triples = [
            [int(i), int(j), self.entries[i, j].tolist()] for i, j in zip(*np.nonzero(np.any(self.entries, axis=-1)))
        ]
        return {"dims": [self.rows, self.cols], "entries": triples}


class SmithForm(AlgebraModel):
    """U @ M @ V = D with D = diag(pi^a) for ascending exponents a"""

    u: ChainMatrix
    d: ChainMatrix
    v: ChainMatrix
    u_inv: ChainMatrix
    v_inv: ChainMatrix
    exponents: tuple[int, ...]

    @property
    def rank(self) -> int:
        """Number of nonzero invariant factors"""
        return sum(1 for a in self.exponents if a < self.d.ring.nilpotency)


def snf(matrix: ChainMatrix) -> SmithForm:
    ring = matrix.ring
    rows, cols = matrix.rows, matrix.cols
    a = matrix.entries.copy()
    u, u_inv = ring.identity(rows), ring.identity(rows)
    v, v_inv = ring.identity(cols), ring.identity(cols)
    exponents = [ring.nilpotency] * min(rows, cols)

    for s in range(min(rows, cols)):
        valuations = ring.valuation(a[s:, s:])
        lowest = int(valuations.min())

        if lowest == ring.nilpotency:
            break

        i, j = (int(k) + s for k in np.argwhere(valuations == lowest)[0])

        a[[s, i]], u[[s, i]], u_inv[:, [s, i]] = a[[i, s]], u[[i, s]], u_inv[:, [i, s]]
        a[:, [s, j]], v[:, [s, j]], v_inv[[s, j]] = a[:, [j, s]], v[:, [j, s]], v_inv[[j, s]]

        unit, _ = ring.unit_part(a[s, s])
        unit_inverse = ring.inverse(unit)
        a[s] = ring.mul(a[s], unit_inverse)
        u[s] = ring.mul(u[s], unit_inverse)
        u_inv[:, s] = ring.mul(u_inv[:, s], unit)

        below = ring.divide_by_uniformizer_power(a[s + 1 :, s], lowest)
        a[s + 1 :] = ring.sub(a[s + 1 :], ring.mul(below[:, None], a[s][None]))
        u[s + 1 :] = ring.sub(u[s + 1 :], ring.mul(below[:, None], u[s][None]))
        u_inv[:, s] = ring.add(u_inv[:, s], ring.mul(u_inv[:, s + 1 :], below[None]).sum(axis=1))

        right = ring.divide_by_uniformizer_power(a[s, s + 1 :], lowest)
        a[:, s + 1 :] = ring.sub(a[:, s + 1 :], ring.mul(a[:, s][:, None], right[None]))
        v[:, s + 1 :] = ring.sub(v[:, s + 1 :], ring.mul(v[:, s][:, None], right[None]))
        v_inv[s] = ring.add(v_inv[s], ring.mul(right[:, None], v_inv[s + 1 :]).sum(axis=0))

        exponents[s] = lowest

    logger.debug("SNF of %sx%s matrix over %s: %s", rows, cols, ring, exponents)

    return SmithForm(
        u=ChainMatrix(ring=ring, entries=u),
        d=ChainMatrix(ring=ring, entries=a),
        v=ChainMatrix(ring=ring, entries=v),
        u_inv=ChainMatrix(ring=ring, entries=u_inv % ring.modulus),
        v_inv=ChainMatrix(ring=ring, entries=v_inv % ring.modulus),
        exponents=tuple(exponents),
    )


def complex_cohomology(d_prev: ChainMatrix, d_next: ChainMatrix, twist: int = 0) -> InvariantFactors:
    """Invariant factors of ker(d_next) / im(d_prev)"""
    ring = d_next.ring

    if d_prev.rows != d_next.cols:
        raise ValueError(f"Incompatible differentials: {d_prev.rows} rows against {d_next.cols} columns")

    composite = d_next @ d_prev
    if not composite.is_zero():
        raise NotAComplex("d_next @ d_prev is not zero", witness=composite.to_json())

    size, e = d_next.cols, ring.nilpotency
    form = snf(d_next)
    kernel_exponents = list(form.exponents) + [e] * (size - len(form.exponents))
    generators = [j for j, a in enumerate(kernel_exponents) if a > 0]

    if not generators:
        return InvariantFactors(twist=twist)

    image = ring.matmul(form.v_inv.entries, d_prev.entries)[generators]
    relations = ring.zeros(len(generators), len(generators) + d_prev.cols)

    for row, j in enumerate(generators):
        a = kernel_exponents[j]
        relations[row, row] = ring.uniformizer_power(a) if a < e else ring.zero
        relations[row, len(generators) :] = ring.divide_by_uniformizer_power(image[row], e - a)

    presentation = snf(ChainMatrix(ring=ring, entries=relations))
    return InvariantFactors.from_exponents(presentation.exponents, e, twist=twist)


def solve(matrix: ChainMatrix, target: np.ndarray) -> np.ndarray | None:
    """Some x with matrix @ x = target, or None when the system has no solution"""
    ring = matrix.ring
    form = snf(matrix)
    z = ring.matmul(form.u.entries, target[:, None])[:, 0]
    y = ring.zeros(matrix.cols)

    for j in range(matrix.rows):
        a = form.exponents[j] if j < len(form.exponents) else ring.nilpotency
        if int(ring.valuation(z[j])) < a:
            return None
        if j < matrix.cols and a < ring.nilpotency:
            y[j] = ring.divide_by_uniformizer_power(z[j], a)

    return ring.matmul(form.v.entries, y[:, None])[:, 0]


def integer_exponents(rows: list[list[int]], p: int, N: int) -> tuple[int, ...]:  # noqa: N803
    """Invariant factor exponents of an integer matrix reduced mod p^N"""
    diagonal = smith_normal_form(Matrix(rows), domain=ZZ)
    size = min(diagonal.shape)
    exponents = [
        N if diagonal[k, k] == 0 else min(intpoly.p_valuation(abs(int(diagonal[k, k])), p), N) for k in range(size)
    ]
    return tuple(sorted(exponents))
