import numpy as np
import pytest
from pydantic import ValidationError

from prismpy.algebra.base import NotAComplex
from prismpy.algebra.chainring import CyclotomicRing, ZmodRing
from prismpy.algebra.homology import (
    ChainMatrix,
    InvariantFactors,
    complex_cohomology,
    integer_exponents,
    snf,
    solve,
)


def test_invariant_factors() -> None:
    factors = InvariantFactors.from_exponents([0, 3, 1], nilpotency=3)
    assert factors.free_rank == 1
    assert factors.torsion == (1,)
    assert factors.length(3) == 4
    assert not factors.is_zero
    assert InvariantFactors().is_zero


def test_invariant_factors_sum() -> None:
    first = InvariantFactors(free_rank=1, torsion=(2,))
    second = InvariantFactors(torsion=(1,))
    assert first.direct_sum(second) == InvariantFactors(free_rank=1, torsion=(1, 2))
    assert first.with_twist(2).twist == 2


def test_torsion_is_positive() -> None:
    with pytest.raises(ValidationError):
        InvariantFactors(torsion=(0,))


def test_snf_of_diagonal() -> None:
    ring = ZmodRing(p=3, N=3)
    form = snf(ChainMatrix.from_ints(ring, [[9, 0], [0, 3]]))
    assert form.exponents == (1, 2)
    assert form.rank == 2


@pytest.mark.parametrize("ring", [ZmodRing(p=3, N=3), CyclotomicRing(p=3, N=2)])
def test_snf_transforms(ring: ZmodRing | CyclotomicRing) -> None:
    matrix = ChainMatrix.from_ints(ring, [[2, 4, 3], [6, 3, 0]])
    form = snf(matrix)
    assert form.u @ matrix @ form.v == form.d
    assert form.u @ form.u_inv == ChainMatrix.identity(ring, 2)
    assert form.v_inv @ form.v == ChainMatrix.identity(ring, 3)


def test_snf_of_empty_matrix() -> None:
    assert snf(ChainMatrix.zeros(ZmodRing(p=2, N=2), 0, 3)).exponents == ()


def test_cohomology_of_multiplication_by_p() -> None:
    ring = ZmodRing(p=3, N=3)
    times_three = ChainMatrix.from_ints(ring, [[3]])

    kernel = complex_cohomology(ChainMatrix.zeros(ring, 1, 0), times_three)
    cokernel = complex_cohomology(times_three, ChainMatrix.zeros(ring, 0, 1))

    assert kernel == InvariantFactors(torsion=(1,))
    assert cokernel == InvariantFactors(torsion=(1,))


def test_cohomology_of_zero_map() -> None:
    ring = CyclotomicRing(p=3, N=1)
    zero = ChainMatrix.zeros(ring, 2, 2)
    assert complex_cohomology(ChainMatrix.zeros(ring, 2, 0), zero, twist=1) == InvariantFactors(free_rank=2, twist=1)


def test_not_a_complex() -> None:
    ring = ZmodRing(p=2, N=2)
    one = ChainMatrix.from_ints(ring, [[1]])

    with pytest.raises(NotAComplex):
        complex_cohomology(one, one)

    with pytest.raises(ValueError, match="Incompatible"):
        complex_cohomology(ChainMatrix.zeros(ring, 2, 1), one)


def test_solve() -> None:
    ring = ZmodRing(p=3, N=3)
    matrix = ChainMatrix.from_ints(ring, [[3]])

    solution = solve(matrix, ring.element(6)[None])
    assert solution is not None
    assert 3 * int(solution[0, 0]) % 27 == 6

    assert solve(matrix, ring.element(1)[None]) is None


def test_integer_exponents() -> None:
    assert integer_exponents([[2, 0], [0, 4]], 2, 3) == (1, 2)
    assert integer_exponents([[0]], 2, 3) == (3,)
    assert integer_exponents([[16]], 2, 3) == (3,)


def test_solve_with_unit_pivot() -> None:
    ring = ZmodRing(p=3, N=3)
    solution = solve(ChainMatrix.from_ints(ring, [[1], [1]]), np.stack([ring.element(1), ring.element(1)]))

    assert solution is not None
    assert solution.tolist() == [[1]]


@pytest.mark.parametrize("ring", [ZmodRing(p=3, N=3), CyclotomicRing(p=3, N=2)])
def test_solve_recovers_image(ring: ZmodRing | CyclotomicRing) -> None:
    matrix = ChainMatrix.from_ints(ring, [[2, 4, 3], [6, 3, 0]])
    target = ring.matmul(matrix.entries, np.stack([ring.element(1), ring.element(2), ring.zero])[:, None])[:, 0]

    solution = solve(matrix, target)
    assert solution is not None
    assert np.array_equal(ring.matmul(matrix.entries, solution[:, None])[:, 0], target)


def test_torsion_length() -> None:
    factors = InvariantFactors(free_rank=1, torsion=(1, 2))
    assert factors.torsion_length(3, 1) == 3
    assert factors.torsion_length(3, 2) == 5
    assert factors.torsion_length(3, 3) == factors.length(3)
