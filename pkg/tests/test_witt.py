import pytest
from pydantic import ValidationError

from prismpy.algebra.base import MixedRings, NotDivisible
from prismpy.algebra.homology import InvariantFactors
from prismpy.algebra.witt import (
    GaloisField,
    Integers,
    IntegersMod,
    WittVec,
    delta_perfect,
    delta_universal,
    divide_by_p,
    from_components,
    from_integer,
    integer_components,
    no_nonzerodivisor_witness,
    one,
    structure_polynomials,
    tate_twist_invariants,
    teichmuller,
    teichmuller_digit,
    times_p,
)


def test_structure_polynomials() -> None:
    polynomials = structure_polynomials(2, 2)
    x0, x1, y0, y1 = polynomials.ring.gens

    assert polynomials.sum == (x0 + y0, x1 + y1 - x0 * y0)
    assert polynomials.product[0] == x0 * y0
    assert polynomials.negation[0] == -x0


def test_integer_components() -> None:
    assert integer_components(2, 2, 2) == (2, -1)
    assert from_integer(IntegersMod(p=3, N=1), 3, 3, 2).components == (0, 1)


def test_ghost_map_is_a_homomorphism() -> None:
    ring = Integers()
    x = from_components(ring, 2, [3, 1, -2])
    y = from_components(ring, 2, [5, -2, 4])

    assert (x + y).ghost() == [a + b for a, b in zip(x.ghost(), y.ghost(), strict=True)]
    assert (x * y).ghost() == [a * b for a, b in zip(x.ghost(), y.ghost(), strict=True)]
    assert (-x).ghost() == [-a for a in x.ghost()]
    assert x.frobenius().ghost() == x.ghost()[1:]


def test_integers_mod() -> None:
    ring = IntegersMod(p=3, N=2)
    x = from_components(ring, 3, [4, 7])
    assert x - x == from_components(ring, 3, [0, 0])
    assert (x * one(ring, 3, 2)) == x


def test_invalid_vectors() -> None:
    with pytest.raises(ValidationError):
        WittVec(ring=Integers(), p=2, components=())

    with pytest.raises(ValidationError):
        GaloisField(order=6)


def test_mixed_lengths() -> None:
    field = GaloisField(order=4)

    with pytest.raises(MixedRings):
        _ = one(field, 2, 2) + one(field, 2, 3)


def test_teichmuller_is_multiplicative() -> None:
    field = GaloisField(order=4)
    for a in field.elements():
        for b in field.elements():
            product = teichmuller(field, 2, a, 3) * teichmuller(field, 2, b, 3)
            assert product == teichmuller(field, 2, field.mul(a, b), 3)


def test_p_is_verschiebung_of_frobenius() -> None:
    field = GaloisField(order=4)
    x = from_components(field, 2, [1, 2, 3])
    p = from_integer(field, 2, 2, 3)
    assert p * x == x.frobenius_perfect().verschiebung().truncate(3)


def test_frobenius_agrees_over_perfect_fields() -> None:
    field = GaloisField(order=9)
    x = from_components(field, 3, [2, 5, 7])
    assert x.frobenius() == x.frobenius_perfect().truncate(2)
    assert delta_universal(x) == delta_perfect(x).truncate(1)


def test_teichmuller_digit() -> None:
    field = GaloisField(order=3)
    assert teichmuller_digit(from_integer(field, 3, 3, 2)) == 1

    extension = GaloisField(order=9)
    d = teichmuller(extension, 3, 4, 2) + from_integer(extension, 3, 3, 2) * teichmuller(extension, 3, 7, 2)
    assert teichmuller_digit(d) == 7

    with pytest.raises(NotDivisible):
        divide_by_p(one(field, 3, 2))


def test_no_nonzerodivisors() -> None:
    report = no_nonzerodivisor_witness(2, 2)
    assert report.size == 16
    assert report.units == 8
    assert report.holds


def test_tate_twist_over_prime_field() -> None:
    untwisted = tate_twist_invariants(3, 2, 0)
    assert untwisted.h0 == InvariantFactors(free_rank=1)
    assert untwisted.h1 == InvariantFactors(free_rank=1)

    twisted = tate_twist_invariants(3, 2, 1)
    assert twisted.working_length == 1
    assert twisted.h0.is_zero
    assert twisted.h1.is_zero


def test_tate_twist_over_extension() -> None:
    result = tate_twist_invariants(4, 1, 0)
    assert result.h0 == InvariantFactors(free_rank=1)
    assert result.h1 == InvariantFactors(free_rank=1)


def test_tate_twist_kernel_structure() -> None:
    result = tate_twist_invariants(4, 3, 0)
    assert result.h0.torsion_length(3, 1) == 1
    assert result.h0.torsion_length(3, 3) == result.h0.length(3)


def test_tate_twist_needs_length() -> None:
    with pytest.raises(ValueError, match="exceed"):
        tate_twist_invariants(2, 1, 1)


def test_times_p() -> None:
    field = GaloisField(order=4)
    x = from_components(field, 2, [3, 1, 2])
    assert times_p(x) == from_integer(field, 2, 2, 3) * x
    assert times_p(times_p(times_p(x))).is_zero()

    with pytest.raises(TypeError):
        times_p(from_components(Integers(), 2, [1, 1]))


def test_projection_formula() -> None:
    ring = Integers()
    a = from_components(ring, 3, [2, -1, 4])
    w = from_components(ring, 3, [1, 3])
    assert a * w.verschiebung() == (a.frobenius() * w).verschiebung()


def test_teichmuller_is_multiplicative_over_extension() -> None:
    field = GaloisField(order=9)
    for a, b in ((2, 5), (4, 7), (8, 8)):
        assert teichmuller(field, 3, a, 2) * teichmuller(field, 3, b, 2) == teichmuller(field, 3, field.mul(a, b), 2)
