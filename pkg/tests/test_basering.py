import pytest
from pydantic import ValidationError

from prismpy.algebra.base import MixedRings, NotDivisible, PrecisionLoss
from prismpy.algebra.basering import BaseElem, BaseRing


def test_prime_is_required() -> None:
    with pytest.raises(ValidationError):
        BaseRing(p=4, N=2, M=2)


def test_element_is_canonical() -> None:
    ring = BaseRing(p=3, N=1, M=3)
    assert ring.element([5, -1]).coeffs == (2, 2, 0)

    with pytest.raises(ValidationError):
        BaseElem(ring=ring, coeffs=(1, 0))

    with pytest.raises(ValidationError):
        BaseElem(ring=ring, coeffs=(3, 0, 0))


def test_q_in_the_s_basis() -> None:
    assert BaseRing(p=3, N=2, M=3).q.coeffs == (1, 1, 0)
    assert BaseRing(p=2, N=3, M=3, K=1).q.coeffs == (1, 2, 1)


def test_bracket_p() -> None:
    assert BaseRing(p=2, N=3, M=2).bracket_p.coeffs == (2, 1)
    assert BaseRing(p=3, N=2, M=4).bracket_p.coeffs == (3, 3, 1, 0)


def test_bracket_p_root_needs_roots() -> None:
    with pytest.raises(PrecisionLoss):
        _ = BaseRing(p=2, N=2, M=2).bracket_p_root

    ring = BaseRing(p=2, N=3, M=3, K=1)
    assert ring.bracket_p_root.coeffs == (2, 1, 0)


def test_products_truncate() -> None:
    ring = BaseRing(p=3, N=2, M=2)
    assert not ring.s * ring.s
    assert (ring.s + 1) * (ring.s + 1) == ring.element([1, 2])


def test_inverse() -> None:
    ring = BaseRing(p=3, N=2, M=3)
    unit = ring.one + ring.s
    assert unit.inverse() * unit == ring.one
    assert unit**-1 == unit.inverse()

    with pytest.raises(NotDivisible):
        (ring.s * 3).inverse()


def test_frobenius() -> None:
    ring = BaseRing(p=2, N=3, M=3)
    assert ring.s.frobenius().coeffs == (0, 2, 1)
    assert ring.q.frobenius() == ring.q * ring.q


def test_delta() -> None:
    ring = BaseRing(p=3, N=2, M=2)
    value = ring.from_int(3).delta()
    assert value.ring.N == 1
    assert value.coeffs == (1, 0)

    with pytest.raises(PrecisionLoss):
        BaseRing(p=3, N=1, M=2).from_int(3).delta()


def test_divide_by_s() -> None:
    ring = BaseRing(p=2, N=2, M=3)
    assert ring.element([0, 2, 1]).divide_by_s().coeffs == (2, 1)

    with pytest.raises(NotDivisible):
        ring.element([1, 2, 1]).divide_by_s()


def test_reduce() -> None:
    ring = BaseRing(p=3, N=2, M=3)
    small = ring.truncate(N=1, M=2)
    assert ring.element([4, 5, 1]).reduce(small).coeffs == (1, 2)

    with pytest.raises(MixedRings):
        small.one.reduce(ring)


def test_mixed_rings() -> None:
    with pytest.raises(MixedRings):
        _ = BaseRing(p=3, N=2, M=2).one + BaseRing(p=3, N=1, M=2).one


def test_elements() -> None:
    assert len(BaseRing(p=2, N=1, M=2).elements()) == 4
