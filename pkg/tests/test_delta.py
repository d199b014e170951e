import random
from fractions import Fraction

import pytest
from pydantic import ValidationError

from prismpy.algebra import intpoly
from prismpy.algebra.base import DepthExceeded, PrecisionLoss
from prismpy.algebra.basering import BaseRing
from prismpy.algebra.delta import (
    DeltaRing,
    delta_power_divisibility,
    distinguished_membership_check,
    distinguished_power_membership_check,
    divided_power_certificate,
    evaluate_certificate,
    is_distinguished,
    is_distinguished_at_one,
    joyal_operations,
    w2_check,
    witt_embedding_check,
)


def test_delta_of_integers() -> None:
    ring = DeltaRing(p=2)
    assert ring.from_int(0).delta() == 0
    assert ring.from_int(1).delta() == 0
    assert ring.from_int(2).delta() == -1
    assert DeltaRing(p=3).from_int(3).delta() == -8


def test_generators_are_required() -> None:
    with pytest.raises(ValidationError):
        DeltaRing(p=2, generators=())


def test_frobenius_of_a_generator() -> None:
    ring = DeltaRing(p=3)
    (x,) = ring.gens
    assert x.phi() == x**3 + 3 * ring.variable(0, 1)
    assert x.delta() == ring.variable(0, 1)
    assert x.is_frobenius_lift()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_product_rule(p: int) -> None:
    ring = DeltaRing(p=p, generators=("x", "y"))
    x, y = ring.gens
    expected = x**p * y.delta() + y**p * x.delta() + p * x.delta() * y.delta()
    assert (x * y).delta() == expected


@pytest.mark.parametrize("p", [2, 3])
def test_sum_rule(p: int) -> None:
    ring = DeltaRing(p=p, generators=("x", "y"))
    x, y = ring.gens
    defect = intpoly.exact_div_ground(x.poly**p + y.poly**p - (x.poly + y.poly) ** p, p)
    assert (x + y).delta() == x.delta() + y.delta() + ring.element(defect)


def test_depth_is_bounded() -> None:
    ring = DeltaRing(p=2, depth=2)
    (x,) = ring.gens

    with pytest.raises(DepthExceeded):
        ring.variable(0, 2)

    with pytest.raises(DepthExceeded):
        x.delta().delta()


def test_joyal_operations() -> None:
    ring = DeltaRing(p=2)
    (x,) = ring.gens
    operations = joyal_operations(x, 2)

    assert operations[0] == x
    assert operations[1] == x.delta()

    second = intpoly.exact_div_ground(x.phi_power(2).poly - x.poly**4 - 2 * x.delta().poly ** 2, 4)
    assert operations[2] == ring.element(second)
    assert x.joyal(2) == operations[2]
    assert ring.from_int(1).joyal(2) == 0


def test_witt_embedding() -> None:
    ring = DeltaRing(p=2, generators=("x", "y"), depth=4)
    x, y = ring.gens
    assert w2_check(x, y)
    assert witt_embedding_check(x, y, length=3)
    assert w2_check(*DeltaRing(p=3, generators=("x", "y")).gens)


def test_distinguished_elements() -> None:
    base = BaseRing(p=3, N=2, M=3)
    assert is_distinguished(base.from_int(3))
    assert is_distinguished(base.bracket_p)
    assert not is_distinguished(base.q - 1)
    assert not is_distinguished(base.from_int(9))


def test_distinguished_membership() -> None:
    base = BaseRing(p=3, N=2, M=3)
    d = base.bracket_p
    membership = distinguished_membership_check(d)

    assert membership.holds
    a, b = membership.witness
    assert a * d + b * d.frobenius() == base.from_int(3)


def test_distinguished_at_one() -> None:
    base = BaseRing(p=3, N=2, M=3)
    assert is_distinguished_at_one(base.bracket_p)
    assert not is_distinguished_at_one(base.q - 1)
    assert not is_distinguished_at_one(base.one)

    small = BaseRing(p=2, N=2, M=2)
    assert all(is_distinguished(d) == is_distinguished_at_one(d) for d in small.elements())

    with pytest.raises(PrecisionLoss):
        is_distinguished_at_one(BaseRing(p=3, N=1, M=2).from_int(3))


def test_distinguished_power_membership() -> None:
    base = BaseRing(p=3, N=2, M=3)
    d = base.bracket_p
    membership = distinguished_power_membership_check(d)

    assert membership.holds
    a, b = membership.witness
    assert a * d**3 + b * d.frobenius() == base.from_int(3)
    assert not distinguished_power_membership_check(base.q - 1).holds


def test_delta_power_divisibility() -> None:
    for n in range(3):
        assert delta_power_divisibility(2, n).ring.p == 2


def test_divided_power_of_degree_p() -> None:
    certificate = divided_power_certificate(2, 2)
    ring = certificate.polynomial.ring
    x, z = ring.gens

    assert certificate.polynomial == z - x.delta()
    assert certificate.unit == Fraction(1)


@pytest.mark.parametrize(("p", "bound"), [(2, 8), (3, 9)])
def test_divided_powers_are_integral(p: int, bound: int) -> None:
    rng = random.Random(0)
    for n in range(1, bound + 1):
        certificate = divided_power_certificate(p, n)
        assert evaluate_certificate(certificate, rng)
