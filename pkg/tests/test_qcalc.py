import pytest

from prismpy.algebra import intpoly, qcalc
from prismpy.algebra.base import NonUnit, NotDivisible
from prismpy.algebra.basering import BaseRing

q = intpoly.q_ring().gens[0]
t = intpoly.t_ring().gens[0]


def test_q_integers() -> None:
    assert qcalc.q_int(0) == 0
    assert qcalc.q_int(1) == 1
    assert qcalc.q_int(3) == q**2 + q + 1

    with pytest.raises(ValueError, match="polynomial"):
        qcalc.q_int(-1)


def test_q_factorial() -> None:
    assert qcalc.q_factorial(3) == (1 + q) * (1 + q + q**2)
    assert intpoly.value_at_one(qcalc.q_factorial(4)) == 24


def test_q_binomial() -> None:
    assert qcalc.q_binomial(4, 2) == 1 + q + 2 * q**2 + q**3 + q**4
    assert intpoly.value_at_one(qcalc.q_binomial(4, 2)) == 6

    with pytest.raises(ValueError, match="needs"):
        qcalc.q_binomial(2, 3)


def test_q_pascal() -> None:
    for a in range(1, 8):
        for b in range(a + 1):
            assert qcalc.q_pascal(a, b) == qcalc.q_binomial(a, b)


def test_cyclotomic() -> None:
    assert qcalc.cyclotomic(3) == qcalc.q_int(3)
    assert qcalc.frobenius(qcalc.q_int(2), 3) == 1 + q**3


@pytest.mark.parametrize("p", [2, 3, 5])
def test_frobenius_factorial(p: int) -> None:
    for m in range(9):
        assert qcalc.verify_frobenius_factorial(p, m).holds


@pytest.mark.parametrize(("p", "root_depth"), [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_floor_factorial(p: int, root_depth: int) -> None:
    for numerator in range(3 * p**root_depth + 1):
        assert qcalc.verify_floor_factorial(p, numerator, root_depth).holds


def test_floor_factorial_value() -> None:
    certificate = qcalc.verify_floor_factorial(3, 5, 1)
    assert certificate.cofactor == qcalc.q_int(4) * qcalc.q_int(5)
    assert certificate.value_at_one == 20


def test_unit_certificate_rejects_p() -> None:
    with pytest.raises(NonUnit):
        qcalc.unit_certificate(qcalc.q_int(3), 3)


def test_frobenius_factorial_nonzerodivisor() -> None:
    certificate = qcalc.frobenius_factorial_nonzerodivisor(3, 2)
    assert certificate.remainder == 2
    assert certificate.holds


def test_gamma_identities() -> None:
    x = (t - 1) * (t + 2)
    y = 3 * (t - 1)

    for p in (2, 3, 5):
        assert qcalc.gamma_sum_identity(x, y, p)
        assert qcalc.gamma_scale_identity(t**2 + 1, x, p)
        assert qcalc.smallest_qpd_ideal_check(p)


def test_gamma_at_one() -> None:
    x = 2 * (t - 1)
    assert qcalc.gamma_at_one(x, 3) == 0


def test_gamma_on_the_base() -> None:
    ring = BaseRing(p=3, N=2, M=3)
    value = qcalc.gamma(ring.q - 1)
    assert value.ring.N == 1

    with pytest.raises(NotDivisible):
        qcalc.gamma(ring.one)


def test_q_factorial_table() -> None:
    table = qcalc.QFactorialTable(p=2, bound=3)
    assert table[3] == qcalc.q_factorial(3)
    assert table[5] == qcalc.q_factorial(5)
    assert table.root_entries[2] == 1 + t
