import pytest
from pydantic import ValidationError

from prismpy.algebra import intpoly, qcalc
from prismpy.algebra.base import DegreeOverflow, MixedBases
from prismpy.algebra.basering import BaseRing
from prismpy.algebra.qpd import (
    QPDModule,
    bracket_p_valuation,
    gamma_envelope,
    kunneth_product,
    nygaard_decreasing,
    nygaard_multiplicative,
    nygaard_verify,
    q_power_divisibility,
    tensor,
)

q = intpoly.q_ring().gens[0]


@pytest.fixture
def module() -> QPDModule:
    return QPDModule(base=BaseRing(p=2, N=3, M=4, K=2), D=6)


def test_roots_are_required() -> None:
    with pytest.raises(ValidationError):
        QPDModule(base=BaseRing(p=2, N=3, M=4), D=6)


def test_bounds(module: QPDModule) -> None:
    assert module.scale == 4
    assert module.bound == 24
    assert module.floor((9,)) == 2
    assert len(module.frobenius_domain) == 13


def test_structure_constants(module: QPDModule) -> None:
    assert module.product_constant((4,), (4,)) == 1 + q
    assert module.product_constant((1,), (2,)) == 1

    y = module.basis((4,))
    assert y * y == module.basis((8,)).scale(module.from_q_poly(1 + q))


def test_degree_bound(module: QPDModule) -> None:
    with pytest.raises(DegreeOverflow):
        module.basis((25,))

    with pytest.raises(DegreeOverflow):
        _ = module.basis((16,)) * module.basis((16,))

    with pytest.raises(DegreeOverflow):
        module.basis((13,)).frobenius()


def test_frobenius(module: QPDModule) -> None:
    assert module.basis((1,)).frobenius() == module.basis((2,))
    assert module.basis((4,)).frobenius() == module.basis((8,)).scale(module.from_q_poly(1 + q))


def test_ring_laws(module: QPDModule) -> None:
    a = module.basis((1,)) + module.basis((3,)).scale(module.base.q)
    b = module.basis((2,)).scale(3) - module.one
    c = module.basis((5,))

    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).frobenius() == a.frobenius() * b.frobenius()


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_nygaard_filtration(module: QPDModule, n: int) -> None:
    report = nygaard_verify(module, n)
    assert report.holds
    assert report.image_degrees == report.expected_degrees


def test_nygaard_level_zero(module: QPDModule) -> None:
    assert len(nygaard_verify(module, 0).expected_degrees) == 4


def test_nygaard_graded_rank(module: QPDModule) -> None:
    report = nygaard_verify(module, 1)
    assert report.graded_rank == len(report.expected_degrees) == 8
    assert report.failures == ()


def test_nygaard_verify_rejects_wrong_generators(module: QPDModule, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(QPDModule, "nygaard_exponent", lambda _, __, ___: 0)
    report = nygaard_verify(module, 1)

    assert not report.holds
    assert {"part": "divisible", "degree": [0]} in report.failures
    assert report.graded_rank == 0


def test_nygaard_lifts(module: QPDModule) -> None:
    t = intpoly.t_ring().gens[0]
    lifts = module.nygaard_lifts(2)

    assert lifts[(0,)] == (1 + t**2) ** 2
    assert lifts[(4,)] == 1 + t**2
    assert lifts[(8,)] == 1


def test_nygaard_at_three() -> None:
    module = QPDModule(base=BaseRing(p=3, N=2, M=3, K=1), D=6)
    for n in range(3):
        assert nygaard_verify(module, n).holds


def test_nygaard_filtration_structure() -> None:
    module = QPDModule(base=BaseRing(p=2, N=2, M=3, K=2), D=2)
    assert nygaard_decreasing(module, 0)
    assert nygaard_decreasing(module, 1)
    assert nygaard_multiplicative(module, 1, 1)
    assert nygaard_multiplicative(module, 0, 2)


def test_nygaard_generators(module: QPDModule) -> None:
    generators = module.nygaard_generators(1)
    assert len(generators) == len(list(module.exponents()))
    assert generators[0] == module.one.scale(module.base.bracket_p_root)
    assert generators[4] == module.basis((4,))

    with pytest.raises(ValueError, match="negative"):
        module.nygaard_generators(-1)


def test_conjugate_level(module: QPDModule) -> None:
    assert module.conjugate_level((7,)) == 0
    assert module.conjugate_level((8,)) == 1


def test_q_power_divisibility(module: QPDModule) -> None:
    for n in range(module.D + 1):
        assert q_power_divisibility(module, n).holds


def test_gamma_envelope(module: QPDModule) -> None:
    gamma = gamma_envelope(module, (4,))
    assert gamma == module.basis((8,))
    assert gamma.scale(module.base.bracket_p) == module.basis((4,)).frobenius()

    with pytest.raises(DegreeOverflow):
        gamma_envelope(module, (13,))


def test_kunneth(module: QPDModule) -> None:
    product = kunneth_product(module, module)
    assert product.r == 2
    assert product.D == 12
    assert tensor(module.basis((4,)), module.basis((1,))) == product.basis((4, 1))

    other = QPDModule(base=BaseRing(p=2, N=2, M=4, K=2), D=6)
    with pytest.raises(MixedBases):
        kunneth_product(module, other)


def test_bracket_p_valuation() -> None:
    assert bracket_p_valuation(qcalc.cyclotomic(3) ** 2 * (q + 5), 3) == (2, q + 5)
    assert bracket_p_valuation(q + 1, 3) == (0, q + 1)
