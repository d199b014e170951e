"""Framed q-de Rham complexes of polynomial and Laurent algebras.

A framed algebra has generators x_1..x_r, each polynomial or Laurent, and coordinates on which the scalings gamma_s
act by x_s -> q x_s. The standard framing uses the generators themselves, and its complexes are graded by the weight
of ``x^n dx_S``, which is ``n + 1_S``. A one-generator algebra may instead use a substituted coordinate
``x' = x (1 + m(x))`` or ``x' = x + c``. Its differential is then computed by exact division in the x-monomial basis,
and the window keeps the weights in [-W, W] (Laurent) or [0, W] (polynomial).
Two framings are compared through their invariant factors only, which is weaker than a comparison map.
"""

import itertools
import logging
from collections import Counter
from collections.abc import Callable, Iterator
from fractions import Fraction
from functools import cached_property
from typing import Literal, Self

import sympy
from pydantic import Field, PositiveInt, model_validator
from sympy.polys.ring_series import rs_series_inversion
from sympy.polys.rings import PolyElement

from . import intpoly, qcalc
from .base import (
    AlgebraModel,
    Mismatch,
    NonCommuting,
    NotDivisible,
    PrecisionLoss,
    RootDepthUnsupported,
    Unstable,
    WindowOverflow,
)
from .basering import BaseElem, BaseRing
from .chainring import CyclotomicRing, ZmodRing
from .homology import ChainMatrix, InvariantFactors, complex_cohomology

logger = logging.getLogger(__name__)

Exponent = tuple[int, ...]
Label = tuple[Exponent, tuple[int, ...]]
Target = Literal["q1", "zeta"]
Theory = Literal["qderham", "derham", "hodge-tate"]


def _common(a: BaseElem, b: BaseElem) -> tuple[BaseElem, BaseElem]:
    if a.ring == b.ring:
        return a, b
    ring = a.ring.truncate(N=min(a.ring.N, b.ring.N), M=min(a.ring.M, b.ring.M))
    return a.reduce(ring), b.reduce(ring)


def _series_mul(a: list[BaseElem], b: list[BaseElem]) -> list[BaseElem]:
    """Product truncated to len(a) terms"""
    precision = len(a)
    result = [a[0].ring.zero] * precision
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(precision - i):
            if b[j]:
                result[i + j] += x * b[j]
    return result


def _series_inverse(a: list[BaseElem]) -> list[BaseElem]:
    head = a[0].inverse()
    result = [head]
    for k in range(1, len(a)):
        total = a[0].ring.zero
        for j in range(1, k + 1):
            if a[j]:
                total += a[j] * result[k - j]
        result.append(-(total * head))
    return result


def _series_shift(a: list[BaseElem], k: int) -> list[BaseElem]:
    return [a[0].ring.zero] * k + a[: len(a) - k]


def _poly_mul(a: list[BaseElem], b: list[BaseElem]) -> list[BaseElem]:
    result = [a[0].ring.zero] * (len(a) + len(b) - 1)
    for (i, x), (j, y) in itertools.product(enumerate(a), enumerate(b)):
        result[i + j] += x * y
    return result


def _divide_by_linear(a: list[BaseElem], c: BaseElem) -> list[BaseElem]:
    """Quotient of a(x) by x + c; NotDivisible unless exact"""
    degree = len(a) - 1
    if degree == 0:
        if a[0]:
            raise NotDivisible("A nonzero constant is not divisible by x + c", remainder=a[0].to_json())
        return []

    quotient = [c.ring.zero] * degree
    quotient[degree - 1] = a[degree]
    for k in range(degree - 1, 0, -1):
        quotient[k - 1] = a[k] - c * quotient[k]

    remainder = a[0] - c * quotient[0]
    if remainder:
        raise NotDivisible("gamma(f) - f is not divisible by x + c", remainder=remainder.to_json())

    return quotient


class Generator(AlgebraModel):
    name: str
    laurent: bool = False


class Framing(AlgebraModel):
    """Coordinate x' of a one-generator algebra, with Z[q] coefficients"""

    kind: Literal["standard", "multiplicative", "translation"] = "standard"
    perturbation: dict[int, PolyElement] = Field(default_factory=dict)
    shift: PolyElement | None = None

    @classmethod
    def multiplicative(cls, perturbation: dict[int, PolyElement]) -> Self:
        """x' = x * (1 + sum m_k x^k)"""
        return cls(kind="multiplicative", perturbation={k: m for k, m in perturbation.items() if m})

    @classmethod
    def translation(cls, shift: PolyElement) -> Self:
        """x' = x + c"""
        return cls(kind="translation", shift=shift)

    @classmethod
    def from_coordinate(cls, coordinate: dict[int, PolyElement]) -> Self:
        """Classify x' = sum a_k x^k"""
        one = qcalc.q_ring().one
        terms = {k: a for k, a in coordinate.items() if a}

        if terms == {1: one}:
            return cls()

        if set(terms) <= {0, 1} and terms.get(1) == one:
            return cls.translation(terms[0])

        if terms and min(terms) >= 1:
            perturbation = {k - 1: a for k, a in terms.items()}
            perturbation[0] = perturbation.get(0, qcalc.q_ring().zero) - one
            return cls.multiplicative(perturbation)

        raise ValueError(f"Coordinate {coordinate} is neither x * (1 + m(x)) nor x + c")

    def coordinate_at_one(self) -> dict[int, int]:
        """Integer coefficients of x' at q = 1"""
        coordinate = {1: 1}
        if self.kind == "multiplicative":
            for k, m in self.perturbation.items():
                coordinate[k + 1] = coordinate.get(k + 1, 0) + int(intpoly.value_at_one(m))
        elif self.kind == "translation":
            coordinate[0] = int(intpoly.value_at_one(self.shift))
        return coordinate

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "perturbation": {str(k): intpoly.to_json(m) for k, m in sorted(self.perturbation.items())},
            "shift": intpoly.to_json(self.shift) if self.shift is not None else None,
        }


class FramedAlgebra(AlgebraModel):
    base: BaseRing
    generators: tuple[Generator, ...]
    framing: Framing = Field(default_factory=Framing)
    window: PositiveInt

    @model_validator(mode="after")
    def is_supported(self) -> Self:
        if not 1 <= len(self.generators) <= 3:  # noqa: PLR2004
            raise ValueError(f"Expected one to three generators, got {len(self.generators)}")

        if len({g.name for g in self.generators}) != len(self.generators):
            raise ValueError("Generator names must be distinct")

        if self.framing.kind == "standard":
            return self

        if len(self.generators) != 1:
            raise ValueError("Coordinate changes are supported on one generator only")

        if self.framing.kind == "translation" and self.generators[0].laurent:
            raise ValueError("Translations of a Laurent generator are not invertible")

        for k, m in self.framing.perturbation.items():
            if k < 0:
                raise ValueError(f"Perturbation term x^{k} has a negative power")
            if int(intpoly.value_at_one(m)) % self.base.p:
                raise ValueError(f"Perturbation coefficient {m.as_expr()} is not in (p, q - 1)")

        return self

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def is_graded(self) -> bool:
        return self.framing.kind == "standard"

    def lower(self, s: int) -> int:
        return -self.window if self.generators[s].laurent else 0

    def with_window(self, window: int) -> Self:
        return type(self)(base=self.base, generators=self.generators, framing=self.framing, window=window)

    def weights(self) -> Iterator[Exponent]:
        yield from itertools.product(*(range(self.lower(s), self.window + 1) for s in range(self.r)))

    def labels(self, degree: int) -> list[Label]:
        """Basis x^n dx_S of the degree-th Koszul term, ordered by weight and then by S"""
        labels = []
        for weight in self.weights():
            for subset in itertools.combinations(range(self.r), degree):
                exponent = tuple(w - (s in subset) for s, w in enumerate(weight))
                if all(g.laurent or a >= 0 for g, a in zip(self.generators, exponent, strict=True)):
                    labels.append((exponent, subset))
        return labels

    def element(self, terms: dict[Exponent, BaseElem]) -> "FramedElem":
        return FramedElem(algebra=self, terms={n: c for n, c in terms.items() if c})

    def monomial(self, exponent: Exponent, coefficient: BaseElem | None = None) -> "FramedElem":
        return self.element({tuple(exponent): self.base.one if coefficient is None else coefficient})

    def check_window(self, f: "FramedElem") -> None:
        for exponent in f.terms:
            if any(not self.lower(s) <= a <= self.window for s, a in enumerate(exponent)):
                raise WindowOverflow(f"x^{exponent} lies outside the window of width {self.window}")

    def bracket(self, n: int) -> BaseElem:
        """[n]_q, with [n]_q = -q^n [-n]_q for negative n"""
        if n >= 0:
            return self.base.from_q_poly(qcalc.q_int(n))
        return -(self.base.q**n) * self.base.from_q_poly(qcalc.q_int(-n))

    @property
    def precision(self) -> int:
        return self.window - self.lower(0) + 2

    @cached_property
    def reduced_base(self) -> BaseRing:
        """Base with one (q-1)-digit consumed by the division in the substituted differential"""
        if self.base.M == 1:
            raise PrecisionLoss("A substituted framing needs M >= 2")
        return self.base.truncate(M=self.base.M - 1)

    @cached_property
    def perturbation_series(self) -> list[BaseElem]:
        series = [self.base.zero] * self.precision
        for k, m in self.framing.perturbation.items():
            if k < self.precision:
                series[k] = self.base.from_q_poly(m)
        return series

    @cached_property
    def scaling_series(self) -> list[BaseElem]:
        """g with gamma(x) = x g, the fixed point of g = q (1 + m(x)) / (1 + m(x g))"""
        one = [self.base.one] + [self.base.zero] * (self.precision - 1)
        m = self.perturbation_series
        numerator = [self.base.q * (a + b) for a, b in zip(one, m, strict=True)]
        g = [self.base.q] + [self.base.zero] * (self.precision - 1)
        top = min(max(self.framing.perturbation, default=0), self.precision - 1)

        for iteration in range(self.base.N + self.base.M + 1):
            composed, power = list(one), list(one)
            composed[0] += m[0]
            for k in range(1, top + 1):
                power = _series_mul(power, g)
                if m[k]:
                    composed = [a + m[k] * b for a, b in zip(composed, _series_shift(power, k), strict=True)]

            update = _series_mul(numerator, _series_inverse(composed))
            if update == g:
                logger.debug("Coordinate scaling converged after %s iterations", iteration)
                return g
            g = update

        raise PrecisionLoss("The coordinate scaling did not converge within the truncation")

    @cached_property
    def scaling_powers(self) -> dict[int, list[BaseElem]]:
        one = [self.base.one] + [self.base.zero] * (self.precision - 1)
        powers = {0: one}
        inverse = _series_inverse(self.scaling_series)
        for n in range(1, self.window + 1):
            powers[n] = _series_mul(powers[n - 1], self.scaling_series)
        for n in range(-1, self.lower(0) - 1, -1):
            powers[n] = _series_mul(powers[n + 1], inverse)
        return powers

    @cached_property
    def unit_inverse(self) -> list[BaseElem]:
        """(1 + m(x))^(-1) over the reduced base, so that x' = x (1 + m)"""
        one = [self.base.one] + [self.base.zero] * (self.precision - 1)
        unit = [(a + b).reduce(self.reduced_base) for a, b in zip(one, self.perturbation_series, strict=True)]
        return _series_inverse(unit)

    @cached_property
    def translation_powers(self) -> dict[int, list[BaseElem]]:
        """(q x + (q-1) c)^n"""
        q, c = self.base.q, self.base.from_q_poly(self.framing.shift)
        linear = [(q - 1) * c, q]
        powers = {0: [self.base.one]}
        for n in range(1, self.window + 1):
            powers[n] = _poly_mul(powers[n - 1], linear)
        return powers

    def gamma_monomial(self, exponent: Exponent, s: int) -> dict[Exponent, BaseElem]:
        if self.framing.kind == "standard":
            return {exponent: self.base.q ** exponent[s]}

        (n,) = exponent
        if self.framing.kind == "multiplicative":
            series = self.scaling_powers[n]
            return {(n + j,): c for j, c in enumerate(series) if n + j <= self.window}

        return {(j,): c for j, c in enumerate(self.translation_powers[n])}

    def nabla_monomial(self, exponent: Exponent, s: int) -> dict[Exponent, BaseElem]:
        """Coefficient of dx'_s in the q-derivative of x^n"""
        if self.framing.kind == "standard":
            shifted = tuple(a - (t == s) for t, a in enumerate(exponent))
            return {shifted: self.bracket(exponent[s])}

        (n,) = exponent
        reduced = self.reduced_base

        if self.framing.kind == "multiplicative":
            one = [self.base.one] + [self.base.zero] * (self.precision - 1)
            difference = [(a - b).divide_by_s() for a, b in zip(self.scaling_powers[n], one, strict=True)]
            series = _series_mul(difference, self.unit_inverse)
            return {(n - 1 + j,): c for j, c in enumerate(series) if n + j <= self.window}

        image = list(self.translation_powers[n])
        image[n] -= self.base.one
        quotient = _divide_by_linear(
            [c.divide_by_s() for c in image],
            self.base.from_q_poly(self.framing.shift).reduce(reduced),
        )
        return {(k,): c for k, c in enumerate(quotient)}

    def gamma(self, f: "FramedElem", s: int = 0) -> "FramedElem":
        self.check_window(f)
        return self._apply(f, s, self.gamma_monomial)

    def nabla(self, f: "FramedElem", s: int = 0) -> "FramedElem":
        """(gamma_s(f) - f) / ((q - 1) x'_s)"""
        self.check_window(f)
        return self._apply(f, s, self.nabla_monomial)

    def _apply(
        self,
        f: "FramedElem",
        s: int,
        operator: Callable[[Exponent, int], dict[Exponent, BaseElem]],
    ) -> "FramedElem":
        result = self.element({})
        for exponent, c in f.terms.items():
            image = {k: v * c.reduce(v.ring) for k, v in operator(exponent, s).items()}
            result += self.element(image)
        return result

    def describe(self) -> dict:
        return {
            "p": self.base.p,
            "N": self.base.N,
            "M": self.base.M,
            "K": self.base.K,
            "generators": [{"name": g.name, "laurent": g.laurent} for g in self.generators],
            "framing": self.framing.to_json(),
            "window": self.window,
        }


class FramedElem(AlgebraModel):
    algebra: FramedAlgebra
    terms: dict[Exponent, BaseElem]

    def __add__(self, other: "FramedElem") -> "FramedElem":
        terms = dict(self.terms)
        for n, c in other.terms.items():
            if n in terms:
                a, b = _common(terms[n], c)
                terms[n] = a + b
            else:
                terms[n] = c
        return self.algebra.element(terms)

    def __neg__(self) -> "FramedElem":
        return self.algebra.element({n: -c for n, c in self.terms.items()})

    def __sub__(self, other: "FramedElem") -> "FramedElem":
        return self + (-other)

    def __mul__(self, other: "FramedElem") -> "FramedElem":
        result = self.algebra.element({})
        for (n, a), (m, b) in itertools.product(self.terms.items(), other.terms.items()):
            a, b = _common(a, b)
            result += self.algebra.element({tuple(x + y for x, y in zip(n, m, strict=True)): a * b})
        return result

    def truncate(self, top: int) -> "FramedElem":
        """Drop monomials with an exponent above top"""
        return self.algebra.element({n: c for n, c in self.terms.items() if max(n) <= top})

    def reduce(self, ring: BaseRing) -> "FramedElem":
        return self.algebra.element({n: c.reduce(ring) for n, c in self.terms.items()})

    def to_json(self) -> list:
        return [[list(n), c.to_json()] for n, c in sorted(self.terms.items())]


def label_weight(label: Label) -> Exponent:
    exponent, subset = label
    return tuple(a + (s in subset) for s, a in enumerate(exponent))


def _wedge(subset: tuple[int, ...], s: int) -> tuple[int, tuple[int, ...]]:
    """dx_s ^ dx_S = sign dx_(S + s)"""
    sign = -1 if sum(1 for t in subset if t < s) % 2 else 1
    return sign, tuple(sorted((*subset, s)))


class KoszulComplex(AlgebraModel):
    """Kos(P; nabla_1, ..., nabla_r) on the window, differentials as sparse (row, col) -> coefficient maps"""

    algebra: FramedAlgebra
    terms: tuple[tuple[Label, ...], ...]
    differentials: tuple[dict[tuple[int, int], BaseElem], ...]


def commutation_check(algebra: FramedAlgebra) -> None:
    """nabla_s nabla_t = nabla_t nabla_s on monomials of the window interior"""
    for exponent, _ in algebra.labels(0):
        if any(a - 1 < algebra.lower(s) for s, a in enumerate(exponent)):
            continue
        x = algebra.monomial(exponent)
        for s, t in itertools.combinations(range(algebra.r), 2):
            st = algebra.nabla(algebra.nabla(x, t), s)
            ts = algebra.nabla(algebra.nabla(x, s), t)
            if st != ts:
                raise NonCommuting(
                    f"nabla_{s} and nabla_{t} differ on x^{exponent}",
                    witness={"exponent": list(exponent), "st": st.to_json(), "ts": ts.to_json()},
                )


def build_complex(algebra: FramedAlgebra) -> KoszulComplex:
    if algebra.r > 1:
        commutation_check(algebra)

    terms = tuple(tuple(algebra.labels(c)) for c in range(algebra.r + 1))
    differentials = []

    for c in range(algebra.r):
        index = {label: row for row, label in enumerate(terms[c + 1])}
        entries: dict[tuple[int, int], BaseElem] = {}

        for col, (exponent, subset) in enumerate(terms[c]):
            for s in range(algebra.r):
                if s in subset:
                    continue
                sign, target = _wedge(subset, s)
                for image, value in algebra.nabla_monomial(exponent, s).items():
                    row = index.get((image, target))
                    if row is None or not value:
                        continue
                    entry = value if sign > 0 else -value
                    entries[row, col] = entries[row, col] + entry if (row, col) in entries else entry

        differentials.append({key: value for key, value in entries.items() if value})

    logger.debug("Koszul complex of sizes %s", [len(term) for term in terms])
    return KoszulComplex(algebra=algebra, terms=terms, differentials=tuple(differentials))


class SpecializedComplex(AlgebraModel):
    ring: ZmodRing | CyclotomicRing
    terms: tuple[tuple[Label, ...], ...]
    matrices: tuple[ChainMatrix, ...]
    graded: bool

    def differential(self, degree: int) -> ChainMatrix:
        """Matrix of d from the degree-th term to the next, with empty matrices at both ends"""
        if degree < 0:
            return ChainMatrix.zeros(self.ring, len(self.terms[0]), 0)
        if degree >= len(self.matrices):
            return ChainMatrix.zeros(self.ring, 0, len(self.terms[-1]))
        return self.matrices[degree]

    def to_json(self) -> dict:
        return {
            "terms": [[[list(n), list(subset)] for n, subset in term] for term in self.terms],
            "differentials": [matrix.to_json() for matrix in self.matrices],
        }


def chain_ring(base: BaseRing, target: Target) -> ZmodRing | CyclotomicRing:
    if target == "q1":
        return ZmodRing(p=base.p, N=base.N)
    if base.K > 0:
        raise RootDepthUnsupported("q -> zeta_p cannot express q^(1/p); use root depth K = 0")
    return CyclotomicRing(p=base.p, N=base.N)


def specialize(complex_: KoszulComplex, target: Target) -> SpecializedComplex:
    """q -> 1 into Z/p^N or q -> zeta_p into Z[zeta_p]/p^N"""
    ring = chain_ring(complex_.algebra.base, target)
    matrices = []

    for c, entries in enumerate(complex_.differentials):
        matrix = ring.zeros(len(complex_.terms[c + 1]), len(complex_.terms[c]))
        for (row, col), value in entries.items():
            if target == "zeta" and value.ring.M < ring.nilpotency:
                raise PrecisionLoss(f"M = {value.ring.M} (q-1)-digits cannot reach Z[zeta_{ring.p}]/{ring.p}^{ring.N}")
            matrix[row, col] = ring.specialize(value)
        matrices.append(ChainMatrix(ring=ring, entries=matrix))

    return SpecializedComplex(
        ring=ring,
        terms=complex_.terms,
        matrices=tuple(matrices),
        graded=complex_.algebra.is_graded,
    )


def _inverse_jacobian(algebra: FramedAlgebra, symbol: sympy.Symbol) -> list[int]:
    """Coefficients of dx/dx' at q = 1, reduced mod p^N"""
    modulus = algebra.base.modulus
    coordinate = sum(c * symbol**k for k, c in algebra.framing.coordinate_at_one().items())
    jacobian = sympy.Poly(sympy.diff(coordinate, symbol), symbol).all_coeffs()[::-1]

    series_ring = intpoly.polynomial_ring(("x",), "QQ")
    x = series_ring.gens[0]
    polynomial = sum((int(c) * x**k for k, c in enumerate(jacobian)), start=series_ring.zero)
    inverse = rs_series_inversion(polynomial, x, algebra.precision)

    coefficients = []
    for k in range(algebra.precision):
        raw = inverse.coeff(x**k) if k else inverse.coeff(1)
        value = Fraction(int(raw.numerator), int(raw.denominator))
        coefficients.append(value.numerator * pow(value.denominator, -1, modulus) % modulus)
    return coefficients


def derham_complex(algebra: FramedAlgebra) -> SpecializedComplex:
    """Classical de Rham complex over Z/p^N from symbolic derivatives in the coordinate x'"""
    ring = ZmodRing(p=algebra.base.p, N=algebra.base.N)
    symbols = sympy.symbols([g.name for g in algebra.generators])
    inverse_jacobian = [1] if algebra.is_graded else _inverse_jacobian(algebra, symbols[0])
    terms = tuple(tuple(algebra.labels(c)) for c in range(algebra.r + 1))
    matrices = []

    for c in range(algebra.r):
        index = {label: row for row, label in enumerate(terms[c + 1])}
        rows = [[0] * len(terms[c]) for _ in terms[c + 1]]

        for col, (exponent, subset) in enumerate(terms[c]):
            monomial = sympy.Mul(*(x**a for x, a in zip(symbols, exponent, strict=True)))
            for s in range(algebra.r):
                if s in subset:
                    continue
                derivative = sympy.diff(monomial, symbols[s])
                if derivative == 0:
                    continue
                coefficient, rest = derivative.as_coeff_Mul()
                powers = rest.as_powers_dict()
                image = tuple(int(powers.get(x, 0)) for x in symbols)
                sign, target = _wedge(subset, s)
                for j, factor in enumerate(inverse_jacobian):
                    shifted = tuple(a + j * (t == s) for t, a in enumerate(image))
                    row = index.get((shifted, target))
                    if row is not None:
                        rows[row][col] += sign * int(coefficient) * factor

        matrices.append(ChainMatrix.from_ints(ring, rows, cols=len(terms[c])))

    return SpecializedComplex(ring=ring, terms=terms, matrices=tuple(matrices), graded=algebra.is_graded)


def crystalline_reduction_check(algebra: FramedAlgebra) -> bool:
    """The q = 1 specialization equals the classical de Rham complex termwise"""
    q_complex = specialize(build_complex(algebra), "q1")
    classical = derham_complex(algebra)
    return q_complex.terms == classical.terms and q_complex.matrices == classical.matrices


def specialized_complex(
    algebra: FramedAlgebra,
    theory: Theory = "qderham",
    target: Target = "q1",
) -> SpecializedComplex:
    if theory == "derham":
        if target != "q1":
            raise ValueError("The classical de Rham complex lives at q = 1")
        return derham_complex(algebra)
    return specialize(build_complex(algebra), "zeta" if theory == "hodge-tate" else target)


def graded_cohomology(complex_: SpecializedComplex, degree: int, twist: int = 0) -> dict[Exponent, InvariantFactors]:
    """Nonzero H^degree per weight of a graded complex"""
    if not complex_.graded:
        raise ValueError("Weight decomposition needs the standard framing")

    groups: list[dict[Exponent, list[int]]] = []
    for term in complex_.terms:
        group: dict[Exponent, list[int]] = {}
        for index, label in enumerate(term):
            group.setdefault(label_weight(label), []).append(index)
        groups.append(group)

    def indices(c: int, weight: Exponent) -> list[int]:
        return groups[c].get(weight, []) if 0 <= c < len(groups) else []

    d_prev, d_next = complex_.differential(degree - 1), complex_.differential(degree)
    result = {}

    for weight, columns in sorted(groups[degree].items()):
        table = complex_cohomology(
            d_prev.permuted(columns, indices(degree - 1, weight)),
            d_next.permuted(indices(degree + 1, weight), columns),
            twist=twist,
        )
        if not table.is_zero:
            result[weight] = table

    return result


def total_cohomology(complex_: SpecializedComplex, degree: int, twist: int = 0) -> InvariantFactors:
    return complex_cohomology(complex_.differential(degree - 1), complex_.differential(degree), twist=twist)


def _contained(small: InvariantFactors, large: InvariantFactors) -> bool:
    return small.free_rank <= large.free_rank and not Counter(small.torsion) - Counter(large.torsion)


def _weight_key(weight: Exponent) -> str:
    return ",".join(str(a) for a in weight)


def stable_tables(
    algebra: FramedAlgebra,
    degree: int,
    theory: Theory = "qderham",
    target: Target = "q1",
    windows: tuple[int, int] | None = None,
) -> dict[str, InvariantFactors]:
    """H^degree on the stable core between two windows, per weight or as one total"""
    narrow, wide = window_pair(algebra, windows)
    twist = -degree if theory == "hodge-tate" else 0
    return stable_core(
        specialized_complex(algebra.with_window(narrow), theory, target),
        specialized_complex(algebra.with_window(wide), theory, target),
        degree,
        twist,
    )


def window_pair(algebra: FramedAlgebra, windows: tuple[int, int] | None = None) -> tuple[int, int]:
    narrow, wide = windows or (algebra.window, algebra.window + algebra.base.p**2)
    if wide <= narrow:
        raise ValueError(f"Windows must increase, got {narrow} and {wide}")
    return narrow, wide


def stable_core(
    small: SpecializedComplex,
    large: SpecializedComplex,
    degree: int,
    twist: int = 0,
) -> dict[str, InvariantFactors]:
    if small.graded:
        narrow_table = graded_cohomology(small, degree, twist)
        wide_table = graded_cohomology(large, degree, twist)
        weights = {label_weight(label) for term in small.terms for label in term}
        changed = sorted(w for w in weights if narrow_table.get(w) != wide_table.get(w))
        if changed:
            raise Unstable(f"H^{degree} changes between windows", witness=[list(w) for w in changed])
        return {_weight_key(w): table for w, table in narrow_table.items()}

    narrow_total = total_cohomology(small, degree, twist)
    wide_total = total_cohomology(large, degree, twist)
    if not _contained(narrow_total, wide_total):
        raise Unstable(
            f"H^{degree} at the narrow window is not part of H^{degree} at the wide one",
            witness={"narrow": narrow_total.model_dump(), "wide": wide_total.model_dump()},
        )
    return {"total": narrow_total}


def _total(tables: dict[str, InvariantFactors], twist: int) -> InvariantFactors:
    result = InvariantFactors(twist=twist)
    for table in tables.values():
        result = result.direct_sum(table)
    return result


def cohomology_invariants(
    algebra: FramedAlgebra,
    degree: int,
    theory: Theory = "qderham",
    target: Target = "q1",
    windows: tuple[int, int] | None = None,
) -> InvariantFactors:
    twist = -degree if theory == "hodge-tate" else 0
    return _total(stable_tables(algebra, degree, theory, target, windows), twist)


class ComparisonReport(AlgebraModel):
    name: str
    expected: dict[str, InvariantFactors]
    actual: dict[str, InvariantFactors]

    @property
    def holds(self) -> bool:
        return self.expected == self.actual

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "holds": self.holds,
            "expected": {key: value.model_dump() for key, value in sorted(self.expected.items())},
            "actual": {key: value.model_dump() for key, value in sorted(self.actual.items())},
        }


def require(report: ComparisonReport) -> ComparisonReport:
    if not report.holds:
        raise Mismatch(f"{report.name}: tables differ", witness=report.to_json())
    return report


def twisted_form_ranks(algebra: FramedAlgebra, degree: int) -> dict[Exponent, int]:
    """Rank per weight of the degree-forms of the Frobenius twist, spanned by x^(pa) d(x^p)_S"""
    p = algebra.base.p
    ranks = {}
    for weight in algebra.weights():
        if any(w % p for w in weight):
            continue
        count = sum(
            1
            for subset in itertools.combinations(range(algebra.r), degree)
            if all(
                g.laurent or w >= (p if s in subset else 0)
                for s, (g, w) in enumerate(zip(algebra.generators, weight, strict=True))
            )
        )
        if count:
            ranks[weight] = count
    return ranks


def _expected_forms(algebra: FramedAlgebra, degree: int) -> dict[str, InvariantFactors]:
    ranks = twisted_form_ranks(algebra, degree)
    if algebra.is_graded:
        return {_weight_key(w): InvariantFactors(free_rank=n, twist=-degree) for w, n in ranks.items()}
    return {"total": InvariantFactors(free_rank=sum(ranks.values()), twist=-degree)}


def hodge_tate_check(algebra: FramedAlgebra, degree: int, windows: tuple[int, int] | None = None) -> ComparisonReport:
    """H^degree of the complex at q = zeta_p against the twisted forms, with the twist tag -degree"""
    if not 0 <= degree <= algebra.r:
        raise ValueError(f"Degree {degree} is outside 0..{algebra.r}")

    return ComparisonReport(
        name=f"hodge-tate H^{degree}",
        expected=_expected_forms(algebra.with_window(window_pair(algebra, windows)[0]), degree),
        actual=stable_tables(algebra, degree, "hodge-tate", "zeta", windows),
    )


def cartier_check(r: int, p: int, window: int) -> list[ComparisonReport]:
    """H^i of the de Rham complex of F_p[x_1..x_r] against the forms of F_p[x_1^p..x_r^p]"""
    if not 1 <= r <= 2:  # noqa: PLR2004
        raise ValueError(f"Expected one or two generators, got {r}")

    algebra = FramedAlgebra(
        base=BaseRing(p=p, N=1, M=1),
        generators=tuple(Generator(name=name) for name in ("x", "y")[:r]),
        window=window,
    )

    reports = []
    for degree in range(r + 1):
        actual = {
            key: table.with_twist(-degree)
            for key, table in stable_tables(algebra, degree, "derham", "q1").items()
        }
        expected = _expected_forms(algebra, degree)
        reports.append(ComparisonReport(name=f"cartier H^{degree}", expected=expected, actual=actual))
    return reports


def framing_independence_check(
    algebra: FramedAlgebra,
    alternative: Framing,
    windows: tuple[int, int] | None = None,
) -> ComparisonReport:
    """Stable H^0 and H^1 at q = 1 and q = zeta_p for two coordinates on the same algebra"""
    if algebra.r != 1:
        raise ValueError("Framing comparison needs a single generator")

    other = FramedAlgebra(base=algebra.base, generators=algebra.generators, framing=alternative, window=algebra.window)
    narrow, wide = window_pair(algebra, windows)
    expected: dict[str, InvariantFactors] = {}
    actual: dict[str, InvariantFactors] = {}

    for framed, tables in ((algebra, expected), (other, actual)):
        small, large = build_complex(framed.with_window(narrow)), build_complex(framed.with_window(wide))
        for target in ("q1", "zeta"):
            small_target, large_target = specialize(small, target), specialize(large, target)
            for degree in (0, 1):
                tables[f"H^{degree} at {target}"] = _total(stable_core(small_target, large_target, degree), 0)

    return ComparisonReport(
        name="framing independence",
        expected=expected,
        actual=actual,
    )


def leibniz_check(algebra: FramedAlgebra, f: FramedElem, g: FramedElem, s: int = 0) -> bool:
    """nabla(fg) = nabla(f) g + gamma(f) nabla(g), compared below the top weight of the window"""
    top = algebra.window - 1
    left = algebra.nabla(f * g, s).truncate(top)
    right = (algebra.nabla(f, s) * g + algebra.gamma(f, s) * algebra.nabla(g, s)).truncate(top)
    return left == right


def q_derham_base(p: int, N: int) -> BaseRing:  # noqa: N803
    """Root-free base with one spare (q-1)-digit over the cyclotomic nilpotency"""
    return BaseRing(p=p, N=N, M=N * (p - 1) + 1)
