import itertools
import random
from abc import abstractmethod
from collections.abc import Callable, Generator
from math import comb, factorial, prod
from typing import ClassVar

from pydantic import BaseModel, JsonValue

from .algebra import delta, intpoly, qcalc, qderham, qpd, witt
from .algebra.base import Mismatch
from .algebra.basering import BaseRing
from .algebra.qderham import FramedAlgebra, Framing, Generator as FramedGenerator
from .config import SuiteConfig

ACCEPTANCE_PRIMES = (2, 3, 5)


class Case(BaseModel):
    name: str
    check: Callable[[], JsonValue]


def confirm(holds: bool, message: str, witness: JsonValue = None) -> JsonValue:
    if not holds:
        raise Mismatch(message, witness=witness)
    return witness


class BaseManager(BaseModel):
    suite: ClassVar[str]
    config: SuiteConfig

    @property
    def primes(self) -> list[int]:
        return sorted({*ACCEPTANCE_PRIMES, self.config.p})

    def random(self, name: str) -> random.Random:
        return random.Random(f"{self.config.seed}:{name}")

    def case(self, name: str, check: Callable[[], JsonValue]) -> Case:
        return Case(name=f"{self.suite}/{name}", check=check)

    @abstractmethod
    def read_all_cases(self) -> Generator[Case]: ...


class DeltaManager(BaseManager):
    suite: ClassVar[str] = "delta"

    def axioms(self, p: int) -> JsonValue:
        ring = delta.DeltaRing(p=p, generators=("x", "y"), depth=3)
        rng = self.random(f"axioms {p}")
        f, g = ring.random_element(rng), ring.random_element(rng)
        witness = {"seed": self.config.seed, "f": f.to_json(), "g": g.to_json()}

        binomial = intpoly.exact_div_ground((f**p + g**p - (f + g) ** p).poly, p)
        confirm(ring.from_int(0).delta() == 0 and ring.from_int(1).delta() == 0, "delta(0) or delta(1) is nonzero")
        confirm((f + g).delta().poly == (f.delta() + g.delta()).poly + binomial, "delta is not additive", witness)
        confirm(
            (f * g).delta() == f**p * g.delta() + g**p * f.delta() + p * f.delta() * g.delta(),
            "delta does not satisfy the product rule",
            witness,
        )
        return witness

    def frobenius(self, p: int) -> JsonValue:
        ring = delta.DeltaRing(p=p, generators=("x", "y"), depth=3)
        rng = self.random(f"frobenius {p}")
        f, g = ring.random_element(rng), ring.random_element(rng)
        x, _ = ring.gens
        witness = {"seed": self.config.seed, "f": f.to_json(), "g": g.to_json()}

        confirm(x.phi() == x**p + p * x.delta(), "phi(x) differs from x^p + p delta(x)")
        confirm(ring.from_int(7).phi() == 7, "phi moves a constant")
        confirm((f * g).phi() == f.phi() * g.phi(), "phi is not multiplicative", witness)
        confirm((f + g).phi() == f.phi() + g.phi(), "phi is not additive", witness)
        confirm(f.is_frobenius_lift(), "phi does not lift Frobenius", witness)
        return witness

    def joyal(self, p: int) -> JsonValue:
        ring = delta.DeltaRing(p=p, depth=4)
        (x,) = ring.gens
        top = 3 if p <= 3 else 2  # noqa: PLR2004
        operations = delta.joyal_operations(x, top)

        confirm(operations[0] == x and operations[1] == x.delta(), "delta_0 or delta_1 is wrong")
        confirm(all(op == 0 for op in delta.joyal_operations(ring.from_int(1), top)[1:]), "delta_n(1) is nonzero")

        iterated = x.phi().phi()
        joyal = operations[0] ** (p**2) + p * operations[1] ** p + p**2 * operations[2]
        confirm(iterated == joyal, "phi^2 differs from the delta_n expansion", {"p": p})
        return {"p": p, "top": top, "delta_2": operations[2].to_json() if p == 2 else None}  # noqa: PLR2004

    def witt_embedding(self, p: int) -> JsonValue:
        ring = delta.DeltaRing(p=p, generators=("x", "y"), depth=3)
        rng = self.random(f"witt embedding {p}")
        f, g = ring.random_element(rng), ring.random_element(rng)
        witness = {"seed": self.config.seed, "f": f.to_json(), "g": g.to_json()}

        confirm(delta.w2_check(f, g), "x -> (x, delta(x)) is not a ring map to W_2", witness)
        if p == 2:  # noqa: PLR2004
            x, y = ring.gens
            confirm(delta.witt_embedding_check(x + 1, y, length=3), "w is not a ring map to W_3", witness)
        return witness

    def distinguished(self, p: int) -> JsonValue:
        ring = BaseRing(p=p, N=2, M=2)
        checked = []

        for d in (ring.from_int(p), ring.bracket_p, ring.q - 1):
            membership = delta.distinguished_membership_check(d)
            checked.append({"d": d.to_json(), "distinguished": delta.is_distinguished(d)})
            confirm(
                delta.is_distinguished(d) == membership.holds,
                "delta(d) unit and p in (d, phi(d)) disagree",
                checked[-1],
            )
            confirm(
                delta.is_distinguished(d) == delta.is_distinguished_at_one(d),
                "delta(d) unit and delta(d(1)) unit disagree",
                checked[-1],
            )
            if membership.witness is not None:
                a, b = membership.witness
                confirm(a * d + b * d.frobenius() == ring.from_int(p), "membership witness is wrong", checked[-1])

        confirm([c["distinguished"] for c in checked] == [True, True, False], "unexpected distinguished set", checked)
        return checked

    def distinguished_scan(self, p: int) -> JsonValue:
        ring = BaseRing(p=p, N=2, M=2)
        counts = {"elements": 0, "distinguished": 0}

        for d in ring.elements():
            holds = delta.is_distinguished(d)
            confirm(holds == delta.is_distinguished_at_one(d), "criterion at q = 1 disagrees", d.to_json())
            counts["elements"] += 1
            counts["distinguished"] += holds
            if d.is_unit():
                continue

            power = delta.distinguished_power_membership_check(d)
            confirm(holds == power.holds, "p in (d^p, phi(d)) disagrees", d.to_json())
            if power.witness is not None:
                a, b = power.witness
                confirm(a * d**p + b * d.frobenius() == ring.from_int(p), "membership witness is wrong", d.to_json())

        return counts

    def distinguished_exhaustive(self) -> JsonValue:
        ring = BaseRing(p=2, N=2, M=2)
        elements = ring.elements()
        units = [u for u in elements if u.is_unit()]
        distinguished = []

        for d in elements:
            if d.is_unit():
                continue
            holds = delta.is_distinguished(d)
            confirm(holds == delta.distinguished_membership_check(d).holds, "criteria disagree", d.to_json())
            if holds:
                distinguished.append(d)

        for d, u in itertools.product(distinguished, units):
            confirm(delta.is_distinguished(u * d), "unit multiple is not distinguished", [d.to_json(), u.to_json()])

        return {"size": len(elements), "distinguished": [d.to_json() for d in distinguished]}

    def power_divisibility(self, p: int) -> JsonValue:
        return {str(n): len(delta.delta_power_divisibility(p, n).poly) for n in range(4)}

    def divided_powers(self, p: int) -> JsonValue:
        rng = self.random(f"divided powers {p}")
        units = {}

        for n in range(1, p**3 + 1):
            certificate = delta.divided_power_certificate(p, n)
            confirm(delta.evaluate_certificate(certificate, rng), f"gamma_{n} certificate differs from x^n/n!")
            if certificate.unit is not None:
                units[str(n)] = str(certificate.unit)

        return {"seed": self.config.seed, "units": units}

    def read_all_cases(self) -> Generator[Case]:
        for p in self.primes:
            yield self.case(f"axioms p={p}", lambda p=p: self.axioms(p))
            yield self.case(f"frobenius p={p}", lambda p=p: self.frobenius(p))
            yield self.case(f"joyal p={p}", lambda p=p: self.joyal(p))
            yield self.case(f"witt-embedding p={p}", lambda p=p: self.witt_embedding(p))
            yield self.case(f"distinguished p={p}", lambda p=p: self.distinguished(p))
            yield self.case(f"power-divisibility p={p}", lambda p=p: self.power_divisibility(p))

        yield self.case("distinguished exhaustive", self.distinguished_exhaustive)
        for p in (2, 3):
            yield self.case(f"distinguished scan p={p}", lambda p=p: self.distinguished_scan(p))

        for p in (2, 3):
            yield self.case(f"divided-powers p={p}", lambda p=p: self.divided_powers(p))


class WittManager(BaseManager):
    suite: ClassVar[str] = "witt"

    @property
    def primes(self) -> list[int]:
        return sorted({2, 3, self.config.p})

    def closed_forms(self, p: int) -> JsonValue:
        polynomials = witt.structure_polynomials(p, 2)
        x0, x1, y0, y1 = polynomials.ring.gens

        expected_sum = x1 + y1 + intpoly.exact_div_ground(x0**p + y0**p - (x0 + y0) ** p, p)
        expected_product = x0**p * y1 + y0**p * x1 + p * x1 * y1

        confirm(polynomials.sum[1] == expected_sum, "second sum polynomial", intpoly.to_json(polynomials.sum[1]))
        confirm(
            polynomials.product[1] == expected_product,
            "second product polynomial",
            intpoly.to_json(polynomials.product[1]),
        )
        return {"sum": intpoly.to_json(polynomials.sum[1]), "product": intpoly.to_json(polynomials.product[1])}

    def ghost(self, p: int) -> JsonValue:
        ring = witt.Integers()
        rng = self.random(f"ghost {p}")
        top = 4 if p == 2 else 3  # noqa: PLR2004
        witnesses = []

        for length in range(1, top + 1):
            a = witt.from_components(ring, p, [rng.randint(-5, 5) for _ in range(length)])
            b = witt.from_components(ring, p, [rng.randint(-5, 5) for _ in range(length)])
            witness = {"a": list(a.components), "b": list(b.components)}
            witnesses.append(witness)

            confirm((a + b).ghost() == [x + y for x, y in zip(a.ghost(), b.ghost(), strict=True)], "sum", witness)
            confirm((a * b).ghost() == [x * y for x, y in zip(a.ghost(), b.ghost(), strict=True)], "product", witness)
            confirm((-a).ghost() == [-x for x in a.ghost()], "negation", witness)
            if length > 1:
                confirm(a.frobenius().ghost() == a.ghost()[1:], "frobenius", witness)

        return {"seed": self.config.seed, "vectors": witnesses}

    def nonzerodivisors(self) -> JsonValue:
        report = witt.no_nonzerodivisor_witness(p=2, length=2)
        witness = {"size": report.size, "units": report.units, "maximal_ideal": report.maximal_ideal}
        return confirm(report.holds, "a non-unit of W_2(F_2[x]/(x^2)) is a nonzerodivisor", witness)

    def perfect_frobenius(self, p: int) -> JsonValue:
        field = witt.GaloisField(order=p**2)
        rng = self.random(f"perfect frobenius {p}")
        length = 3
        d = witt.from_components(field, p, [rng.randrange(field.order) for _ in range(length)])
        witness = {"seed": self.config.seed, "d": d.to_json()}

        confirm(d.frobenius() == d.frobenius_perfect().truncate(length - 1), "Frobenius differs", witness)
        confirm(
            witt.delta_perfect(d).truncate(length - 2) == witt.delta_universal(d),
            "delta differs between the two Frobenius maps",
            witness,
        )
        p_times = witt.from_integer(field, p, p, length) * d
        confirm(p_times == d.frobenius_perfect().verschiebung().truncate(length), "p differs from V F", witness)
        return witness

    def teichmuller(self, order: int, length: int) -> JsonValue:
        field = witt.GaloisField(order=order)
        p = field.p
        lifts = {a: witt.teichmuller(field, p, a, length) for a in field.elements()}

        for a, b in itertools.product(field.elements(), repeat=2):
            confirm(lifts[a] * lifts[b] == lifts[field.mul(a, b)], "[a][b] differs from [ab]", {"a": a, "b": b})
        return {"field": field.name, "length": length, "pairs": len(lifts) ** 2}

    def projection(self, p: int) -> JsonValue:
        rng = self.random(f"projection {p}")
        ring = witt.Integers()
        length = 3
        witnesses = []

        for _ in range(3):
            a = witt.from_components(ring, p, [rng.randint(-4, 4) for _ in range(length)])
            w = witt.from_components(ring, p, [rng.randint(-4, 4) for _ in range(length - 1)])
            witness = {"a": list(a.components), "w": list(w.components)}
            projected = (a.frobenius() * w).verschiebung()
            confirm(a * w.verschiebung() == projected, "a V(w) differs from V(F(a) w)", witness)
            witnesses.append(witness)

        field = witt.GaloisField(order=p**2)
        for x, w in itertools.product(field.elements(), witt.enumerate_vectors(field, p, 1)):
            lift = witt.teichmuller(field, p, x, 2)
            confirm(
                lift * w.verschiebung() == (lift.frobenius_perfect().truncate(1) * w).verschiebung(),
                "[x] V(w) differs from V(F[x] w)",
                {"x": x, "w": w.to_json()},
            )

        dual = witt.DualNumbers(order=p)
        nilpotent = witt.teichmuller(dual, p, dual.x, 2)
        for w in witt.enumerate_vectors(dual, p, 1):
            confirm((nilpotent * w.verschiebung()).is_zero(), "[x] V(w) is nonzero over F_p[x]/(x^2)", w.to_json())

        return {"seed": self.config.seed, "vectors": witnesses, "field": field.name}

    def digits(self, order: int) -> JsonValue:
        field = witt.GaloisField(order=order)
        p = field.p
        scale = witt.from_integer(field, p, p, 2)
        seen = set()

        for d in witt.enumerate_vectors(field, p, 2):
            digit = witt.teichmuller_digit(d)
            expansion = witt.teichmuller(field, p, d.components[0], 2) + scale * witt.teichmuller(field, p, digit, 2)
            confirm(expansion == d, "[d_0] + p[d_1] differs from d", d.to_json())
            seen.add((d.components[0], digit))

        return confirm(len(seen) == order**2, "Teichmueller digits are not a bijection", {"field": field.name})

    def tate_twist(self, order: int, length: int, twist: int) -> JsonValue:
        result = witt.tate_twist_invariants(order, length, twist)
        field = witt.GaloisField(order=order)
        p = field.p
        working = length - twist
        scale = witt.from_integer(field, p, p**twist, working)

        vectors = list(witt.enumerate_vectors(field, p, working))
        images = {y.components: (y.frobenius_perfect() - scale * y).components for y in vectors}
        zero = witt.zero(field, p, working).components
        kernel = [y for y in vectors if images[y.components] == zero]
        image = set(images.values())

        def killed(y: witt.WittVec, k: int, inside: set[tuple]) -> bool:
            for _ in range(k):
                y = witt.times_p(y)
            return y.components in inside

        # |G[p^k]| = p^(sum of min(a_i, k)) fixes the invariant factors a_i of a finite p-group
        h0 = [sum(killed(y, k, {zero}) for y in kernel) for k in range(1, working + 1)]
        h1 = [sum(killed(y, k, image) for y in vectors) // len(image) for k in range(1, working + 1)]
        witness = {"h0": result.h0.model_dump(), "h1": result.h1.model_dump(), "kernel": h0, "cokernel": h1}

        for k in range(1, working + 1):
            confirm(p ** result.h0.torsion_length(working, k) == h0[k - 1], "H^0 differs from the kernel", witness)
            confirm(p ** result.h1.torsion_length(working, k) == h1[k - 1], "H^1 differs from the cokernel", witness)
        return witness

    def read_all_cases(self) -> Generator[Case]:
        for p in self.primes:
            yield self.case(f"closed-forms p={p}", lambda p=p: self.closed_forms(p))
            yield self.case(f"ghost p={p}", lambda p=p: self.ghost(p))
            yield self.case(f"perfect-frobenius p={p}", lambda p=p: self.perfect_frobenius(p))
            yield self.case(f"projection p={p}", lambda p=p: self.projection(p))

        yield self.case("nonzerodivisors", self.nonzerodivisors)
        yield self.case("teichmuller q=9", lambda: self.teichmuller(9, 3))

        for order in (2, 3, 4, 9):
            yield self.case(f"digits q={order}", lambda o=order: self.digits(o))

        for order, length, twist in itertools.product((2, 3, 4, 9), (1, 2, 3), (0, 1)):
            if length > twist:
                yield self.case(
                    f"tate-twist q={order} m={length} n={twist}",
                    lambda o=order, m=length, n=twist: self.tate_twist(o, m, n),
                )


class QAnalogManager(BaseManager):
    suite: ClassVar[str] = "qanalog"

    def frobenius_factorial(self, p: int) -> JsonValue:
        return {str(m): qcalc.verify_frobenius_factorial(p, m).value_at_one for m in range(9)}

    def floor_factorial(self, p: int) -> JsonValue:
        values = {}
        for root_depth in (1, 2):
            for numerator in range(3 * p**root_depth + 1):
                certificate = qcalc.verify_floor_factorial(p, numerator, root_depth)
                values[f"{numerator}/{p}^{root_depth}"] = certificate.value_at_one
        return values

    def binomials(self) -> JsonValue:
        for a in range(9):
            for b in range(a + 1):
                confirm(qcalc.q_binomial(a, b) == qcalc.q_pascal(a, b), f"Pascal recursion fails at ({a}, {b})")
                confirm(intpoly.value_at_one(qcalc.q_binomial(a, b)) == comb(a, b), f"({a} choose {b}) at q = 1")
            confirm(intpoly.value_at_one(qcalc.q_factorial(a)) == factorial(a), f"[{a}]_q! at q = 1")
        return {"bound": 8}

    def gamma_identities(self, p: int) -> JsonValue:
        rng = self.random(f"gamma identities {p}")
        t_ring = intpoly.t_ring()
        t = t_ring.gens[0]

        def sample() -> intpoly.IntPoly:
            return t_ring.from_list([rng.randint(-4, 4) for _ in range(3)])

        x, y, f = (t - 1) * sample(), (t - 1) * sample(), sample()
        witness = {"seed": self.config.seed, "x": intpoly.to_json(x), "y": intpoly.to_json(y), "f": intpoly.to_json(f)}

        confirm(qcalc.gamma_sum_identity(x, y, p), "gamma(x + y) identity", witness)
        confirm(qcalc.gamma_scale_identity(f, x, p), "gamma(f x) identity", witness)
        confirm(qcalc.smallest_qpd_ideal_check(p), "(q - 1) is not stable under gamma")
        return witness

    def read_all_cases(self) -> Generator[Case]:
        yield self.case("binomials", self.binomials)

        for p in self.primes:
            yield self.case(f"frobenius-factorial p={p}", lambda p=p: self.frobenius_factorial(p))
            yield self.case(f"floor-factorial p={p}", lambda p=p: self.floor_factorial(p))
            yield self.case(f"gamma-identities p={p}", lambda p=p: self.gamma_identities(p))


class QPDManager(BaseManager):
    suite: ClassVar[str] = "qpd"

    @property
    def primes(self) -> list[int]:
        return sorted({2, 3, self.config.p})

    def module(self, p: int) -> qpd.QPDModule:
        config = self.config
        degree = config.degree if p == config.p else p**2 + p
        base = BaseRing(p=p, N=config.prec, M=config.series_prec, K=max(config.root_depth, 1))
        return qpd.QPDModule(base=base, D=degree)

    def sample(self, rng: random.Random, module: qpd.QPDModule, bound: int) -> qpd.QPDElem:
        exponents = list(module.exponents(bound))
        terms = {}
        for _ in range(2):
            coefficient = module.base.element([rng.randrange(module.base.modulus) for _ in range(module.base.M)])
            terms[rng.choice(exponents)] = coefficient
        return module.element(terms)

    def q_powers(self, module: qpd.QPDModule) -> JsonValue:
        for n in range(module.D + 1):
            certificate = qpd.q_power_divisibility(module, n)
            confirm(certificate.holds, f"Y^{n} differs from [{n}]_q! e_{n}", {"n": n})
        return {"module": module.describe()}

    def ring_laws(self, module: qpd.QPDModule) -> JsonValue:
        rng = self.random(f"ring laws {module.p}")
        a, b, c = (self.sample(rng, module, module.bound // 3) for _ in range(3))
        witness = {"seed": self.config.seed, "a": a.to_json(), "b": b.to_json(), "c": c.to_json()}

        confirm(a * b == b * a, "product is not commutative", witness)
        confirm((a * b) * c == a * (b * c), "product is not associative", witness)
        confirm(a * (b + c) == a * b + a * c, "product is not distributive", witness)
        confirm(module.one * a == a, "e_0 is not the unit", witness)
        return witness

    def frobenius(self, module: qpd.QPDModule) -> JsonValue:
        rng = self.random(f"frobenius {module.p}")
        a, b = (self.sample(rng, module, module.bound // (2 * module.p)) for _ in range(2))
        witness = {"seed": self.config.seed, "a": a.to_json(), "b": b.to_json()}

        confirm((a * b).frobenius() == a.frobenius() * b.frobenius(), "phi is not multiplicative", witness)
        confirm((a + b).frobenius() == a.frobenius() + b.frobenius(), "phi is not additive", witness)
        return witness

    def gamma(self, module: qpd.QPDModule) -> JsonValue:
        bracket = module.base.bracket_p
        checked = []

        for exponent in module.frobenius_domain:
            if exponent[0] < module.scale:
                continue
            power = prod((qcalc.q_factorial(a // module.scale) for a in exponent), start=qcalc.q_ring().one)
            y = module.element({exponent: module.from_q_poly(power)})
            confirm(
                qpd.gamma_envelope(module, exponent).scale(bracket) == y.frobenius(),
                "[p]_q gamma(Y^i) differs from phi(Y^i)",
                list(exponent),
            )
            checked.append(list(exponent))

        return {"exponents": len(checked)}

    def kunneth(self, module: qpd.QPDModule) -> JsonValue:
        rng = self.random(f"kunneth {module.p}")
        a, b, c, d = (self.sample(rng, module, module.bound // 2) for _ in range(4))
        witness = {"seed": self.config.seed}
        product = qpd.tensor(a, b) * qpd.tensor(c, d)
        confirm(product == qpd.tensor(a * c, b * d), "tensor is not multiplicative", witness)
        return witness

    def read_all_cases(self) -> Generator[Case]:
        for p in self.primes:
            yield self.case(f"q-powers p={p}", lambda p=p: self.q_powers(self.module(p)))
            yield self.case(f"ring-laws p={p}", lambda p=p: self.ring_laws(self.module(p)))
            yield self.case(f"frobenius p={p}", lambda p=p: self.frobenius(self.module(p)))
            yield self.case(f"gamma p={p}", lambda p=p: self.gamma(self.module(p)))
            yield self.case(f"kunneth p={p}", lambda p=p: self.kunneth(self.module(p)))


class NygaardManager(QPDManager):
    suite: ClassVar[str] = "nygaard"

    def small_module(self, p: int) -> qpd.QPDModule:
        return qpd.QPDModule(base=self.module(p).base, D=p)

    def level(self, module: qpd.QPDModule, n: int) -> JsonValue:
        report = qpd.nygaard_verify(module, n)
        witness = {
            "module": module.describe(),
            "image": len(report.image_degrees),
            "expected": len(report.expected_degrees),
            "graded_rank": report.graded_rank,
            "failures": list(report.failures),
        }
        return confirm(report.holds, f"Nygaard level {n} fails", witness)

    def filtration(self, p: int) -> JsonValue:
        module = self.small_module(p)
        top = self.config.level
        confirm(all(qpd.nygaard_decreasing(module, n) for n in range(top + 1)), "filtration is not decreasing")
        for n, m in itertools.product(range(2), repeat=2):
            confirm(qpd.nygaard_multiplicative(module, n, m), f"Fil^{n} Fil^{m} is not in Fil^{n + m}")
        return {"module": module.describe(), "levels": top}

    def read_all_cases(self) -> Generator[Case]:
        for p in self.primes:
            for n in range(self.config.level + 1):
                yield self.case(f"level p={p} n={n}", lambda p=p, n=n: self.level(self.module(p), n))
                yield self.case(
                    f"kunneth level p={p} n={n}",
                    lambda p=p, n=n: self.level(qpd.kunneth_product(self.small_module(p), self.small_module(p)), n),
                )
            yield self.case(f"filtration p={p}", lambda p=p: self.filtration(p))


class QDeRhamManager(BaseManager):
    suite: ClassVar[str] = "qderham"

    @property
    def primes(self) -> list[int]:
        return sorted({2, 3, self.config.p})

    def algebra(
        self, ring: str, p: int, framing: Framing | None = None, N: int | None = None  # noqa: N803
    ) -> FramedAlgebra:
        generators = {
            "A1": (FramedGenerator(name="x"),),
            "A2": (FramedGenerator(name="x"), FramedGenerator(name="y")),
            "Gm": (FramedGenerator(name="x", laurent=True),),
        }[ring]
        return FramedAlgebra(
            base=qderham.q_derham_base(p, N or self.config.prec),
            generators=generators,
            framing=framing or Framing(),
            window=self.config.window if p == self.config.p else 2 * p**2,
        )

    @staticmethod
    def perturbed(p: int) -> Framing:
        """x' = x (1 + p x)"""
        return Framing.multiplicative({1: qcalc.q_ring()(p)})

    @staticmethod
    def translated(p: int) -> Framing:
        """x' = x + p"""
        return Framing.translation(qcalc.q_ring()(p))

    def crystalline(self, algebra: FramedAlgebra) -> JsonValue:
        return confirm(qderham.crystalline_reduction_check(algebra), "q = 1 complex differs", algebra.describe())

    def hodge_tate(self, algebra: FramedAlgebra, degree: int) -> JsonValue:
        return qderham.require(qderham.hodge_tate_check(algebra, degree)).to_json()

    def cartier(self, r: int, p: int) -> JsonValue:
        window = self.config.window if p == self.config.p else 2 * p**2
        return [qderham.require(report).to_json() for report in qderham.cartier_check(r, p, window)]

    def framing(self, algebra: FramedAlgebra, alternative: Framing) -> JsonValue:
        return qderham.require(qderham.framing_independence_check(algebra, alternative)).to_json()

    def leibniz(self, p: int) -> JsonValue:
        rng = self.random(f"leibniz {p}")
        witnesses = []
        algebras = (
            self.algebra("Gm", p),
            self.algebra("Gm", p, self.perturbed(p)),
            self.algebra("A1", p, self.translated(p)),
        )

        for algebra in algebras:

            def sample(algebra: FramedAlgebra = algebra) -> qderham.FramedElem:
                terms = {}
                for _ in range(2):
                    exponent = (rng.randint(max(algebra.lower(0), -2), 2),)
                    terms[exponent] = algebra.base.element(
                        [rng.randrange(algebra.base.modulus) for _ in range(algebra.base.M)]
                    )
                return algebra.element(terms)

            f, g = sample(), sample()
            witness = {"algebra": algebra.describe(), "f": f.to_json(), "g": g.to_json()}
            witnesses.append(confirm(qderham.leibniz_check(algebra, f, g), "twisted Leibniz rule fails", witness))

        return {"seed": self.config.seed, "cases": witnesses}

    def read_all_cases(self) -> Generator[Case]:
        for p in self.primes:
            for ring in ("A1", "A2", "Gm"):
                yield self.case(
                    f"crystalline {ring} p={p}",
                    lambda ring=ring, p=p: self.crystalline(self.algebra(ring, p)),
                )
            yield self.case(
                f"crystalline Gm x(1+px) p={p}",
                lambda p=p: self.crystalline(self.algebra("Gm", p, self.perturbed(p))),
            )

            for ring, degree, N in itertools.product(("A1", "A2"), (0, 1, 2), (1, 2)):  # noqa: N806
                if ring == "A1" and degree == 2:  # noqa: PLR2004
                    continue
                yield self.case(
                    f"hodge-tate {ring} H^{degree} p={p} N={N}",
                    lambda ring=ring, degree=degree, p=p, N=N: self.hodge_tate(  # noqa: N803
                        self.algebra(ring, p, N=N), degree
                    ),
                )

            for r in (1, 2):
                yield self.case(f"cartier r={r} p={p}", lambda r=r, p=p: self.cartier(r, p))

            yield self.case(
                f"framing Gm x(1+px) p={p}",
                lambda p=p: self.framing(self.algebra("Gm", p), self.perturbed(p)),
            )
            yield self.case(
                f"framing A1 x+p p={p}",
                lambda p=p: self.framing(self.algebra("A1", p), self.translated(p)),
            )
            yield self.case(f"leibniz p={p}", lambda p=p: self.leibniz(p))


MANAGERS: dict[str, type[BaseManager]] = {
    manager.suite: manager
    for manager in (DeltaManager, WittManager, QAnalogManager, QPDManager, NygaardManager, QDeRhamManager)
}


def read_all_cases(config: SuiteConfig) -> Generator[Case]:
    suites = list(MANAGERS) if config.suite == "all" else [config.suite]
    for suite in suites:
        yield from MANAGERS[suite](config=config).read_all_cases()
