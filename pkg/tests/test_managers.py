from prismpy import utils
from prismpy.config import SuiteConfig
from prismpy.managers import (
    MANAGERS,
    DeltaManager,
    NygaardManager,
    QAnalogManager,
    QDeRhamManager,
    QPDManager,
    WittManager,
    read_all_cases,
)


def test_suites() -> None:
    assert set(MANAGERS) == {"delta", "witt", "qanalog", "qpd", "nygaard", "qderham"}


def test_case_names() -> None:
    names = [case.name for case in QAnalogManager(config=SuiteConfig(p=7)).read_all_cases()]

    assert names[0] == "qanalog/binomials"
    assert "qanalog/floor-factorial p=7" in names
    assert len(names) == 1 + 3 * 4


def test_witt_cases() -> None:
    names = {case.name for case in WittManager(config=SuiteConfig(p=2)).read_all_cases()}

    assert "witt/ghost p=3" in names
    assert "witt/nonzerodivisors" in names
    assert "witt/tate-twist q=9 m=3 n=1" in names
    assert "witt/tate-twist q=2 m=1 n=1" not in names
    assert {"witt/teichmuller q=9", "witt/digits q=9", "witt/projection p=3"} <= names


def test_random_is_seeded() -> None:
    manager = QAnalogManager(config=SuiteConfig(seed=5))
    assert manager.random("a").random() == manager.random("a").random()
    assert manager.random("a").random() != manager.random("b").random()


def test_read_all_cases_filters_suite() -> None:
    cases = list(read_all_cases(SuiteConfig(suite="qanalog")))
    assert all(case.name.startswith("qanalog/") for case in cases)


def test_witt_suite_passes() -> None:
    manager = WittManager(config=SuiteConfig(p=2))
    wanted = ("tate-twist q=4", "digits q=4", "projection p=2")
    cases = [case for case in manager.read_all_cases() if case.name.removeprefix("witt/").startswith(wanted)]
    results = utils.run_all(cases, timings=False, quiet=True)

    assert results
    assert all(result.status == "pass" for result in results)


def test_envelope_suites_run_at_small_primes() -> None:
    config = SuiteConfig(p=5)
    qpd_names = {case.name for case in QPDManager(config=config).read_all_cases()}
    nygaard_names = {case.name for case in NygaardManager(config=config).read_all_cases()}
    qderham_names = {case.name for case in QDeRhamManager(config=config).read_all_cases()}

    assert {"qpd/gamma p=2", "qpd/gamma p=3", "qpd/gamma p=5"} <= qpd_names
    assert {"nygaard/level p=2 n=0", "nygaard/filtration p=3"} <= nygaard_names
    assert "qderham/hodge-tate A2 H^2 p=2 N=2" in qderham_names
    assert "qderham/hodge-tate A1 H^2 p=2 N=1" not in qderham_names
    assert "qderham/cartier r=2 p=3" in qderham_names


def test_envelope_module_outside_configured_prime() -> None:
    manager = QPDManager(config=SuiteConfig(p=5))

    assert manager.module(5).D == manager.config.degree
    assert manager.module(2).D == 6
    assert manager.module(3).p == 3


def test_hodge_tate_at_higher_precision() -> None:
    manager = QDeRhamManager(config=SuiteConfig(p=2))
    cases = [case for case in manager.read_all_cases() if "hodge-tate A1" in case.name and "p=2 N=2" in case.name]
    results = utils.run_all(cases, timings=False, quiet=True)

    assert len(results) == 2
    assert all(result.status == "pass" for result in results)


def test_distinguished_scan_passes() -> None:
    manager = DeltaManager(config=SuiteConfig(p=3))
    cases = [case for case in manager.read_all_cases() if case.name.startswith("delta/distinguished")]
    results = utils.run_all(cases, timings=False, quiet=True)

    assert "delta/distinguished scan p=3" in {result.name for result in results}
    assert all(result.status == "pass" for result in results)
