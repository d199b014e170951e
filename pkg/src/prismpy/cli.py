from functools import partial
from pathlib import Path
from typing import Any

import typer
from pydantic import ValidationError

from . import __version__, managers, utils
from .algebra import qderham, witt
from .algebra.base import AlgebraError
from .config import SuiteConfig
from .managers import Case, NygaardManager
from .presentation import ParseError, RingPresentation
from .report import Report

USAGE_ERROR = 2

app = typer.Typer(add_completion=False)


def usage_error(message: str) -> typer.Exit:
    typer.secho(message, fg="red", err=True)
    return typer.Exit(USAGE_ERROR)


def load_config(path: Path | None, **overrides: Any) -> SuiteConfig:
    try:
        return SuiteConfig.model_validate_file(path, **overrides)
    except FileNotFoundError as e:
        raise usage_error(str(e)) from e
    except ValidationError as e:
        typer.echo(f"{typer.style('Invalid configuration!', fg='yellow')}", err=True)

        for error in e.errors(include_url=False):
            typer.secho(f"Error at: {'.'.join(str(loc) for loc in error['loc'])}", fg="red", err=True)
            typer.secho(error["msg"], err=True)

        raise typer.Exit(USAGE_ERROR) from e


def emit(command: str, config: SuiteConfig, cases: list[Case], timings: bool, quiet: bool) -> Report:
    results = utils.run_all(cases, timings=timings, quiet=quiet)
    report = Report.from_cases(command=command, params=config.params, cases=results)
    text = report.model_dump_report(config.out)

    if config.out is None:
        typer.echo(text, nl=False)
    elif not quiet:
        typer.echo(f'Report saved to "{typer.style(config.out.as_posix(), fg="yellow")}"', err=True)

    return report


def finish(report: Report) -> None:
    raise typer.Exit(report.exit_code)


@app.callback(invoke_without_command=True)
def callback(
    ctx: typer.Context,
    version: bool = typer.Option(None, "--version", is_eager=True, help="Show version."),
) -> None:
    if version:
        typer.echo(f"Version: {typer.style(__version__, fg='green')}")
        raise typer.Exit(0)

    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
        raise typer.Exit(0)


@app.command(
    name="verify",
    short_help="Run a verification suite and print a JSON report",
)
def verify(
    suite: str | None = typer.Option(None, "--suite", help="delta, witt, qanalog, qpd, nygaard, qderham or all."),
    p: int | None = typer.Option(None, "--p", help="Prime p."),
    prec: int | None = typer.Option(None, "--prec", help="p-adic precision N."),
    series_prec: int | None = typer.Option(None, "--series-prec", help="(q-1)-adic precision M."),
    root_depth: int | None = typer.Option(None, "--root-depth", help="Root depth K of the q-PD model."),
    degree: int | None = typer.Option(None, "--degree", help="Degree bound D of the q-PD model."),
    window: int | None = typer.Option(None, "--window", help="Weight window W of the q-de Rham complexes."),
    level: int | None = typer.Option(None, "--level", help="Highest Nygaard level."),
    seed: int | None = typer.Option(None, "--seed", help="Seed of the randomized cases."),
    out: Path | None = typer.Option(None, "--out", help="Write the report to this file."),
    config: Path | None = typer.Option(None, "--config", help="JSON file with default parameters."),
    quiet: bool = typer.Option(False, "--quiet", help="Hide progress lines."),
    timings: bool = typer.Option(True, "--timings/--no-timings", help="Record case timings."),
) -> None:
    suite_config = load_config(
        config,
        suite=suite,
        p=p,
        prec=prec,
        series_prec=series_prec,
        root_depth=root_depth,
        degree=degree,
        window=window,
        level=level,
        seed=seed,
        out=out,
    )
    report = emit("verify", suite_config, list(managers.read_all_cases(suite_config)), timings, quiet)
    finish(report)


@app.command(
    name="cohomology",
    short_help="Stable invariant factors of a framed q-de Rham, de Rham or Hodge-Tate complex",
)
def cohomology(
    ring: str = typer.Option(..., "--ring", help='Generators, for example "x^±1" or "x, y".'),
    framing: str | None = typer.Option(None, "--framing", help='Coordinate change, for example "x -> x*(1+p*x)".'),
    theory: str = typer.Option("qderham", "--theory", help="qderham, derham or hodge-tate."),
    at: str = typer.Option("q1", "--at", help="Specialization q1 or zeta."),
    p: int | None = typer.Option(None, "--p", help="Prime p."),
    prec: int | None = typer.Option(None, "--prec", help="p-adic precision N."),
    window: int | None = typer.Option(None, "--window", help="Narrow weight window W."),
    out: Path | None = typer.Option(None, "--out", help="Write the report to this file."),
    config: Path | None = typer.Option(None, "--config", help="JSON file with default parameters."),
    quiet: bool = typer.Option(False, "--quiet", help="Hide progress lines."),
    timings: bool = typer.Option(True, "--timings/--no-timings", help="Record case timings."),
) -> None:
    suite_config = load_config(config, suite="qderham", p=p, prec=prec, window=window, out=out)

    if theory not in {"qderham", "derham", "hodge-tate"}:
        raise usage_error(f"Unknown theory {theory}")
    if at not in {"q1", "zeta"}:
        raise usage_error(f"Unknown specialization {at}")
    if theory == "derham" and at != "q1":
        raise usage_error("The classical de Rham complex lives at q = 1")

    try:
        presentation = RingPresentation.parse(ring, framing)
        algebra = presentation.to_algebra(
            qderham.q_derham_base(suite_config.p, suite_config.prec),
            suite_config.window,
        )
    except (ParseError, ValueError, AlgebraError) as e:
        raise usage_error(str(e)) from e

    def table(degree: int) -> dict:
        tables = qderham.stable_tables(algebra, degree, theory, at)
        return {
            "tables": {key: value.model_dump() for key, value in tables.items()},
            "total": qderham.cohomology_invariants(algebra, degree, theory, at).model_dump(),
        }

    cases = [Case(name=f"H^{degree}", check=lambda degree=degree: table(degree)) for degree in range(algebra.r + 1)]
    report = emit(
        f"cohomology {presentation.model_dump_ring()}"
        + (f" [{presentation.model_dump_framing()}]" if framing else "")
        + f" {theory} at {at}",
        suite_config,
        cases,
        timings,
        quiet,
    )
    finish(report)


@app.command(
    name="nygaard",
    short_help="Check the explicit Nygaard filtration of the q-PD model at one level",
)
def nygaard(
    p: int | None = typer.Option(None, "--p", help="Prime p."),
    root_depth: int | None = typer.Option(None, "--root-depth", help="Root depth K."),
    degree: int | None = typer.Option(None, "--degree", help="Degree bound D."),
    level: int | None = typer.Option(None, "--level", help="Nygaard level n."),
    prec: int | None = typer.Option(None, "--prec", help="p-adic precision N."),
    series_prec: int | None = typer.Option(None, "--series-prec", help="(q-1)-adic precision M."),
    out: Path | None = typer.Option(None, "--out", help="Write the report to this file."),
    config: Path | None = typer.Option(None, "--config", help="JSON file with default parameters."),
    quiet: bool = typer.Option(False, "--quiet", help="Hide progress lines."),
    timings: bool = typer.Option(True, "--timings/--no-timings", help="Record case timings."),
) -> None:
    suite_config = load_config(
        config,
        suite="nygaard",
        p=p,
        root_depth=root_depth,
        degree=degree,
        level=level,
        prec=prec,
        series_prec=series_prec,
        out=out,
    )

    if suite_config.root_depth < 1:
        raise usage_error("The Nygaard model needs root depth K >= 1")

    manager = NygaardManager(config=suite_config)
    n = suite_config.level
    cases = [Case(name=f"nygaard/level n={n}", check=lambda: manager.level(manager.module(suite_config.p), n))]
    report = emit("nygaard", suite_config, cases, timings, quiet)
    finish(report)


def parse_components(text: str | None, length: int, name: str) -> list[int]:
    if text is None:
        raise usage_error(f"Operation needs --{name}")
    try:
        components = [int(c) for c in text.split(",")]
    except ValueError as e:
        raise usage_error(f"--{name} must be comma separated integers") from e
    if len(components) != length:
        raise usage_error(f"--{name} has {len(components)} components, expected {length}")
    return components


def witt_add(x: witt.WittVec, y: witt.WittVec) -> dict:
    total = x + y
    managers.confirm(total - y == x, "subtraction does not undo addition", total.to_json())
    return total.to_json()


def witt_mul(x: witt.WittVec, y: witt.WittVec) -> dict:
    product = x * y
    managers.confirm(product == y * x, "product is not commutative", product.to_json())
    return product.to_json()


def witt_teich(field: witt.GaloisField, value: int, length: int) -> dict:
    lift = witt.teichmuller(field, field.p, value, length)
    square = witt.teichmuller(field, field.p, field.mul(value, value), length)
    managers.confirm(lift * lift == square, "Teichmueller lift is not multiplicative", lift.to_json())
    return lift.to_json()


def witt_tate_twist(order: int, length: int, twist: int) -> dict:
    result = witt.tate_twist_invariants(order, length, twist)
    return {"h0": result.h0.model_dump(), "h1": result.h1.model_dump()}


@app.command(
    name="witt",
    short_help="Witt vector arithmetic over F_q: add, mul, teich or tate-twist",
)
def witt_command(
    operation: str = typer.Argument(..., help="add, mul, teich or tate-twist."),
    p: int | None = typer.Option(None, "--p", help="Prime p."),
    length: int | None = typer.Option(None, "--len", help="Length m of the Witt vectors."),
    order: int | None = typer.Option(None, "--order", help="Order q of the coefficient field, a power of p."),
    a: str | None = typer.Option(None, "--a", help="Components of the first operand, as field element indices."),
    b: str | None = typer.Option(None, "--b", help="Components of the second operand."),
    twist: int = typer.Option(0, "--twist", help="Tate twist n."),
    out: Path | None = typer.Option(None, "--out", help="Write the report to this file."),
    config: Path | None = typer.Option(None, "--config", help="JSON file with default parameters."),
    quiet: bool = typer.Option(False, "--quiet", help="Hide progress lines."),
    timings: bool = typer.Option(True, "--timings/--no-timings", help="Record case timings."),
) -> None:
    suite_config = load_config(config, suite="witt", p=p, length=length, out=out)
    m = suite_config.length

    try:
        field = witt.GaloisField(order=order or suite_config.p)
    except ValidationError as e:
        raise usage_error(f"{order} is not a prime power") from e

    if field.p != suite_config.p:
        raise usage_error(f"F_{field.order} does not have characteristic {suite_config.p}")

    def vector(text: str | None, name: str) -> witt.WittVec:
        components = parse_components(text, m, name)
        if any(not 0 <= c < field.order for c in components):
            raise usage_error(f"--{name} components must lie in 0..{field.order - 1}")
        return witt.from_components(field, field.p, components)

    match operation:
        case "add":
            check = partial(witt_add, vector(a, "a"), vector(b, "b"))
        case "mul":
            check = partial(witt_mul, vector(a, "a"), vector(b, "b"))
        case "teich":
            (value,) = parse_components(a, 1, "a")
            check = partial(witt_teich, field, value % field.order, m)
        case "tate-twist":
            if m <= twist:
                raise usage_error(f"Length {m} must exceed the twist {twist}")
            check = partial(witt_tate_twist, field.order, m, twist)
        case _:
            raise usage_error(f"Unknown operation {operation}")

    report = emit(f"witt {operation}", suite_config, [Case(name=f"witt/{operation}", check=check)], timings, quiet)
    finish(report)


def main() -> None:
    app()
