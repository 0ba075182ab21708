"""
CLI interface for Quartic using Typer.

This module defines the command-line interface for Quartic CLI: the
verification suites, polytope emission, witness search and state
validation, plus the configuration commands. Machine-readable output goes
to stdout (or --out); progress and summaries go to stderr.

Exit codes: 0 pass, 1 suite failed or witness not found, 2 usage error.
"""

import json
import logging
import sys
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence

import sympy
import typer
from pydantic import BaseModel, ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table
from sympy.utilities.iterables import multiset_permutations

from quartic.config import QuarticConfig, apply_env_overrides, load_config, setup_wizard
from quartic.core.convex import dual_polytope, dual_polytope_exact, perm_vertices
from quartic.core.errors import QuarticError
from quartic.core.io import (
    MembershipVerdictModel,
    PolytopeModel,
    SuiteResultModel,
    WitnessModel,
    load_operators,
    render_rational,
    results_to_csv,
    vertices_to_csv,
)
from quartic.core.maps import find_classical_witness
from quartic.core.states import TheoryOrder, validate_state
from quartic.core.supermaps import find_quartic_witness, swap_supermap
from quartic.suites import SuiteContext, SuiteError, SuiteRunner

app = typer.Typer(
    name="quartic",
    help="Numerical toolkit and verification suites for the quartic extension of quantum theory",
    add_completion=False,
)

console = Console(stderr=True)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

SUPPORTED_N = (2, 3)


class OutputFormat(str, Enum):
    json = "json"
    csv = "csv"


class Which(str, Enum):
    perm = "perm"
    dual = "dual"


class Diagram(str, Enum):
    classical = "classical"
    quartic = "quartic"


class GammaChoice(str, Enum):
    swap = "swap"
    random = "random"


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


def _base_config() -> QuarticConfig:
    """Config file, then SEED / TOL from the environment."""
    return apply_env_overrides(load_config())


def _write(text: str, out: Optional[Path]) -> None:
    """Send output to a file, or to stdout when no path is given."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out.write_text(text, encoding="utf-8")
    console.print(f"[green]✓[/green] Wrote {out}", style="dim")


def _ndjson(records: Sequence[BaseModel]) -> str:
    return "".join(r.model_dump_json() + "\n" for r in records)


def _usage_error(message: str) -> None:
    console.print(f"[red]✗ Error:[/red] {message}\n")
    sys.exit(EXIT_USAGE)


def _summary(results: List[SuiteResultModel]) -> None:
    table = Table(title="Verification results", title_style="bold cyan")
    table.add_column("Suite", style="cyan")
    table.add_column("Status")
    table.add_column("Checks", justify="right")
    table.add_column("Max violation", justify="right")
    table.add_column("Tolerance", justify="right")
    for r in results:
        status = "[green]PASS[/green]" if r.passed else "[red]FAIL[/red]"
        table.add_row(
            r.suite_name, status, str(r.checks_run), f"{r.max_violation:.3e}", f"{r.tolerance:.0e}"
        )
    console.print(table)
    for r in results:
        if r.error:
            console.print(f"[red]✗ {r.suite_name}:[/red] {r.error}")


@app.command()
def verify(
    suite: Optional[str] = typer.Argument(None, help="Suite name, or 'all'"),
    list_suites: bool = typer.Option(False, "--list", help="List available suites and exit"),
    n: Optional[List[int]] = typer.Option(
        None, "--n", help="Values of N to sweep (repeatable); defaults per suite"
    ),
    seed: Optional[int] = typer.Option(None, "--seed", help="Base seed"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Declared tolerance"),
    samples: Optional[int] = typer.Option(None, "--samples", min=1, help="Monte Carlo samples"),
    include_n4: Optional[bool] = typer.Option(
        None, "--include-n4/--no-include-n4", help="Also run supermap suites at N = 4"
    ),
    workers: Optional[int] = typer.Option(None, "--workers", min=1, max=64),
    fmt: Optional[OutputFormat] = typer.Option(None, "--format", help="json (NDJSON) or csv"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write records to this file"),
    timings: bool = typer.Option(
        True, "--timings/--no-timings", help="Report elapsed_ms (zero it for byte-stable output)"
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable debug logging"),
) -> None:
    """
    Run a verification suite.

    Each suite emits one record: JSON lines by default, or a CSV table.
    Exits 0 when every suite passes and 1 otherwise.

    The default sample count keeps a full run short. For the full-scale run use
    quartic verify all --samples 10000 --no-timings. The lemma1, lemma3,
    contraction and roundtrip suites use fixed counts and ignore --samples.
    """
    _configure_logging(verbose)
    runner = SuiteRunner()

    if list_suites:
        for s in runner.suites.values():
            schema = s.to_schema()
            console.print(f"[cyan]{schema['name']:<12}[/cyan] {schema['description']}")
        sys.exit(EXIT_OK)
    if suite is None:
        _usage_error("Missing suite name. Run [cyan]quartic verify --list[/cyan].")
        return

    try:
        config = _base_config()
        ctx = SuiteContext(
            seed=config.seed if seed is None else seed,
            tol=config.tol if tol is None else tol,
            exact_tol=config.exact_tol,
            samples=config.samples if samples is None else samples,
            dims=list(n) if n else None,
            include_n4=config.include_n4 if include_n4 is None else include_n4,
        )
        results = runner.run(suite, ctx, workers=config.workers if workers is None else workers)
    except (SuiteError, ValueError, ValidationError) as e:
        _usage_error(str(e))
        return
    except KeyboardInterrupt:
        console.print("\n[yellow]Verification cancelled.[/yellow]\n")
        sys.exit(EXIT_FAILED)

    if not timings:
        results = [r.model_copy(update={"elapsed_ms": 0.0}) for r in results]

    output = fmt.value if fmt is not None else config.default_format
    _write(results_to_csv(results) if output == "csv" else _ndjson(results), out)
    _summary(results)
    sys.exit(EXIT_OK if all(r.passed for r in results) else EXIT_FAILED)


@app.command()
def polytope(
    n: int = typer.Option(2, "--n", help="Dimension N"),
    m: int = typer.Option(1, "--m", min=0, help="Theory order"),
    which: Which = typer.Option(Which.perm, "--which", help="perm or dual"),
    exact: bool = typer.Option(False, "--exact", help="Rational coordinates"),
    fmt: Optional[OutputFormat] = typer.Option(None, "--format", help="json or csv"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write vertices to this file"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable debug logging"),
) -> None:
    """
    Emit the vertices of the permutohedron Perm_N or of its dual.
    """
    _configure_logging(verbose)
    if n not in SUPPORTED_N:
        _usage_error(f"Unsupported N = {n}; choose one of {SUPPORTED_N}")
        return

    try:
        config = _base_config()
        order = TheoryOrder(n=n, m=m)
        k, d = order.ancilla_dim, order.dim
        rational_generator = [sympy.Rational(1, k)] * k + [sympy.Integer(0)] * (d - k)
        exact_rows: Optional[List[List[str]]] = None
        if which is Which.perm:
            vertices = perm_vertices(order.permutohedron())
            facet_count = None
            if exact:
                exact_rows = [
                    [render_rational(x) for x in row]
                    for row in multiset_permutations(rational_generator)
                ]
        else:
            dual = dual_polytope(order.permutohedron(), config.tol)
            vertices = dual.vertices
            facet_count = dual.facet_count
            if exact:
                exact_dual = dual_polytope_exact(rational_generator)
                exact_rows = [[render_rational(x) for x in row] for row in exact_dual.vertices]
    except (QuarticError, ValueError, ValidationError) as e:
        _usage_error(str(e))
        return

    model = PolytopeModel(
        n=n,
        which=which.value,
        vertex_count=len(vertices),
        facet_count=facet_count,
        vertices=[[float(x) for x in row] for row in vertices],
        exact=exact_rows,
    )
    output = fmt.value if fmt is not None else config.default_format
    if output == "csv":
        text = vertices_to_csv(exact_rows if exact_rows is not None else model.vertices, exact)
    else:
        text = model.model_dump_json() + "\n"
    _write(text, out)
    console.print(
        f"[green]✓[/green] {model.vertex_count} vertices of the {which.value} polytope at "
        f"N = {n}, m = {m}",
        style="dim",
    )


@app.command()
def witness(
    diagram: Diagram = typer.Argument(..., help="classical or quartic"),
    n: int = typer.Option(2, "--n", help="Dimension N"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Base seed"),
    trials: int = typer.Option(1000, "--trials", min=1, help="Search trials"),
    threshold: float = typer.Option(0.05, "--threshold", help="Minimum gap to count as found"),
    gamma: GammaChoice = typer.Option(
        GammaChoice.swap, "--gamma", help="Quartic diagram: fixed SWAP or random supermaps"
    ),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the record to this file"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable debug logging"),
) -> None:
    """
    Search for a state where a reduction diagram fails to commute.

    Exits 0 when the best gap exceeds the threshold and 1 otherwise.
    """
    _configure_logging(verbose)
    try:
        config = _base_config()
        base_seed = config.seed if seed is None else seed
        if diagram is Diagram.classical:
            found = find_classical_witness(n, base_seed, trials)
            record = WitnessModel.from_classical(found, threshold, base_seed)
        else:
            fixed = swap_supermap(n) if gamma is GammaChoice.swap else None
            best = find_quartic_witness(n, base_seed, trials, gamma=fixed)
            record = WitnessModel.from_quartic(best, threshold, base_seed)
    except (QuarticError, ValueError, ValidationError) as e:
        _usage_error(str(e))
        return

    _write(record.model_dump_json() + "\n", out)
    if record.found:
        console.print(
            f"[green]✓[/green] {diagram.value} witness: gap {record.gap:.6f} at trial {record.trial}"
        )
        sys.exit(EXIT_OK)
    console.print(
        f"[red]✗[/red] No {diagram.value} witness above {threshold} "
        f"(best gap {record.gap:.3e} in {trials} trials)"
    )
    sys.exit(EXIT_FAILED)


@app.command()
def validate(
    state_file: Path = typer.Argument(..., help="JSON operator or list of operators"),
    n: int = typer.Option(2, "--n", help="Dimension N"),
    m: int = typer.Option(1, "--m", min=0, help="Theory order"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Membership tolerance"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write verdicts to this file"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable debug logging"),
) -> None:
    """
    Check operators from a file for membership in the extended state set.

    Exits 0 when every operator is an extended state and 1 otherwise.
    """
    _configure_logging(verbose)
    if not state_file.is_file():
        _usage_error(f"State file not found: {state_file}")
        return

    try:
        config = _base_config()
        order = TheoryOrder(n=n, m=m)
        operators = load_operators(state_file)
        verdicts = [
            MembershipVerdictModel.from_verdict(
                validate_state(op.to_operator(), order, config.tol if tol is None else tol),
                f"{state_file}#{i}",
            )
            for i, op in enumerate(operators)
        ]
    except (QuarticError, ValueError, ValidationError) as e:
        # json.JSONDecodeError is a ValueError
        _usage_error(str(e))
        return

    _write(_ndjson(verdicts), out)
    accepted = sum(v.is_extended_state for v in verdicts)
    console.print(f"{accepted}/{len(verdicts)} operator(s) are extended states at N = {n}, m = {m}")
    sys.exit(EXIT_OK if accepted == len(verdicts) else EXIT_FAILED)


@app.command()
def config() -> None:
    """
    Configure Quartic defaults.

    Launches an interactive wizard for seed, tolerances and sample counts.
    Configuration is saved to ~/.quartic/config.json
    """
    try:
        setup_wizard()
    except KeyboardInterrupt:
        console.print("\n[yellow]Configuration cancelled.[/yellow]\n")
        sys.exit(EXIT_OK)
    except Exception as e:
        console.print(f"[red]✗ Error:[/red] {e}\n")
        sys.exit(EXIT_FAILED)


@app.command()
def show_config() -> None:
    """
    Print the effective configuration (file plus environment overrides) as JSON.
    """
    try:
        effective = _base_config()
    except ValueError as e:
        _usage_error(str(e))
        return
    sys.stdout.write(json.dumps(effective.model_dump(), indent=2) + "\n")


@app.command()
def version() -> None:
    """
    Show the version of Quartic CLI.
    """
    from quartic import __version__

    console.print(f"Quartic CLI version [cyan]{__version__}[/cyan]")


def main() -> None:
    """Main entry point for the CLI."""
    app()


if __name__ == "__main__":
    main()
