"""
Configuration management for Quartic CLI.

This module handles loading, saving, and managing user defaults for the
verification suites using Pydantic models for validation. The numerical
library never reads this configuration; the CLI turns it into explicit
arguments.
"""

import json
import os
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, ValidationError, field_validator
from rich.console import Console
from rich.panel import Panel
from rich.prompt import Confirm, Prompt

console = Console(stderr=True)

SEED_ENV = "SEED"
TOL_ENV = "TOL"


class QuarticConfig(BaseModel):
    """
    Configuration model for Quartic CLI.

    Attributes:
        seed: Base seed for every Monte Carlo suite.
        tol: Declared tolerance for eigen-mediated checks.
        exact_tol: Tolerance for exact algebraic identities.
        samples: Default Monte Carlo sample count.
        include_n4: Also run supermap suites at N = 4.
        default_format: Output format when --format is not given.
        workers: Suites run concurrently by `verify all`.
    """

    seed: int = Field(default=42, ge=0)
    tol: float = Field(default=1e-9, ge=0.0)
    exact_tol: float = Field(default=1e-12, ge=0.0)
    samples: int = Field(default=1000, ge=1)
    include_n4: bool = Field(default=False)
    default_format: Literal["json", "csv"] = Field(default="json")
    workers: int = Field(default=1, ge=1, le=64)

    @field_validator("tol", "exact_tol")
    @classmethod
    def validate_tolerance(cls, v: float) -> float:
        """Reject tolerances too loose to mean anything."""
        if v >= 1e-2:
            raise ValueError(f"Tolerance {v} is too loose; use a value below 1e-2")
        return v


def get_config_path() -> Path:
    """
    Get the path to the Quartic configuration file.

    Returns:
        Path object pointing to ~/.quartic/config.json
    """
    config_dir = Path.home() / ".quartic"
    config_dir.mkdir(exist_ok=True)
    return config_dir / "config.json"


def load_config() -> QuarticConfig:
    """
    Load configuration from disk.

    If the configuration file doesn't exist, returns a default configuration.

    Returns:
        QuarticConfig instance with loaded or default settings.

    Raises:
        ValueError: If the configuration file is malformed.
    """
    config_path = get_config_path()

    if not config_path.exists():
        console.print("[yellow]No configuration found. Using defaults.[/yellow]", style="dim")
        return QuarticConfig()

    try:
        with open(config_path, "r", encoding="utf-8") as f:
            data = json.load(f)
        return QuarticConfig(**data)
    except json.JSONDecodeError as e:
        raise ValueError(f"Configuration file is malformed: {e}") from e
    except ValidationError as e:
        raise ValueError(f"Invalid configuration: {e}") from e


def apply_env_overrides(config: QuarticConfig) -> QuarticConfig:
    """
    Apply the SEED and TOL environment variables on top of a configuration.

    Raises:
        ValueError: If a variable does not parse or fails validation.
    """
    updates = {}
    if os.environ.get(SEED_ENV):
        updates["seed"] = os.environ[SEED_ENV]
    if os.environ.get(TOL_ENV):
        updates["tol"] = os.environ[TOL_ENV]
    if not updates:
        return config
    try:
        return QuarticConfig(**{**config.model_dump(), **updates})
    except ValidationError as e:
        raise ValueError(f"Invalid environment override: {e}") from e


def save_config(config: QuarticConfig) -> None:
    """
    Save configuration to disk.

    Args:
        config: QuarticConfig instance to save.

    Raises:
        IOError: If unable to write configuration file.
    """
    config_path = get_config_path()

    try:
        with open(config_path, "w", encoding="utf-8") as f:
            json.dump(config.model_dump(), f, indent=2)
        console.print(f"[green]✓[/green] Configuration saved to {config_path}", style="dim")
    except OSError as e:
        raise IOError(f"Failed to save configuration: {e}") from e


def setup_wizard() -> QuarticConfig:
    """
    Interactive setup wizard for the suite defaults.

    Returns:
        QuarticConfig instance with user-provided settings.
    """
    console.print(
        Panel.fit(
            "[bold cyan]Quartic CLI Setup Wizard[/bold cyan]\n\n"
            "Set the defaults used by the verification suites.",
            border_style="cyan",
        )
    )

    try:
        existing = load_config()
    except ValueError:
        existing = QuarticConfig()

    console.print("\n[bold]Reproducibility[/bold]")
    seed_str = Prompt.ask("Base seed", default=str(existing.seed))
    samples_str = Prompt.ask("Monte Carlo samples", default=str(existing.samples))

    console.print("\n[bold]Tolerances[/bold]")
    tol_str = Prompt.ask("Eigen-mediated tolerance", default=repr(existing.tol))
    exact_tol_str = Prompt.ask("Exact-identity tolerance", default=repr(existing.exact_tol))

    console.print("\n[bold]Execution[/bold]")
    include_n4 = Confirm.ask("Run supermap suites at N = 4", default=existing.include_n4)
    default_format = Prompt.ask(
        "Default output format", choices=["json", "csv"], default=existing.default_format
    )
    workers_str = Prompt.ask("Parallel suites", default=str(existing.workers))

    try:
        config = QuarticConfig(
            seed=int(seed_str),
            tol=float(tol_str),
            exact_tol=float(exact_tol_str),
            samples=int(samples_str),
            include_n4=include_n4,
            default_format=default_format,  # type: ignore[arg-type]
            workers=int(workers_str),
        )
    except (ValueError, ValidationError) as e:
        console.print(f"[red]✗[/red] Invalid configuration: {e}")
        console.print("Using default values.", style="dim")
        config = QuarticConfig()

    save_config(config)

    console.print(
        "\n[bold green]✓ Setup complete![/bold green]\n"
        "Run [cyan]quartic verify all[/cyan] to check the full suite.\n",
    )

    return config
