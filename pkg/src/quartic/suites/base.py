"""
Base classes and interfaces for verification suites.

This module defines the abstract base class that all suites implement, the
context they run in, the tally they report through and the suite-level
exception.
"""

import math
import time
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from quartic.core.errors import QuarticError
from quartic.core.io import SuiteResultModel


class SuiteError(Exception):
    """
    Custom exception for suite-level errors.

    Raised for usage problems (unknown suite, unsupported dimension). The
    runner turns it into a failed result and the CLI into exit code 2.
    """

    pass


class SuiteContext(BaseModel):
    """
    Everything a suite needs to run deterministically.

    Attributes:
        seed: Base seed; sample i of a check draws from rng(seed, tag, i).
        tol: Declared tolerance; the suite passes iff max_violation <= tol.
        exact_tol: Tolerance for exact identities inside tolerance-free checks.
        samples: Monte Carlo count for the open-ended checks.
        dims: Values of N to sweep; None means the suite's defaults.
        include_n4: Add N = 4 to supermap sweeps.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = 42
    tol: float = Field(default=1e-9, ge=0.0)
    exact_tol: float = Field(default=1e-12, ge=0.0)
    samples: int = Field(default=1000, ge=1)
    dims: Optional[List[int]] = None
    include_n4: bool = False

    def pick_dims(self, defaults: List[int]) -> List[int]:
        return list(self.dims) if self.dims else list(defaults)

    def rng(self, *keys: int) -> np.random.Generator:
        """Generator for one sample, derived from the base seed and integer keys."""
        return np.random.default_rng([self.seed, *keys])


class Tally:
    """
    Accumulates check outcomes for one suite run.

    Every check contributes a non-negative violation; exact or boolean checks
    contribute 0 on success and 1 on failure.
    """

    def __init__(self, tol: float) -> None:
        self.tol = tol
        self.checks_run = 0
        self.max_violation = 0.0
        self.details: Dict[str, Any] = {}
        self.failures: List[str] = []

    def record(self, label: str, violation: float) -> None:
        value = float(violation)
        if math.isnan(value):
            value = math.inf
        self.checks_run += 1
        self.max_violation = max(self.max_violation, value)
        key = f"{label}.max_violation"
        self.details[key] = max(self.details.get(key, 0.0), value)
        if value > self.tol and label not in self.failures:
            self.failures.append(label)

    def require(self, label: str, condition: bool) -> None:
        self.record(label, 0.0 if condition else 1.0)

    def note(self, key: str, value: Any) -> None:
        """Attach an informational value to the result details."""
        self.details[key] = value


class Suite(ABC):
    """
    Abstract base class for all verification suites.

    Each suite checks one family of claims and reports through a Tally.
    """

    @property
    @abstractmethod
    def name(self) -> str:
        """
        Get the suite's name.

        Returns:
            The identifier used on the command line (e.g. "prop3").
        """
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        """
        Get the suite's description.

        Returns:
            A human-readable description of what this suite checks.
        """
        pass

    @abstractmethod
    def check(self, ctx: SuiteContext, tally: Tally) -> None:
        """
        Run every check of the suite.

        Args:
            ctx: Seed, tolerance and sample counts.
            tally: Receives each check's violation.

        Raises:
            SuiteError: On usage problems such as an unsupported dimension.
        """
        pass

    def execute(self, ctx: SuiteContext) -> SuiteResultModel:
        """
        Run the suite and wrap the tally into a result record.

        Numerical-core errors and SuiteErrors become failed results.
        """
        tally = Tally(ctx.tol)
        error: Optional[str] = None
        start = time.perf_counter()
        try:
            self.check(ctx, tally)
        except (SuiteError, QuarticError) as e:
            error = f"{type(e).__name__}: {e}"
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        if tally.failures:
            tally.note("failed_checks", list(tally.failures))
        passed = error is None and tally.checks_run > 0 and tally.max_violation <= ctx.tol
        return SuiteResultModel(
            suite_name=self.name,
            passed=passed,
            checks_run=tally.checks_run,
            max_violation=tally.max_violation,
            tolerance=ctx.tol,
            elapsed_ms=elapsed_ms,
            seed=ctx.seed,
            details=tally.details,
            error=error,
        )

    def to_schema(self) -> Dict[str, Any]:
        """
        Describe the suite for `quartic verify --list`.

        Returns:
            A dictionary with the suite's name and description.
        """
        return {
            "name": self.name,
            "description": self.description,
        }
