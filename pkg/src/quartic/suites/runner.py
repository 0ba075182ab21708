"""
Suite registry and runner.

The runner owns one instance of every suite, expands `all` to the full
registry and returns one SuiteResultModel per suite in registry order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List

from quartic.core.io import SuiteResultModel
from quartic.suites.base import Suite, SuiteContext, SuiteError
from quartic.suites.dynamics import (
    ClassicalReductionSuite,
    ContractionSuite,
    DecoherenceSuite,
    HyperdecoherenceSuite,
    RoundtripSuite,
    SupermapReductionSuite,
)
from quartic.suites.geometry import DualitySuite, EntropySuite, MembershipSuite, TraceBoundsSuite
from quartic.suites.witnesses import WitnessSuite

logger = logging.getLogger(__name__)

ALL = "all"


class SuiteRunner:
    """Looks suites up by name and runs them, optionally in parallel."""

    def __init__(self) -> None:
        suites: List[Suite] = [
            DualitySuite(),
            ClassicalReductionSuite(),
            SupermapReductionSuite(),
            TraceBoundsSuite(),
            DecoherenceSuite(),
            HyperdecoherenceSuite(),
            ContractionSuite(),
            RoundtripSuite(),
            EntropySuite(),
            MembershipSuite(),
            WitnessSuite(),
        ]
        self.suites: Dict[str, Suite] = {s.name: s for s in suites}

    @property
    def names(self) -> List[str]:
        return list(self.suites)

    def resolve(self, name: str) -> List[Suite]:
        """
        Expand a suite identifier.

        Args:
            name: A registered suite name or "all".

        Returns:
            The suites to run, in registry order.

        Raises:
            SuiteError: If the name is not registered.
        """
        if name == ALL:
            return list(self.suites.values())
        suite = self.suites.get(name)
        if suite is None:
            known = ", ".join([*self.suites, ALL])
            raise SuiteError(f"Unknown suite '{name}'. Available: {known}")
        return [suite]

    def run(self, name: str, ctx: SuiteContext, workers: int = 1) -> List[SuiteResultModel]:
        """
        Run one suite or all of them.

        Args:
            name: Suite identifier or "all".
            ctx: Shared run context.
            workers: Thread pool size; 1 runs sequentially.

        Returns:
            One result per suite, in registry order regardless of completion order.
        """
        suites = self.resolve(name)
        logger.debug("Running %d suite(s) with %d worker(s)", len(suites), workers)
        if workers <= 1 or len(suites) == 1:
            return [s.execute(ctx) for s in suites]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda s: s.execute(ctx), suites))
