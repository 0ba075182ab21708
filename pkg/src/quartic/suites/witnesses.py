"""Suites that look for gaps between the classical, quantum and quartic descriptions."""

import numpy as np

from quartic.core.hermitian import diagonal_operator, random_density
from quartic.core.maps import (
    classical_paths,
    find_classical_witness,
    hadamard_witness,
    random_cptp_map,
)
from quartic.core.states import TheoryOrder, extend_product
from quartic.core.supermaps import (
    find_quartic_witness,
    hyperdecohere_paths,
    product_supermap,
    swap_supermap,
)
from quartic.suites.base import Suite, SuiteContext, Tally

QUARTIC_GAP_THRESHOLD = 0.05
CONTROL_SAMPLES = 100


class WitnessSuite(Suite):
    """Both diagrams fail to commute somewhere and commute on their embedded subsets."""

    @property
    def name(self) -> str:
        return "witnesses"

    @property
    def description(self) -> str:
        return (
            "Hadamard witness for the decoherence diagram, a searched witness for the "
            "hyper-decoherence diagram, and commuting controls on embedded states."
        )

    def check(self, ctx: SuiteContext, tally: Tally) -> None:
        smoke = hadamard_witness()
        tally.record("classical.hadamard_gap", abs(smoke.gap - 1.0))
        tally.record(
            "classical.hadamard_paths",
            max(
                float(np.max(np.abs(smoke.paths.p_prime - [1.0, 0.0]))),
                float(np.max(np.abs(smoke.paths.p_doubleprime - [0.5, 0.5]))),
            ),
        )
        searched = find_classical_witness(3, ctx.seed, min(ctx.samples, 1000))
        tally.note("classical.search_gap_n3", searched.gap)
        tally.require("classical.search", searched.gap > ctx.tol)

        trials = ctx.samples
        swap = find_quartic_witness(2, ctx.seed, trials, gamma=swap_supermap(2))
        tally.note("quartic.swap_gap", swap.gap)
        tally.require("quartic.swap", swap.gap > QUARTIC_GAP_THRESHOLD)
        mixed = find_quartic_witness(2, ctx.seed, trials)
        tally.note("quartic.random_gap", mixed.gap)
        tally.require("quartic.random", mixed.gap > QUARTIC_GAP_THRESHOLD)

        for n in ctx.pick_dims([2, 3]):
            order = TheoryOrder(n=n, m=1)
            for i in range(CONTROL_SAMPLES):
                rng = ctx.rng(15, n, i)
                psi = random_cptp_map(n, rng)
                sigma = extend_product(random_density(n, rng), order)
                paths = hyperdecohere_paths(product_supermap(psi), sigma)
                tally.record("control.product", paths.gap)

                diagonal = diagonal_operator(rng.dirichlet(np.ones(n)))
                tally.record("control.diagonal", classical_paths(psi, diagonal).gap)
