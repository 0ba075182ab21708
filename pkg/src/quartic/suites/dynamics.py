"""
Suites for quantum maps and supermaps: classical reduction, supermap
reduction, decoherence majorization, contractions and the Choi round-trips.
"""

import numpy as np

from quartic.core.convex import majorization_excess
from quartic.core.hermitian import (
    HermitianOperator,
    ginibre,
    haar_unitary,
    hs_norm,
    max_entangled_state,
    random_density,
    random_pure_state,
    reshuffle,
    spectrum,
)
from quartic.core.maps import (
    apply_map,
    classical_reduction,
    classify,
    compose_maps,
    contraction_map,
    jamiolkowski_state,
    map_effect,
    map_effect_from_state,
    map_from_state,
    random_bistochastic_map,
    random_cptp_map,
)
from quartic.core.states import TheoryOrder, sample_extended_state
from quartic.core.supermaps import (
    compose_states,
    decoherence_excess,
    hyperdecoherence_excess,
    identity_supermap,
    product_supermap,
    random_cp_supermap,
    reduce_supermap,
    supermap_classify,
    supermap_from_choi,
)
from quartic.suites.base import Suite, SuiteContext, Tally

RANDOM_MAPS = 200
RANDOM_SUPERMAPS = 100
ROUNDTRIPS = 100


def _max_abs(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


class ClassicalReductionSuite(Suite):
    """Transition matrices of random stochastic and bistochastic maps."""

    @property
    def name(self) -> str:
        return "lemma1"

    @property
    def description(self) -> str:
        return (
            "Classical reduction T of random CPTP maps is column-stochastic, of random "
            "bistochastic maps doubly stochastic; bistochastic maps only mix spectra."
        )

    def check(self, ctx: SuiteContext, tally: Tally) -> None:
        for n in ctx.pick_dims([2, 3]):
            for i in range(RANDOM_MAPS):
                psi = random_cptp_map(n, ctx.rng(1, n, i))
                flags = classify(psi, ctx.tol)
                tally.require("cptp.classified", flags.cp and flags.trace_preserving)
                t = classical_reduction(psi)
                tally.record("cptp.columns", float(np.max(np.abs(t.sum(axis=0) - 1.0))))
                tally.record("cptp.nonnegative", max(0.0, -float(t.min())))

            for i in range(RANDOM_MAPS):
                rng = ctx.rng(2, n, i)
                psi = random_bistochastic_map(n, rng)
                tally.require("bistochastic.classified", classify(psi, ctx.tol).bistochastic)
                t = classical_reduction(psi)
                tally.record("bistochastic.columns", float(np.max(np.abs(t.sum(axis=0) - 1.0))))
                tally.record("bistochastic.rows", float(np.max(np.abs(t.sum(axis=1) - 1.0))))
                rho = random_density(n, rng)
                image = apply_map(psi, rho)
                tally.record(
                    "bistochastic.majorization",
                    max(0.0, majorization_excess(spectrum(image), spectrum(rho))),
                )


class SupermapReductionSuite(Suite):
    """Inheritance of CP, trace preservation and unitality under reduce_supermap."""

    @property
    def name(self) -> str:
        return "lemma3"

    @property
    def description(self) -> str:
        return (
            "Reduced maps of random CP stochastic (bistochastic) supermaps are CP stochastic "
            "(bistochastic); a non-positive G can still have a positive reduction."
        )

    def check(self, ctx: SuiteContext, tally: Tally) -> None:
        defaults = [2, 4] if ctx.include_n4 else [2]
        for n in ctx.pick_dims(defaults):
            for i in range(RANDOM_SUPERMAPS):
                g = random_cp_supermap(n, ctx.rng(3, n, i))
                outer = supermap_classify(g, ctx.tol)
                tally.require("stochastic.supermap", outer.cp and outer.trace_preserving)
                reduced = classify(reduce_supermap(g), ctx.tol)
                tally.require("stochastic.reduced", reduced.cp and reduced.trace_preserving)

                g = random_cp_supermap(n, ctx.rng(4, n, i), unital=True)
                tally.require("bistochastic.supermap", supermap_classify(g, ctx.tol).bistochastic)
                tally.require(
                    "bistochastic.reduced", classify(reduce_supermap(g), ctx.tol).bistochastic
                )

            psi = random_cptp_map(n, ctx.rng(6, n))
            recovered = reduce_supermap(product_supermap(psi))
            tally.record("product.reduction", _max_abs(recovered.superop, psi.superop))

            identity = reduce_supermap(identity_supermap(n))
            tally.record("identity.reduction", _max_abs(identity.superop, np.eye(n * n)))

            # a traceless direction on A' leaves Tr_A'B' G untouched
            z = np.zeros((n, n))
            z[0, 0], z[1, 1] = 1.0, -1.0
            eye = np.eye(n)
            direction = np.kron(np.kron(np.kron(eye, z), eye), eye)
            perturbed = supermap_from_choi(identity_supermap(n).choi_g.matrix + 0.5 * direction)
            tally.require(
                "positivity.strict",
                not supermap_classify(perturbed, ctx.tol).cp
                and classify(reduce_supermap(perturbed), ctx.tol).cp,
            )


class DecoherenceSuite(Suite):
    """diag(U diag(p) U^dagger) is majorized by p."""

    @property
    def name(self) -> str:
        return "prop3"

    @property
    def description(self) -> str:
        return "Complete decoherence of a rotated classical state only mixes the distribution."

    def check(self, ctx: SuiteContext, tally: Tally) -> None:
        for n in ctx.pick_dims([2, 3, 4]):
            for i in range(ctx.samples):
                rng = ctx.rng(7, n, i)
                u = haar_unitary(n, rng)
                p = rng.dirichlet(np.ones(n))
                tally.record(f"decoherence.n{n}", max(0.0, decoherence_excess(u, p)))


class HyperdecoherenceSuite(Suite):
    """Tr_A'[U (rho (x) I/N) U^dagger] is majorized by rho."""

    @property
    def name(self) -> str:
        return "prop4"

    @property
    def description(self) -> str:
        return "Hyper-decoherence after a global unitary on the extended system only mixes rho."

    def check(self, ctx: SuiteContext, tally: Tally) -> None:
        for n in ctx.pick_dims([2, 3]):
            for i in range(ctx.samples):
                rng = ctx.rng(8, n, i)
                u = haar_unitary(n * n, rng)
                rho = random_pure_state(n, rng) if i % 4 == 0 else random_density(n, rng)
                tally.record(f"hyperdecoherence.n{n}", max(0.0, hyperdecoherence_excess(u, rho)))


class ContractionSuite(Suite):
    """The complete contraction omega -> rho and its effect on I/N."""

    @property
    def name(self) -> str:
        return "contraction"

    @property
    def description(self) -> str:
        return "Contraction maps send every state to rho; both routes to Phi(I/N) agree with rho."

    def check(self, ctx: SuiteContext, tally: Tally) -> None:
        for n in ctx.pick_dims([2, 3]):
            for i in range(ROUNDTRIPS):
                rng = ctx.rng(9, n, i)
                rho = random_density(n, rng)
                omega = random_density(n, rng)
                phi = contraction_map(rho)
                image = apply_map(phi, omega)
                tally.record("contraction.image", hs_norm(image.matrix - rho.matrix))
                tally.record("contraction.effect", _max_abs(map_effect(phi).matrix, rho.matrix))
                tally.record(
                    "contraction.effect_from_state",
                    _max_abs(map_effect_from_state(phi).matrix, rho.matrix),
                )
                flags = classify(phi, ctx.tol)
                tally.require(
                    "contraction.flags", flags.cp and flags.trace_preserving and not flags.unital
                )


class RoundtripSuite(Suite):
    """Reshuffle involution, the Jamiolkowski pair and the composition of states."""

    @property
    def name(self) -> str:
        return "roundtrip"

    @property
    def description(self) -> str:
        return (
            "Reshuffling is a bit-exact involution, jamiolkowski_state and map_from_state are "
            "inverse, and composition of states mirrors composition of maps."
        )

    def check(self, ctx: SuiteContext, tally: Tally) -> None:
        for n in ctx.pick_dims([2, 3]):
            side = n * n
            order = TheoryOrder(n=n, m=1)
            psi_plus = max_entangled_state(n)
            for i in range(ROUNDTRIPS):
                rng = ctx.rng(13, n, i)
                m = ginibre(side, side, rng)
                tally.require("reshuffle.involution", np.array_equal(reshuffle(reshuffle(m)), m))

                phi_a = random_cptp_map(n, rng)
                phi_b = random_cptp_map(n, rng)
                phi_c = random_cptp_map(n, rng)
                back = map_from_state(jamiolkowski_state(phi_a))
                tally.require("jamiolkowski.inverse", np.array_equal(back.superop, phi_a.superop))

                sa = jamiolkowski_state(phi_a)
                sb = jamiolkowski_state(phi_b)
                sc = jamiolkowski_state(phi_c)
                composed = map_from_state(compose_states(sa, sb))
                tally.record(
                    "compose.law", _max_abs(composed.superop, compose_maps(phi_a, phi_b).superop)
                )
                left = compose_states(compose_states(sa, sb), sc)
                right = compose_states(sa, compose_states(sb, sc))
                tally.record("compose.associative", _max_abs(left.matrix, right.matrix))

                sigma = sample_extended_state(order, rng)
                tally.record(
                    "compose.identity",
                    max(
                        _max_abs(compose_states(sigma, psi_plus).matrix, sigma.matrix),
                        _max_abs(compose_states(psi_plus, sigma).matrix, sigma.matrix),
                    ),
                )

                rho = random_density(n, rng)
                contraction = HermitianOperator(matrix=np.kron(rho.matrix, np.eye(n) / n))
                tally.record(
                    "compose.absorbing",
                    _max_abs(compose_states(contraction, sb).matrix, contraction.matrix),
                )
