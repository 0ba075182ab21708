"""
Suites for the static geometry: permutohedra and their duals, trace bounds,
state-set membership and the entropy window.
"""

import itertools
from typing import Iterable, List, Sequence, Set, Tuple

import numpy as np
import sympy
from sympy.utilities.iterables import multiset_permutations

from quartic.core.convex import (
    PermPolytope,
    VertexHull,
    dual_contains_batch,
    dual_polytope,
    dual_polytope_exact,
    dual_segment,
    majorized_by,
    perm_vertices,
    trace_bounds,
)
from quartic.core.hermitian import (
    HermitianOperator,
    Spectrum,
    diagonal_operator,
    haar_unitary,
    hs_inner,
    projector,
    random_density,
    random_hermitian,
    random_pure_state,
    shannon_entropy,
    spectrum,
    tensor_product,
    von_neumann_entropy,
)
from quartic.core.states import (
    TheoryOrder,
    distinguishable_family,
    extend_product,
    gauged_entropy,
    is_extended_state,
    is_xpovm_element,
    reduce_state,
    sample_extended_state,
    sample_xpovm_element,
)
from quartic.core.supermaps import (
    check_admissible,
    pure_contraction_supermap,
    random_cp_supermap,
    reflection_supermap,
)
from quartic.suites.base import Suite, SuiteContext, Tally

CROSS_CHECK_POINTS = 100_000

R = sympy.Rational


def _orbit(values: Sequence[object]) -> Set[Tuple[object, ...]]:
    return {tuple(p) for p in multiset_permutations(list(values))}


def _float_orbits(generators: Iterable[Sequence[float]]) -> np.ndarray:
    rows: List[List[float]] = []
    for g in generators:
        rows.extend(list(p) for p in multiset_permutations([float(x) for x in g]))
    return np.array(rows, dtype=float)


def _hausdorff(found: np.ndarray, expected: np.ndarray) -> float:
    """Max-norm Hausdorff distance between two finite point sets (inf if either is empty)."""
    if len(found) == 0 or len(expected) == 0:
        return float("inf")
    diff = np.max(np.abs(found[:, None, :] - expected[None, :, :]), axis=2)
    return float(max(diff.min(axis=0).max(), diff.min(axis=1).max()))


class DualitySuite(Suite):
    """Vertex counts, dual polytopes and segments, Schur concavity, and the cube cross-check."""

    @property
    def name(self) -> str:
        return "duality"

    @property
    def description(self) -> str:
        return (
            "Permutohedron vertex counts, exact dual polytopes, dual segments, simplex "
            "self-duality, Schur concavity of the Shannon entropy and a dual-membership "
            "cross-check against the N = 2 cube."
        )

    def check(self, ctx: SuiteContext, tally: Tally) -> None:
        for n, m, count in ((2, 1, 6), (3, 1, 84), (2, 2, 70)):
            order = TheoryOrder(n=n, m=m)
            found = len(perm_vertices(order.permutohedron()))
            tally.require(f"perm_vertices.n{n}m{m}", found == count == order.vertex_count)

        examples = [
            (["1/2", "1/2", "0"], [(1, 1, -1)]),
            (["2/3", "1/3", "0"], [(1, 0, 0), (R(2, 3), R(2, 3), R(-1, 3))]),
        ]
        for generator, orbits in examples:
            expected: Set[Tuple[object, ...]] = set()
            for o in orbits:
                expected |= _orbit([R(x) for x in o])
            exact = dual_polytope_exact(generator)
            tally.require(f"dual_exact.{'_'.join(generator)}", set(exact.vertices) == expected)

            floats = dual_polytope(PermPolytope.single([float(R(x)) for x in generator]))
            expected_floats = _float_orbits([[float(x) for x in o] for o in orbits])
            distance = _hausdorff(floats.vertices, expected_floats)
            tally.require(
                f"dual_float.{'_'.join(generator)}",
                len(floats.vertices) == len(expected_floats) and distance <= ctx.exact_tol,
            )

        cube_polytope = TheoryOrder(n=2, m=1).permutohedron()
        cube = dual_polytope(cube_polytope)
        expected_cube = _float_orbits([[1.0, 0.0, 0.0, 0.0], [0.5, 0.5, 0.5, -0.5]])
        tally.require(
            "dual_float.cube",
            len(cube.vertices) == 8
            and cube.facet_count == 6
            and _hausdorff(cube.vertices, expected_cube) <= ctx.exact_tol,
        )

        for a in (0.1, 0.25, 0.4):
            seg = dual_segment(a)
            assert seg.b is not None and seg.endpoints is not None
            tally.require(f"dual_segment.b.{a}", abs(seg.b - a / (2 * a - 1)) <= ctx.exact_tol)
            pairings = [
                float(np.dot(e, v)) for e in seg.endpoints for v in ((a, 1 - a), (1 - a, a))
            ]
            # each endpoint sits on a facet of the dual and inside the other
            tally.require(f"dual_segment.tight.{a}", abs(min(pairings)) <= ctx.exact_tol)
        quarter = dual_segment(0.25)
        tally.require("dual_segment.quarter", quarter.b is not None and quarter.b == -0.5)
        tally.require("dual_segment.whole_line", dual_segment(0.5).whole_line)

        # Perm(1, 0, ..., 0) is the simplex and its own dual
        for d in (2, 3, 4):
            simplex = dual_polytope(PermPolytope.single([1.0] + [0.0] * (d - 1)))
            tally.require(
                f"dual_float.simplex{d}",
                len(simplex.vertices) == d
                and _hausdorff(simplex.vertices, np.eye(d)) <= ctx.exact_tol,
            )

        for i in range(ctx.samples):
            rng = ctx.rng(5, i)
            d = 3 + i % 2
            y = rng.dirichlet(np.ones(d))
            # a mixture of permutation matrices is doubly stochastic, so x is majorized by y
            weights = rng.dirichlet(np.ones(3))
            x = sum(w * y[rng.permutation(d)] for w in weights)
            tally.require(
                "schur.majorized",
                majorized_by(Spectrum(values=x), Spectrum(values=y), ctx.tol),
            )
            tally.record("schur.entropy", max(0.0, shannon_entropy(y) - shannon_entropy(x)))

        rng = ctx.rng(4)
        points = rng.uniform(-1.0, 1.5, size=(CROSS_CHECK_POINTS, 4))
        points -= (points.sum(axis=1, keepdims=True) - 1.0) / 4
        by_pairing = dual_contains_batch(cube_polytope, points, ctx.tol)
        by_hull = VertexHull(cube.vertices).contains_batch(points, ctx.tol)
        disagreements = int(np.count_nonzero(by_pairing != by_hull))
        tally.note("cross_check.points", CROSS_CHECK_POINTS)
        tally.note("cross_check.inside_fraction", float(by_hull.mean()))
        tally.note("cross_check.disagreements", disagreements)
        tally.require("cross_check", disagreements == 0)


class TraceBoundsSuite(Suite):
    """Lower and upper bounds on Tr(rho X) from the two spectra, and their attainment."""

    @property
    def name(self) -> str:
        return "lemma5"

    @property
    def description(self) -> str:
        return "Spectral bounds p_asc . q_desc <= Tr(rho X) <= p_asc . q_asc and their attainment."

    def check(self, ctx: SuiteContext, tally: Tally) -> None:
        p = Spectrum(values=[0.5, 0.5, 0.0, 0.0])
        q = Spectrum(values=[0.5, 0.5, 0.5, -0.5])
        lower, upper = trace_bounds(p, q)
        tally.record("bounds.cube_example", max(abs(lower), abs(upper - 0.5)))

        for i in range(ctx.samples):
            rng = ctx.rng(5, i)
            dim = int(rng.integers(2, 10))
            rho = random_density(dim, rng)
            x = random_hermitian(dim, rng)
            p, q = spectrum(rho), spectrum(x)
            lower, upper = trace_bounds(p, q)
            value = hs_inner(rho, x)
            tally.record("bounds.random", max(0.0, lower - value, value - upper))

            u = haar_unitary(dim, rng)
            aligned_state = diagonal_operator(p.ascending, u)
            tally.record(
                "bounds.lower_attained",
                abs(hs_inner(aligned_state, diagonal_operator(q.values, u)) - lower),
            )
            tally.record(
                "bounds.upper_attained",
                abs(hs_inner(aligned_state, diagonal_operator(q.ascending, u)) - upper),
            )


class MembershipSuite(Suite):
    """Extended states, extended POVMs, the duality pairing and sampled admissibility."""

    @property
    def name(self) -> str:
        return "membership"

    @property
    def description(self) -> str:
        return (
            "Embedding of quantum states, distinguishable families, uniqueness of extensions "
            "of pure states, non-negative XPOVM pairings and sampled supermap admissibility."
        )

    def check(self, ctx: SuiteContext, tally: Tally) -> None:
        order2 = TheoryOrder(n=2, m=1)
        self._check_embedding(ctx, tally)
        self._check_pure_extensions(ctx, tally, order2)

        examples = [
            ([1.0, 0.0, 0.0, 0.0], True),
            ([0.5, 0.5, 0.5, -0.5], True),
            ([1.0, 1.0, 1.0, 1.0], True),
            ([1.0, 1.0, -1.0, 0.0], False),
            ([-1.0, 0.0, 0.0, 0.0], False),
        ]
        for values, member in examples:
            e = diagonal_operator(values)
            tally.require(f"xpovm.example.{values}", is_xpovm_element(e, order2) == member)

        negative = 0
        for i in range(ctx.samples):
            rng = ctx.rng(14, i)
            sigma = sample_extended_state(order2, rng, terms=1 if i % 2 == 0 else None)
            e = sample_xpovm_element(order2, rng)
            if spectrum(e.operator).values[-1] < 0:
                negative += 1
            tally.record("xpovm.duality", max(0.0, -hs_inner(sigma.operator, e.operator)))
        tally.note("xpovm.with_negative_eigenvalue", negative)

        checks = min(ctx.samples, 200)
        reflection = check_admissible(reflection_supermap(2), checks, ctx.seed, ctx.tol)
        tally.require("admissible.reflection", reflection.preserves_sampled)
        # the reduced map rho -> I - rho is positive but not completely positive
        tally.require("admissible.reflection_reduced_not_cp", not reflection.reduced_cp)
        phi = np.zeros(4)
        phi[0] = 1.0
        contraction = check_admissible(pure_contraction_supermap(phi), checks, ctx.seed, ctx.tol)
        tally.require(
            "admissible.pure_contraction",
            not contraction.preserves_sampled and contraction.first_violation is not None,
        )
        mixture = check_admissible(
            random_cp_supermap(2, ctx.rng(22), unital=True), checks, ctx.seed, ctx.tol
        )
        tally.require(
            "admissible.unitary_mixture", mixture.preserves_sampled and mixture.reduced_cp
        )

    def _check_embedding(self, ctx: SuiteContext, tally: Tally) -> None:
        for n in ctx.pick_dims([2, 3]):
            order = TheoryOrder(n=n, m=1)
            family = distinguishable_family(np.eye(n), order)
            pairs = itertools.combinations(family, 2)
            overlap = max((abs(hs_inner(a.operator, b.operator)) for a, b in pairs), default=0.0)
            tally.record(f"distinguishable.n{n}", overlap)
            for i in range(min(ctx.samples, 100)):
                rho = random_density(n, ctx.rng(10, n, i))
                sigma = extend_product(rho, order)
                marginal = reduce_state(sigma).matrix
                tally.record(f"embedding.n{n}", float(np.max(np.abs(marginal - rho.matrix))))

    def _check_pure_extensions(self, ctx: SuiteContext, tally: Tally, order: TheoryOrder) -> None:
        # a state with pure marginal is |phi><phi| (x) tau; only tau = I/N is extended
        for i in range(min(ctx.samples, 50)):
            rng = ctx.rng(11, i)
            phi = random_pure_state(order.n, rng)
            tilt = projector(rng.standard_normal(order.n) + 1j * rng.standard_normal(order.n))
            for eps in (0.0, 0.1, 0.5, 1.0):
                tau = (1 - eps) * np.eye(order.n) / order.n + eps * tilt.matrix
                sigma = tensor_product(phi, HermitianOperator(matrix=tau))
                extended = is_extended_state(sigma, order, tol=ctx.tol)
                tally.require("pure_extension.unique", extended == (eps == 0.0))


class EntropySuite(Suite):
    """Entropy window [m ln N, (m + 1) ln N] and vanishing gauged entropy on extremal states."""

    ORDERS = ((2, 0), (2, 1), (3, 1), (2, 2))

    @property
    def name(self) -> str:
        return "entropy"

    @property
    def description(self) -> str:
        return "Entropy interval of sampled extended states and gauged entropy of extremal ones."

    def check(self, ctx: SuiteContext, tally: Tally) -> None:
        for n, m in self.ORDERS:
            order = TheoryOrder(n=n, m=m)
            low, high = order.entropy_interval
            for i in range(ctx.samples):
                extremal = i % 4 == 0
                sigma = sample_extended_state(
                    order, ctx.rng(12, n, m, i), terms=1 if extremal else None
                )
                s = von_neumann_entropy(sigma.operator)
                tally.record(f"interval.n{n}m{m}", max(0.0, low - s, s - high))
                if extremal:
                    tally.record(f"extremal.n{n}m{m}", abs(gauged_entropy(sigma)))
