import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from quartic.core.convex import (
    PermPolytope,
    VertexHull,
    dual_contains,
    dual_contains_batch,
    dual_polytope,
    dual_polytope_exact,
    dual_segment,
    majorization_excess,
    majorized_by,
    multinomial_count,
    perm_contains,
    perm_vertices,
    permutation_min_pairing,
    trace_bounds,
    vertex_hull_contains,
    weakly_submajorized_by,
)
from quartic.core.errors import CombinatorialGuardError, DimensionError, DomainError
from quartic.core.hermitian import Spectrum, shannon_entropy

R = sympy.Rational

OCTAHEDRON = PermPolytope.single([0.5, 0.5, 0.0, 0.0])


def spectrum_of(*values: float) -> Spectrum:
    return Spectrum(values=list(values))


def test_majorization_examples():
    assert majorized_by(spectrum_of(0.5, 0.5, 0, 0), spectrum_of(1, 0, 0, 0))
    assert not majorized_by(spectrum_of(1, 0, 0, 0), spectrum_of(0.5, 0.5, 0, 0))
    assert majorized_by(spectrum_of(0.25, 0.25, 0.25, 0.25), spectrum_of(0.5, 0.5, 0, 0))
    # equal partial sums but different totals
    assert not majorized_by(spectrum_of(0.5, 0.4), spectrum_of(0.5, 0.5))
    with pytest.raises(DimensionError):
        majorized_by(spectrum_of(1, 0), spectrum_of(1, 0, 0))


def test_majorization_excess_sign():
    assert majorization_excess(spectrum_of(0.5, 0.5), spectrum_of(1, 0)) <= 0
    assert majorization_excess(spectrum_of(1, 0), spectrum_of(0.5, 0.5)) == pytest.approx(0.5)
    assert majorization_excess(spectrum_of(0.5, 0.4), spectrum_of(0.5, 0.5)) == pytest.approx(0.1)


@settings(max_examples=100, deadline=None)
@given(
    arrays(np.float64, 4, elements=st.floats(0.01, 1.0)),
    st.floats(0.0, 1.0),
    st.sampled_from([(0, 1), (0, 3), (1, 2), (2, 3)]),
)
def test_shannon_entropy_is_schur_concave(raw, t, pair):
    y = raw / raw.sum()
    i, j = pair
    # T-transform: a doubly stochastic mix of two coordinates
    x = y.copy()
    x[i] = t * y[i] + (1 - t) * y[j]
    x[j] = (1 - t) * y[i] + t * y[j]
    assert majorized_by(spectrum_of(*x), spectrum_of(*y))
    assert shannon_entropy(x) >= shannon_entropy(y) - 1e-12


def test_shannon_entropy_orders_random_majorized_pairs(rng):
    compared = 0
    for _ in range(500):
        x = rng.dirichlet(np.ones(3))
        y = rng.dirichlet(np.ones(3))
        if majorized_by(spectrum_of(*x), spectrum_of(*y), tol=0.0):
            compared += 1
            assert shannon_entropy(x) >= shannon_entropy(y) - 1e-12
    assert compared > 0


def test_weak_submajorization_accepts_subnormalized():
    assert weakly_submajorized_by(spectrum_of(0.3, 0.2, 0, 0), spectrum_of(0.5, 0.5, 0, 0))
    assert not majorized_by(spectrum_of(0.3, 0.2, 0, 0), spectrum_of(0.5, 0.5, 0, 0))
    assert perm_contains(OCTAHEDRON, spectrum_of(0.3, 0.2, 0, 0), subnormalized=True)
    assert not perm_contains(OCTAHEDRON, spectrum_of(0.6, 0.2, 0, 0), subnormalized=True)


@pytest.mark.parametrize(
    "generator,count",
    [
        ([0.5, 0.5, 0.0, 0.0], 6),
        ([1 / 3] * 3 + [0.0] * 6, 84),
        ([0.25] * 4 + [0.0] * 4, 70),
    ],
)
def test_perm_vertex_counts(generator, count):
    vertices = perm_vertices(PermPolytope.single(generator))
    assert vertices.shape == (count, len(generator))
    assert len({tuple(v) for v in vertices}) == count
    assert multinomial_count(generator) == count


def test_perm_vertices_guard():
    with pytest.raises(CombinatorialGuardError):
        perm_vertices(PermPolytope.single([1.0] + [0.0] * 12))


def test_every_vertex_is_majorized_by_generator():
    for v in perm_vertices(OCTAHEDRON):
        assert perm_contains(OCTAHEDRON, Spectrum(values=v))


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, 4, elements=st.floats(-2.0, 2.0, allow_nan=False)))
def test_dual_contains_matches_brute_force(q):
    g = [0.5, 0.5, 0.0, 0.0]
    certificate = dual_contains(PermPolytope.single(g), Spectrum(values=q))
    assert certificate.worst_value == pytest.approx(permutation_min_pairing(g, q), abs=1e-12)


def test_dual_polytope_of_octahedron_is_cube():
    cube = dual_polytope(OCTAHEDRON)
    assert len(cube.vertices) == 8
    assert cube.facet_count == 6
    assert cube.polytope is not None
    orbits = sorted(g.tolist() for g in cube.polytope.generators)
    assert np.allclose(orbits, [[0.5, 0.5, 0.5, -0.5], [1.0, 0.0, 0.0, 0.0]])


def test_dual_polytope_uniform_generator():
    whole = dual_polytope(PermPolytope.single([0.25] * 4))
    assert whole.whole_hyperplane
    assert whole.vertices.shape == (0, 4)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_simplex_is_self_dual(d):
    simplex = dual_polytope(PermPolytope.single([1.0] + [0.0] * (d - 1)))
    assert not simplex.whole_hyperplane
    assert simplex.facet_count == d
    found = sorted(tuple(v) for v in simplex.vertices)
    expected = sorted(tuple(row) for row in np.eye(d))
    assert np.allclose(found, expected, atol=1e-12)

    exact = dual_polytope_exact(["1"] + ["0"] * (d - 1))
    assert [tuple(R(x) for x in o) for o in exact.orbits] == [(R(1),) + (R(0),) * (d - 1)]
    assert len(exact.vertices) == d


def test_dual_polytope_guard():
    with pytest.raises(CombinatorialGuardError):
        dual_polytope(PermPolytope.single([0.2] * 5 + [0.0]))


def test_dual_polytope_exact_examples():
    first = dual_polytope_exact(["1/2", "1/2", "0"])
    assert [tuple(R(x) for x in o) for o in first.orbits] == [(R(1), R(1), R(-1))]
    assert len(first.vertices) == 3

    second = dual_polytope_exact(["2/3", "1/3", "0"])
    orbits = {tuple(R(x) for x in o) for o in second.orbits}
    assert orbits == {(R(1), R(0), R(0)), (R(2, 3), R(2, 3), R(-1, 3))}
    assert len(second.vertices) == 6


def test_dual_polytope_float_matches_exact():
    exact = dual_polytope_exact([R(2, 3), R(1, 3), 0])
    floats = dual_polytope(PermPolytope.single([2 / 3, 1 / 3, 0.0]))
    expected = sorted(tuple(float(x) for x in v) for v in exact.vertices)
    found = sorted(tuple(v) for v in floats.vertices)
    assert np.allclose(found, expected, atol=1e-12)


@pytest.mark.parametrize("a", [0.1, 0.25, 0.4])
def test_dual_segment(a):
    seg = dual_segment(a)
    assert seg.b == pytest.approx(a / (2 * a - 1), abs=1e-12)
    assert seg.endpoints is not None
    for endpoint in seg.endpoints:
        assert sum(endpoint) == pytest.approx(1.0)


def test_dual_segment_special_cases():
    assert dual_segment(0.25).b == -0.5
    assert dual_segment(0.0).b == 0.0
    assert dual_segment(0.5).whole_line
    with pytest.raises(DomainError):
        dual_segment(0.75)


def test_trace_bounds_cube_example():
    lower, upper = trace_bounds(spectrum_of(0.5, 0.5, 0, 0), spectrum_of(0.5, 0.5, 0.5, -0.5))
    assert lower == pytest.approx(0.0)
    assert upper == pytest.approx(0.5)
    with pytest.raises(DomainError):
        trace_bounds(spectrum_of(1.5, -0.5), spectrum_of(1, 0))


def test_vertex_hull_membership():
    cube = dual_polytope(OCTAHEDRON).vertices
    hull = VertexHull(cube)
    assert hull.contains([0.25, 0.25, 0.25, 0.25])
    assert hull.contains([1.0, 0.0, 0.0, 0.0])
    assert not hull.contains([1.2, -0.2, 0.0, 0.0])
    assert not hull.contains([0.5, 0.5, 0.5, 0.5])
    assert vertex_hull_contains(cube, [0.5, 0.5, 0.5, -0.5])


def test_vertex_hull_interval_in_two_dimensions():
    hull = VertexHull([[1.5, -0.5], [-0.5, 1.5]])
    assert hull.contains([1.0, 0.0])
    assert not hull.contains([2.0, -1.0])


def test_batch_membership_agrees_with_scalar(rng):
    points = rng.uniform(-1.0, 1.5, size=(500, 4))
    points -= (points.sum(axis=1, keepdims=True) - 1.0) / 4
    batch = dual_contains_batch(OCTAHEDRON, points)
    single = [dual_contains(OCTAHEDRON, Spectrum(values=p)).contained for p in points]
    assert list(batch) == single
    hull = VertexHull(dual_polytope(OCTAHEDRON).vertices)
    assert list(hull.contains_batch(points)) == [hull.contains(p) for p in points]
    assert np.array_equal(batch, hull.contains_batch(points))
