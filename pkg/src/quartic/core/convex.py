"""
Majorization, permutation polytopes and their duals in the trace-one hyperplane.

Membership in Perm(v) is decided by Rado's theorem (x in Perm(v) iff x is
majorized by v), and membership in the dual set by the sorted pairing
min_pi g . pi(q) = g_asc . q_desc, so neither test enumerates vertices.
Explicit vertex enumeration of dual polytopes is offered for ambient
dimension <= 4, in floating point and in exact rational arithmetic.
"""

import itertools
import logging
import math
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, PositiveInt, model_validator
from scipy.spatial import ConvexHull
from sympy.utilities.iterables import multiset_permutations

from quartic.core.errors import CombinatorialGuardError, DimensionError, DomainError
from quartic.core.hermitian import Spectrum, readonly
from quartic.core.tolerances import EIG_TOL, VERTEX_DEDUP_TOL

logger = logging.getLogger(__name__)

MAX_VERTEX_DIM = 12
MAX_DUAL_DIM = 4
MAX_BRUTE_FORCE_DIM = 8

RationalLike = Union[int, str, float, sympy.Rational]


class PermPolytope(BaseModel):
    """
    Convex hull of all coordinate permutations of one or more generators.

    A single generator v gives Perm(v). Several generators describe unions of
    orbits, e.g. the cube conv(Perm(1,0,0,0) u Perm(1/2,1/2,1/2,-1/2)).
    """

    model_config = ConfigDict(frozen=True)

    generators: List[Spectrum]
    ambient_dim: PositiveInt

    @model_validator(mode="after")
    def check_lengths(self) -> "PermPolytope":
        if not self.generators:
            raise DimensionError("A permutation polytope needs at least one generator")
        for g in self.generators:
            if len(g) != self.ambient_dim:
                raise DimensionError(
                    f"Generator of length {len(g)} in ambient dimension {self.ambient_dim}"
                )
        return self

    @classmethod
    def single(cls, generator: ArrayLike) -> "PermPolytope":
        spec = Spectrum(values=generator)
        return cls(generators=[spec], ambient_dim=len(spec))

    @property
    def generator(self) -> Spectrum:
        """The generator of a single-orbit polytope."""
        if len(self.generators) != 1:
            raise DimensionError("Operation requires a single-generator polytope")
        return self.generators[0]


class DualMembershipCertificate(BaseModel):
    """Witness record for a dual-set membership test."""

    model_config = ConfigDict(frozen=True)

    contained: bool
    worst_generator: Spectrum
    worst_value: float


class DualPolytope(BaseModel):
    """
    Vertex description of the dual of a single-orbit permutohedron.

    Attributes:
        polytope: Vertex orbits as a multi-generator PermPolytope; None when
            the dual is the whole hyperplane.
        vertices: Vertex coordinates, one per row (empty for the whole hyperplane).
        facet_count: Number of distinct facet normals (permutations of v).
        whole_hyperplane: True for a uniform generator.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    polytope: Optional[PermPolytope]
    vertices: np.ndarray
    facet_count: int
    whole_hyperplane: bool = False


class ExactDualPolytope(BaseModel):
    """Rational-arithmetic counterpart of DualPolytope."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    orbits: List[Tuple[Any, ...]]
    vertices: List[Tuple[Any, ...]]
    facet_count: int
    whole_hyperplane: bool = False


class DualSegment(BaseModel):
    """Dual of the symmetric segment V_a = [a, 1 - a] in the N = 2 hyperplane."""

    model_config = ConfigDict(frozen=True)

    a: float
    b: Optional[float]
    endpoints: Optional[Tuple[Tuple[float, float], Tuple[float, float]]]
    whole_line: bool = False


def _check_lengths(x: Spectrum, y: Spectrum) -> None:
    if len(x) != len(y):
        raise DimensionError(f"Length mismatch: {len(x)} vs {len(y)}")


# ==================================================================================================
# Majorization
# ==================================================================================================


def majorized_by(x: Spectrum, y: Spectrum, tol: float = EIG_TOL) -> bool:
    """
    x is majorized by y.

    All partial sums of x are bounded by those of y and the totals agree,
    both within tol.

    Raises:
        DimensionError: If the lengths differ.
    """
    _check_lengths(x, y)
    cx = np.cumsum(x.values)
    cy = np.cumsum(y.values)
    if abs(cx[-1] - cy[-1]) > tol:
        return False
    return bool(np.all(cx[:-1] <= cy[:-1] + tol))


def majorization_excess(x: Spectrum, y: Spectrum) -> float:
    """
    Largest amount by which x fails to be majorized by y.

    The maximum of the partial-sum excesses and the total-sum mismatch;
    x is majorized by y within tol iff the result is <= tol.
    """
    _check_lengths(x, y)
    cx = np.cumsum(x.values)
    cy = np.cumsum(y.values)
    partial = float(np.max(cx[:-1] - cy[:-1])) if len(x) > 1 else -math.inf
    return max(partial, abs(float(cx[-1] - cy[-1])))


def weakly_submajorized_by(x: Spectrum, y: Spectrum, tol: float = EIG_TOL) -> bool:
    """Partial sums of x bounded by those of y, total included, no equality required."""
    _check_lengths(x, y)
    return bool(np.all(np.cumsum(x.values) <= np.cumsum(y.values) + tol))


def perm_contains(
    p: PermPolytope, x: Spectrum, subnormalized: bool = False, tol: float = EIG_TOL
) -> bool:
    """
    Membership of x in Perm(v), or in conv(Perm(v) u {0}) when subnormalized.

    Args:
        p: Single-generator polytope Perm(v).
        x: Candidate point (its order is irrelevant).
        subnormalized: Use the weak order instead of majorization.
        tol: Partial-sum tolerance.

    Returns:
        True if x lies in the polytope.
    """
    v = p.generator
    if subnormalized:
        return weakly_submajorized_by(x, v, tol)
    return majorized_by(x, v, tol)


def multinomial_count(values: Sequence[Any]) -> int:
    """Number of distinct arrangements of a multiset."""
    counts: dict = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    total = math.factorial(len(values))
    for c in counts.values():
        total //= math.factorial(c)
    return total


def perm_vertices(p: PermPolytope) -> np.ndarray:
    """
    All distinct coordinate permutations of the generator, one per row.

    Entries are compared exactly, so repeated values collapse and the row
    count equals the multinomial coefficient.

    Raises:
        CombinatorialGuardError: If the ambient dimension exceeds 12.
    """
    if p.ambient_dim > MAX_VERTEX_DIM:
        raise CombinatorialGuardError(
            f"Vertex enumeration limited to ambient dimension {MAX_VERTEX_DIM}, got {p.ambient_dim}"
        )
    values = [float(x) for x in p.generator.values]
    rows = list(multiset_permutations(values))
    return np.array(rows, dtype=float)


# ==================================================================================================
# Dual sets
# ==================================================================================================


def dual_contains(
    v: PermPolytope, q: Spectrum, tol: float = EIG_TOL
) -> DualMembershipCertificate:
    """
    Test q against the dual set of v.

    For every generator g the minimum of g . pi(q) over permutations pi is
    g_asc . q_desc; q is in the dual iff every such minimum is >= -tol.

    Returns:
        Certificate naming the minimizing generator and the minimal pairing.
    """
    worst_value = math.inf
    worst_generator = v.generators[0]
    for g in v.generators:
        _check_lengths(g, q)
        value = float(np.dot(g.ascending, q.values))
        if value < worst_value:
            worst_value = value
            worst_generator = g
    return DualMembershipCertificate(
        contained=worst_value >= -tol,
        worst_generator=worst_generator,
        worst_value=worst_value,
    )


def permutation_min_pairing(generator: ArrayLike, q: ArrayLike) -> float:
    """
    Brute-force min over all permutations pi of g . pi(q).

    Oracle for dual_contains; limited to ambient dimension 8.
    """
    g = np.asarray(generator, dtype=float)
    qv = np.asarray(q, dtype=float)
    if g.size != qv.size:
        raise DimensionError(f"Length mismatch: {g.size} vs {qv.size}")
    if g.size > MAX_BRUTE_FORCE_DIM:
        raise CombinatorialGuardError(
            f"Brute-force pairing limited to dimension {MAX_BRUTE_FORCE_DIM}"
        )
    perms = np.array(list(itertools.permutations(qv)), dtype=float)
    return float(np.min(perms @ g))


def _is_uniform(values: Sequence[Any]) -> bool:
    return all(v == values[0] for v in values)


def _group_orbits(vertices: np.ndarray, tol: float) -> List[np.ndarray]:
    orbits: List[np.ndarray] = []
    for vertex in vertices:
        key = np.sort(vertex)[::-1]
        if not any(np.max(np.abs(key - o)) <= tol for o in orbits):
            orbits.append(key)
    return orbits


def dual_polytope(v: PermPolytope, tol: float = EIG_TOL) -> DualPolytope:
    """
    Vertices of {q : sum q = 1, g . pi(q) >= 0 for all pi}.

    Every choice of (n - 1) facet hyperplanes g_pi . q = 0 together with the
    normalization plane is solved; feasible, non-degenerate intersection points
    are deduplicated within 1e-10 and grouped into permutation orbits.

    Args:
        v: Single-generator permutohedron Perm(g), ambient dimension <= 4.
        tol: Feasibility tolerance for the remaining facet inequalities.

    Returns:
        DualPolytope; a uniform generator yields whole_hyperplane=True.

    Raises:
        CombinatorialGuardError: If the ambient dimension exceeds 4.
    """
    n = v.ambient_dim
    if n > MAX_DUAL_DIM:
        raise CombinatorialGuardError(
            f"Dual vertex enumeration limited to ambient dimension {MAX_DUAL_DIM}; "
            "use dual_contains for membership"
        )
    facets = perm_vertices(v)
    if _is_uniform(v.generator.tolist()):
        logger.debug("Uniform generator: dual is the whole hyperplane")
        return DualPolytope(
            polytope=None,
            vertices=np.zeros((0, n)),
            facet_count=len(facets),
            whole_hyperplane=True,
        )

    rhs = np.zeros(n)
    rhs[-1] = 1.0
    found: List[np.ndarray] = []
    for combo in itertools.combinations(range(len(facets)), n - 1):
        system = np.vstack([facets[list(combo)], np.ones((1, n))])
        if np.linalg.matrix_rank(system) < n:
            continue
        point = np.linalg.solve(system, rhs)
        if np.min(facets @ point) < -tol:
            continue
        if any(np.max(np.abs(point - f)) <= VERTEX_DEDUP_TOL for f in found):
            continue
        found.append(point)

    vertices = np.array(found)
    orbits = _group_orbits(vertices, VERTEX_DEDUP_TOL)
    logger.debug(
        "Dual of %s: %d vertices in %d orbits", v.generator.tolist(), len(found), len(orbits)
    )
    return DualPolytope(
        polytope=PermPolytope(
            generators=[Spectrum(values=o) for o in orbits], ambient_dim=n
        ),
        vertices=readonly(vertices),
        facet_count=len(facets),
    )


def to_rational(value: RationalLike) -> sympy.Rational:
    """Exact rational from an int, a string such as '2/3', or a float via nsimplify."""
    if isinstance(value, float):
        return sympy.Rational(sympy.nsimplify(value, rational=True))
    return sympy.Rational(value)


def dual_polytope_exact(generator: Sequence[RationalLike]) -> ExactDualPolytope:
    """
    dual_polytope in exact rational arithmetic.

    Removes any tolerance ambiguity at polytope boundaries for small examples.

    Args:
        generator: Generator entries as ints, rational strings, Rationals or floats.

    Returns:
        ExactDualPolytope with rational vertex tuples and orbit representatives
        (each orbit sorted descending).
    """
    g = [to_rational(x) for x in generator]
    n = len(g)
    if n > MAX_DUAL_DIM:
        raise CombinatorialGuardError(
            f"Exact dual enumeration limited to ambient dimension {MAX_DUAL_DIM}"
        )
    facets = [tuple(f) for f in multiset_permutations(g)]
    if _is_uniform(g):
        return ExactDualPolytope(
            orbits=[], vertices=[], facet_count=len(facets), whole_hyperplane=True
        )

    rhs = sympy.Matrix([0] * (n - 1) + [1])
    vertices: List[Tuple[Any, ...]] = []
    for combo in itertools.combinations(facets, n - 1):
        system = sympy.Matrix([list(f) for f in combo] + [[1] * n])
        if system.det() == 0:
            continue
        point = tuple(system.LUsolve(rhs))
        if any(sum(fi * qi for fi, qi in zip(f, point)) < 0 for f in facets):
            continue
        if point not in vertices:
            vertices.append(point)

    orbits: List[Tuple[Any, ...]] = []
    for vertex in vertices:
        key = tuple(sorted(vertex, reverse=True))
        if key not in orbits:
            orbits.append(key)
    return ExactDualPolytope(orbits=orbits, vertices=vertices, facet_count=len(facets))


def dual_segment(a: float) -> DualSegment:
    """
    Dual of V_a = [a, 1 - a]: the segment [b, 1 - b] with b = a / (2a - 1).

    Args:
        a: Segment parameter in [0, 1/2].

    Returns:
        DualSegment with both endpoints; at a = 1/2 the dual is the whole line
        and whole_line is set instead.

    Raises:
        DomainError: If a lies outside [0, 1/2].
    """
    if not 0.0 <= a <= 0.5:
        raise DomainError(f"Segment parameter must lie in [0, 1/2], got {a}")
    if a == 0.5:
        return DualSegment(a=a, b=None, endpoints=None, whole_line=True)
    b = a / (2 * a - 1)
    return DualSegment(a=a, b=b, endpoints=((b, 1 - b), (1 - b, b)))


def trace_bounds(p: Spectrum, q: Spectrum, tol: float = EIG_TOL) -> Tuple[float, float]:
    """
    Bounds p_asc . q_desc <= Tr(rho sigma) <= p_asc . q_asc.

    Args:
        p: Spectrum of a state (non-negative).
        q: Spectrum of an arbitrary Hermitian operator.

    Returns:
        (lower, upper); both are attained by aligned eigenbases.

    Raises:
        DimensionError: If the lengths differ.
        DomainError: If p has an entry below -tol.
    """
    _check_lengths(p, q)
    if float(np.min(p.values)) < -tol:
        raise DomainError("State spectrum has a negative entry")
    lower = float(np.dot(p.ascending, q.values))
    upper = float(np.dot(p.ascending, q.ascending))
    return lower, upper


class VertexHull:
    """
    Convex hull of unit-sum vertices, built once and queried many times.

    The hyperplane sum = 1 is parametrized by the first n - 1 coordinates and
    membership is read off the hull's facet equations there.
    """

    def __init__(self, vertices: ArrayLike):
        verts = np.asarray(vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[0] < 2:
            raise DimensionError("Need at least two vertices to build a hull")
        self.ambient_dim = int(verts.shape[1])
        projected = verts[:, :-1]
        if projected.shape[1] == 1:
            self._interval: Optional[Tuple[float, float]] = (
                float(projected.min()),
                float(projected.max()),
            )
            self._equations: Optional[np.ndarray] = None
        else:
            self._interval = None
            self._equations = ConvexHull(projected).equations

    def contains(self, q: ArrayLike, tol: float = EIG_TOL) -> bool:
        point = np.asarray(q, dtype=float).reshape(-1)
        if point.size != self.ambient_dim:
            raise DimensionError(f"Point of length {point.size} in dimension {self.ambient_dim}")
        if abs(point.sum() - 1.0) > tol:
            return False
        x = point[:-1]
        if self._equations is None:
            low, high = self._interval  # type: ignore[misc]
            return bool(low - tol <= x[0] <= high + tol)
        return bool(np.all(self._equations[:, :-1] @ x + self._equations[:, -1] <= tol))

    def contains_batch(self, points: ArrayLike, tol: float = EIG_TOL) -> np.ndarray:
        """Row-wise contains for an array of shape (count, ambient_dim)."""
        q = np.asarray(points, dtype=float)
        if q.ndim != 2 or q.shape[1] != self.ambient_dim:
            raise DimensionError(f"Expected points of shape (k, {self.ambient_dim}), got {q.shape}")
        on_plane = np.abs(q.sum(axis=1) - 1.0) <= tol
        x = q[:, :-1]
        if self._equations is None:
            low, high = self._interval  # type: ignore[misc]
            inside = (x[:, 0] >= low - tol) & (x[:, 0] <= high + tol)
        else:
            offsets = x @ self._equations[:, :-1].T + self._equations[:, -1]
            inside = np.all(offsets <= tol, axis=1)
        return np.asarray(on_plane & inside)


def vertex_hull_contains(vertices: ArrayLike, q: ArrayLike, tol: float = EIG_TOL) -> bool:
    """One-shot VertexHull membership."""
    return VertexHull(vertices).contains(q, tol)


def dual_contains_batch(v: PermPolytope, points: ArrayLike, tol: float = EIG_TOL) -> np.ndarray:
    """
    Row-wise dual_contains for a stack of points.

    Args:
        v: Permutation polytope (one or more generators).
        points: Array of shape (count, ambient_dim).
        tol: Pairing tolerance.

    Returns:
        Boolean array of length count.
    """
    q = np.asarray(points, dtype=float)
    if q.ndim != 2 or q.shape[1] != v.ambient_dim:
        raise DimensionError(f"Expected points of shape (k, {v.ambient_dim}), got {q.shape}")
    q_desc = -np.sort(-q, axis=1)
    pairings = np.stack([q_desc @ g.ascending for g in v.generators], axis=1)
    return np.asarray(pairings.min(axis=1) >= -tol)
