"""
State spaces of the classical / quantum / extended hierarchy.

An order-m theory on N levels lives on H_N (x) H_{N^m}. Its states are the
density matrices majorized by sigma_0 = |0><0| (x) I / N^m, and its
measurement elements are the Hermitian operators below the identity whose
spectra lie in the dual of that permutohedron. m = 0 is standard quantum
theory, m = 1 the quartic theory.

All membership tests look at spectra only; the sets are unitarily invariant.
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, NonNegativeInt, PositiveInt, model_validator

from quartic.core.convex import (
    MAX_DUAL_DIM,
    DualMembershipCertificate,
    PermPolytope,
    dual_contains,
    dual_polytope,
    majorization_excess,
    perm_contains,
)
from quartic.core.errors import DimensionError, DomainError, MembershipViolation
from quartic.core.hermitian import (
    HermitianOperator,
    Seed,
    Spectrum,
    SubsystemShape,
    check_orthonormal_basis,
    eigenvalues,
    haar_unitary,
    hs_inner,
    is_unitary,
    maximally_mixed,
    partial_trace,
    projector,
    rng_from,
    spectrum,
    tensor_product,
    von_neumann_entropy,
)
from quartic.core.tolerances import EIG_TOL, UNITARY_TOL

logger = logging.getLogger(__name__)

# default cap on the number of unitary conjugates mixed by the samplers
DEFAULT_MAX_TERMS = 16


class TheoryOrder(BaseModel):
    """
    N distinguishable levels and m ancilla factors.

    Attributes:
        n: Number of distinguishable states N.
        m: Ancilla order; 0 is standard quantum theory, 1 the quartic theory.
    """

    model_config = ConfigDict(frozen=True)

    n: PositiveInt
    m: NonNegativeInt = 1

    @property
    def dim(self) -> int:
        """Total Hilbert-space dimension N^(m+1)."""
        return self.n ** (self.m + 1)

    @property
    def ancilla_dim(self) -> int:
        return self.n**self.m

    @property
    def parameter_count(self) -> int:
        """K = N^(2m+2) real parameters of a subnormalized state."""
        return self.n ** (2 * self.m + 2)

    @property
    def vertex_count(self) -> int:
        """Corners of the permutohedron: binom(N^(m+1), N^m)."""
        return math.comb(self.dim, self.ancilla_dim)

    @property
    def pure_manifold_dimension(self) -> int:
        """
        Real dimension of the orbit of extremal states.

        U(d) / (U(d - k) x U(k)) with d = N^(m+1), k = N^m, i.e. 2k(d - k).
        Gives 2(N - 1) for m = 0 and 2N^2(N - 1) for m = 1.
        """
        return 2 * self.ancilla_dim * (self.dim - self.ancilla_dim)

    @property
    def entropy_interval(self) -> Tuple[float, float]:
        """[m ln N, (m + 1) ln N]."""
        return self.m * math.log(self.n), (self.m + 1) * math.log(self.n)

    @property
    def shape(self) -> SubsystemShape:
        return SubsystemShape(dims=[self.n, self.ancilla_dim])

    def generator(self) -> Spectrum:
        """(N^-m repeated N^m times, then zeros), length N^(m+1)."""
        values = np.zeros(self.dim)
        values[: self.ancilla_dim] = 1.0 / self.ancilla_dim
        return Spectrum(values=values)

    def permutohedron(self) -> PermPolytope:
        return PermPolytope(generators=[self.generator()], ambient_dim=self.dim)

    def anchor(self) -> HermitianOperator:
        """sigma_0 = |0><0| (x) I / N^m."""
        return HermitianOperator(matrix=np.diag(self.generator().values).astype(complex))


class ExtendedState(BaseModel):
    """
    A state of the order-m theory.

    Construction validates positivity, trace and the permutohedron condition,
    so every instance in circulation is a member of M_N^(m).
    """

    model_config = ConfigDict(frozen=True)

    operator: HermitianOperator
    order: TheoryOrder
    normalized: bool = True

    @model_validator(mode="after")
    def check_membership(self) -> "ExtendedState":
        if self.operator.dim != self.order.dim:
            raise DimensionError(
                f"Operator dim {self.operator.dim} does not match order dim {self.order.dim}"
            )
        if not is_extended_state(self.operator, self.order, subnormalized=not self.normalized):
            raise DomainError("Operator is not an extended state of the given order")
        return self

    @property
    def matrix(self) -> np.ndarray:
        return self.operator.matrix


class XPovmElement(BaseModel):
    """An element of an extended POVM of the given order."""

    model_config = ConfigDict(frozen=True)

    operator: HermitianOperator
    order: TheoryOrder

    @model_validator(mode="after")
    def check_membership(self) -> "XPovmElement":
        if not is_xpovm_element(self.operator, self.order):
            raise DomainError("Operator is not an extended POVM element of the given order")
        return self


class MembershipVerdict(BaseModel):
    """Per-state report produced by validate_state."""

    model_config = ConfigDict(frozen=True)

    order: TheoryOrder
    is_quantum_state: bool
    is_extended_state: bool
    spectrum: Spectrum
    partial_sum_excess: float
    gauged_entropy: Optional[float] = None
    marginal: Optional[HermitianOperator] = None


# ==================================================================================================
# Membership predicates
# ==================================================================================================


def is_classical_state(p: ArrayLike, subnormalized: bool = False, tol: float = EIG_TOL) -> bool:
    """Probability vector in the simplex (sum <= 1 when subnormalized)."""
    probs = np.asarray(p, dtype=float)
    if np.min(probs) < -tol:
        return False
    total = float(probs.sum())
    if subnormalized:
        return total <= 1.0 + tol
    return abs(total - 1.0) <= tol


def is_quantum_state(
    a: HermitianOperator, subnormalized: bool = False, tol: float = EIG_TOL
) -> bool:
    """
    Density matrix test.

    Args:
        a: Candidate operator.
        subnormalized: Accept Tr(a) <= 1 instead of Tr(a) = 1.
        tol: Tolerance on eigenvalues and trace.

    Returns:
        True if a is positive semidefinite with the required trace.
    """
    vals = eigenvalues(a.matrix, a.herm_tol)
    if vals[-1] < -tol:
        return False
    total = float(vals.sum())
    if subnormalized:
        return total <= 1.0 + tol
    return abs(total - 1.0) <= tol


def is_povm_element(e: HermitianOperator, tol: float = EIG_TOL) -> bool:
    """0 <= E <= I."""
    vals = eigenvalues(e.matrix, e.herm_tol)
    return bool(vals[-1] >= -tol and vals[0] <= 1.0 + tol)


def _check_order_dim(a: HermitianOperator, order: TheoryOrder) -> None:
    if a.dim != order.dim:
        raise DimensionError(f"Operator dim {a.dim} does not match order dim {order.dim}")


def is_extended_state(
    a: HermitianOperator,
    order: TheoryOrder,
    subnormalized: bool = False,
    tol: float = EIG_TOL,
) -> bool:
    """
    Membership in M_N^(m): a density matrix whose spectrum lies in the permutohedron.

    Raises:
        DimensionError: If dim(a) != N^(m+1).
    """
    _check_order_dim(a, order)
    if not is_quantum_state(a, subnormalized, tol):
        return False
    if order.m == 0:
        # Perm(1, 0, ..., 0) is the whole simplex
        return True
    return perm_contains(order.permutohedron(), spectrum(a), subnormalized, tol)


def xpovm_certificate(
    e: HermitianOperator, order: TheoryOrder, tol: float = EIG_TOL
) -> DualMembershipCertificate:
    """
    Dual-set certificate for the spectrum of e.

    The spectrum is paired unnormalized, so tol bounds g_asc . lambda_desc
    itself and not its ratio to Tr(e).
    """
    _check_order_dim(e, order)
    return dual_contains(order.permutohedron(), spectrum(e), tol)


def is_xpovm_element(e: HermitianOperator, order: TheoryOrder, tol: float = EIG_TOL) -> bool:
    """
    Membership in E_N^(m).

    Every pairing of the spectrum with a permutation of the generator must be
    >= -tol and the largest eigenvalue must not exceed 1 + tol. At m = 0 the
    generator is a unit vector and this reduces to is_povm_element.

    Raises:
        DimensionError: If dim(e) != N^(m+1).
    """
    _check_order_dim(e, order)
    if spectrum(e).values[0] > 1.0 + tol:
        return False
    return xpovm_certificate(e, order, tol).contained


# ==================================================================================================
# Constructions
# ==================================================================================================


def extend_product(rho: HermitianOperator, order: TheoryOrder) -> ExtendedState:
    """
    rho -> rho (x) I / N^m, the embedding of quantum states.

    Raises:
        DomainError: If rho is not a density matrix of dimension N.
    """
    if rho.dim != order.n:
        raise DimensionError(f"State dim {rho.dim} does not match N = {order.n}")
    if not is_quantum_state(rho):
        raise DomainError("Input is not a valid quantum state")
    if order.m == 0:
        return ExtendedState(operator=rho, order=order)
    sigma = tensor_product(rho, maximally_mixed(order.ancilla_dim))
    return ExtendedState(operator=sigma, order=order)


def reduce_state(sigma: ExtendedState) -> HermitianOperator:
    """Partial trace over the ancilla factor(s): rho = Tr_A'(sigma)."""
    if sigma.order.m == 0:
        return sigma.operator
    return partial_trace(sigma.operator, sigma.order.shape, keep=[0])


def extended_pure(phi: ArrayLike, u: ArrayLike, order: TheoryOrder) -> ExtendedState:
    """
    Extremal state U (|phi><phi| (x) I / N^m) U^dagger.

    Args:
        phi: Unit vector of dimension N.
        u: Unitary of dimension N^(m+1).
        order: Theory order.

    Raises:
        DomainError: If phi is not normalized or u is not unitary.
    """
    vec = np.asarray(phi, dtype=complex).reshape(-1)
    if vec.size != order.n:
        raise DimensionError(f"Vector of length {vec.size}, expected {order.n}")
    if abs(np.linalg.norm(vec) - 1.0) > UNITARY_TOL:
        raise DomainError("phi must be a unit vector")
    umat = np.asarray(u, dtype=complex)
    if umat.shape != (order.dim, order.dim) or not is_unitary(umat):
        raise DomainError(f"u must be a unitary of dimension {order.dim}")
    base = tensor_product(projector(vec), maximally_mixed(order.ancilla_dim)).matrix
    rotated = umat @ base @ umat.conj().T
    return ExtendedState(
        operator=HermitianOperator(matrix=(rotated + rotated.conj().T) / 2), order=order
    )


def gauged_entropy(sigma: ExtendedState) -> float:
    """
    S_m = S(sigma) - m ln N; zero on extremal states, at most ln N.

    Raises:
        DomainError: For subnormalized states.
    """
    if not sigma.normalized:
        raise DomainError("Gauged entropy is defined for normalized states only")
    return von_neumann_entropy(sigma.operator) - sigma.order.m * math.log(sigma.order.n)


def distinguishable_family(basis: ArrayLike, order: TheoryOrder) -> List[ExtendedState]:
    """
    The N perfectly distinguishable states |i><i| (x) I / N^m.

    Args:
        basis: Orthonormal basis of H_N as matrix columns.
        order: Theory order.

    Raises:
        DomainError: If the basis is not orthonormal.
    """
    b = check_orthonormal_basis(basis)
    if b.shape[0] != order.n:
        raise DimensionError(f"Basis of dimension {b.shape[0]}, expected {order.n}")
    return [extend_product(projector(b[:, i]), order) for i in range(order.n)]


def xpovm_probability(sigma: ExtendedState, e: XPovmElement, tol: float = EIG_TOL) -> float:
    """
    p = Tr(sigma E), non-negative by duality.

    Raises:
        DimensionError: If the orders differ.
        MembershipViolation: If the pairing is below -tol.
    """
    if sigma.order != e.order:
        raise DimensionError("State and measurement element belong to different orders")
    value = hs_inner(sigma.operator, e.operator)
    if value < -tol:
        raise MembershipViolation(f"Negative outcome probability {value:.3e}")
    return float(min(max(value, 0.0), 1.0))


def validate_state(
    a: HermitianOperator, order: TheoryOrder, tol: float = EIG_TOL
) -> MembershipVerdict:
    """Full membership report for one operator."""
    _check_order_dim(a, order)
    spec = spectrum(a)
    excess = majorization_excess(spec, order.generator())
    quantum = is_quantum_state(a, tol=tol)
    extended = quantum and is_extended_state(a, order, tol=tol)
    entropy: Optional[float] = None
    marginal: Optional[HermitianOperator] = None
    if extended:
        state = ExtendedState(operator=a, order=order)
        entropy = gauged_entropy(state)
        marginal = reduce_state(state)
    return MembershipVerdict(
        order=order,
        is_quantum_state=quantum,
        is_extended_state=extended,
        spectrum=spec,
        partial_sum_excess=excess,
        gauged_entropy=entropy,
        marginal=marginal,
    )


# ==================================================================================================
# Samplers
# ==================================================================================================


def sample_extended_state(
    order: TheoryOrder, seed: Seed, terms: Optional[int] = None
) -> ExtendedState:
    """
    Random mixture sum_i w_i U_i sigma_0 U_i^dagger.

    Mixtures of unitary conjugates of sigma_0 are majorized by sigma_0, so the
    sample is always an extended state. Weights are Dirichlet(1, ..., 1).

    Args:
        order: Theory order.
        seed: Integer seed or Generator.
        terms: Number of conjugates; drawn uniformly from
            1..min(N^4, DEFAULT_MAX_TERMS) when omitted. terms = 1 gives an extremal state.
    """
    rng = rng_from(seed)
    cap = min(order.n**4, DEFAULT_MAX_TERMS)
    k = int(terms) if terms is not None else int(rng.integers(1, cap + 1))
    if k < 1:
        raise DomainError("Mixture needs at least one term")
    logger.debug("Mixing %d unitary conjugates at order (n=%d, m=%d)", k, order.n, order.m)
    weights = rng.dirichlet(np.ones(k))
    rank = order.ancilla_dim
    acc = np.zeros((order.dim, order.dim), dtype=complex)
    for w in weights:
        cols = haar_unitary(order.dim, rng)[:, :rank]
        acc += w * (cols @ cols.conj().T)
    acc /= rank
    acc = (acc + acc.conj().T) / 2
    return ExtendedState(operator=HermitianOperator(matrix=acc), order=order)


def _sample_dual_spectrum(order: TheoryOrder, rng: np.random.Generator) -> np.ndarray:
    """Unit-sum vector in the dual permutohedron."""
    if order.dim == 1:
        return np.ones(1)
    if order.dim <= MAX_DUAL_DIM:
        vertices = dual_polytope(order.permutohedron()).vertices
        return rng.dirichlet(np.ones(len(vertices))) @ vertices
    base = rng.dirichlet(np.ones(order.dim))
    direction = rng.standard_normal(order.dim)
    direction -= direction.mean()
    step = float(rng.uniform(0.0, 2.0))
    polytope = order.permutohedron()
    for _ in range(60):
        candidate = base + step * direction
        if dual_contains(polytope, Spectrum(values=candidate)).contained:
            return candidate
        step /= 2
    logger.debug("No dual step accepted for dim %d; falling back to a simplex point", order.dim)
    return base


def sample_xpovm_element(order: TheoryOrder, seed: Seed) -> XPovmElement:
    """
    Random extended POVM element U diag(s q) U^dagger.

    q is a unit-sum point of the dual permutohedron (possibly with negative
    entries) and s in (0, 1 / max q] keeps the element below the identity.
    """
    rng = rng_from(seed)
    q = _sample_dual_spectrum(order, rng)
    scale = float(rng.uniform(0.05, 1.0)) / float(np.max(q))
    u = haar_unitary(order.dim, rng)
    m = u @ np.diag(scale * q).astype(complex) @ u.conj().T
    return XPovmElement(operator=HermitianOperator(matrix=(m + m.conj().T) / 2), order=order)
