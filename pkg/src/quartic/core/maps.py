"""
Quantum operations in Kraus, superoperator and Choi form.

Conventions:
    vec is row-major, vec(rho)[m * N + mu] = rho[m, mu].
    The superoperator of a Kraus set is Phi = sum_i X_i (x) conj(X_i).
    The Choi (dynamical) matrix is D = reshuffle(Phi). Its first factor is
    the output system A and its second the input system B, so trace
    preservation reads Tr_A D = I and unitality Tr_B D = I.
"""

import logging
import math
from typing import Any, List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, PositiveInt, field_validator, model_validator
from scipy import linalg

from quartic.core.errors import (
    DimensionError,
    DomainError,
    EigenSolverError,
    ImpossibleOutcomeError,
)
from quartic.core.hermitian import (
    HermitianOperator,
    Seed,
    as_matrix,
    check_orthonormal_basis,
    eigenvalues,
    haar_unitary,
    hadamard,
    hs_inner,
    is_unitary,
    maximally_mixed,
    projector,
    ptrace,
    random_pure_state,
    readonly,
    reshuffle,
    rng_from,
)
from quartic.core.tolerances import EIG_TOL, KRAUS_CUTOFF, OUTCOME_TOL, UNITARY_TOL

logger = logging.getLogger(__name__)


class KrausSet(BaseModel):
    """
    Non-empty list of N x N Kraus operators with sum X_i^dagger X_i <= I.

    Attributes:
        operators: Read-only complex arrays of a common square shape.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    operators: List[np.ndarray]

    @field_validator("operators", mode="before")
    @classmethod
    def validate_operators(cls, v: Any) -> List[np.ndarray]:
        ops = [as_matrix(x) for x in v]
        if not ops:
            raise DimensionError("A Kraus set needs at least one operator")
        shape = ops[0].shape
        if shape[0] != shape[1]:
            raise DimensionError(f"Kraus operators must be square, got {shape}")
        for x in ops:
            if x.shape != shape:
                raise DimensionError(f"Kraus operators of mixed shapes {shape} and {x.shape}")
        return [readonly(x) for x in ops]

    @model_validator(mode="after")
    def check_bound(self) -> "KrausSet":
        largest = float(eigenvalues(self.completeness())[0])
        if largest > 1.0 + EIG_TOL:
            raise DomainError(
                f"Kraus operators violate sum X^dagger X <= I (largest eigenvalue {largest:.6g})"
            )
        return self

    @property
    def n(self) -> int:
        return int(self.operators[0].shape[0])

    @property
    def k(self) -> int:
        return len(self.operators)

    def completeness(self) -> np.ndarray:
        """sum_i X_i^dagger X_i."""
        total = sum(x.conj().T @ x for x in self.operators)
        return np.asarray((total + total.conj().T) / 2)


class MapClassification(BaseModel):
    """Independent flags of the map taxonomy."""

    model_config = ConfigDict(frozen=True)

    cp: bool
    trace_preserving: bool
    trace_nonincreasing: bool
    unital: bool
    bistochastic: bool


class QuantumMap(BaseModel):
    """
    A linear map on N x N matrices, held as superoperator and Choi matrix.

    Build instances through from_kraus, from_superop or from_choi; the
    validator enforces choi == reshuffle(superop) and Kraus consistency.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: PositiveInt
    superop: np.ndarray
    choi: HermitianOperator
    kraus: Optional[KrausSet] = None

    @field_validator("superop", mode="before")
    @classmethod
    def validate_superop(cls, v: Any) -> np.ndarray:
        return readonly(as_matrix(v))

    @model_validator(mode="after")
    def check_forms(self) -> "QuantumMap":
        side = self.n * self.n
        if self.superop.shape != (side, side):
            raise DimensionError(f"Superoperator of shape {self.superop.shape}, expected {side}")
        if not np.array_equal(self.choi.matrix, reshuffle(self.superop)):
            raise DomainError("Choi matrix is not the reshuffled superoperator")
        if self.kraus is not None:
            if self.kraus.n != self.n:
                raise DimensionError(f"Kraus operators of dim {self.kraus.n}, map dim {self.n}")
            if np.max(np.abs(kraus_superop(self.kraus.operators) - self.superop)) > 1e-10:
                raise DomainError("Kraus operators do not reproduce the superoperator")
        return self


class JamiolkowskiState(HermitianOperator):
    """
    The normalized Choi matrix D / N of a map.

    Keeps D itself so that map_from_state recovers the map bit for bit.
    """

    choi: np.ndarray

    @field_validator("choi", mode="before")
    @classmethod
    def validate_choi(cls, v: Any) -> np.ndarray:
        return readonly(as_matrix(v))

    @model_validator(mode="after")
    def check_shape(self) -> "JamiolkowskiState":
        if self.choi.shape != self.matrix.shape:
            raise DimensionError(
                f"Choi matrix of shape {self.choi.shape}, state {self.matrix.shape}"
            )
        return self


# ==================================================================================================
# Constructors
# ==================================================================================================


def kraus_superop(operators: List[np.ndarray]) -> np.ndarray:
    """sum_i X_i (x) conj(X_i)."""
    return np.asarray(sum(np.kron(x, x.conj()) for x in operators))


def from_kraus(k: KrausSet) -> QuantumMap:
    """Superoperator by the Kraus sum; the Choi matrix is then PSD."""
    superop = kraus_superop(k.operators)
    choi = HermitianOperator(matrix=reshuffle(superop))
    return QuantumMap(n=k.n, superop=superop, choi=choi, kraus=k)


def _side(matrix: np.ndarray) -> int:
    rows = matrix.shape[0]
    n = math.isqrt(rows)
    if matrix.shape != (rows, rows) or n * n != rows:
        raise DimensionError(f"Expected an N^2 x N^2 matrix, got {matrix.shape}")
    return n


def from_superop(superop: ArrayLike) -> QuantumMap:
    """
    Wrap a superoperator.

    Raises:
        HermiticityError: If the map does not preserve Hermiticity.
    """
    s = as_matrix(superop)
    n = _side(s)
    return QuantumMap(n=n, superop=s, choi=HermitianOperator(matrix=reshuffle(s)))


def from_choi(choi: ArrayLike) -> QuantumMap:
    """Map with the given dynamical matrix; superop = reshuffle(choi)."""
    d = as_matrix(choi)
    n = _side(d)
    superop = reshuffle(d)
    # reshuffle is an involution, so the stored Choi matrix equals d bit for bit
    return QuantumMap(n=n, superop=superop, choi=HermitianOperator(matrix=reshuffle(superop)))


def identity_channel(n: int) -> QuantumMap:
    return from_kraus(KrausSet(operators=[np.eye(n, dtype=complex)]))


def unitary_channel(u: ArrayLike) -> QuantumMap:
    """rho -> U rho U^dagger."""
    umat = as_matrix(u)
    if not is_unitary(umat, UNITARY_TOL):
        raise DomainError("Unitary channel requires a unitary matrix")
    return from_kraus(KrausSet(operators=[umat]))


def dephasing_channel(n: int, basis: Optional[ArrayLike] = None) -> QuantumMap:
    """
    Complete dephasing sum_i |h_i><h_i| . |h_i><h_i| in a given basis.

    Args:
        n: Dimension.
        basis: Orthonormal basis as columns; the computational basis by default.
    """
    b = np.eye(n, dtype=complex) if basis is None else check_orthonormal_basis(basis)
    if b.shape[0] != n:
        raise DimensionError(f"Basis of dimension {b.shape[0]}, expected {n}")
    return from_kraus(KrausSet(operators=[np.outer(b[:, i], b[:, i].conj()) for i in range(n)]))


def contraction_map(rho: HermitianOperator) -> QuantumMap:
    """
    Complete one-step contraction omega -> rho Tr(omega), Choi matrix rho (x) I.

    Raises:
        DomainError: If rho is not a density matrix.
    """
    vals = eigenvalues(rho.matrix, rho.herm_tol)
    if vals[-1] < -EIG_TOL or abs(vals.sum() - 1.0) > EIG_TOL:
        raise DomainError("Contraction target is not a valid quantum state")
    return from_choi(np.kron(rho.matrix, np.eye(rho.dim)))


def map_from_state(sigma: HermitianOperator) -> QuantumMap:
    """
    The map whose Jamiolkowski state is sigma: choi = N sigma.

    Bit-exact inverse of jamiolkowski_state, whose output carries D.
    """
    if isinstance(sigma, JamiolkowskiState):
        return from_choi(sigma.choi)
    n = _side(sigma.matrix)
    return from_choi(n * sigma.matrix)


# ==================================================================================================
# Action and composition
# ==================================================================================================


def _check_map_dim(m: QuantumMap, rho: HermitianOperator) -> None:
    if rho.dim != m.n:
        raise DimensionError(f"Operator dim {rho.dim} does not match map dim {m.n}")


def kraus_apply(k: KrausSet, rho: HermitianOperator) -> HermitianOperator:
    """
    sum_i X_i rho X_i^dagger.

    Raises:
        DimensionError: If dims differ.
    """
    if rho.dim != k.n:
        raise DimensionError(f"Operator dim {rho.dim} does not match Kraus dim {k.n}")
    out = sum(x @ rho.matrix @ x.conj().T for x in k.operators)
    out = np.asarray(out)
    return HermitianOperator(matrix=(out + out.conj().T) / 2)


def measurement_update(
    k: KrausSet, i: int, rho: HermitianOperator
) -> Tuple[float, HermitianOperator]:
    """
    Outcome probability and post-measurement state for Kraus operator i.

    Returns:
        (p_i, X_i rho X_i^dagger / p_i).

    Raises:
        DimensionError: If i is out of range or dims differ.
        ImpossibleOutcomeError: If p_i < 1e-12.
    """
    if not 0 <= i < k.k:
        raise DimensionError(f"Outcome index {i} out of range for {k.k} Kraus operators")
    if rho.dim != k.n:
        raise DimensionError(f"Operator dim {rho.dim} does not match Kraus dim {k.n}")
    x = k.operators[i]
    effect = x.conj().T @ x
    prob = hs_inner(rho, HermitianOperator(matrix=(effect + effect.conj().T) / 2))
    if prob < OUTCOME_TOL:
        raise ImpossibleOutcomeError(f"Outcome {i} has probability {prob:.3e}")
    post = x @ rho.matrix @ x.conj().T / prob
    return prob, HermitianOperator(matrix=(post + post.conj().T) / 2)


def apply_map(m: QuantumMap, rho: HermitianOperator) -> HermitianOperator:
    """Superoperator action on the row-major vectorization of rho."""
    _check_map_dim(m, rho)
    out = (m.superop @ rho.matrix.reshape(-1)).reshape(m.n, m.n)
    return HermitianOperator(matrix=(out + out.conj().T) / 2)


def compose_maps(a: QuantumMap, b: QuantumMap) -> QuantumMap:
    """a o b, i.e. apply b first."""
    if a.n != b.n:
        raise DimensionError(f"Cannot compose maps of dims {a.n} and {b.n}")
    return from_superop(a.superop @ b.superop)


def to_kraus(m: QuantumMap, cutoff: float = KRAUS_CUTOFF) -> List[np.ndarray]:
    """
    Canonical Kraus operators from the eigendecomposition of the Choi matrix.

    At most N^2 operators, mutually orthogonal in the Hilbert-Schmidt sense.

    Raises:
        DomainError: If the map is not completely positive.
    """
    try:
        vals, vecs = linalg.eigh(m.choi.symmetrized())
    except (np.linalg.LinAlgError, linalg.LinAlgError) as e:
        raise EigenSolverError(f"Eigen-solver failed on Choi matrix: {e}") from e
    if vals[0] < -EIG_TOL:
        raise DomainError(f"Map is not completely positive (Choi eigenvalue {vals[0]:.3e})")
    ops = [
        math.sqrt(val) * vecs[:, j].reshape(m.n, m.n)
        for j, val in enumerate(vals)
        if val > cutoff
    ]
    logger.debug("Extracted %d canonical Kraus operators (N=%d)", len(ops), m.n)
    return ops


# ==================================================================================================
# Classification and the Jamiolkowski dictionary
# ==================================================================================================


def classify(m: QuantumMap, tol: float = EIG_TOL) -> MapClassification:
    """
    CP via the Choi spectrum, trace preservation via Tr_A D, unitality via Tr_B D.

    Args:
        m: The map.
        tol: Tolerance for every flag.
    """
    eye = np.eye(m.n)
    cp = bool(eigenvalues(m.choi.matrix, m.choi.herm_tol)[-1] >= -tol)
    out_marginal = ptrace(m.choi.matrix, [m.n, m.n], keep=[1])
    in_marginal = ptrace(m.choi.matrix, [m.n, m.n], keep=[0])
    tp = bool(np.max(np.abs(out_marginal - eye)) <= tol)
    tni = bool(eigenvalues((out_marginal + out_marginal.conj().T) / 2)[0] <= 1.0 + tol)
    unital = bool(np.max(np.abs(in_marginal - eye)) <= tol)
    return MapClassification(
        cp=cp,
        trace_preserving=tp,
        trace_nonincreasing=tni,
        unital=unital,
        bistochastic=cp and tp and unital,
    )


def jamiolkowski_state(m: QuantumMap) -> JamiolkowskiState:
    """sigma = D / N."""
    d = m.choi.matrix
    return JamiolkowskiState(matrix=d / m.n, herm_tol=m.choi.herm_tol, choi=d)


def map_effect(m: QuantumMap) -> HermitianOperator:
    """Phi(I / N), the image of the maximally mixed state."""
    return apply_map(m, maximally_mixed(m.n))


def map_effect_from_state(m: QuantumMap) -> HermitianOperator:
    """Tr_B of the Jamiolkowski state; agrees with map_effect."""
    sigma = jamiolkowski_state(m)
    return HermitianOperator(matrix=ptrace(sigma.matrix, [m.n, m.n], keep=[0]))


# ==================================================================================================
# Classical reduction and decoherence
# ==================================================================================================


def coarse_grain(rho: HermitianOperator, basis: Optional[ArrayLike] = None) -> np.ndarray:
    """
    p_i = <h_i| rho |h_i>, the diagonal after complete decoherence.

    Raises:
        DomainError: If the basis is not orthonormal within 1e-10.
    """
    b = np.eye(rho.dim, dtype=complex) if basis is None else check_orthonormal_basis(basis)
    if b.shape[0] != rho.dim:
        raise DimensionError(f"Basis of dimension {b.shape[0]}, operator dim {rho.dim}")
    return np.einsum("ji,jk,ki->i", b.conj(), rho.matrix, b).real


def classical_reduction(m: QuantumMap) -> np.ndarray:
    """
    Transition matrix T[m, n] = D[(m n), (m n)].

    Column-stochastic for trace-preserving CP maps, doubly stochastic for
    bistochastic ones.
    """
    return np.diag(m.choi.matrix).real.reshape(m.n, m.n).copy()


class ClassicalPaths(BaseModel):
    """Both routes around the decoherence diagram."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    p_prime: np.ndarray
    p_doubleprime: np.ndarray
    gap: float


def classical_paths(psi: QuantumMap, rho: HermitianOperator) -> ClassicalPaths:
    """
    Decohere-after-evolve against evolve-after-decohere.

    p' = diag(Psi(rho)), p'' = T(Psi) diag(rho), gap = ||p' - p''||_1.
    """
    p_prime = coarse_grain(apply_map(psi, rho))
    p_doubleprime = classical_reduction(psi) @ coarse_grain(rho)
    gap = float(np.sum(np.abs(p_prime - p_doubleprime)))
    return ClassicalPaths(
        p_prime=readonly(p_prime), p_doubleprime=readonly(p_doubleprime), gap=gap
    )


# ==================================================================================================
# Samplers
# ==================================================================================================


def random_cptp_map(n: int, seed: Seed) -> QuantumMap:
    """
    Stinespring sampler: Haar U on H_N (x) H_E (dim E = N), rho (x) |0><0|, trace out E.

    X_k[i, j] = U[(i k), (j 0)], which is trace preserving by unitarity.
    """
    u = haar_unitary(n * n, rng_from(seed)).reshape(n, n, n, n)
    return from_kraus(KrausSet(operators=[u[:, k, :, 0] for k in range(n)]))


def random_bistochastic_map(n: int, seed: Seed, terms: Optional[int] = None) -> QuantumMap:
    """
    Mixture of Haar unitary channels, Kraus operators sqrt(w_i) U_i.

    Args:
        n: Dimension.
        seed: Integer seed or Generator.
        terms: Number of unitaries; drawn from 1..N^2 when omitted.
    """
    rng = rng_from(seed)
    k = int(terms) if terms is not None else int(rng.integers(1, n * n + 1))
    if k < 1:
        raise DomainError("Mixture needs at least one unitary")
    weights = rng.dirichlet(np.ones(k))
    ops = [math.sqrt(w) * haar_unitary(n, rng) for w in weights]
    return from_kraus(KrausSet(operators=ops))


class ClassicalWitness(BaseModel):
    """A (Psi, rho) pair for which the decoherence diagram fails to commute."""

    model_config = ConfigDict(frozen=True)

    psi: QuantumMap
    rho: HermitianOperator
    paths: ClassicalPaths
    trial: int

    @property
    def gap(self) -> float:
        return self.paths.gap


def hadamard_witness() -> ClassicalWitness:
    """Hadamard channel on |+><+|: p' = (1, 0), p'' = (1/2, 1/2), gap exactly 1."""
    psi = unitary_channel(hadamard())
    rho = projector(np.array([1.0, 1.0]))
    return ClassicalWitness(psi=psi, rho=rho, paths=classical_paths(psi, rho), trial=0)


def find_classical_witness(n: int, seed: int, trials: int) -> ClassicalWitness:
    """
    Largest classical diagram gap over random CPTP maps and pure states.

    For N = 2 the search starts from the Hadamard witness, so the result
    never has a smaller gap than 1. Trial i uses seed + i.
    """
    if trials < 1:
        raise DomainError("Witness search needs at least one trial")
    best = hadamard_witness() if n == 2 else None
    for i in range(trials):
        rng = rng_from(seed + i)
        psi = random_cptp_map(n, rng)
        rho = random_pure_state(n, rng)
        paths = classical_paths(psi, rho)
        if best is None or paths.gap > best.gap:
            best = ClassicalWitness(psi=psi, rho=rho, paths=paths, trial=i)
    assert best is not None
    logger.debug("Classical witness search: best gap %.6f at trial %d", best.gap, best.trial)
    return best
