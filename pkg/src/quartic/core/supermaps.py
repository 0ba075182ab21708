"""
Supermaps: linear maps of size N^4 acting on extended states.

A supermap Gamma acts on the row-major vectorization of an N^2 x N^2 state
sigma on H_A (x) H_A'. Its Choi matrix G = reshuffle(Gamma) (block size N^2)
carries the factors (A, A', B, B'), output pair first, input pair second.
"""

import logging
import math
from typing import Any, List, Optional, Union

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, PositiveInt, field_validator, model_validator

from quartic.core.convex import majorization_excess
from quartic.core.errors import DimensionError, DomainError, HermiticityError
from quartic.core.hermitian import (
    HermitianOperator,
    Seed,
    Spectrum,
    as_matrix,
    eigenvalues,
    haar_unitary,
    is_unitary,
    maximally_mixed,
    projector,
    ptrace,
    readonly,
    reshuffle,
    rng_from,
    spectrum,
    swap_operator,
    trace_norm,
)
from quartic.core.maps import (
    MapClassification,
    QuantumMap,
    apply_map,
    from_choi,
    kraus_superop,
)
from quartic.core.states import (
    ExtendedState,
    TheoryOrder,
    is_extended_state,
    reduce_state,
    sample_extended_state,
)
from quartic.core.tolerances import EIG_TOL, UNITARY_TOL

logger = logging.getLogger(__name__)

StateLike = Union[ExtendedState, HermitianOperator]


class SuperMap(BaseModel):
    """
    Gamma as an N^4 x N^4 matrix together with its Choi matrix G.

    Attributes:
        n: Dimension N of the principal system.
        matrix: Gamma acting on vec(sigma).
        choi_g: G = reshuffle(Gamma), Hermitian within tolerance.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: PositiveInt
    matrix: np.ndarray
    choi_g: HermitianOperator

    @field_validator("matrix", mode="before")
    @classmethod
    def validate_matrix(cls, v: Any) -> np.ndarray:
        return readonly(as_matrix(v))

    @model_validator(mode="after")
    def check_forms(self) -> "SuperMap":
        side = self.n**4
        if self.matrix.shape != (side, side):
            raise DimensionError(f"Supermap of shape {self.matrix.shape}, expected {side}")
        if not np.array_equal(self.choi_g.matrix, reshuffle(self.matrix)):
            raise DomainError("Choi matrix G is not the reshuffled supermap")
        return self


class AdmissibilityReport(BaseModel):
    """
    Sampled evidence on whether a supermap keeps extended states extended.

    preserves_sampled is evidence rather than proof: no finite sample decides
    complete preservation. reduced_cp is the necessary condition that the
    reduced dynamical matrix be positive.
    """

    model_config = ConfigDict(frozen=True)

    preserves_sampled: bool
    reduced_cp: bool
    samples_used: int
    first_violation: Optional[ExtendedState] = None
    violation_image: Optional[HermitianOperator] = None


class HyperdecoherencePaths(BaseModel):
    """Both routes around the hyper-decoherence diagram."""

    model_config = ConfigDict(frozen=True)

    rho_prime: HermitianOperator
    rho_doubleprime: HermitianOperator
    gap: float


class QuarticWitness(BaseModel):
    """A (Gamma, sigma) pair for which the hyper-decoherence diagram fails to commute."""

    model_config = ConfigDict(frozen=True)

    gamma: SuperMap
    sigma: ExtendedState
    paths: HyperdecoherencePaths
    trial: int

    @property
    def gap(self) -> float:
        return self.paths.gap


# ==================================================================================================
# Constructors
# ==================================================================================================


def _order(n: int) -> TheoryOrder:
    return TheoryOrder(n=n, m=1)


def _block_side(matrix: np.ndarray) -> int:
    rows = matrix.shape[0]
    n = math.isqrt(math.isqrt(rows))
    if matrix.shape != (rows, rows) or n**4 != rows:
        raise DimensionError(f"Expected an N^4 x N^4 matrix, got {matrix.shape}")
    return n


def supermap_from_matrix(matrix: ArrayLike) -> SuperMap:
    """Wrap Gamma; G is computed by reshuffling."""
    gamma = as_matrix(matrix)
    n = _block_side(gamma)
    return SuperMap(n=n, matrix=gamma, choi_g=HermitianOperator(matrix=reshuffle(gamma)))


def supermap_from_choi(g: ArrayLike) -> SuperMap:
    """Inverse constructor: Gamma = reshuffle(G)."""
    gmat = as_matrix(g)
    n = _block_side(gmat)
    gamma = reshuffle(gmat)
    return SuperMap(n=n, matrix=gamma, choi_g=HermitianOperator(matrix=reshuffle(gamma)))


def supermap_from_kraus(ys: List[ArrayLike]) -> SuperMap:
    """
    Gamma = sum_i Y_i (x) conj(Y_i), so sigma' = sum_i Y_i sigma Y_i^dagger.

    Args:
        ys: Kraus operators on H_A (x) H_A', each N^2 x N^2.

    Returns:
        A completely positive supermap; G is positive semidefinite.
    """
    ops = [as_matrix(y) for y in ys]
    if not ops:
        raise DimensionError("Need at least one Kraus operator")
    side = ops[0].shape[0]
    if any(y.shape != (side, side) for y in ops) or math.isqrt(side) ** 2 != side:
        raise DimensionError("Supermap Kraus operators must share an N^2 x N^2 shape")
    return supermap_from_matrix(kraus_superop(ops))


def identity_supermap(n: int) -> SuperMap:
    return supermap_from_matrix(np.eye(n**4, dtype=complex))


def product_supermap(psi: QuantumMap) -> SuperMap:
    """
    Psi (x) id: Psi on the principal factor A, identity on the ancilla A'.

    Gamma[(a b c d), (x y z t)] = Psi[(a c), (x z)] delta(b, y) delta(d, t).
    """
    n = psi.n
    eye = np.eye(n)
    gamma = np.einsum("acxz,by,dt->abcdxyzt", psi.superop.reshape(n, n, n, n), eye, eye)
    return supermap_from_matrix(gamma.reshape(n**4, n**4))


def swap_supermap(n: int) -> SuperMap:
    """Conjugation by SWAP on H_A (x) H_A'."""
    return supermap_from_kraus([swap_operator(n)])


def reflection_supermap(n: int) -> SuperMap:
    """
    Reflection about the maximally mixed state, sigma -> 2 Tr(sigma) I / N^2 - sigma.

    Not positive on all N^2-dimensional states, yet it maps extended states of
    an exbit (N = 2) onto extended states.
    """
    side = n * n
    vec_eye = np.eye(side).reshape(-1)
    gamma = (2.0 / side) * np.outer(vec_eye, vec_eye) - np.eye(side * side)
    return supermap_from_matrix(gamma.astype(complex))


def pure_contraction_supermap(phi: ArrayLike) -> SuperMap:
    """sigma -> |phi><phi| Tr(sigma), a contraction onto a pure state of H_A (x) H_A'."""
    target = projector(phi).matrix
    side = target.shape[0]
    n = math.isqrt(side)
    if n * n != side:
        raise DimensionError(f"Target vector of length {side} is not N^2")
    gamma = np.outer(target.reshape(-1), np.eye(side).reshape(-1))
    return supermap_from_matrix(gamma)


def random_cp_supermap(n: int, seed: Seed, unital: bool = False) -> SuperMap:
    """
    Random completely positive trace-preserving supermap.

    Args:
        n: Dimension N.
        seed: Integer seed or Generator.
        unital: Draw a mixture of Haar unitary conjugations (bistochastic)
            instead of a Stinespring dilation with an N^2-dimensional environment.
    """
    rng = rng_from(seed)
    side = n * n
    if unital:
        k = int(rng.integers(1, side + 1))
        weights = rng.dirichlet(np.ones(k))
        return supermap_from_kraus([math.sqrt(w) * haar_unitary(side, rng) for w in weights])
    u = haar_unitary(side * side, rng).reshape(side, side, side, side)
    return supermap_from_kraus([u[:, k, :, 0] for k in range(side)])


# ==================================================================================================
# Action
# ==================================================================================================


def _operator(sigma: StateLike) -> HermitianOperator:
    return sigma.operator if isinstance(sigma, ExtendedState) else sigma


def apply_supermap(g: SuperMap, sigma: StateLike) -> HermitianOperator:
    """
    Gamma acting on vec(sigma), reshaped back to N^2 x N^2.

    Raises:
        DimensionError: If dims differ.
        HermiticityError: If the image is not Hermitian within 1e-9, which
            signals an inadmissible Gamma.
    """
    op = _operator(sigma)
    side = g.n * g.n
    if op.dim != side:
        raise DimensionError(f"State dim {op.dim} does not match supermap block {side}")
    out = (g.matrix @ op.matrix.reshape(-1)).reshape(side, side)
    checked = HermitianOperator(matrix=out)
    return HermitianOperator(matrix=checked.symmetrized())


def compose_states(sa: StateLike, sb: StateLike) -> HermitianOperator:
    """
    sa . sb := N (sa^R sb^R)^R.

    Under sigma = D / N this is the Jamiolkowski state of Phi_a o Phi_b, with
    |psi+><psi+| as two-sided identity.
    """
    a = _operator(sa)
    b = _operator(sb)
    if a.dim != b.dim:
        raise DimensionError(f"Cannot compose states of dims {a.dim} and {b.dim}")
    n = math.isqrt(a.dim)
    if n * n != a.dim:
        raise DimensionError(f"State dim {a.dim} is not N^2")
    product = n * reshuffle(reshuffle(a.matrix) @ reshuffle(b.matrix))
    return HermitianOperator(matrix=product)


def reduce_supermap(g: SuperMap) -> QuantumMap:
    """
    Quantum map induced on the principal system: Psi = D^R, D = Tr_A'B'(G) / N.

    Complete positivity, trace preservation and unitality of Gamma carry over to Psi.
    """
    n = g.n
    d = ptrace(g.choi_g.matrix, [n, n, n, n], keep=[0, 2]) / n
    return from_choi((d + d.conj().T) / 2)


def supermap_classify(g: SuperMap, tol: float = EIG_TOL) -> MapClassification:
    """
    Flags of Gamma read off G at block size N^2.

    CP iff G >= 0, trace preserving iff Tr_AA' G = I, unital iff Tr_BB' G = I.
    """
    n = g.n
    dims = [n, n, n, n]
    eye = np.eye(n * n)
    cp = bool(eigenvalues(g.choi_g.matrix, g.choi_g.herm_tol)[-1] >= -tol)
    out_marginal = ptrace(g.choi_g.matrix, dims, keep=[2, 3])
    in_marginal = ptrace(g.choi_g.matrix, dims, keep=[0, 1])
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


# ==================================================================================================
# Admissibility
# ==================================================================================================


def check_admissible(
    g: SuperMap, samples: int = 1000, seed: int = 42, tol: float = EIG_TOL
) -> AdmissibilityReport:
    """
    Sample extended states, apply Gamma and test the images.

    Even-indexed samples are extremal (a single unitary conjugate of sigma_0),
    odd-indexed ones are mixtures. Sample i uses seed + i. Sampling stops at
    the first violation, which is kept as a certified witness.

    Args:
        g: The supermap.
        samples: Number of sampled states.
        seed: Base seed.
        tol: Membership tolerance.
    """
    order = _order(g.n)
    reduced_cp = bool(eigenvalues(reduce_supermap(g).choi.matrix)[-1] >= -tol)
    for i in range(samples):
        sigma = sample_extended_state(order, seed + i, terms=1 if i % 2 == 0 else None)
        try:
            image = apply_supermap(g, sigma)
        except HermiticityError:
            logger.debug("Sample %d: image not Hermitian", i)
            return AdmissibilityReport(
                preserves_sampled=False,
                reduced_cp=reduced_cp,
                samples_used=i + 1,
                first_violation=sigma,
            )
        if not is_extended_state(image, order, tol=tol):
            logger.debug("Sample %d: image leaves the extended state set", i)
            return AdmissibilityReport(
                preserves_sampled=False,
                reduced_cp=reduced_cp,
                samples_used=i + 1,
                first_violation=sigma,
                violation_image=image,
            )
    return AdmissibilityReport(preserves_sampled=True, reduced_cp=reduced_cp, samples_used=samples)


# ==================================================================================================
# Decoherence and hyper-decoherence
# ==================================================================================================


def hyperdecohere_paths(g: SuperMap, sigma: ExtendedState) -> HyperdecoherencePaths:
    """
    Reduce-after-evolve against evolve-after-reduce.

    rho' = Tr_A'(Gamma(sigma)), rho'' = Psi(Tr_A'(sigma)) with Psi the reduced
    map, gap = ||rho' - rho''||_1.
    """
    if sigma.order.n != g.n or sigma.order.m != 1:
        raise DimensionError("Supermap and state belong to different theories")
    image = apply_supermap(g, sigma)
    rho_prime = HermitianOperator(matrix=ptrace(image.matrix, [g.n, g.n], keep=[0]))
    rho_doubleprime = apply_map(reduce_supermap(g), reduce_state(sigma))
    gap = trace_norm(rho_prime.matrix - rho_doubleprime.matrix)
    return HyperdecoherencePaths(rho_prime=rho_prime, rho_doubleprime=rho_doubleprime, gap=gap)


def decoherence_excess(u: ArrayLike, p: ArrayLike) -> float:
    """How far diag(U diag(p) U^dagger) is from being majorized by p."""
    umat = as_matrix(u)
    probs = np.asarray(p, dtype=float)
    if umat.shape != (probs.size, probs.size):
        raise DimensionError(f"Unitary of shape {umat.shape} for {probs.size} probabilities")
    rotated = np.einsum("ij,j,ij->i", umat, probs, umat.conj()).real
    return majorization_excess(Spectrum(values=rotated), Spectrum(values=probs))


def verify_decoherence(u: ArrayLike, p: ArrayLike, tol: float = 1e-10) -> bool:
    """diag(U p U^dagger) is majorized by p."""
    probs = np.asarray(p, dtype=float)
    if np.min(probs) < -tol or abs(probs.sum() - 1.0) > tol:
        raise DomainError("p must be a probability vector")
    return decoherence_excess(u, probs) <= tol


def hyperdecoherence_excess(u: ArrayLike, rho: HermitianOperator) -> float:
    """How far the spectrum of Tr_A'[U (rho (x) I/N) U^dagger] is from being majorized by rho."""
    n = rho.dim
    umat = as_matrix(u)
    if umat.shape != (n * n, n * n) or not is_unitary(umat, UNITARY_TOL):
        raise DomainError(f"Expected a unitary of dimension {n * n}")
    extended = np.kron(rho.matrix, maximally_mixed(n).matrix)
    rotated = umat @ extended @ umat.conj().T
    reduced = ptrace((rotated + rotated.conj().T) / 2, [n, n], keep=[0])
    return majorization_excess(spectrum(HermitianOperator(matrix=reduced)), spectrum(rho))


def verify_hyperdecoherence(u: ArrayLike, rho: HermitianOperator, tol: float = 1e-10) -> bool:
    """Tr_A'[U (rho (x) I/N) U^dagger] is majorized by rho."""
    vals = eigenvalues(rho.matrix, rho.herm_tol)
    if vals[-1] < -EIG_TOL or abs(vals.sum() - 1.0) > EIG_TOL:
        raise DomainError("rho must be a density matrix")
    return hyperdecoherence_excess(u, rho) <= tol


def find_quartic_witness(
    n: int,
    seed: int,
    trials: int,
    gamma: Optional[SuperMap] = None,
) -> QuarticWitness:
    """
    Largest hyper-decoherence gap over extremal states.

    Trial i draws an extremal state from seed + i. With gamma given it is
    used for every trial; otherwise each trial draws a random bistochastic
    supermap from the same generator.
    """
    if trials < 1:
        raise DomainError("Witness search needs at least one trial")
    order = _order(n)
    best: Optional[QuarticWitness] = None
    for i in range(trials):
        rng = rng_from(seed + i)
        sigma = sample_extended_state(order, rng, terms=1)
        g = gamma if gamma is not None else random_cp_supermap(n, rng, unital=True)
        paths = hyperdecohere_paths(g, sigma)
        if best is None or paths.gap > best.gap:
            best = QuarticWitness(gamma=g, sigma=sigma, paths=paths, trial=i)
    assert best is not None
    logger.debug("Quartic witness search: best gap %.6f at trial %d", best.gap, best.trial)
    return best

