"""
Hermitian operator algebra underlying every other quartic module.

This module is the foundation of the package: validated value types for
Hermitian operators and spectra, tensor products and partial traces with a
fixed A-major index convention, the reshuffling involution, spectra,
entropies and seeded Haar/Wishart sampling.

Index convention: an operator on H_A (x) H_B uses the composite index
i * dim(B) + j. Matrices are vectorized row-major, so vec(rho)[m * N + mu]
is rho[m, mu].
"""

import logging
import math
from typing import Any, List, Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field, PositiveInt, field_validator, model_validator
from scipy import linalg

from quartic.core.errors import (
    DimensionError,
    DomainError,
    EigenSolverError,
    HermiticityError,
)
from quartic.core.tolerances import CLAMP_TOL, EIG_TOL, EXACT_TOL, HERM_TOL, UNITARY_TOL

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.Generator]


def as_matrix(data: ArrayLike) -> np.ndarray:
    """
    Coerce input to a finite two-dimensional complex matrix.

    Args:
        data: Anything numpy can turn into a 2-D array.

    Returns:
        A complex128 array.

    Raises:
        DimensionError: If the input is not two-dimensional or is empty.
        DomainError: If any entry is NaN or infinite.
    """
    arr = np.array(data, dtype=complex)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"Expected a non-empty matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("Matrix contains NaN or infinite entries")
    return arr


def readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def hermiticity_defect(matrix: np.ndarray) -> float:
    """Largest entry of |A - A^dagger|."""
    return float(np.max(np.abs(matrix - matrix.conj().T)))


class HermitianOperator(BaseModel):
    """
    A square complex matrix certified Hermitian within herm_tol.

    Attributes:
        matrix: Read-only complex array of shape (dim, dim).
        herm_tol: Allowed deviation max |A[i, j] - conj(A[j, i])|.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray
    herm_tol: float = Field(default=HERM_TOL, ge=0.0)

    @field_validator("matrix", mode="before")
    @classmethod
    def validate_matrix(cls, v: Any) -> np.ndarray:
        """Coerce to a finite, square, read-only complex array."""
        arr = as_matrix(v)
        if arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"Operator must be square, got shape {arr.shape}")
        return readonly(arr)

    @model_validator(mode="after")
    def check_hermitian(self) -> "HermitianOperator":
        """Reject operators whose asymmetry exceeds herm_tol."""
        defect = hermiticity_defect(self.matrix)
        if defect > self.herm_tol:
            raise HermiticityError(
                f"Operator is not Hermitian: defect {defect:.3e} > tolerance {self.herm_tol:.1e}"
            )
        return self

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def symmetrized(self) -> np.ndarray:
        """(A + A^dagger) / 2 as a plain array."""
        return (self.matrix + self.matrix.conj().T) / 2


class Spectrum(BaseModel):
    """
    Real vector kept in descending order.

    Construction sorts the input, so Spectrum(values=[3, 1, 2]) holds (3, 2, 1).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def sort_descending(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=float).reshape(-1)
        if arr.size == 0:
            raise DimensionError("Spectrum cannot be empty")
        if not np.all(np.isfinite(arr)):
            raise DomainError("Spectrum contains NaN or infinite entries")
        return readonly(np.sort(arr)[::-1].copy())

    @classmethod
    def of(cls, values: ArrayLike) -> "Spectrum":
        return cls(values=values)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def ascending(self) -> np.ndarray:
        return self.values[::-1]

    def total(self) -> float:
        return float(np.sum(self.values))

    def tolist(self) -> List[float]:
        return [float(x) for x in self.values]


class SubsystemShape(BaseModel):
    """Tensor-factor dimensions of a composite space, A-major."""

    model_config = ConfigDict(frozen=True)

    dims: List[PositiveInt]

    @field_validator("dims")
    @classmethod
    def validate_dims(cls, v: List[int]) -> List[int]:
        if not v:
            raise DimensionError("SubsystemShape needs at least one factor")
        return v

    @property
    def total(self) -> int:
        return int(math.prod(self.dims))


# ==================================================================================================
# Tensor structure
# ==================================================================================================


def tensor_product(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """
    Kronecker product a (x) b with sigma[(i j), (k l)] = a[i, k] * b[j, l].

    Args:
        a: Operator on the first factor.
        b: Operator on the second factor.

    Returns:
        Operator of dimension dim(a) * dim(b).
    """
    return HermitianOperator(
        matrix=np.kron(a.matrix, b.matrix), herm_tol=max(a.herm_tol, b.herm_tol)
    )


def ptrace(matrix: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """
    Array-level partial trace keeping the listed factors in increasing order.

    Works for any square matrix, Hermitian or not; Choi matrices of supermaps
    go through here directly.
    """
    n = len(dims)
    total = int(math.prod(dims))
    if matrix.shape != (total, total):
        raise DimensionError(f"Matrix shape {matrix.shape} does not match factors {list(dims)}")
    kept = sorted(set(keep))
    if not kept or len(kept) == n:
        raise DimensionError("Keep-set must be a non-empty proper subset of the factors")
    if kept[0] < 0 or kept[-1] >= n:
        raise DimensionError(f"Keep indices {list(keep)} out of range for {n} factors")

    tensor = matrix.reshape(tuple(dims) * 2)
    rows = list(range(n))
    cols = [n + i if i in kept else i for i in range(n)]
    out = kept + [n + i for i in kept]
    reduced = np.einsum(tensor, rows + cols, out)
    side = int(math.prod(dims[i] for i in kept))
    return reduced.reshape(side, side)


def partial_trace(
    a: HermitianOperator, shape: SubsystemShape, keep: Sequence[int]
) -> HermitianOperator:
    """
    Marginal of a on the kept factors.

    Args:
        a: Operator on the composite space.
        shape: Factor dimensions; their product must equal dim(a).
        keep: Indices of the factors that survive.

    Returns:
        The reduced operator; its trace equals Tr(a).

    Raises:
        DimensionError: On a shape mismatch or an empty/full keep-set.
    """
    if shape.total != a.dim:
        raise DimensionError(f"Shape {shape.dims} has product {shape.total}, operator dim {a.dim}")
    return HermitianOperator(matrix=ptrace(a.matrix, shape.dims, keep), herm_tol=a.herm_tol)


def reshuffle(m: ArrayLike) -> np.ndarray:
    """
    Reshuffle D[(m n), (mu nu)] = Phi[(m mu), (n nu)].

    A pure element permutation, hence an exact involution.

    Raises:
        DimensionError: If the matrix is not square of perfect-square size.
    """
    arr = as_matrix(m)
    rows, cols = arr.shape
    n = math.isqrt(rows)
    if rows != cols or n * n != rows:
        raise DimensionError(f"Reshuffle needs an N^2 x N^2 matrix, got {arr.shape}")
    return np.ascontiguousarray(arr.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(rows, rows))


# ==================================================================================================
# Spectra and scalar functionals
# ==================================================================================================


def eigenvalues(matrix: np.ndarray, herm_tol: float = HERM_TOL) -> np.ndarray:
    """
    Descending eigenvalues of a Hermitian array, symmetrizing first.

    Raises:
        HermiticityError: If the asymmetry exceeds herm_tol.
        EigenSolverError: If LAPACK does not converge.
    """
    defect = hermiticity_defect(matrix)
    if defect > herm_tol:
        raise HermiticityError(f"Cannot diagonalize: Hermiticity defect {defect:.3e}")
    if defect > 0:
        logger.debug("Symmetrizing operator with defect %.3e before eigh", defect)
    try:
        vals = linalg.eigvalsh((matrix + matrix.conj().T) / 2)
    except (np.linalg.LinAlgError, linalg.LinAlgError) as e:
        raise EigenSolverError(f"Eigen-solver failed to converge: {e}") from e
    return np.asarray(vals[::-1], dtype=float)


def spectrum(a: HermitianOperator) -> Spectrum:
    """Eigenvalues of a, sorted descending."""
    return Spectrum(values=eigenvalues(a.matrix, a.herm_tol))


def hs_inner(a: HermitianOperator, b: HermitianOperator, tol: float = EIG_TOL) -> float:
    """
    Hilbert-Schmidt product Tr(a^dagger b).

    Raises:
        DimensionError: If the dimensions differ.
        HermiticityError: If the imaginary residue exceeds tol.
    """
    if a.dim != b.dim:
        raise DimensionError(f"Dimension mismatch: {a.dim} vs {b.dim}")
    value = complex(np.vdot(a.matrix, b.matrix))
    if abs(value.imag) > tol:
        raise HermiticityError(f"Hilbert-Schmidt product has imaginary part {value.imag:.3e}")
    if abs(value.imag) > EXACT_TOL:
        logger.warning("Discarding imaginary part %.3e of a Hilbert-Schmidt product", value.imag)
    return value.real


def shannon_entropy(p: ArrayLike) -> float:
    """-sum p ln p with 0 ln 0 = 0."""
    probs = np.asarray(p, dtype=float)
    nz = probs[probs > 0]
    return float(-np.sum(nz * np.log(nz)))


def clamp_nonnegative(vals: np.ndarray, tol: float = CLAMP_TOL) -> np.ndarray:
    """
    Clamp eigenvalues in [-tol, 0) to zero.

    Raises:
        DomainError: If an eigenvalue lies below -tol.
    """
    low = float(np.min(vals))
    if low < -tol:
        raise DomainError(f"Operator is not positive semidefinite: eigenvalue {low:.3e}")
    if low < 0:
        logger.debug("Clamping eigenvalue %.3e to zero", low)
    return np.clip(vals, 0.0, None)


def von_neumann_entropy(a: HermitianOperator, tol: float = CLAMP_TOL) -> float:
    """
    S(a) = -Tr a ln a in natural log units.

    Raises:
        DomainError: If a has an eigenvalue below -tol.
    """
    return shannon_entropy(clamp_nonnegative(spectrum(a).values, tol))


def trace_norm(m: ArrayLike) -> float:
    """Sum of singular values."""
    return float(np.sum(linalg.svdvals(as_matrix(m))))


def hs_norm(m: ArrayLike) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(as_matrix(m)))


# ==================================================================================================
# Canonical operators
# ==================================================================================================


def projector(vector: ArrayLike) -> HermitianOperator:
    """|v><v| for a vector normalized on the way in."""
    v = np.asarray(vector, dtype=complex).reshape(-1)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise DomainError("Cannot build a projector from the zero vector")
    v = v / norm
    return HermitianOperator(matrix=np.outer(v, v.conj()))


def basis_projector(dim: int, index: int) -> HermitianOperator:
    """|i><i| in the computational basis."""
    m = np.zeros((dim, dim), dtype=complex)
    m[index, index] = 1.0
    return HermitianOperator(matrix=m)


def maximally_mixed(dim: int) -> HermitianOperator:
    return HermitianOperator(matrix=np.eye(dim, dtype=complex) / dim)


def max_entangled_state(n: int) -> HermitianOperator:
    """|psi+><psi+| with psi+ = sum_i |ii> / sqrt(N)."""
    psi = np.eye(n, dtype=complex).reshape(-1) / math.sqrt(n)
    return HermitianOperator(matrix=np.outer(psi, psi.conj()))


def swap_operator(n: int) -> np.ndarray:
    """SWAP on H_N (x) H_N."""
    swap = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            swap[j * n + i, i * n + j] = 1.0
    return swap


def hadamard() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def is_unitary(u: ArrayLike, tol: float = UNITARY_TOL) -> bool:
    arr = as_matrix(u)
    if arr.shape[0] != arr.shape[1]:
        return False
    return bool(np.max(np.abs(arr.conj().T @ arr - np.eye(arr.shape[0]))) <= tol)


def check_orthonormal_basis(basis: ArrayLike, tol: float = UNITARY_TOL) -> np.ndarray:
    """
    Validate a basis given as the columns of a square matrix.

    Returns:
        The basis as a complex array.

    Raises:
        DomainError: If the columns are not orthonormal within tol.
    """
    arr = as_matrix(basis)
    if not is_unitary(arr, tol):
        raise DomainError("Basis vectors are not orthonormal")
    return arr


# ==================================================================================================
# Seeded sampling
# ==================================================================================================


def rng_from(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Standard complex Gaussian matrix."""
    real = rng.standard_normal((rows, cols))
    imag = rng.standard_normal((rows, cols))
    return (real + 1j * imag) / math.sqrt(2)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from the QR of a Ginibre matrix with the R-diagonal phases removed."""
    q, r = linalg.qr(ginibre(dim, dim, rng))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_unitary(dim: int, seed: Seed) -> np.ndarray:
    """
    Haar-distributed unitary of size dim.

    Args:
        dim: Matrix size, at least 1.
        seed: Integer seed (or a Generator); the same seed gives the same matrix.

    Returns:
        A dim x dim unitary.
    """
    if dim < 1:
        raise DimensionError("Dimension must be positive")
    return haar_unitary(dim, rng_from(seed))


def random_density(dim: int, seed: Seed) -> HermitianOperator:
    """Wishart-style density matrix G G^dagger / Tr(G G^dagger)."""
    if dim < 1:
        raise DimensionError("Dimension must be positive")
    g = ginibre(dim, dim, rng_from(seed))
    w = g @ g.conj().T
    w = (w + w.conj().T) / 2
    return HermitianOperator(matrix=w / np.trace(w).real)


def random_pure_state(dim: int, seed: Seed) -> HermitianOperator:
    rng = rng_from(seed)
    return projector(ginibre(dim, 1, rng).reshape(-1))


def random_hermitian(dim: int, seed: Seed) -> HermitianOperator:
    """GUE-style Hermitian sample (H + H^dagger) / 2."""
    g = ginibre(dim, dim, rng_from(seed))
    return HermitianOperator(matrix=(g + g.conj().T) / 2)


def diagonal_operator(values: ArrayLike, basis: Optional[ArrayLike] = None) -> HermitianOperator:
    """U diag(values) U^dagger, with U the identity when no basis is given."""
    vals = np.asarray(values, dtype=float)
    d = np.diag(vals).astype(complex)
    if basis is None:
        return HermitianOperator(matrix=d)
    u = as_matrix(basis)
    m = u @ d @ u.conj().T
    return HermitianOperator(matrix=(m + m.conj().T) / 2)
