"""
JSON wire models and CSV rendering.

Complex matrices travel as flat row-major lists of [re, im] pairs. Floats are
written by the JSON encoder in shortest round-trip form, so a dump/load cycle
reproduces every entry bit for bit.
"""

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

from quartic.core.errors import DimensionError
from quartic.core.hermitian import HermitianOperator
from quartic.core.maps import ClassicalWitness, QuantumMap, from_choi
from quartic.core.states import ExtendedState, MembershipVerdict, TheoryOrder
from quartic.core.supermaps import QuarticWitness, SuperMap, supermap_from_choi
from quartic.core.tolerances import HERM_TOL


class ComplexMatrixModel(BaseModel):
    """Row-major complex matrix."""

    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    entries: List[Tuple[float, float]]

    @model_validator(mode="after")
    def check_size(self) -> "ComplexMatrixModel":
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(self.entries)} entries for a {self.rows} x {self.cols} matrix"
            )
        return self

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "ComplexMatrixModel":
        a = np.asarray(arr, dtype=complex)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        flat = a.reshape(-1)
        return cls(
            rows=a.shape[0],
            cols=a.shape[1],
            entries=[(float(z.real), float(z.imag)) for z in flat],
        )

    def to_array(self) -> np.ndarray:
        pairs = np.array(self.entries, dtype=float).reshape(-1, 2)
        return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(self.rows, self.cols)


class HermitianOperatorModel(BaseModel):
    dim: int = Field(ge=1)
    matrix: ComplexMatrixModel
    herm_tol: float = Field(default=HERM_TOL, ge=0.0)

    @classmethod
    def from_operator(cls, a: HermitianOperator) -> "HermitianOperatorModel":
        return cls(dim=a.dim, matrix=ComplexMatrixModel.from_array(a.matrix), herm_tol=a.herm_tol)

    def to_operator(self) -> HermitianOperator:
        arr = self.matrix.to_array()
        if arr.shape != (self.dim, self.dim):
            raise DimensionError(f"Matrix of shape {arr.shape} declared with dim {self.dim}")
        return HermitianOperator(matrix=arr, herm_tol=self.herm_tol)


class ExtendedStateModel(BaseModel):
    n: int = Field(ge=1)
    m: int = Field(default=1, ge=0)
    normalized: bool = True
    operator: HermitianOperatorModel

    @classmethod
    def from_state(cls, sigma: ExtendedState) -> "ExtendedStateModel":
        return cls(
            n=sigma.order.n,
            m=sigma.order.m,
            normalized=sigma.normalized,
            operator=HermitianOperatorModel.from_operator(sigma.operator),
        )

    def to_state(self) -> ExtendedState:
        """Rebuild and re-validate; raises DomainError for non-members."""
        return ExtendedState(
            operator=self.operator.to_operator(),
            order=TheoryOrder(n=self.n, m=self.m),
            normalized=self.normalized,
        )


class QuantumMapModel(BaseModel):
    """The Choi matrix is the canonical form; superoperator and Kraus are rebuilt on load."""

    n: int = Field(ge=1)
    choi: HermitianOperatorModel

    @classmethod
    def from_map(cls, m: QuantumMap) -> "QuantumMapModel":
        return cls(n=m.n, choi=HermitianOperatorModel.from_operator(m.choi))

    def to_map(self) -> QuantumMap:
        qm = from_choi(self.choi.to_operator().matrix)
        if qm.n != self.n:
            raise DimensionError(f"Choi matrix of a dim-{qm.n} map declared with n = {self.n}")
        return qm


class SuperMapModel(BaseModel):
    n: int = Field(ge=1)
    choi_g: HermitianOperatorModel

    @classmethod
    def from_supermap(cls, g: SuperMap) -> "SuperMapModel":
        return cls(n=g.n, choi_g=HermitianOperatorModel.from_operator(g.choi_g))

    def to_supermap(self) -> SuperMap:
        g = supermap_from_choi(self.choi_g.to_operator().matrix)
        if g.n != self.n:
            raise DimensionError(f"Choi matrix of a dim-{g.n} supermap declared with n = {self.n}")
        return g


class PolytopeModel(BaseModel):
    """Vertex list of Perm_N or of its dual, with exact strings when available."""

    n: int
    which: str
    vertex_count: int
    facet_count: Optional[int] = None
    vertices: List[List[float]]
    exact: Optional[List[List[str]]] = None


class SuiteResultModel(BaseModel):
    """One NDJSON record per suite."""

    suite_name: str
    passed: bool
    checks_run: int
    max_violation: float
    tolerance: float
    elapsed_ms: float
    seed: int
    details: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[str] = None


class WitnessModel(BaseModel):
    """Witness record for either diagram."""

    diagram: str
    gap: float
    threshold: float
    found: bool
    trial: int
    seed: int
    psi: Optional[QuantumMapModel] = None
    rho: Optional[HermitianOperatorModel] = None
    p_prime: Optional[List[float]] = None
    p_doubleprime: Optional[List[float]] = None
    gamma: Optional[SuperMapModel] = None
    sigma: Optional[ExtendedStateModel] = None
    rho_prime: Optional[HermitianOperatorModel] = None
    rho_doubleprime: Optional[HermitianOperatorModel] = None

    @classmethod
    def from_classical(
        cls, w: ClassicalWitness, threshold: float, seed: int
    ) -> "WitnessModel":
        return cls(
            diagram="classical",
            gap=w.gap,
            threshold=threshold,
            found=w.gap > threshold,
            trial=w.trial,
            seed=seed,
            psi=QuantumMapModel.from_map(w.psi),
            rho=HermitianOperatorModel.from_operator(w.rho),
            p_prime=[float(x) for x in w.paths.p_prime],
            p_doubleprime=[float(x) for x in w.paths.p_doubleprime],
        )

    @classmethod
    def from_quartic(cls, w: QuarticWitness, threshold: float, seed: int) -> "WitnessModel":
        return cls(
            diagram="quartic",
            gap=w.gap,
            threshold=threshold,
            found=w.gap > threshold,
            trial=w.trial,
            seed=seed,
            gamma=SuperMapModel.from_supermap(w.gamma),
            sigma=ExtendedStateModel.from_state(w.sigma),
            rho_prime=HermitianOperatorModel.from_operator(w.paths.rho_prime),
            rho_doubleprime=HermitianOperatorModel.from_operator(w.paths.rho_doubleprime),
        )


class MembershipVerdictModel(BaseModel):
    source: str
    n: int
    m: int
    is_quantum_state: bool
    is_extended_state: bool
    spectrum: List[float]
    partial_sum_excess: float
    gauged_entropy: Optional[float] = None
    marginal: Optional[HermitianOperatorModel] = None

    @classmethod
    def from_verdict(cls, v: MembershipVerdict, source: str) -> "MembershipVerdictModel":
        return cls(
            source=source,
            n=v.order.n,
            m=v.order.m,
            is_quantum_state=v.is_quantum_state,
            is_extended_state=v.is_extended_state,
            spectrum=v.spectrum.tolist(),
            partial_sum_excess=v.partial_sum_excess,
            gauged_entropy=v.gauged_entropy,
            marginal=(
                HermitianOperatorModel.from_operator(v.marginal) if v.marginal is not None else None
            ),
        )


# ==================================================================================================
# Files and rendering
# ==================================================================================================


def load_operators(path: Union[str, Path]) -> List[HermitianOperatorModel]:
    """
    Read operators from a JSON file.

    Accepts a single HermitianOperatorModel, an ExtendedStateModel (its
    operator is taken), or a JSON list of either.
    """
    raw = json.loads(Path(path).read_text())
    items = raw if isinstance(raw, list) else [raw]
    out: List[HermitianOperatorModel] = []
    for item in items:
        if isinstance(item, dict) and "operator" in item:
            out.append(ExtendedStateModel.model_validate(item).operator)
        else:
            out.append(HermitianOperatorModel.model_validate(item))
    return out


def render_rational(value: Any) -> str:
    """Exact decimal when the denominator has only factors 2 and 5, 'p/q' otherwise."""
    frac = Fraction(str(value))
    den = frac.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{frac.numerator}/{frac.denominator}"
    if frac.denominator == 1:
        return str(frac.numerator)
    digits = max(twos, fives)
    scaled = abs(frac.numerator) * (10**digits // frac.denominator)
    sign = "-" if frac < 0 else ""
    whole, rest = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{str(rest).rjust(digits, '0').rstrip('0')}"


def vertices_to_csv(rows: Sequence[Sequence[Any]], exact: bool = False) -> str:
    """One vertex per row, columns x0..x{d-1}."""
    buf = io.StringIO()
    if not rows:
        return ""
    width = len(rows[0])
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"x{i}" for i in range(width)])
    for row in rows:
        writer.writerow([render_rational(x) if exact else repr(float(x)) for x in row])
    return buf.getvalue()


RESULT_COLUMNS = [
    "suite_name",
    "passed",
    "checks_run",
    "max_violation",
    "tolerance",
    "elapsed_ms",
    "seed",
    "error",
]


def results_to_csv(results: Sequence[SuiteResultModel]) -> str:
    """Flat table of suite results; the details mapping is left to the JSON format."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=RESULT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in results:
        row = r.model_dump(include=set(RESULT_COLUMNS))
        row["error"] = row["error"] or ""
        writer.writerow(row)
    return buf.getvalue()
