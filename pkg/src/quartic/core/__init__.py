"""Numerical core for Quartic CLI."""

from quartic.core.errors import (
    CombinatorialGuardError,
    DimensionError,
    DomainError,
    EigenSolverError,
    HermiticityError,
    ImpossibleOutcomeError,
    MembershipViolation,
    QuarticError,
)
from quartic.core.hermitian import HermitianOperator, Spectrum, SubsystemShape
from quartic.core.maps import JamiolkowskiState, KrausSet, QuantumMap
from quartic.core.states import ExtendedState, TheoryOrder, XPovmElement
from quartic.core.supermaps import SuperMap

__all__ = [
    "CombinatorialGuardError",
    "DimensionError",
    "DomainError",
    "EigenSolverError",
    "ExtendedState",
    "HermitianOperator",
    "HermiticityError",
    "ImpossibleOutcomeError",
    "JamiolkowskiState",
    "KrausSet",
    "MembershipViolation",
    "QuantumMap",
    "QuarticError",
    "Spectrum",
    "SubsystemShape",
    "SuperMap",
    "TheoryOrder",
    "XPovmElement",
]
