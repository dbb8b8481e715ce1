"""Pauli-basis tools for building, checking and rediscovering the ((5,6,2)) nonadditive code."""

from .analysis import (
    PAPER_ENUMERATOR,
    CodeError,
    CodeProjector,
    VerificationReport,
    WeightEnumerator,
    enumerator_A,
    enumerator_B,
    min_distance,
    paper_basis,
    paper_projector,
    report,
    verify_projector,
)
from .discovery import DEFAULT_SEED, DiscoveryConfig, discover
from .operators import PauliExpansion
from .pauli import PauliString, parse_pauli
from .stabilizer import StabilizerGroup, close_group, paper_H
from .symmetry import SymmetryElement, group_order, paper_generators

__all__ = [
    "PAPER_ENUMERATOR",
    "CodeError",
    "CodeProjector",
    "VerificationReport",
    "WeightEnumerator",
    "enumerator_A",
    "enumerator_B",
    "min_distance",
    "paper_basis",
    "paper_projector",
    "report",
    "verify_projector",
    "DEFAULT_SEED",
    "DiscoveryConfig",
    "discover",
    "PauliExpansion",
    "PauliString",
    "parse_pauli",
    "StabilizerGroup",
    "close_group",
    "paper_H",
    "SymmetryElement",
    "group_order",
    "paper_generators",
]
