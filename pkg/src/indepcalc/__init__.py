"""Conditional-independence reasoning with graphoid axioms, stratified
protocols and graphical separation criteria."""

from .axioms import (GRAPHOID, SEMIGRAPHOID, DerivationTrace, Step, apply_axiom,
                     closure, derive, is_closed)
from .core import (CycleError, Dag, DependencyModel, ResourceLimitError, Triplet,
                   UndirectedGraph, Universe, ValidationError, canonical, descendants,
                   topological_order)
from .protocol import (StratifiedProtocol, compile_protocol, extract, minimal_boundary,
                       protocol_triplets, validate, witness_protocol)
from .separation import (DSepOracle, IDSepOracle, determination_closure, dsep, dsep_model,
                         dsep_naive, idsep, is_imap, path_active, undirected_minimal_imap,
                         usep)

__version__ = "0.1.0"

__all__ = [
    "GRAPHOID", "SEMIGRAPHOID", "CycleError", "Dag", "DependencyModel", "DerivationTrace",
    "DSepOracle", "IDSepOracle", "ResourceLimitError", "Step", "StratifiedProtocol", "Triplet",
    "UndirectedGraph", "Universe", "ValidationError", "apply_axiom", "canonical", "closure",
    "compile_protocol", "derive", "descendants", "determination_closure", "dsep", "dsep_model",
    "dsep_naive", "extract", "idsep", "is_closed", "is_imap", "minimal_boundary", "path_active",
    "protocol_triplets", "topological_order", "undirected_minimal_imap", "usep", "validate",
    "witness_protocol",
]
