"""Dense induced subgraph extraction: monochromatic, transitive and antidirected witnesses.

Graphs are bitset-backed with dense vertex indices; every extractor output
is re-checked by an independent verifier before it is returned.
"""
from .config import Limits, default_limits
from .errors import (
    BudgetExceeded,
    FormatError,
    LimitExceeded,
    MonoExtractError,
    PreconditionError,
    RetriesExhausted,
    VerificationError,
)
from .extraction import (
    ExtractionOutcome,
    ThmConstants,
    digraph_split,
    ko_extract,
    mono_extract,
    mono_extract_k,
    oriented_extract,
    peel,
    verify_outcome,
)
from .generators import GenSpec, generate
from .graph import Digraph, EdgeColouring, Graph, InducedView, Orientation, induced_subgraph
from .io import parse, read, serialize, write

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "Digraph", "EdgeColouring", "ExtractionOutcome", "FormatError", "GenSpec", "Graph",
    "InducedView", "LimitExceeded", "Limits", "MonoExtractError", "Orientation", "PreconditionError",
    "RetriesExhausted", "ThmConstants", "VerificationError", "default_limits", "digraph_split", "generate",
    "induced_subgraph", "ko_extract", "mono_extract", "mono_extract_k", "oriented_extract", "parse", "peel",
    "read", "serialize", "verify_outcome", "write",
]
