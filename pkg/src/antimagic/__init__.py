"""Antimagic labellings of graphs with large average degree.

The main entry points are :func:`label_graph` (any graph of large average
degree without trivial obstructions) and :func:`label_min_degree` (graphs
of large minimum degree, with a vertex potential and a label set), plus the
exact checkers in :mod:`antimagic.verify`.
"""

from .errors import (
    AntimagicError,
    BudgetExceededError,
    ConditionError,
    GraphError,
    LabelExhaustedError,
    PipelineError,
    PreconditionError,
    TrialsExhaustedError,
)
from .graph import Graph
from .labelling import PartialLabelling, ResidueHistogram, residue_histogram
from .pipeline import Constants, PipelineConfig, constants, label_graph, label_min_degree
from .verify import (
    VerificationReport,
    brute_force_antimagic,
    counting_obstruction,
    verify_antimagic,
    verify_g_antimagic,
)

__all__ = [
    "AntimagicError", "BudgetExceededError", "ConditionError", "GraphError",
    "LabelExhaustedError", "PipelineError", "PreconditionError", "TrialsExhaustedError",
    "Graph", "PartialLabelling", "ResidueHistogram", "residue_histogram",
    "Constants", "PipelineConfig", "constants", "label_graph", "label_min_degree",
    "VerificationReport", "brute_force_antimagic", "counting_obstruction",
    "verify_antimagic", "verify_g_antimagic",
]
