"""Class-group distribution predictions in the presence of roots of unity."""

from .heuristics import (
    REGISTRY,
    Situation,
    cl_group_prob,
    cl_rank_prob,
    get_situation,
    modified_group_prob,
    moment,
    normalization_constant,
    predicted_table,
    rank_prob,
)
from .pgroups import PartitionType, aut_order, enumerate_types, format_type, parse_type
from .qseries import ApproxReal, poch_finite, poch_inf

__version__ = "0.1.0"

__all__ = [
    "REGISTRY",
    "Situation",
    "get_situation",
    "rank_prob",
    "modified_group_prob",
    "cl_group_prob",
    "cl_rank_prob",
    "moment",
    "normalization_constant",
    "predicted_table",
    "PartitionType",
    "aut_order",
    "enumerate_types",
    "format_type",
    "parse_type",
    "ApproxReal",
    "poch_finite",
    "poch_inf",
]
