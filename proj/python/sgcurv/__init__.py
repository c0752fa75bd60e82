"""Repelling Laplacian analysis of signed graphs."""

import json

from ._core import (
    Error,
    InvalidGraph,
    NumericalError,
    ParseError,
    PreconditionError,
    RepellingAnalysis,
    SignedGraph,
    __version__,
    analyze,
    consensus_index,
    consensus_upper_bound,
    edge_curvature,
    edge_lambda,
    lly_curvature,
    node_curvature,
    repelling_laplacian,
    spectral_gap,
    verify,
    w1,
)
from . import _core


def curvature_report(analysis, with_lly=True):
    """Node, edge and LLY curvatures as a dict keyed like the CLI JSON."""
    return json.loads(_core._curvature_json(analysis, with_lly))


def bounds(graph, eps):
    """Every inequality check at eps, one dict per bound."""
    return json.loads(_core._bounds_json(graph, eps))


def analysis_dict(analysis):
    return json.loads(analysis._json())


__all__ = [
    "Error",
    "InvalidGraph",
    "NumericalError",
    "ParseError",
    "PreconditionError",
    "RepellingAnalysis",
    "SignedGraph",
    "__version__",
    "analysis_dict",
    "analyze",
    "bounds",
    "consensus_index",
    "consensus_upper_bound",
    "curvature_report",
    "edge_curvature",
    "edge_lambda",
    "lly_curvature",
    "node_curvature",
    "repelling_laplacian",
    "spectral_gap",
    "verify",
    "w1",
]
