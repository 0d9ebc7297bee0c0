"""Finite range structure of alpha-Hurwitz maps: circle closure, cells, checks."""
from __future__ import annotations

from .cells import CellDecomposition, cell_decomposition, verify_markov
from .closure import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_MAX_NODES,
    CircleSet,
    ClosureNode,
    PartitionReport,
    RhoMinSq,
    closure,
    digit_candidates,
    rho_min_sq,
    seed_circles,
    verify_closure_invariants,
)
from .oracle import boundary_orbit_oracle, boundary_samples, most_hit_circle
from .summary import Verdict, VerificationSummary

__all__ = [
    "DEFAULT_MAX_DEPTH",
    "DEFAULT_MAX_NODES",
    "CellDecomposition",
    "CircleSet",
    "ClosureNode",
    "PartitionReport",
    "RhoMinSq",
    "Verdict",
    "VerificationSummary",
    "boundary_orbit_oracle",
    "boundary_samples",
    "cell_decomposition",
    "closure",
    "digit_candidates",
    "most_hit_circle",
    "rho_min_sq",
    "seed_circles",
    "verify_closure_invariants",
    "verify_markov",
]
