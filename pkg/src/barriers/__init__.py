"""Minimum-cardinality straight-line barriers separating object sets in a
polygonal workspace with obstacles."""

from .arrangement import ArrangementResult, build_arrangement, connectivity
from .candidates import (
    CandidateSegment,
    enumerate_bitangents,
    enumerate_sampled_tangents,
)
from .generators import GenSpec, generate
from .geometry import Point, Polygon, Segment
from .ilp import IlpModel, Solution, build_model, export_lp, solve
from .instance import Instance, read_instance, validate, write_instance
from .verifier import (
    VerificationReport,
    brute_force_minimum,
    candidate_sides,
    verify_separation,
)

__all__ = [
    "ArrangementResult", "CandidateSegment", "GenSpec", "IlpModel",
    "Instance", "Point", "Polygon", "Segment", "Solution",
    "VerificationReport", "build_arrangement", "build_model",
    "brute_force_minimum", "candidate_sides", "connectivity",
    "enumerate_bitangents",
    "enumerate_sampled_tangents", "export_lp", "generate", "read_instance",
    "solve", "validate", "verify_separation", "write_instance",
]

__version__ = "0.1.0"
