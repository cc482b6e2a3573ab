"""Aperiodicity, cofinality and Cuntz-Krieger machinery for finite k-graphs."""
from .skeleton import KGraph, Skeleton, SkeletonError, ValidationError, load, parse_skeleton, serialize, validate
from .verdict import Status, Verdict

__all__ = ["KGraph", "Skeleton", "SkeletonError", "ValidationError", "Status", "Verdict",
           "load", "parse_skeleton", "serialize", "validate"]
