"""Wulff shapes, anisotropic curvatures and Minkowski-type integral checks."""

from wulffkit._core import (
    convexity_audit,
    parse_fspec,
    parse_surfspec,
    verify,
    wulff_obj,
    wulff_point,
    wulff_selftest,
)

__all__ = [
    "convexity_audit",
    "parse_fspec",
    "parse_surfspec",
    "verify",
    "wulff_obj",
    "wulff_point",
    "wulff_selftest",
]
