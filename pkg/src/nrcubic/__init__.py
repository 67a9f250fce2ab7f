"""Exact residue calculus and relative unramified H^2 for diagonal cubic
surface bundles over the projective plane."""

__version__ = "0.1.0"

from .bundle import DiagonalBundle, fiber_type, segre_minimality, three_planes_locus, validate
from .function_field import CubeClass, Curve, FactoredFn, PlanePoint, fn, make_curve
from .hnr import compute_group, symbol_witness
from .symbols import Symbol2, ramification_divisor, reciprocity_check, residue_codim1

__all__ = [
    "CubeClass", "Curve", "DiagonalBundle", "FactoredFn", "PlanePoint", "Symbol2",
    "compute_group", "fiber_type", "fn", "make_curve", "ramification_divisor",
    "reciprocity_check", "residue_codim1", "segre_minimality", "symbol_witness",
    "three_planes_locus", "validate",
]
