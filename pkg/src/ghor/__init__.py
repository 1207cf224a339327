"""Exact workbench for dimer quivers on surfaces glued from a 2N-gon."""

from .surface import FundamentalPolygon, class_of, make_polygon, reduce_word
from .quiver import (DimerQuiver, PathError, QuiverError, QuiverSyntaxError, ValidationReport,
                     corner_order, export_dot, load_quiver, parse_quiver, validate)
from .matchings import Matching, MatchingCatalog, is_simple, perfect_matchings, sigma
from .monomials import ExponentVector, eta_bar, equal_in_ghor, sigma_valuation, tau_bar
from .geodesy import (cycle_class, geodesic_certificate, has_cyclic_subpath,
                      is_geodesic_certified, lift, transversely_intersect)
from .cycle_algebra import (center_monomials, cycle_algebra_gens, enumerate_cycles,
                            lattice_rank, member, nonnoetherian_witness, same_class_monomial)

__version__ = "0.1.0"

__all__ = [
    "FundamentalPolygon", "class_of", "make_polygon", "reduce_word",
    "DimerQuiver", "PathError", "QuiverError", "QuiverSyntaxError", "ValidationReport",
    "corner_order", "export_dot", "load_quiver", "parse_quiver", "validate",
    "Matching", "MatchingCatalog", "is_simple", "perfect_matchings", "sigma",
    "ExponentVector", "eta_bar", "equal_in_ghor", "sigma_valuation", "tau_bar",
    "cycle_class", "geodesic_certificate", "has_cyclic_subpath", "is_geodesic_certified",
    "lift", "transversely_intersect",
    "center_monomials", "cycle_algebra_gens", "enumerate_cycles", "lattice_rank", "member",
    "nonnoetherian_witness", "same_class_monomial",
]
