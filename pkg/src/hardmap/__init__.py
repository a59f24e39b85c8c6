"""Exact enumeration of rooted planar bicubic maps with hard particles."""

from .census import (ClassVerification, CensusRecord, good_tree_census, map_census,
                     signed_admissible_census, verify_class)
from .cutting import CutResult, NotAcceptable, cut_map, roundtrip_map, roundtrip_tree
from .maps import PlanarMap, canonical_code, close_tree, nhp_edges
from .phase import critical_line, growth_exponent, tricritical_points
from .series import GSeries, ZPoly
from .solver import closed_formula, eqforP_residual, g_bmhp, g_qtising, solve_hp_system
from .trees import BlossomTree, check_admissible, edge_charges, parse_tree

__version__ = "0.1.0"

__all__ = [
    "BlossomTree", "CensusRecord", "ClassVerification", "CutResult", "GSeries",
    "NotAcceptable", "PlanarMap", "ZPoly", "canonical_code", "check_admissible",
    "close_tree", "closed_formula", "critical_line", "cut_map", "edge_charges",
    "eqforP_residual", "g_bmhp", "g_qtising", "good_tree_census", "growth_exponent",
    "map_census", "nhp_edges", "parse_tree", "roundtrip_map", "roundtrip_tree",
    "signed_admissible_census", "solve_hp_system", "tricritical_points", "verify_class",
]
