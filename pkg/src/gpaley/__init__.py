"""Generalized Paley graphs, coherent configurations and the checks built on them."""

from .ffield import FieldElement, FiniteField, field_of_order, make_field
from .graphs import Graph, build_circulant, build_gpaley, build_vls, srg_params
from .cohconf import CoherentConfiguration, graph_closure, point_extension, twl_equivalent, wl_closure
from .permgrp import PermGroup, aut_in_agammal, graph_automorphisms, iso_test
from .report import CapExceededError, VerificationReport

__version__ = "0.1.0"

__all__ = [
    "FieldElement", "FiniteField", "field_of_order", "make_field",
    "Graph", "build_circulant", "build_gpaley", "build_vls", "srg_params",
    "CoherentConfiguration", "graph_closure", "point_extension", "twl_equivalent", "wl_closure",
    "PermGroup", "aut_in_agammal", "graph_automorphisms", "iso_test",
    "CapExceededError", "VerificationReport",
]
