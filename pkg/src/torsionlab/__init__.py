"""Exact computations in simple homotopy theory over integral group rings.

Based chain complexes over Z[G], the elementary moves as a certificate
language, Whitehead torsion decisions for trivial and cyclic groups, and the
lens-space classification.
"""
from .chain import (
    BasedComplex,
    ChainHomotopy,
    ChainMap,
    Generator,
    direct_sum,
    graded_piece,
    integral_homology,
    is_acyclic,
    shift,
    two_term,
    validate,
)
from .group_algebra import (
    GroupSpec,
    RingElement,
    RingMatrix,
    TrivialUnit,
    character_eval,
    format_ring_element,
    parse_ring_element,
)
from .lens import LensSpace, classify, lens_complex, oracle_classify, reidemeister_torsion
from .moves import BaseChange, Collapse, Expand, MoveScript, Slide, apply, inverse_script, run, verify_trivial
from .torsion import (
    greedy_reduce,
    homotopy_equal_torsion,
    is_trivial_torsion,
    lift_filtration_certificate,
    mapping_cone,
    torsion_of_composition,
    torsion_scalar,
    torsion_vector,
    unit_triangular_certificate,
)

__version__ = "0.1.0"
