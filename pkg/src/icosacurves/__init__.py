"""Exact verification of plane curves of degree 30, 20, 12 with icosahedral symmetry.

Cyclotomic fields, 3x3 matrix groups in PGL(3), group recognition with
replayable certificates, binary icosahedral invariants, and a CLI that turns
every claim into a deterministic JSON report.
"""

__version__ = "0.1.0"

from .cyclo import CyclotomicElement, CyclotomicField, field, root_of_unity, sqrt5
from .forms import BinaryForm, TernaryForm, curve_catalog, invariance_character, pullback
from .generators import GeneratorSet, check_word_identity, generator_catalog
from .groups import GroupTable, closure, image_and_kernel
from .matrices import Matrix, ProjectiveMatrix, pbd_restrict, projective_canonical
from .recognition import recognize_aut_structure, recognize_perfect_core

__all__ = [
    "BinaryForm",
    "CyclotomicElement",
    "CyclotomicField",
    "GeneratorSet",
    "GroupTable",
    "Matrix",
    "ProjectiveMatrix",
    "TernaryForm",
    "check_word_identity",
    "closure",
    "curve_catalog",
    "field",
    "generator_catalog",
    "image_and_kernel",
    "invariance_character",
    "pbd_restrict",
    "projective_canonical",
    "pullback",
    "recognize_aut_structure",
    "recognize_perfect_core",
    "root_of_unity",
    "sqrt5",
]
