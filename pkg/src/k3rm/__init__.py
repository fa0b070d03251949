"""Exact computations with real-multiplication Hodge structures of K3 type."""

from .errors import K3RMError
from .kernels import BACKEND
from .numfield import Embedding, FieldElement, NumberField, is_totally_positive, square_class
from .quadform import KBilinearForm, QBilinearForm, det_square_class, diagonalize, signature
from .rmhodge import (
    PeriodData,
    RMStructure,
    build_double_cover_example,
    construct_period,
    construct_rm_structure,
    embedding_signatures,
    is_polarization,
    recover_F_bilinear,
    simplicity_check,
    trace_form,
    twist_polarization,
)
from .cliffordks import CliffordAlgebra, CliffordElement, kuga_satake_J, riemann_form
from .spinbranch import WeightMultiset, decompose_sl2k, spin_branching
from .cores import build_corestriction, embed_cores_in_clifford
from .zlattice import IntegerLattice, is_primitive_embedding, orthogonal_complement, smith_normal_form

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CliffordAlgebra", "CliffordElement", "Embedding", "FieldElement", "IntegerLattice",
    "K3RMError", "KBilinearForm", "NumberField", "PeriodData", "QBilinearForm", "RMStructure",
    "WeightMultiset", "build_corestriction", "build_double_cover_example", "construct_period",
    "construct_rm_structure", "decompose_sl2k", "det_square_class", "diagonalize",
    "embed_cores_in_clifford", "embedding_signatures", "is_polarization", "is_primitive_embedding",
    "is_totally_positive", "kuga_satake_J", "orthogonal_complement", "recover_F_bilinear",
    "riemann_form", "signature", "simplicity_check", "smith_normal_form", "spin_branching",
    "square_class", "trace_form", "twist_polarization",
]
