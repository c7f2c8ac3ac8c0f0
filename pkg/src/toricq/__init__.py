"""Smooth projective toric varieties: fans, cohomology and I-functions in exact arithmetic."""

from .cohomology import build_ring, divisor_to_coh, integrate, mul
from .fan import build_fan, load_fan, projective_space, primitive_collections, walls
from .givental import big_I_k0, closed_form_J_Pn, make_request, residue_k0, small_I
from .mirror import J_from_I, invert_mirror_map, mirror_map
from .picard import anticanonical, enumerate_effective, is_ample, is_fano, is_nef, weight_matrix

__version__ = "0.1.0"
