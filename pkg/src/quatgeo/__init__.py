"""Quaternionic linear algebra and affine group exploration."""
from .affine import AffineMap, commutator, commutator_sequence, fixed_points, power_closed_form
from .errors import QuatGeoError
from .groups import GeneratedGroup, analyze, enumerate_group, freeness_probe, kernel_subgroup
from .qmatrix import QMatrix, dieudonne_det, psi_det, psi_embed, right_eigenvalues
from .quaternion import I, J, K, Quaternion, format_quaternion, parse_quaternion

__all__ = [
    "AffineMap", "GeneratedGroup", "I", "J", "K", "QMatrix", "Quaternion", "QuatGeoError",
    "analyze", "commutator", "commutator_sequence", "dieudonne_det", "enumerate_group",
    "fixed_points", "format_quaternion", "freeness_probe", "kernel_subgroup", "parse_quaternion",
    "power_closed_form", "psi_det", "psi_embed", "right_eigenvalues",
]
