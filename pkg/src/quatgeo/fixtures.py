"""Ready-made generator sets.

* ``example_group``: five maps A, B, C, D, S of H^2 generating a group with
  unipotent index-2 subgroup <A, B, C, D> (S^2 = D, S has d = -1).
* ``gamma0_n3``: Z x Λ(1,3) inside Aff(2, H).  H3(1) matrices already have the
  3x3 affine shape; the extra Z factor is translation by (1, 0), which
  commutes with every holonomy [[1, q], [0, 1]].
* ``gamma0_n1``: Z^3 x Λ_r inside Aff(3, H), with Λ_r realized in H1(2) and Z^3
  the translations by (1, 0, 0), (J, 0, 0), (K, 0, 0).
"""
from fractions import Fraction

from .affine import AffineMap
from .groups import GeneratedGroup
from .heisenberg import LambdaR, from_lattice_coordinates, lattice_generators
from .quaternion import I, J, K, Quaternion


def example_generators():
    half_j = J * Fraction(1, 2)
    mats = {
        "A": [[1, 0, 0], [0, 1, 1], [0, 0, 1]],
        "B": [[1, -1, 0], [0, 1, I], [0, 0, 1]],
        "C": [[1, 0, 1], [0, 1, 0], [0, 0, 1]],
        "D": [[1, 0, J], [0, 1, 0], [0, 0, 1]],
        "S": [[1, 0, half_j], [0, -1, I], [0, 0, 1]],
    }
    return {k: AffineMap.from_matrix(v) for k, v in mats.items()}


def example_group(labels="ABCDS"):
    gens = example_generators()
    return GeneratedGroup([gens[k] for k in labels], list(labels))


def heisenberg_to_affine(g):
    """A Heisenberg matrix of size n+2 read as an affine map of H^(n+1)."""
    return AffineMap.from_matrix(g.matrix)


def gamma0_n3(m=None):
    """Z x Λ(1,3); with ``m`` the sublattice Z x Δ(1,3;m) (``a1`` scaled by m)."""
    gens = lattice_generators(3, "H3")
    if m is not None:
        coords = [m, 0, 0, 0, 0, 0, 0]
        gens[0] = from_lattice_coordinates("H3", coords)
    maps = [AffineMap.translation_by([1, 0])] + [heisenberg_to_affine(g) for g in gens]
    labels = ["T", "a1", "b1", "a2", "b2", "a3", "b3", "c"]
    return GeneratedGroup(maps, labels)


def lambda_r_generators(r, family="H1"):
    """Generators of Λ_r: ``x = r_k e_k``, ``y = e_k``, ``t = 1``."""
    spec = LambdaR(r)
    n = spec.n
    size = 2 * n + 1
    gens = []
    for k in range(n):
        coords = [0] * size
        coords[2 * k] = r[k]
        gens.append(from_lattice_coordinates(family, coords))
    for k in range(n):
        coords = [0] * size
        coords[2 * k + 1] = 1
        gens.append(from_lattice_coordinates(family, coords))
    coords = [0] * size
    coords[-1] = 1
    gens.append(from_lattice_coordinates(family, coords))
    return gens


def gamma0_n1(r=(1, 1)):
    """Z^3 x Λ_r with Λ_r in H1(2), acting on H^3."""
    if len(r) != 2:
        raise ValueError("the N1 fixture uses H1(2), so r has two entries")
    shifts = [AffineMap.translation_by([u, 0, 0]) for u in (Quaternion(1), J, K)]
    lattice = [heisenberg_to_affine(g) for g in lambda_r_generators(r, "H1")]
    labels = ["T1", "TJ", "TK", "x1", "x2", "y1", "y2", "t"]
    return GeneratedGroup(shifts + lattice, labels)

