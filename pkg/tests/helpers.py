"""Random instance builders shared by the test modules."""
import math
from fractions import Fraction

from quatgeo.affine import AffineMap
from quatgeo.qmatrix import QMatrix, dieudonne_det_squared
from quatgeo.quaternion import Quaternion


def rand_fraction(rng, bound=4, dens=(1, 2, 3)):
    return Fraction(rng.randint(-bound, bound), rng.choice(dens))


def rand_exact(rng, bound=4, nonzero=False):
    while True:
        q = Quaternion(*(rand_fraction(rng, bound) for _ in range(4)))
        if not nonzero or not q.is_zero():
            return q


def rand_float(rng, scale=1.0):
    return Quaternion(*(rng.gauss(0.0, scale) for _ in range(4)))


def rand_unit(rng):
    q = rand_float(rng)
    return q / q.norm()


def rand_matrix(rng, n=2, exact=True):
    make = rand_exact if exact else rand_float
    return QMatrix([[make(rng) for _ in range(n)] for _ in range(n)])


def rand_invertible(rng, n=2, exact=True):
    while True:
        m = rand_matrix(rng, n, exact)
        if dieudonne_det_squared(m) != 0 and (exact or math.sqrt(dieudonne_det_squared(m)) > 1e-3):
            return m


def rand_affine(rng, n=2):
    return AffineMap(rand_invertible(rng, n), [rand_exact(rng) for _ in range(n)])


def g2(b, r, d, s):
    return AffineMap.from_matrix([[1, b, r], [0, d, s], [0, 0, 1]])


def rand_g2(rng, d=None, avoid_one=True):
    while True:
        dd = d if d is not None else rand_exact(rng, 2, nonzero=True)
        if not avoid_one or dd != 1:
            return g2(rand_exact(rng), rand_exact(rng), dd, rand_exact(rng))
