"""Heisenberg groups of type H and their integer lattices.

Four matrix families, all (n+2) x (n+2) upper unitriangular with an identity
middle block::

    Real(n):  [[1, a, c], [0, I, b^T], [0, 0, 1]]       a, b in R^n, c in R
    H1(n):    [[1, z, w], [0, I, -conj(z)^T], [0, 0, 1]] z in C^n
    H2(n):    [[1, xi, z], [0, I, omega^T], [0, 0, 1]]   xi, omega in C^n, z in C
    H3(n):    [[1, q, h], [0, I, -conj(q)^T], [0, 0, 1]] q in H^n

For H1 and H3 the corner is not free: products only stay in the family when
its real part is ``-|z|^2 / 2`` (resp. ``-|q|^2 / 2``).  The free parameter
is the imaginary part ``Im w`` (resp. ``Im h``), which is what elements store.

Complex numbers are quaternions with vanishing J and K parts.  Elements keep
their parameters; matrices are derived, and products are computed on the
matrices and read back, so leaving the family is caught immediately.

Only algebraic facts are checked here (closure, integrality, commutators).
Discreteness and uniformity of the lattices are not verified.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ExplosionCap, FamilyMismatch, InternalInconsistency, ShapeError, StepCapExceeded
from .qmatrix import QMatrix
from .quaternion import I, J, K, Quaternion, quat, rational

FAMILIES = ("Real", "H1", "H2", "H3")
LATTICE_NOTE = "lattices are checked as subgroups only; discreteness and uniformity are not verified"


def _is_complex(q):
    return q.y == 0 and q.z == 0


def _check_coeffs(family, values):
    for q in values:
        if family == "Real" and not q.is_real(0.0 if q.exact else 1e-9):
            raise ShapeError(f"Real family entries must be real, got {q}")
        if family in ("H1", "H2") and not _is_complex(q):
            raise ShapeError(f"{family} entries must be complex, got {q}")


class HeisenbergElement:
    """An element of one of the families, stored by its free parameters.

    ``top`` is the top row block (a, z, xi or q), ``right`` the right column
    block (b or omega; derived for H1/H3), ``center`` the free corner
    parameter (c, Im w, z or Im h).
    """

    __slots__ = ("family", "n", "top", "right", "center", "_matrix")

    def __init__(self, family, top, right=None, center=0):
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}")
        top = tuple(quat(v) for v in top)
        n = len(top)
        if n < 1:
            raise ShapeError("n must be at least 1")
        center = quat(center)
        if family in ("H1", "H3"):
            if right is not None:
                raise ShapeError(f"{family} right column is determined by the top row")
            right = tuple(-q.conjugate() for q in top)
            if center.w != 0:
                raise ShapeError(f"{family} free corner parameter must be imaginary")
            if family == "H1" and not _is_complex(center):
                raise ShapeError("H1 corner parameter must be a multiple of i")
        else:
            right = tuple(quat(v) for v in (right if right is not None else [0] * n))
            if len(right) != n:
                raise ShapeError("top and right blocks differ in length")
            _check_coeffs(family, right + (center,))
        _check_coeffs(family, top)
        self.family = family
        self.n = n
        self.top = top
        self.right = right
        self.center = center
        self._matrix = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def real(cls, a, b, c=0):
        return cls("Real", a, b, c)

    @classmethod
    def h1(cls, z, t=0):
        """``t`` is the real number with ``Im w = t i``."""
        return cls("H1", z, None, quat(t) * I)

    @classmethod
    def h2(cls, xi, omega, z=0):
        return cls("H2", xi, omega, z)

    @classmethod
    def h3(cls, q, imaginary=0):
        return cls("H3", q, None, quat(imaginary))

    @classmethod
    def identity(cls, family, n, exact=True):
        zero = Quaternion(0) if exact else Quaternion(0.0)
        if family in ("H1", "H3"):
            return cls(family, [zero] * n, None, zero)
        return cls(family, [zero] * n, [zero] * n, zero)

    # -- matrix view ----------------------------------------------------------
    def corner(self):
        if self.family in ("H1", "H3"):
            return self.center - sum((q.norm2() for q in self.top), self.center.zero_like()) / 2
        return self.center

    @property
    def matrix(self):
        if self._matrix is None:
            n = self.n
            zero = self.center.zero_like()
            one = zero.one_like()
            rows = [[one, *self.top, self.corner()]]
            for k in range(n):
                row = [zero] * (n + 2)
                row[k + 1] = one
                row[n + 1] = self.right[k]
                rows.append(row)
            rows.append([zero] * (n + 1) + [one])
            self._matrix = QMatrix(rows)
        return self._matrix

    @classmethod
    def from_matrix(cls, family, m):
        """Read parameters back from a matrix, checking it has the family's shape."""
        size = m.n
        n = size - 2
        if n < 1:
            raise ShapeError("Heisenberg matrices are at least 3x3")
        tol = 0.0 if m.exact else 1e-9
        for i in range(size):
            for j in range(size):
                if i > j or (0 < i < size - 1 and 0 < j < size - 1):
                    want = 1 if i == j else 0
                    if not (m[i, j] - want).is_zero(tol):
                        raise ShapeError(f"entry ({i}, {j}) leaves the {family} family")
        if not (m[size - 1, size - 1] - 1).is_zero(tol) or not (m[0, 0] - 1).is_zero(tol):
            raise ShapeError("diagonal must be 1")
        top = [m[0, j] for j in range(1, n + 1)]
        right = [m[i, n + 1] for i in range(1, n + 1)]
        corner = m[0, n + 1]
        if family in ("H1", "H3"):
            for q, r in zip(top, right):
                if not (r + q.conjugate()).is_zero(tol):
                    raise ShapeError(f"{family} right column is not -conj(top)")
            expected_re = -sum((q.norm2() for q in top), corner.zero_like()).w / 2
            if not (corner.w - expected_re == 0 if m.exact else abs(corner.w - expected_re) <= 1e-9):
                raise ShapeError(f"{family} corner real part is not -|top|^2/2")
            return cls(family, top, None, corner.imag)
        return cls(family, top, right, corner)

    # -- group structure --------------------------------------------------------
    @property
    def exact(self):
        return self.center.exact

    def _check_same(self, other):
        if not isinstance(other, HeisenbergElement):
            return NotImplemented
        if (self.family, self.n) != (other.family, other.n):
            raise FamilyMismatch(f"{self.family}({self.n}) versus {other.family}({other.n})")
        return None

    def __matmul__(self, other):
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return HeisenbergElement.from_matrix(self.family, self.matrix @ other.matrix)

    __mul__ = __matmul__

    def inverse(self):
        return HeisenbergElement.from_matrix(self.family, self.matrix.inverse())

    def is_identity(self, tol=0.0):
        return self.matrix.is_identity(tol)

    def key(self):
        return (self.family, self.n, self.top, self.right, self.center)

    def __eq__(self, other):
        if not isinstance(other, HeisenbergElement):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def params(self):
        name = {"Real": ("a", "b", "c"), "H1": ("z", None, "Im w"),
                "H2": ("xi", "omega", "z"), "H3": ("q", None, "Im h")}[self.family]
        out = {name[0]: self.top}
        if name[1]:
            out[name[1]] = self.right
        out[name[2]] = self.center
        return out

    def __repr__(self):
        return f"HeisenbergElement({self.family}({self.n}), {self.params()})"


def h_mul(g, h):
    return g @ h


def commutator(g, h):
    return g @ h @ g.inverse() @ h.inverse()


# -- standard generators ----------------------------------------------------------

def _unit(n, k, value):
    return [value if i == k else 0 for i in range(n)]


def standard_generators(family, n):
    """Integer generators, one per real coordinate direction; central ones last."""
    if family == "H3" and n < 1:
        raise ShapeError("n must be at least 1")
    zero = [0] * n
    gens = []
    if family == "Real":
        gens += [HeisenbergElement.real(_unit(n, k, 1), zero) for k in range(n)]
        gens += [HeisenbergElement.real(zero, _unit(n, k, 1)) for k in range(n)]
        gens.append(HeisenbergElement.real(zero, zero, 1))
    elif family == "H1":
        for u in (Quaternion(1), I):
            gens += [HeisenbergElement.h1(_unit(n, k, u)) for k in range(n)]
        gens.append(HeisenbergElement.h1(zero, 1))
    elif family == "H2":
        for u in (Quaternion(1), I):
            gens += [HeisenbergElement.h2(_unit(n, k, u), zero) for k in range(n)]
            gens += [HeisenbergElement.h2(zero, _unit(n, k, u)) for k in range(n)]
        gens += [HeisenbergElement.h2(zero, zero, u) for u in (Quaternion(1), I)]
    elif family == "H3":
        for u in (Quaternion(1), I, J, K):
            gens += [HeisenbergElement.h3(_unit(n, k, u)) for k in range(n)]
        gens += [HeisenbergElement.h3(zero, u) for u in (I, J, K)]
    else:
        raise ValueError(f"unknown family {family!r}")
    return gens


def central_generator_count(family):
    return {"Real": 1, "H1": 1, "H2": 2, "H3": 3}[family]


# -- nilpotency and center ----------------------------------------------------------

def nilpotency_step(generators, cap=6):
    """Smallest ``k`` such that every ``(k+1)``-fold left-normed commutator
    of generators and their inverses is trivial.

    Works for any elements with ``@``, ``inverse()`` and ``is_identity()``
    (Heisenberg elements or affine maps).  Abelian groups give 1.
    """
    letters = list(generators) + [g.inverse() for g in generators]
    level = [g for g in letters if not g.is_identity(0.0)]
    k = 0
    while level:
        k += 1
        if k > cap:
            raise StepCapExceeded(f"still nontrivial commutators at depth {cap}")
        nxt = {}
        for c in level:
            for g in letters:
                x = commutator(c, g)
                if not x.is_identity(0.0):
                    nxt.setdefault(x, None)
        level = list(nxt)
    return k


def _off_corner_zero(m):
    size = m.n
    return all(m[0, j].is_zero(0.0) for j in range(1, size - 1)) and \
        all(m[i, size - 1].is_zero(0.0) for i in range(1, size - 1))


def center_dimension_probe(family, n=1):
    """Real dimension spanned by commutators of the standard generators.

    Every commutator must land in the central coordinate block (only the
    corner entry nonzero), and the central generators must commute with all
    generators; either failure raises ``InternalInconsistency``.
    """
    from .groups import rational_rank

    gens = standard_generators(family, n)
    central = gens[-central_generator_count(family):]
    for c in central:
        for g in gens:
            if not commutator(c, g).is_identity(0.0):
                raise InternalInconsistency("a central direction fails to commute")
    vecs = []
    for i, g in enumerate(gens):
        for h in gens[i + 1:]:
            m = commutator(g, h).matrix
            if not _off_corner_zero(m):
                raise InternalInconsistency("commutator outside the central block")
            vecs.append(m[0, m.n - 1].coeffs)
    rank, _ = rational_rank(vecs)
    return rank


# -- lattices ---------------------------------------------------------------------

def lattice_coordinates(g):
    """Coordinates ``(a1, b1, ..., an, bn, c)`` of ``g``.

    Real(n): ``x = a``, ``y = b``, ``t = c``.  H1(n) goes through the
    isomorphism with Real(n) given by ``z = x + i y``, ``Im w = 2t - x.y``.
    H3(1): ``q = a1 + i b1 + j a2 + k b2`` and ``Im h = i a3 + j b3 + k c``.
    """
    if g.family == "Real":
        xs = [q.w for q in g.top]
        ys = [q.w for q in g.right]
        t = g.center.w
    elif g.family == "H1":
        xs = [q.w for q in g.top]
        ys = [q.x for q in g.top]
        t = (g.center.x + sum(x * y for x, y in zip(xs, ys))) / 2
    elif g.family == "H3":
        if g.n != 1:
            raise ValueError("integer coordinates on H3(n) are only fixed for n = 1 "
                             "(the 7-parameter lattice of H3(1))")
        q, h = g.top[0], g.center
        return (q.w, q.x, q.y, q.z, h.x, h.y, h.z)
    else:
        raise ValueError(f"no integer lattice coordinates on {g.family}")
    out = []
    for x, y in zip(xs, ys):
        out += [x, y]
    return tuple(out) + (t,)


def from_lattice_coordinates(family, coords):
    """Inverse of :func:`lattice_coordinates`."""
    coords = [rational(c) for c in coords]
    if len(coords) % 2 == 0:
        raise ShapeError("need 2n+1 coordinates")
    n = (len(coords) - 1) // 2
    xs, ys, t = coords[0:-1:2], coords[1:-1:2], coords[-1]
    if family == "Real":
        return HeisenbergElement.real(xs, ys, t)
    if family == "H1":
        z = [Quaternion(x, y) for x, y in zip(xs, ys)]
        return HeisenbergElement.h1(z, 2 * t - sum(x * y for x, y in zip(xs, ys)))
    if family == "H3":
        if n != 3:
            raise ValueError("H3(1) carries 7 lattice coordinates")
        a1, b1, a2, b2, a3, b3, c = coords
        return HeisenbergElement.h3([Quaternion(a1, b1, a2, b2)], Quaternion(0, a3, b3, c))
    raise ValueError(f"no integer lattice coordinates on {family}")


def _is_integer(v):
    v = rational(v)
    return v.denominator == 1


@dataclass(frozen=True)
class LatticeSpec:
    """``LambdaR`` (Λ_r), ``Lambda1n`` (all coordinates integer) or ``Delta``
    (integer with ``a1`` a multiple of ``m``)."""

    kind: str
    r: tuple = None
    n: int = None
    m: int = None

    def __post_init__(self):
        if self.kind == "LambdaR":
            r = tuple(self.r or ())
            if not r or any(not isinstance(x, int) or x < 1 for x in r):
                raise ValueError("r must be a nonempty vector of positive integers")
            if any(r[j + 1] % r[j] for j in range(len(r) - 1)):
                raise ValueError("r must satisfy r_j | r_(j+1)")
            object.__setattr__(self, "r", r)
            object.__setattr__(self, "n", len(r))
        elif self.kind == "Lambda1n":
            if not isinstance(self.n, int) or self.n < 1:
                raise ValueError("n must be a positive integer")
        elif self.kind == "Delta":
            if not isinstance(self.n, int) or self.n < 1:
                raise ValueError("n must be a positive integer")
            if not isinstance(self.m, int) or self.m < 2:
                raise ValueError("m must be an integer >= 2")
        else:
            raise ValueError(f"unknown lattice kind {self.kind!r}")

    def __str__(self):
        if self.kind == "LambdaR":
            return f"Lambda_r r={self.r}"
        if self.kind == "Lambda1n":
            return f"Lambda(1,{self.n})"
        return f"Delta(1,{self.n};{self.m})"


def LambdaR(r):
    return LatticeSpec("LambdaR", r=tuple(r))


def Lambda1n(n):
    return LatticeSpec("Lambda1n", n=n)


def Lambda13():
    return Lambda1n(3)


def Delta(n, m):
    return LatticeSpec("Delta", n=n, m=m)


def lattice_contains(spec, g):
    coords = lattice_coordinates(g)
    if len(coords) != 2 * spec.n + 1:
        raise ShapeError(f"{spec} has {2 * spec.n + 1} coordinates, element has {len(coords)}")
    if not all(_is_integer(c) for c in coords):
        return False
    if spec.kind == "LambdaR":
        return all(rational(coords[2 * k]) % r == 0 for k, r in enumerate(spec.r))
    if spec.kind == "Delta":
        return rational(coords[0]) % spec.m == 0
    return True


def lattice_generators(n, realization="Real"):
    """Unit-coordinate generators of Λ(1, n) in the given family."""
    size = 2 * n + 1
    return [from_lattice_coordinates(realization, [1 if i == k else 0 for i in range(size)])
            for k in range(size)]


def coset_representatives(n, m, realization="Real", cap=10 ** 4):
    """Left coset representatives of Δ(1,n;m) in Λ(1,n), by breadth-first search."""
    sub = Delta(n, m)
    gens = lattice_generators(n, realization)
    letters = gens + [g.inverse() for g in gens]
    ident = HeisenbergElement.identity(realization, gens[0].n)
    reps = [ident]
    inverses = [ident]
    i = 0
    while i < len(reps):
        g = reps[i]
        i += 1
        for x in letters:
            cand = g @ x
            if any(lattice_contains(sub, ri @ cand) for ri in inverses):
                continue
            reps.append(cand)
            inverses.append(cand.inverse())
            if len(reps) > cap:
                raise ExplosionCap(f"more than {cap} cosets")
    return reps


def covering_degree(n, m, realization="Real"):
    """The index ``[Λ(1,n) : Δ(1,n;m)]``."""
    return len(coset_representatives(n, m, realization))
