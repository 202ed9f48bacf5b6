"""Quaternionic affine maps ``p -> h p + t`` on H^n.

An :class:`AffineMap` is stored as its holonomy ``h`` (an invertible
:class:`QMatrix`) and translation column ``t``; :attr:`AffineMap.matrix` is the
``(n+1) x (n+1)`` view with last row ``(0, ..., 0, 1)``.  Composition follows
matrix multiplication, so ``(A @ B)(p) == A(B(p))``: ``B`` is applied first.

For ``n = 2`` the entries of the matrix view are named

    [[a, b, r],
     [c, d, s],
     [0, 0, 1]]

and ``G1`` / ``G2`` are the shapes with middle row ``(0, 1, s)`` and with
``a = 1, c = 0`` respectively.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateD, NotInvertible, ShapeError
from .qmatrix import (
    QMatrix,
    as_vector,
    dieudonne_det_squared,
    mat_vec,
    solve_left_linear,
    vec_add,
    vec_sub,
)
from .quaternion import EPS


class AffineMap:
    __slots__ = ("_h", "_t", "_hash")

    def __init__(self, holonomy, translation=None):
        h = holonomy if isinstance(holonomy, QMatrix) else QMatrix(holonomy)
        n = h.n
        if translation is None:
            t = tuple(h[0, 0].zero_like() for _ in range(n))
        else:
            t = as_vector(translation)
        if len(t) != n:
            raise ShapeError("translation length does not match the holonomy")
        t_exact = all(q.exact for q in t)
        if h.exact and not t_exact:
            h = h.to_float()
        elif not h.exact:
            t = tuple(q.to_float() for q in t)
        if dieudonne_det_squared(h) == 0:
            raise NotInvertible("holonomy is singular")
        self._h = h
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, h, t):
        a = object.__new__(cls)
        a._h = h
        a._t = t
        a._hash = None
        return a

    @classmethod
    def from_matrix(cls, m):
        """Build from an ``(n+1) x (n+1)`` matrix whose last row is ``(0, ..., 0, 1)``."""
        m = m if isinstance(m, QMatrix) else QMatrix(m)
        size = m.n
        if size < 2:
            raise ShapeError("affine matrix must be at least 2x2")
        last = m.rows[-1]
        if any(not q.is_zero(0.0) for q in last[:-1]) or last[-1] != 1:
            raise ShapeError("last row of an affine matrix must be (0, ..., 0, 1)")
        n = size - 1
        h = QMatrix([row[:n] for row in m.rows[:n]])
        t = tuple(row[n] for row in m.rows[:n])
        return cls(h, t)

    @classmethod
    def identity(cls, n=2, exact=True):
        return cls(QMatrix.identity(n, exact))

    @classmethod
    def translation_by(cls, t):
        t = as_vector(t)
        return cls(QMatrix.identity(len(t), all(q.exact for q in t)), t)

    # -- views -----------------------------------------------------------
    @property
    def holonomy(self):
        return self._h

    @property
    def translation(self):
        return self._t

    @property
    def n(self):
        return len(self._t)

    @property
    def exact(self):
        return self._h.exact

    @property
    def matrix(self):
        n = self.n
        zero = self._h[0, 0].zero_like()
        rows = [list(self._h.rows[i]) + [self._t[i]] for i in range(n)]
        rows.append([zero] * n + [zero.one_like()])
        return QMatrix(rows)

    def entry(self, i, j):
        """Entry of the matrix view (0-based)."""
        n = self.n
        if i < n and j < n:
            return self._h[i, j]
        if i < n:
            return self._t[i]
        zero = self._h[0, 0].zero_like()
        return zero.one_like() if j == n else zero

    def to_float(self):
        if not self.exact:
            return self
        return AffineMap._raw(self._h.to_float(), tuple(q.to_float() for q in self._t))

    # -- group operations ----------------------------------------------
    def __matmul__(self, other):
        if not isinstance(other, AffineMap):
            return NotImplemented
        a, b = self, other
        if a.exact != b.exact:
            a, b = a.to_float(), b.to_float()
        h = a._h @ b._h
        t = vec_add(mat_vec(a._h, b._t), a._t)
        return AffineMap._raw(h, t)

    def __call__(self, p):
        return act(self, p)

    def inverse(self):
        try:
            hi = self._h.inverse()
        except NotInvertible:
            raise NotInvertible("holonomy is singular") from None
        t = tuple(-q for q in mat_vec(hi, self._t))
        return AffineMap._raw(hi, t)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = AffineMap.identity(self.n, self.exact)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_identity(self, tol=EPS):
        return self._h.is_identity(tol) and all(q.is_zero(tol) for q in self._t)

    def is_translation(self, tol=EPS):
        return self._h.is_identity(tol)

    # -- comparison ----------------------------------------------------------
    def key(self):
        return tuple(q.coeffs for r in self._h.rows for q in r) + tuple(q.coeffs for q in self._t)

    def __eq__(self, other):
        if not isinstance(other, AffineMap):
            return NotImplemented
        if self.exact and other.exact:
            return self.key() == other.key()
        return self._h.close(other._h, EPS) and all(
            x.close(y, EPS) for x, y in zip(self._t, other._t))

    def close(self, other, tol=EPS):
        return self._h.close(other._h, tol) and all(
            x.close(y, tol) for x, y in zip(self._t, other._t))

    def __hash__(self):
        if not self.exact:
            raise TypeError("float affine maps are unhashable")
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self):
        return f"AffineMap({self.matrix})"


def act(a, p):
    """Image of the point ``p`` under ``a``."""
    return vec_add(mat_vec(a.holonomy, p), a.translation)


def inverse(a):
    return a.inverse()


def holonomy(a):
    return a.holonomy


def g1_inverse_closed_form(a):
    """Inverse of a G1 element from its entries: ``[[a^-1, -a^-1 b, -a^-1 r + a^-1 b s], [0, 1, -s]]``."""
    if not in_G1(a):
        raise ShapeError("not a G1 element")
    x, b, r, s = a.entry(0, 0), a.entry(0, 1), a.entry(0, 2), a.entry(1, 2)
    xi = x.inverse()
    one = x.one_like()
    zero = x.zero_like()
    return AffineMap(QMatrix([[xi, -(xi * b)], [zero, one]]),
                     (-(xi * r) + xi * b * s, -s))


def _is_exactly(q, value, tol):
    return (q - value).is_zero(0.0 if q.exact else tol)


def in_G1(a, tol=EPS):
    """Middle row ``(0, 1, s)``."""
    if a.n != 2:
        return False
    return _is_exactly(a.entry(1, 0), 0, tol) and _is_exactly(a.entry(1, 1), 1, tol)


def in_G2(a, tol=EPS):
    """Top-left entry ``1`` and ``c = 0``."""
    if a.n != 2:
        return False
    return _is_exactly(a.entry(0, 0), 1, tol) and _is_exactly(a.entry(1, 0), 0, tol)


# -- fixed points ------------------------------------------------------------

@dataclass(frozen=True)
class FixedPointSet:
    """Fixed points ``point + sum(basis[k] c_k)`` (right coefficients ``c_k``)."""

    kind: str  # "empty", "point" or "affine"
    point: tuple = None
    basis: tuple = ()

    @property
    def empty(self):
        return self.kind == "empty"

    @property
    def dimension(self):
        return None if self.empty else len(self.basis)

    def contains(self, p, tol=EPS):
        if self.empty:
            return False
        diff = vec_sub(as_vector(p), self.point)
        if not self.basis:
            return all(q.is_zero(0.0 if q.exact else tol) for q in diff)
        sol = solve_left_linear(QMatrix.from_columns(self.basis), diff)
        return sol.consistent


def fixed_points(a):
    """All ``p`` with ``a(p) == p``: solves ``(h - 1) p = -t``."""
    n = a.n
    h = a.holonomy - QMatrix.identity(n, a.exact)
    sol = solve_left_linear(h, tuple(-q for q in a.translation))
    if not sol.consistent:
        return FixedPointSet("empty")
    kind = "point" if sol.kind == "unique" else "affine"
    return FixedPointSet(kind, sol.particular, sol.basis)


# -- closed forms in G2 shape -------------------------------------------------

def _g2_entries(a):
    if not in_G2(a):
        raise ShapeError("element is not in G2 shape")
    return a.entry(0, 1), a.entry(0, 2), a.entry(1, 1), a.entry(1, 2)


def _check_d(d):
    if (d - 1).is_zero(0.0 if d.exact else EPS):
        raise DegenerateD("d = 1: closed forms need d - 1 invertible")


def _g2(b, r, d, s):
    one = d.one_like()
    return AffineMap._raw(QMatrix([[one, b], [one * 0, d]]), (r, s))


def power_closed_form(a, n):
    """``a**n`` for ``a = [[1, b, r], [0, d, s]]`` with ``d != 1``.

    Top row ``(1, b (d-1)^-1 (d^n - 1), b (d-1)^-2 (d^n - 1) s + n r - n b (d-1)^-1 s)``,
    middle row ``(0, d^n, (d-1)^-1 (d^n - 1) s)``.  Negative ``n`` inverts ``a**|n|``.
    """
    b, r, d, s = _g2_entries(a)
    _check_d(d)
    if n < 0:
        return power_closed_form(a, -n).inverse()
    e = (d - 1).inverse()
    dn = d ** n
    g = dn - 1
    return _g2(b * e * g,
               b * e * e * g * s + r * n - b * e * s * n,
               dn,
               e * g * s)


def power(a, n):
    """Repeated multiplication; valid for every ``d``."""
    return a ** n


def commutator(a, b):
    """``a b a^-1 b^-1``."""
    return a @ b @ a.inverse() @ b.inverse()


def commutator_sequence_direct(a, b, n):
    return power(a, -n) @ b @ power(a, n) @ b.inverse()


def commutator_sequence(a, b, n):
    """``C_n = a^-n b a^n b^-1`` for G2-shaped ``a = [[1, b, r], [0, d, s]]``,
    ``b = [[1, f, u], [0, h, v]]`` from closed-form entries ``(h_n, f_n, u_n, v_n)``.
    """
    bb, _, d, s = _g2_entries(a)
    f, u, h, v = _g2_entries(b)
    _check_d(d)
    if n < 0:
        raise ValueError("commutator_sequence expects n >= 0")
    return _g2(*_commutator_entries(bb, d, s, f, h, v, n))


def _commutator_entries(b, d, s, f, h, v, n):
    e = (d - 1).inverse()
    dn = d ** n
    dmn = dn.inverse()
    g = dn - 1
    hi = h.inverse()
    conj = dmn * h * dn
    h_n = conj * hi
    beta = b * e * g
    f_n = f * g * hi + beta * (1 - conj) * hi
    v_n = -(conj * hi * v) + dmn * h * e * g * s + dmn * v - dmn * e * g * s
    u_n = (f * hi * v - f * dn * hi * v - beta * hi * v + beta * conj * hi * v
           + f * e * g * s - beta * dmn * h * e * g * s - beta * dmn * v + b * e * e * g * g * dmn * s)
    return f_n, u_n, h_n, v_n


def commutator_sequence_commuting(a, b, n):
    """``C_n`` when ``d`` and ``h`` commute, where ``h_n = 1`` and

    ``f_n = [f h^-1 + b (d-1)^-1 (h^-1 - 1)] (d^n - 1)``,
    ``u_n = -f (d^n - 1) [h^-1 v - (d-1)^-1 s] - b (d-1)^-1 (d^n - 1) (h^-1 v - v)
            + b (d-1)^-2 (d^n + d^-n - 2) (s - h s) - b (d-1)^-1 (1 - d^-n) v``,
    ``v_n = (1 - d^-n) [-v + (d-1)^-1 (h s - s)]``.

    The ``(d^n + d^-n - 2)`` factor follows from the general closed form with
    ``d^-n h d^n = h``; it is sometimes printed with the opposite sign.
    """
    bb, _, d, s = _g2_entries(a)
    f, u, h, v = _g2_entries(b)
    _check_d(d)
    if not (d * h - h * d).is_zero(0.0 if d.exact else EPS):
        raise ValueError("d and h do not commute")
    e = (d - 1).inverse()
    dn = d ** n
    dmn = dn.inverse()
    g = dn - 1
    hi = h.inverse()
    f_n = (f * hi + bb * e * (hi - 1)) * g
    u_n = (-(f * g * (hi * v - e * s)) - bb * e * g * (hi * v - v)
           + bb * e * e * (dn + dmn - 2) * (s - h * s) - bb * e * (1 - dmn) * v)
    v_n = (1 - dmn) * (-v + e * (h * s - s))
    return _g2(f_n, u_n, d.one_like(), v_n)
