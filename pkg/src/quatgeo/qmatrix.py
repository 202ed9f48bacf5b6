"""Quaternionic matrices acting on column vectors from the left.

Spectral notions are *right* eigenvalues: ``M v = v lam``.  The complex
representation used throughout is

    psi(A + j B) = [[A, -conj(B)], [B, conj(A)]]

where ``A, B`` are complex matrices (complex = span{1, I}) and ``j`` is written
on the *left* of ``B``.  With this placement psi is multiplicative; with ``j``
on the right the same block formula reverses products.  Equivalently, for
``q = a + b j`` the block is ``[[a, -b], [conj(b), conj(a)]]``.

A complex eigenvector ``(v1, v2)`` of ``psi(M)`` with eigenvalue ``lam``
corresponds to the quaternionic vector ``v = v1 + j v2`` with ``M v = v lam``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InternalInconsistency,
    NotAnEigenvalue,
    NotDiagonalizable,
    NotInvertible,
    ShapeError,
)
from .quaternion import (
    EPS,
    EPS_REC,
    GaussianRational,
    Quaternion,
    format_quaternion,
    quat,
    sphere_conjugator,
)


def _promote(rows):
    flat = [q for row in rows for q in row]
    if all(q.exact for q in flat):
        return rows
    return tuple(tuple(q.to_float() for q in row) for row in rows)


class QMatrix:
    """Immutable matrix of quaternions (row-major)."""

    __slots__ = ("_rows", "_exact")

    def __init__(self, rows):
        rows = tuple(tuple(quat(v) for v in row) for row in rows)
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ShapeError("matrix rows must be non-empty and of equal length")
        rows = _promote(rows)
        self._rows = rows
        self._exact = rows[0][0].exact

    @classmethod
    def _raw(cls, rows, exact):
        m = object.__new__(cls)
        m._rows = rows
        m._exact = exact
        return m

    @classmethod
    def identity(cls, n, exact=True):
        one = Quaternion(1) if exact else Quaternion(1.0)
        zero = one.zero_like()
        return cls._raw(
            tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)),
            exact,
        )

    @classmethod
    def zeros(cls, rows, cols=None, exact=True):
        zero = Quaternion(0) if exact else Quaternion(0.0)
        cols = rows if cols is None else cols
        return cls._raw(tuple((zero,) * cols for _ in range(rows)), exact)

    @classmethod
    def diag(cls, entries):
        entries = [quat(e) for e in entries]
        n = len(entries)
        zero = entries[0].zero_like()
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, n, q):
        return cls.diag([quat(q)] * n)

    @classmethod
    def from_columns(cls, columns):
        return cls([list(r) for r in zip(*columns)])

    # -- shape and access ---------------------------------------------
    @property
    def rows(self):
        return self._rows

    @property
    def shape(self):
        return len(self._rows), len(self._rows[0])

    @property
    def n(self):
        r, c = self.shape
        if r != c:
            raise ShapeError(f"matrix is {r}x{c}, not square")
        return r

    @property
    def exact(self):
        return self._exact

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def column(self, j):
        return tuple(row[j] for row in self._rows)

    def to_float(self):
        if not self._exact:
            return self
        return QMatrix._raw(tuple(tuple(q.to_float() for q in r) for r in self._rows), False)

    # -- arithmetic ------------------------------------------------------
    def _binary(self, other, op):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        a, b = self, other
        if a._exact != b._exact:
            a, b = a.to_float(), b.to_float()
        return QMatrix._raw(
            tuple(tuple(op(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a._rows, b._rows)),
            a._exact,
        )

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __neg__(self):
        return QMatrix._raw(tuple(tuple(-q for q in r) for r in self._rows), self._exact)

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            a, b = self, other
            if a._exact != b._exact:
                a, b = a.to_float(), b.to_float()
            if a.shape[1] != b.shape[0]:
                raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
            cols = list(zip(*b._rows))
            rows = []
            for ra in a._rows:
                row = []
                for cb in cols:
                    acc = ra[0] * cb[0]
                    for x, y in zip(ra[1:], cb[1:]):
                        acc = acc + x * y
                    row.append(acc)
                rows.append(tuple(row))
            return QMatrix._raw(tuple(rows), a._exact)
        return mat_vec(self, other)

    def right_mul(self, q):
        """Multiply every entry by ``q`` on the right."""
        q = quat(q)
        return QMatrix([[x * q for x in r] for r in self._rows])

    def inverse(self):
        n = self.n
        ident = QMatrix.identity(n, self._exact)
        red, pivots = _rref([list(r) + list(e) for r, e in zip(self._rows, ident._rows)],
                            n, self._exact, _scale(self))
        if len(pivots) < n:
            raise NotInvertible("matrix is singular")
        return QMatrix([row[n:] for row in red[:n]])

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QMatrix.identity(self.n, self._exact)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    # -- predicates ------------------------------------------------------
    def max_norm(self):
        return max(q.norm() for r in self._rows for q in r)

    def is_zero(self, tol=EPS):
        return all(q.is_zero(tol) for r in self._rows for q in r)

    def is_identity(self, tol=EPS):
        n = self.n
        return all(
            (self._rows[i][j] - (1 if i == j else 0)).is_zero(tol)
            for i in range(n) for j in range(n)
        )

    def is_diagonal(self, tol=EPS):
        r, c = self.shape
        return all(self._rows[i][j].is_zero(tol) for i in range(r) for j in range(c) if i != j)

    def close(self, other, tol=EPS):
        if self.shape != other.shape:
            return False
        return all(x.close(y, tol) for rx, ry in zip(self._rows, other._rows)
                   for x, y in zip(rx, ry))

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        if self._exact and other._exact:
            return self._rows == other._rows
        return self.close(other, EPS)

    def __hash__(self):
        if not self._exact:
            raise TypeError("float matrices are unhashable")
        return hash(tuple(q.coeffs for r in self._rows for q in r))

    def __repr__(self):
        return "QMatrix(" + format_matrix(self) + ")"

    def __str__(self):
        return format_matrix(self)


def format_matrix(m):
    return "[" + ", ".join("[" + ", ".join(format_quaternion(q) for q in r) + "]"
                           for r in m.rows) + "]"


# -- vectors -------------------------------------------------------------

def as_vector(v):
    return tuple(quat(x) for x in v)


def mat_vec(m, v):
    v = as_vector(v)
    if len(v) != m.shape[1]:
        raise ShapeError(f"vector of length {len(v)} for matrix {m.shape}")
    if not m.exact:
        v = tuple(x.to_float() for x in v)
    elif not all(x.exact for x in v):
        m = m.to_float()
    out = []
    for row in m.rows:
        acc = row[0] * v[0]
        for a, x in zip(row[1:], v[1:]):
            acc = acc + a * x
        out.append(acc)
    return tuple(out)


def vec_right_mul(v, q):
    return tuple(x * q for x in v)


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_norm(v):
    return math.sqrt(sum(float(x.norm2()) for x in v))


# -- elimination over H ----------------------------------------------------

def _scale(m):
    return max(1.0, m.max_norm())


def _rref(rows, ncols, exact, scale=1.0):
    """Reduced row echelon form using left row operations.

    ``rows`` is a list of lists (possibly augmented); only the first ``ncols``
    columns are used for pivoting.  Returns (reduced rows, pivot columns).
    """
    rows = [list(r) for r in rows]
    nrows = len(rows)
    tol = EPS * scale
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        if exact:
            p = next((i for i in range(r, nrows) if not rows[i][c].is_zero()), None)
        else:
            p = max(range(r, nrows), key=lambda i: rows[i][c].norm())
            if rows[p][c].norm() <= tol:
                p = None
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [inv * x for x in rows[r]]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if not f.is_zero(0.0):
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


@dataclass(frozen=True)
class LinearSolution:
    """Solution set ``particular + sum(basis[k] * c_k)`` with ``c_k`` in H (right coefficients)."""

    kind: str  # "unique", "affine" or "inconsistent"
    particular: tuple = None
    basis: tuple = ()

    @property
    def dimension(self):
        return None if self.kind == "inconsistent" else len(self.basis)

    @property
    def consistent(self):
        return self.kind != "inconsistent"


def solve_left_linear(m, b):
    """Solve ``m x = b`` over the division ring H by Gaussian elimination."""
    if not isinstance(m, QMatrix):
        m = QMatrix(m)
    b = as_vector(b)
    nrows, ncols = m.shape
    if len(b) != nrows:
        raise ShapeError("right-hand side length does not match the matrix")
    exact = m.exact and all(x.exact for x in b)
    if not exact:
        m = m.to_float()
        b = tuple(x.to_float() for x in b)
    red, pivots = _rref([list(r) + [x] for r, x in zip(m.rows, b)], ncols, exact, _scale(m))
    tol = EPS * max(_scale(m), vec_norm(b))
    for row in red[len(pivots):]:
        if not row[ncols].is_zero(0.0 if exact else tol):
            return LinearSolution("inconsistent")
    zero = b[0].zero_like() if b else Quaternion(0)
    one = zero.one_like()
    x = [zero] * ncols
    for r, c in enumerate(pivots):
        x[c] = red[r][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        h = [zero] * ncols
        h[f] = one
        for r, c in enumerate(pivots):
            h[c] = -red[r][f]
        basis.append(tuple(h))
    kind = "affine" if free else "unique"
    return LinearSolution(kind, tuple(x), tuple(basis))


# -- complex representation --------------------------------------------------

def psi_embed(m):
    """The 2n x 2n complex matrix of ``m``.

    Float matrices give a complex ``numpy`` array; exact ones give an object
    array of :class:`GaussianRational` so products can be compared exactly.
    """
    if not isinstance(m, QMatrix):
        m = QMatrix(m)
    r, c = m.shape
    if m.exact:
        out = np.empty((2 * r, 2 * c), dtype=object)
        for i in range(r):
            for k in range(c):
                a, b = m[i, k].to_complex_pair()
                out[i, k] = a
                out[i, c + k] = -b
                out[r + i, k] = b.conjugate()
                out[r + i, c + k] = a.conjugate()
        return out
    out = np.empty((2 * r, 2 * c), dtype=complex)
    for i in range(r):
        for k in range(c):
            a, b = m[i, k].to_complex_pair()
            out[i, k] = a
            out[i, c + k] = -b
            out[r + i, k] = b.conjugate()
            out[r + i, c + k] = a.conjugate()
    return out


def _exact_det(a):
    a = [list(r) for r in a]
    n = len(a)
    det = GaussianRational(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return GaussianRational(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        piv = a[c][c]
        det = det * piv
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / piv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def psi_det(m):
    """``det(psi(m))``: a nonnegative real (exact rational for exact input)."""
    p = psi_embed(m)
    if isinstance(m, QMatrix) and m.exact:
        d = _exact_det(p)
        if d.im != 0 or d.re < 0:
            raise InternalInconsistency(f"det psi = {d!r} is not a nonnegative real")
        return d.re
    d = complex(np.linalg.det(p))
    scale = float(np.prod(np.maximum(np.linalg.norm(p, axis=1), 1.0)))
    if abs(d.imag) > 1e-9 * scale or d.real < -1e-9 * scale:
        raise InternalInconsistency(f"det psi = {d} is not a nonnegative real")
    return max(d.real, 0.0)


def dieudonne_det_squared(m):
    """Square of the Dieudonne determinant, from quaternionic elimination.

    Product of squared pivot norms; exact for exact input.
    """
    if not isinstance(m, QMatrix):
        m = QMatrix(m)
    n = m.n
    rows = [list(r) for r in m.rows]
    tol = EPS * _scale(m)
    acc = rows[0][0].norm2() * 0 + 1
    for c in range(n):
        if m.exact:
            p = next((i for i in range(c, n) if not rows[i][c].is_zero()), None)
        else:
            p = max(range(c, n), key=lambda i: rows[i][c].norm())
            if rows[p][c].norm() <= tol:
                p = None
        if p is None:
            return acc * 0
        rows[c], rows[p] = rows[p], rows[c]
        piv = rows[c][c]
        acc = acc * piv.norm2()
        inv = piv.inverse()
        for i in range(c + 1, n):
            f = rows[i][c] * inv
            rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return acc


def dieudonne_det(m):
    """Dieudonne determinant: nonnegative real, zero iff ``m`` is singular."""
    return math.sqrt(float(dieudonne_det_squared(m)))


def right_shift_det(m, lam):
    """``sqrt|det(psi(m) - lam I_2n)|`` for a complex ``lam``.

    This is the determinant of ``v -> m v - v lam`` (``lam`` multiplying on the
    right) in the complex representation; it vanishes exactly when ``lam`` is a
    right eigenvalue.  For real ``lam`` it equals ``dieudonne_det(m - lam I)``.
    The left-scalar shift ``m - lam I`` does *not* vanish for nonreal ``lam``
    in general (already ``[[J]]`` with ``lam = i`` gives ``|J - I| = sqrt 2``).
    """
    if not isinstance(m, QMatrix):
        m = QMatrix(m)
    p = psi_embed(m.to_float())
    d = np.linalg.det(p - complex(lam) * np.eye(p.shape[0]))
    return math.sqrt(abs(d))


# -- spectra ---------------------------------------------------------------

@dataclass(frozen=True)
class Spectrum:
    """Right spectrum as complex sphere representatives (imaginary part >= 0)."""

    values: tuple = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def multiplicities(self, tol=EPS_REC):
        groups = []
        for v in self.values:
            for g in groups:
                if abs(g[0] - v) <= tol * max(1.0, abs(v)):
                    g[1] += 1
                    break
            else:
                groups.append([v, 1])
        return [(v, k) for v, k in groups]

    def contains(self, lam, tol=EPS_REC):
        lam = complex(lam)
        lam = complex(lam.real, abs(lam.imag))
        return any(abs(v - lam) <= tol * max(1.0, abs(v)) for v in self.values)

    def close(self, other, tol=EPS_REC):
        if len(self) != len(other):
            return False
        return all(abs(a - b) <= tol * max(1.0, abs(a)) for a, b in zip(self.values, other.values))


def pair_conjugates(eigs, tol=EPS_REC):
    """Pair eigenvalues of psi(M) into conjugate pairs; return representatives."""
    remaining = sorted((complex(e) for e in eigs), key=lambda z: (z.real, abs(z.imag)))
    reps = []
    while remaining:
        z = remaining.pop(0)
        if not remaining:
            raise InternalInconsistency(f"unpaired eigenvalue {z}")
        target = z.conjugate()
        k = min(range(len(remaining)), key=lambda i: abs(remaining[i] - target))
        w = remaining[k]
        if abs(w - target) > tol * max(1.0, abs(z)):
            raise InternalInconsistency(f"eigenvalue {z} has no conjugate partner")
        remaining.pop(k)
        mean = (z + w.conjugate()) / 2
        reps.append(complex(mean.real, abs(mean.imag)))
    reps.sort(key=lambda z: (z.real, z.imag))
    return tuple(reps)


def right_eigenvalues(m):
    """Right spectrum of ``m``: n complex representatives, with multiplicity."""
    if not isinstance(m, QMatrix):
        m = QMatrix(m)
    m.n
    eigs = np.linalg.eigvals(psi_embed(m.to_float()))
    return Spectrum(pair_conjugates(eigs))


def _to_quaternion_vector(cvec, n):
    v1, v2 = cvec[:n], cvec[n:]
    # v1 + j v2 with j (a + b i) = a J - b K
    return tuple(Quaternion(float(a.real), float(a.imag), float(b.real), float(-b.imag))
                 for a, b in zip(v1, v2))


def _residual(m, v, lam):
    lhs = mat_vec(m, v)
    rhs = vec_right_mul(v, lam)
    return vec_norm(vec_sub(lhs, rhs))


def _normalize(v, lam):
    """Rescale v on the right without leaving the eigenvalue ``lam``."""
    p = max(range(len(v)), key=lambda i: v[i].norm())
    vp = v[p]
    if lam.is_real(EPS):
        u = vp.conjugate() / vp.norm()
    else:
        a = complex(vp.w, vp.x)
        if abs(a) <= EPS:
            return v
        c = a.conjugate() / abs(a)
        u = Quaternion(c.real, c.imag, 0.0, 0.0)
    return vec_right_mul(v, u)


def _eigen_nullspace(m, lam):
    p = psi_embed(m.to_float())
    shifted = p - complex(lam) * np.eye(p.shape[0])
    _, s, vh = np.linalg.svd(shifted)
    scale = max(1.0, float(np.abs(p).max()))
    tol = EPS_REC * scale
    null = [vh[k].conjugate() for k in range(len(s)) if s[k] <= tol]
    return null, float(s[-1]) / scale


def right_eigenspace(m, lam):
    """Quaternionic eigenvectors spanning the eigenspace of the representative ``lam``."""
    if not isinstance(m, QMatrix):
        m = QMatrix(m)
    n = m.n
    lam_q = Quaternion(complex(lam).real, complex(lam).imag)
    null, _ = _eigen_nullspace(m, lam)
    if not null:
        raise NotAnEigenvalue(f"{lam} is not a right eigenvalue")
    vectors = [_normalize(_to_quaternion_vector(c, n), lam_q) for c in null]
    mf = m.to_float()
    for v in vectors:
        if _residual(mf, v, lam_q) > 1e-6 * vec_norm(v) * _scale(mf):
            raise InternalInconsistency("eigenvector failed its residual check")
    return vectors


def right_eigenvector(m, lam):
    """A nonzero ``v`` with ``m v = v lam`` for a complex representative ``lam``."""
    return right_eigenspace(m, lam)[0]


def _independent(u, v):
    d = dieudonne_det(QMatrix.from_columns([u, v]))
    return d > EPS_REC * vec_norm(u) * vec_norm(v)


def diagonalize_2x2(m):
    """Return ``(P, D)`` with ``m = P D P^-1`` and ``D`` diagonal of sphere representatives."""
    if not isinstance(m, QMatrix):
        m = QMatrix(m)
    if m.shape != (2, 2):
        raise ShapeError("diagonalize_2x2 needs a 2x2 matrix")
    if m.is_diagonal(0.0 if m.exact else EPS):
        d = [m[0, 0], m[1, 1]]
        if all(q.is_zero_jk() and (q.x >= 0) for q in d):
            return QMatrix.identity(2, m.exact), m
        us = [sphere_conjugator(q) for q in d]
        reps = [u.inverse() * q.to_float() * u for q, u in zip(d, us)]
        reps = [Quaternion(r.w, r.x) for r in reps]
        return QMatrix.diag(us), QMatrix.diag(reps)
    spec = right_eigenvalues(m)
    chosen = []
    for lam, _ in spec.multiplicities():
        try:
            vecs = right_eigenspace(m, lam)
        except NotAnEigenvalue:
            continue
        for v in vecs:
            if len(chosen) == 2:
                break
            if all(_independent(v, u) for u, _ in chosen):
                chosen.append((v, lam))
    if len(chosen) < 2:
        raise NotDiagonalizable("eigenvectors do not span H^2")
    p = QMatrix.from_columns([v for v, _ in chosen])
    d = QMatrix.diag([Quaternion(lam.real, lam.imag) for _, lam in chosen])
    mf = m.to_float()
    err = (mf - p @ d @ p.inverse()).max_norm()
    if err > 1e-6 * _scale(mf):
        raise NotDiagonalizable(f"reconstruction error {err:.3g}")
    return p, d
