"""Quaternions over exact rationals or floats.

A quaternion ``w + x I + y J + z K`` multiplies with ``I J = K``.  Coefficients
are either all exact rationals (gmpy2 ``mpq``; the *exact* backend, used for group
enumeration where equality must be decidable) or all ``float`` (used for
spectra and irrational unit quaternions).  Mixing the two raises
:class:`~quatgeo.errors.BackendMismatch`; call :meth:`Quaternion.to_float` to
move an exact value to the float backend explicitly.
"""
from __future__ import annotations

import math
import numbers
import re
from fractions import Fraction
from math import isqrt

from gmpy2 import mpq

from .errors import BackendMismatch, ParseError

#: float equality tolerance
EPS = 1e-9
#: looser tolerance for recognition / hashing decisions
EPS_REC = 1e-6

EXACT = "exact"
FLOAT = "float"


def _is_float(v):
    return isinstance(v, float) or (
        isinstance(v, numbers.Real) and not isinstance(v, numbers.Rational)
    )


def rational(v):
    """Exact rational in lowest terms (gmpy2 ``mpq``)."""
    if type(v) is _MPQ:
        return v
    if isinstance(v, numbers.Rational) and not isinstance(v, bool):
        return mpq(int(v.numerator), int(v.denominator))
    if isinstance(v, bool):
        return mpq(int(v))
    raise TypeError(f"cannot use {v!r} as an exact rational")


_MPQ = type(mpq(0))


def _coerce(values):
    if any(_is_float(v) for v in values):
        return tuple(float(v) for v in values), False
    return tuple(rational(v) for v in values), True


class GaussianRational:
    """Exact complex number ``re + im i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = rational(re)
        self.im = rational(im)

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, numbers.Rational):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * GaussianRational(o.re / n, -o.im / n)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


class Quaternion:
    """Immutable quaternion ``w + x I + y J + z K``."""

    __slots__ = ("_c", "_exact")

    def __init__(self, w=0, x=0, y=0, z=0):
        self._c, self._exact = _coerce((w, x, y, z))

    @classmethod
    def _raw(cls, coeffs, exact):
        q = object.__new__(cls)
        q._c = coeffs
        q._exact = exact
        return q

    # -- accessors -----------------------------------------------------
    @property
    def w(self):
        return self._c[0]

    @property
    def x(self):
        return self._c[1]

    @property
    def y(self):
        return self._c[2]

    @property
    def z(self):
        return self._c[3]

    @property
    def coeffs(self):
        return self._c

    @property
    def exact(self):
        return self._exact

    @property
    def backend(self):
        return EXACT if self._exact else FLOAT

    @property
    def real(self):
        return self._c[0]

    @property
    def imag(self):
        """Imaginary part as a quaternion."""
        zero = self._c[0] * 0
        return Quaternion._raw((zero,) + self._c[1:], self._exact)

    # -- arithmetic ----------------------------------------------------
    def _check(self, other):
        if self._exact != other._exact:
            raise BackendMismatch(
                f"cannot combine {self.backend} and {other.backend} quaternions"
            )

    def _scalar(self, s):
        if isinstance(s, Quaternion):
            return None
        if isinstance(s, bool) or not isinstance(s, numbers.Real):
            return None
        if self._exact:
            if _is_float(s):
                raise BackendMismatch("float scalar with exact quaternion")
            return rational(s)
        return float(s)

    def __add__(self, other):
        if not isinstance(other, Quaternion):
            s = self._scalar(other)
            if s is None:
                return NotImplemented
            c = self._c
            return Quaternion._raw((c[0] + s, c[1], c[2], c[3]), self._exact)
        self._check(other)
        a, b = self._c, other._c
        return Quaternion._raw(
            (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]), self._exact
        )

    __radd__ = __add__

    def __neg__(self):
        a = self._c
        return Quaternion._raw((-a[0], -a[1], -a[2], -a[3]), self._exact)

    def __sub__(self, other):
        if not isinstance(other, Quaternion):
            s = self._scalar(other)
            if s is None:
                return NotImplemented
            return self + (-s)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Quaternion):
            s = self._scalar(other)
            if s is None:
                return NotImplemented
            a = self._c
            return Quaternion._raw((a[0] * s, a[1] * s, a[2] * s, a[3] * s), self._exact)
        self._check(other)
        a0, a1, a2, a3 = self._c
        b0, b1, b2, b3 = other._c
        return Quaternion._raw(
            (
                a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
            ),
            self._exact,
        )

    def __rmul__(self, other):
        # real scalars are central
        return self.__mul__(other)

    def __truediv__(self, other):
        """Division by a real scalar only; quaternion quotients are one-sided."""
        s = self._scalar(other)
        if s is None:
            return NotImplemented
        if s == 0:
            raise ZeroDivisionError("quaternion division by zero")
        return self * (1 / s)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.one_like()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self):
        a = self._c
        return Quaternion._raw((a[0], -a[1], -a[2], -a[3]), self._exact)

    def norm2(self):
        a = self._c
        return a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]

    def norm(self):
        return math.sqrt(self.norm2())

    def inverse(self):
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("inverse of the zero quaternion")
        a = self._c
        return Quaternion._raw((a[0] / n, -a[1] / n, -a[2] / n, -a[3] / n), self._exact)

    def is_zero(self, tol=EPS):
        if self._exact:
            return not any(self._c)
        return self.norm() <= tol

    def is_real(self, tol=EPS):
        return self.imag.is_zero(tol)

    def zero_like(self):
        return Quaternion._raw((self._c[0] * 0,) * 4, self._exact)

    def one_like(self):
        z = self._c[0] * 0
        return Quaternion._raw((z + 1, z, z, z), self._exact)

    def to_float(self):
        if not self._exact:
            return self
        return Quaternion._raw(tuple(float(v) for v in self._c), False)

    def close(self, other, tol=EPS):
        if not isinstance(other, Quaternion):
            other = Quaternion(other)
        d = [float(a) - float(b) for a, b in zip(self._c, other._c)]
        return math.sqrt(sum(v * v for v in d)) <= tol

    # -- comparisons ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, numbers.Real) and not isinstance(other, bool):
            other = Quaternion(other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        if self._exact and other._exact:
            return self._c == other._c
        return self.close(other, EPS)

    def __hash__(self):
        if not self._exact:
            raise TypeError("float quaternions are unhashable; quantize them first")
        return hash(self._c)

    # -- complex views ---------------------------------------------------
    def to_complex_pair(self):
        """Return ``(a, b)`` with ``q = a + b j`` and ``C = span{1, I}``.

        ``b = y + z i`` since ``K = I J``.  Exact quaternions give
        :class:`GaussianRational` parts, float ones give ``complex``.
        """
        w, x, y, z = self._c
        if self._exact:
            return GaussianRational(w, x), GaussianRational(y, z)
        return complex(w, x), complex(y, z)

    @classmethod
    def from_complex_pair(cls, a, b):
        if isinstance(a, GaussianRational) or isinstance(b, GaussianRational):
            a = GaussianRational._lift(a) if not isinstance(a, GaussianRational) else a
            b = GaussianRational._lift(b) if not isinstance(b, GaussianRational) else b
            return cls(a.re, a.im, b.re, b.im)
        a, b = complex(a), complex(b)
        return cls(a.real, a.imag, b.real, b.imag)

    @classmethod
    def from_complex(cls, c):
        if isinstance(c, GaussianRational):
            return cls(c.re, c.im)
        c = complex(c)
        return cls(c.real, c.imag)

    def __complex__(self):
        if not self.is_zero_jk():
            raise ValueError(f"{self} is not in span{{1, I}}")
        return complex(float(self._c[0]), float(self._c[1]))

    def is_zero_jk(self, tol=EPS):
        if self._exact:
            return self._c[2] == 0 and self._c[3] == 0
        return math.hypot(self._c[2], self._c[3]) <= tol

    def __repr__(self):
        return f"Quaternion({format_quaternion(self)!r})"

    def __str__(self):
        return format_quaternion(self)


ONE = Quaternion(1)
ZERO = Quaternion(0)
I = Quaternion(0, 1, 0, 0)
J = Quaternion(0, 0, 1, 0)
K = Quaternion(0, 0, 0, 1)


def quat(value):
    """Coerce an int/Fraction/float/complex/str/Quaternion to a Quaternion."""
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, str):
        return parse_quaternion(value)
    if isinstance(value, (complex, GaussianRational)):
        return Quaternion.from_complex(value)
    return Quaternion(value)


def same_backend(*qs):
    """Promote a collection of quaternions to a common backend."""
    if all(q.exact for q in qs):
        return list(qs)
    return [q.to_float() for q in qs]


def _fraction_sqrt(v):
    if v < 0:
        return None
    n, d = int(v.numerator), int(v.denominator)
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def conjugate_sphere_representative(lam):
    """The element ``w + t I`` (``t >= 0``) of the sphere ``{u^-1 lam u}``.

    Exact inputs stay exact whenever the imaginary norm is rational.
    """
    lam = quat(lam)
    w, x, y, z = lam.coeffs
    if lam.exact:
        t = _fraction_sqrt(x * x + y * y + z * z)
        if t is not None:
            return Quaternion(w, t)
        lam = lam.to_float()
        w = lam.w
    return Quaternion(float(w), math.sqrt(lam.imag.norm2()))


def sphere_conjugator(lam):
    """A unit float quaternion ``u`` with ``u^-1 lam u`` equal to the sphere representative."""
    lam = quat(lam).to_float()
    _, x, y, z = lam.coeffs
    r = math.sqrt(x * x + y * y + z * z)
    if r <= EPS:
        return Quaternion(1.0)
    vx, vy, vz = x / r, y / r, z / r
    # rotation u (.) u^-1 sending the I axis to the unit vector v
    c = vx
    if c < -1 + 1e-12:
        return Quaternion(0.0, 0.0, 1.0, 0.0)
    # u = normalize(1 + I.v + I x v)
    u = Quaternion(1.0 + c, 0.0, -vz, vy)
    return u / u.norm()


# -- text format -----------------------------------------------------------

_NUM = r"(?:\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)(?:\s*/\s*\d+)?"
_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?P<num>" + _NUM + r")?\s*\*?\s*(?P<unit>[ijkIJK](?![A-Za-z0-9]))?\s*"
)
_UNIT_INDEX = {"i": 1, "j": 2, "k": 3}


def _parse_number(text, exact_decimals=False):
    text = text.replace(" ", "")
    num, _, den = text.partition("/")
    is_decimal = any(ch in num for ch in ".eE")
    value = Fraction(num)
    if den:
        if int(den) == 0:
            raise ZeroDivisionError("zero denominator")
        value /= int(den)
    if is_decimal and not exact_decimals:
        return float(value)
    return value


def parse_quaternion(text, backend=None, *, line=None, column=None):
    """Parse ``"w + x i + y j + z k"``; coefficients may be ``p/q`` or decimals.

    Decimals select the float backend unless ``backend="exact"`` is forced,
    in which case they are read as exact decimal fractions.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty quaternion", line, column)
    coeffs = [Fraction(0)] * 4
    pos = 0
    first = True
    seen_float = False
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected text {s[pos:]!r}", line,
                             None if column is None else column + pos)
        sign, num, unit = m.group("sign"), m.group("num"), m.group("unit")
        if num is None and unit is None:
            raise ParseError(f"expected a term in {s!r}", line,
                             None if column is None else column + pos)
        if sign is None and not first:
            raise ParseError(f"missing '+' or '-' before {s[pos:].strip()!r}", line,
                             None if column is None else column + pos)
        try:
            value = (_parse_number(num, backend == EXACT) if num is not None
                     else Fraction(1))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad coefficient {num!r}: {exc}", line, column) from None
        if isinstance(value, float):
            seen_float = True
        if sign == "-":
            value = -value
        idx = _UNIT_INDEX[unit.lower()] if unit else 0
        coeffs[idx] = coeffs[idx] + value
        pos = m.end()
        first = False
    if backend == FLOAT or (seen_float and backend != EXACT):
        return Quaternion(*(float(c) for c in coeffs))
    return Quaternion(*coeffs)


def _format_coeff(v, digits=None):
    if isinstance(v, numbers.Rational):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if digits is not None:
        return f"{float(v):.{digits}g}"
    return repr(float(v))


def format_quaternion(q, digits=None):
    """Canonical text form, e.g. ``1 - i + 1/2 k``; zero renders as ``0``.

    Floats print losslessly by default; ``digits`` rounds them to that many
    significant digits and drops coefficients below ``1e-12``.
    """
    parts = []
    for coeff, unit in zip(q.coeffs, ("", "i", "j", "k")):
        if coeff == 0 or (digits is not None and not q.exact and abs(coeff) < 1e-12):
            continue
        neg = coeff < 0
        mag = -coeff if neg else coeff
        text = _format_coeff(mag, digits)
        if unit and (mag == 1 if q.exact else digits is not None and text == "1"):
            body = unit
        elif unit:
            body = f"{text} {unit}"
        else:
            body = text
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    if not parts:
        return "0" if q.exact or digits is not None else "0.0"
    return " ".join(parts)
