"""Finite subgroups of the unit quaternions.

Up to conjugation every finite subgroup of S^3 is one of the binary
icosahedral, octahedral and tetrahedral groups 2I, 2O, 2T, a binary dihedral
group 2D(n) of order 4n, a cyclic group 2C(n) = <exp(pi I / n)> of order 2n,
or an odd-order cyclic group 1C(n) of order n.

Elements are irrational in general, so groups are built in floating point.
Deduplication quantizes coordinates to a 1e-6 grid; every merge and every
pair of kept elements is then re-checked by distance.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .errors import ClosureError, NotAGroup, Unrecognized
from .quaternion import EPS_REC, Quaternion

GRID = 1e-6
CLOSURE_CAP = 10 ** 4

SIGMA = (math.sqrt(5) - 1) / 2
TAU = (math.sqrt(5) + 1) / 2

_ORDERS = {"TwoI": 120, "TwoO": 48, "TwoT": 24}
_SHORT = {"TwoI": "2I", "TwoO": "2O", "TwoT": "2T", "TwoD": "2D", "TwoC": "2C", "OneC": "1C"}


@dataclass(frozen=True)
class FiniteS3Class:
    kind: str  # TwoI, TwoO, TwoT, TwoD, TwoC, OneC
    n: int = None

    def __post_init__(self):
        if self.kind not in _SHORT:
            raise ValueError(f"unknown class {self.kind!r}")
        if self.kind in _ORDERS:
            if self.n is not None:
                raise ValueError(f"{self.kind} takes no parameter")
            return
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"{self.kind} needs a positive integer parameter")
        if self.kind == "OneC" and self.n % 2 == 0:
            raise ValueError("1C(n) is only defined for odd n; an even-order cyclic "
                             f"group is 2C({self.n // 2})")

    @property
    def order(self):
        if self.kind in _ORDERS:
            return _ORDERS[self.kind]
        return {"TwoD": 4, "TwoC": 2, "OneC": 1}[self.kind] * self.n

    def canonical(self):
        """The name recognition reports: 2D(1) is cyclic of order 4, i.e. 2C(2)."""
        if self.kind == "TwoD" and self.n == 1:
            return TwoC(2)
        return self

    def __str__(self):
        short = _SHORT[self.kind]
        return short if self.n is None else f"{short}({self.n})"


def TwoI():
    return FiniteS3Class("TwoI")


def TwoO():
    return FiniteS3Class("TwoO")


def TwoT():
    return FiniteS3Class("TwoT")


def TwoD(n):
    return FiniteS3Class("TwoD", n)


def TwoC(n):
    return FiniteS3Class("TwoC", n)


def OneC(n):
    return FiniteS3Class("OneC", n)


_CLASS_RE = re.compile(r"^\s*(2I|2O|2T|2D|2C|1C|TwoI|TwoO|TwoT|TwoD|TwoC|OneC)"
                       r"\s*(?:[(_]?\s*(\d+)\s*\)?)?\s*$")


def parse_class(text):
    """Read ``2T``, ``2D(3)``, ``2C4``, ``TwoD(3)``, ``1C(5)`` and the like."""
    m = _CLASS_RE.match(text)
    if not m:
        raise ValueError(f"unrecognized class name {text!r}")
    name, num = m.groups()
    kind = {v: k for k, v in _SHORT.items()}.get(name, name)
    return FiniteS3Class(kind, int(num) if num is not None else None)


# -- generators ---------------------------------------------------------------

def icosahedral_generator():
    return Quaternion(0.0, 0.5, SIGMA / 2, TAU / 2)


def octahedral_generator():
    r = 1 / math.sqrt(2)
    return Quaternion(0.0, 0.0, r, r)


def omega():
    return Quaternion(-0.5, 0.5, 0.5, 0.5)


def tetrahedral_generator():
    return Quaternion(0.0, 1.0, 0.0, 0.0)


def rotation_generator(n):
    """``exp(pi I / n)``; accepts a half-integer ``n`` for odd cyclic groups."""
    t = math.pi / n
    return Quaternion(math.cos(t), math.sin(t), 0.0, 0.0)


def generators(cls):
    k = cls.kind
    if k == "TwoI":
        return [icosahedral_generator(), omega()]
    if k == "TwoO":
        return [octahedral_generator(), omega()]
    if k == "TwoT":
        return [tetrahedral_generator(), omega()]
    if k == "TwoD":
        return [rotation_generator(cls.n), Quaternion(0.0, 0.0, 1.0, 0.0)]
    if k == "TwoC":
        return [rotation_generator(cls.n)]
    return [rotation_generator(cls.n / 2)]


# -- canonical hashing --------------------------------------------------------

def _snap(v):
    r = round(v)
    return float(r) if abs(v - r) < 1e-9 else v


def quantize(q):
    return tuple(round(_snap(float(c)) / GRID) for c in q.coeffs)


def _dist(p, q):
    return math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(p.coeffs, q.coeffs)))


class _QuantizedSet:
    """Insertion-ordered set of unit quaternions keyed on the 1e-6 grid."""

    def __init__(self):
        self.items = {}

    def find(self, q):
        hit = self.items.get(quantize(q))
        if hit is not None and _dist(hit, q) > EPS_REC:
            raise ClosureError("grid collision between distinct elements")
        return hit

    def add(self, q):
        if self.find(q) is not None:
            return False
        self.items[quantize(q)] = q
        return True

    def __len__(self):
        return len(self.items)

    def values(self):
        return list(self.items.values())


def _audit(elements):
    for i, p in enumerate(elements):
        for q in elements[i + 1:]:
            if _dist(p, q) <= EPS_REC:
                raise ClosureError("two kept elements coincide")


def close_under_products(gens, cap=CLOSURE_CAP):
    """The finite group generated by unit quaternions ``gens`` (float)."""
    gens = [g.to_float() for g in gens]
    for g in gens:
        if abs(g.norm() - 1) > EPS_REC:
            raise ValueError("generators must be unit quaternions")
    seen = _QuantizedSet()
    one = Quaternion(1.0)
    seen.add(one)
    queue = [one]
    i = 0
    while i < len(queue):
        q = queue[i]
        i += 1
        for g in gens:
            p = q * g
            if seen.add(p):
                queue.append(p)
                if len(seen) > cap:
                    raise ClosureError(f"closure did not stabilize within {cap} elements")
    out = seen.values()
    _audit(out)
    return out


def build(cls, cap=CLOSURE_CAP):
    """All elements of the canonical copy of ``cls``, identity first."""
    if isinstance(cls, str):
        cls = parse_class(cls)
    return close_under_products(generators(cls), cap)


# -- recognition ----------------------------------------------------------------

def element_order(q, limit):
    p = q
    for k in range(1, limit + 1):
        if _dist(p, Quaternion(1.0)) <= EPS_REC:
            return k
        p = p * q
    raise NotAGroup("element of infinite or excessive order")


def verify_group(elements):
    """Check closure, inverses and unit norm; returns the deduplicated float list."""
    s = _QuantizedSet()
    for q in elements:
        q = q.to_float() if isinstance(q, Quaternion) else Quaternion(float(q))
        if abs(q.norm() - 1) > EPS_REC:
            raise NotAGroup(f"{q} is not a unit quaternion")
        s.add(q)
    items = s.values()
    if not items or s.find(Quaternion(1.0)) is None:
        raise NotAGroup("identity missing")
    for p in items:
        if s.find(p.conjugate()) is None:
            raise NotAGroup(f"inverse of {p} missing")
        for q in items:
            if s.find(p * q) is None:
                raise NotAGroup(f"product {p} * {q} missing")
    return items


def signature(elements):
    """``(order, abelian, sorted element orders)`` of a verified group."""
    n = len(elements)
    abelian = all(_dist(p * q, q * p) <= EPS_REC for p in elements for q in elements)
    orders = tuple(sorted(Counter(element_order(q, n) for q in elements).elements()))
    return n, abelian, orders


def _candidates(order):
    out = []
    if order % 2 == 1:
        out.append(OneC(order))
    else:
        out.append(TwoC(order // 2))
    # 2D(1) is cyclic of order 4 and so already covered by 2C(2)
    if order % 4 == 0 and order >= 8:
        out.append(TwoD(order // 4))
    for kind, o in _ORDERS.items():
        if o == order:
            out.append(FiniteS3Class(kind))
    return out


@lru_cache(maxsize=None)
def _reference_signature(cls):
    return signature(build(cls))


def recognize(elements):
    """The class of a finite subgroup of S^3, by signature match."""
    items = verify_group(elements)
    sig = signature(items)
    for cls in _candidates(sig[0]):
        if _reference_signature(cls) == sig:
            return cls
    raise Unrecognized(f"no finite subgroup of S^3 has signature {sig}")
