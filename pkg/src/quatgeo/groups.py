"""Bounded exploration of finitely generated subgroups of Aff(2, H).

Everything here works on the exact backend so that group elements can be
hashed and deduplicated.  Properties such as freeness are only ever certified
*up to word length L*: a verdict covers the elements reachable by words of at
most ``L`` letters and says nothing beyond that ball.

Words are tuples of signed 1-based generator indices: ``(1, -2)`` is
``g1 @ g2^-1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .affine import AffineMap, commutator_sequence, fixed_points, in_G1, in_G2
from .errors import BackendMismatch, ExplosionCap, ImageNotFinite, InternalInconsistency, ShapeError
from .qmatrix import QMatrix, dieudonne_det_squared, vec_norm, vec_sub
from .quaternion import Quaternion, format_quaternion, rational

DEFAULT_MAX_WORD_LENGTH = 6
DEFAULT_ELEMENT_CAP = 10 ** 5
DEFAULT_IMAGE_CAP = 10 ** 4


class GeneratedGroup:
    """A subgroup of Aff(n, H) given by exact generators."""

    def __init__(self, generators, labels=None, n=None):
        generators = [g if isinstance(g, AffineMap) else AffineMap.from_matrix(g)
                      for g in generators]
        if any(not g.exact for g in generators):
            raise BackendMismatch("group exploration needs exact generators; "
                                  "float elements cannot be deduplicated safely")
        if labels is None:
            labels = [f"g{i + 1}" for i in range(len(generators))]
        if len(labels) != len(generators):
            raise ValueError("one label per generator")
        if len(set(labels)) != len(labels):
            raise ValueError("generator labels must be distinct")
        dims = {g.n for g in generators}
        if len(dims) > 1:
            raise ShapeError("generators act on spaces of different dimension")
        self.generators = tuple(generators)
        self.labels = tuple(labels)
        self.n = dims.pop() if dims else (2 if n is None else n)
        self._inverses = tuple(g.inverse() for g in generators)
        # shortlex letter order: labels sorted, each generator before its inverse
        order = sorted(range(len(generators)), key=lambda i: self.labels[i])
        self.letters = tuple(s * (i + 1) for i in order for s in (1, -1))

    def __len__(self):
        return len(self.generators)

    def identity(self):
        return AffineMap.identity(self.n)

    def letter(self, k):
        return self.generators[k - 1] if k > 0 else self._inverses[-k - 1]

    def element(self, word):
        g = self.identity()
        for k in word:
            g = g @ self.letter(k)
        return g

    def format_word(self, word):
        if not word:
            return "1"
        return " ".join(self.labels[abs(k) - 1] + ("" if k > 0 else "^-1") for k in word)

    def conjugate(self, m):
        """The group ``m^-1 G m`` with the same labels."""
        mi = m.inverse()
        return GeneratedGroup([mi @ g @ m for g in self.generators], self.labels, self.n)


def invert_word(word):
    return tuple(-k for k in reversed(word))


def reduce_word(word):
    out = []
    for k in word:
        if out and out[-1] == -k:
            out.pop()
        else:
            out.append(k)
    return tuple(out)


# -- enumeration -------------------------------------------------------------

@dataclass
class Enumeration:
    group: GeneratedGroup
    max_word_length: int
    elements: dict  # AffineMap -> shortest word (shortlex)
    closed: bool

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements.items())

    def nontrivial(self):
        ident = self.group.identity()
        return [(g, w) for g, w in self.elements.items() if g != ident]


def enumerate_group(group, max_word_length=DEFAULT_MAX_WORD_LENGTH, cap=DEFAULT_ELEMENT_CAP):
    """All elements given by words of length <= ``max_word_length``.

    Breadth first with letters in shortlex order, so each element keeps its
    shortlex-least word.  ``closed`` is set when a layer adds nothing new,
    in which case the result is the whole (finite) group.
    """
    ident = group.identity()
    found = {ident: ()}
    frontier = [ident]
    letters = [(k, group.letter(k)) for k in group.letters]
    closed = not letters
    for _ in range(max_word_length):
        new = []
        for g in frontier:
            w = found[g]
            for k, m in letters:
                h = g @ m
                if h not in found:
                    found[h] = w + (k,)
                    new.append(h)
                    if len(found) > cap:
                        raise ExplosionCap(f"more than {cap} elements")
        frontier = new
        if not new:
            closed = True
            break
    return Enumeration(group, max_word_length, found, closed)


# -- freeness --------------------------------------------------------------

@dataclass
class FreenessVerdict:
    free: bool
    max_word_length: int
    checked: int
    witness_word: tuple = None
    witness: AffineMap = None
    fixed_point: tuple = None

    def describe(self, group=None):
        if self.free:
            return f"free up to word length {self.max_word_length}"
        w = group.format_word(self.witness_word) if group else str(self.witness_word)
        pt = ", ".join(format_quaternion(q) for q in self.fixed_point)
        return f"violated: {w} fixes ({pt})"


def _has_eigenvalue_one(h):
    n = h.n
    return dieudonne_det_squared(h - QMatrix.identity(n, h.exact)) == 0


def freeness_probe(group, max_word_length=DEFAULT_MAX_WORD_LENGTH, cap=DEFAULT_ELEMENT_CAP,
                   enumeration=None):
    """Look for a nontrivial element with a fixed point among short words.

    Each element found fixed-point free is also checked to have 1 as a right
    eigenvalue of its holonomy (a free action forces this).
    """
    if enumeration is None:
        enumeration = enumerate_group(group, max_word_length, cap)
    checked = 0
    for g, w in enumeration.nontrivial():
        fp = fixed_points(g)
        checked += 1
        if not fp.empty:
            return FreenessVerdict(False, enumeration.max_word_length, checked, w, g, fp.point)
        if not _has_eigenvalue_one(g.holonomy):
            raise InternalInconsistency(
                f"{group.format_word(w)} has no fixed point but 1 is not an eigenvalue")
    return FreenessVerdict(True, enumeration.max_word_length, checked)


# -- unipotency ----------------------------------------------------------------

@dataclass(frozen=True)
class UnipotencyCertificate:
    word: tuple
    exponent: int


def unipotency_check(g, word=()):
    """Smallest ``k`` with ``(g - 1)^k = 0`` on the matrix view, or ``None``."""
    m = g.matrix
    size = m.n
    nil = m - QMatrix.identity(size, m.exact)
    power = nil
    for k in range(1, size + 1):
        if power.is_zero(0.0 if m.exact else 1e-9):
            return UnipotencyCertificate(tuple(word), k)
        power = power @ nil
    return None


def is_unipotent(g):
    return unipotency_check(g) is not None


# -- phi and its kernel --------------------------------------------------------

def phi(g):
    """The ``d`` entry of a G2-shaped element.

    Callers should check ``|d| == 1``; anything else means the group cannot
    satisfy the compact-quotient hypotheses.
    """
    if not in_G2(g):
        raise ShapeError("phi is only defined on G2-shaped elements")
    return g.entry(1, 1)


def is_unit(q):
    return q.norm2() == 1 if q.exact else abs(q.norm() - 1) <= 1e-9


@dataclass
class KernelResult:
    quotient: list  # image of phi, as exact quaternions in discovery order
    coset_representatives: dict  # quaternion -> word
    generator_words: list
    generator_elements: list

    @property
    def order(self):
        return len(self.quotient)


def phi_image(group, cap=DEFAULT_IMAGE_CAP):
    """Close ``{phi(g_i)}`` under multiplication; also returns shortest coset words."""
    letters = []
    for k in group.letters:
        letters.append((k, phi(group.letter(k))))
    one = Quaternion(1)
    reps = {one: ()}
    queue = [one]
    i = 0
    while i < len(queue):
        q = queue[i]
        i += 1
        for k, d in letters:
            p = q * d
            if p not in reps:
                reps[p] = reps[q] + (k,)
                queue.append(p)
                if len(reps) > cap:
                    raise ImageNotFinite(f"phi image exceeds {cap} elements")
    return queue, reps


def kernel_subgroup(group, cap=DEFAULT_IMAGE_CAP):
    """Schreier generators ``r_q g r_{q phi(g)}^-1`` of ``ker phi``.

    Coset representatives are shortlex-least words, found by breadth-first
    search over the finite image of ``phi``.
    """
    quotient, reps = phi_image(group, cap)
    words = []
    elements = []
    seen = set()
    for q in quotient:
        rq = reps[q]
        for i in range(1, len(group) + 1):
            target = q * phi(group.letter(i))
            word = reduce_word(rq + (i,) + invert_word(reps[target]))
            if not word or word in seen:
                continue
            seen.add(word)
            el = group.element(word)
            if el.is_identity(0.0):
                continue
            if phi(el) != 1:
                raise InternalInconsistency("Schreier generator outside the kernel")
            words.append(word)
            elements.append(el)
    return KernelResult(quotient, reps, words, elements)


# -- translations --------------------------------------------------------------

def translation_vector(g):
    """The translation column as rationals in R^(4n)."""
    return tuple(c for q in g.translation for c in q.coeffs)


def rational_rank(vectors):
    """Rank over Q and indices of a maximal independent subset (in input order)."""
    basis_rows = []  # (pivot column, reduced row)
    chosen = []
    for idx, v in enumerate(vectors):
        row = [rational(x) for x in v]
        for col, b in basis_rows:
            if row[col] != 0:
                f = row[col] / b[col]
                row = [x - f * y for x, y in zip(row, b)]
        piv = next((c for c, x in enumerate(row) if x != 0), None)
        if piv is not None:
            basis_rows.append((piv, row))
            chosen.append(idx)
    return len(chosen), chosen


def _translation_shape(g):
    if g.n == 2:
        return in_G1(g)
    h = g.holonomy
    n = h.n
    return all((h[i, j] - (1 if i == j else 0)).is_zero(0.0)
               for i in range(n) for j in range(i + 1) )


@dataclass
class TranslationRank:
    rank: int
    basis: list  # translation vectors in R^(4n)
    witnesses: list  # words
    pure_translation_rank: int
    ambient_dimension: int

    @property
    def full(self):
        return self.rank == self.ambient_dimension


def translation_rank(group, max_word_length=DEFAULT_MAX_WORD_LENGTH, cap=DEFAULT_ELEMENT_CAP,
                     enumeration=None):
    """Real rank of the translational parts of short elements.

    Collects ``(r, s)`` from elements with holonomy ``[[a, b], [0, 1]]``
    (pure translations included).  A compact quotient needs rank ``4n``.
    """
    if enumeration is None:
        enumeration = enumerate_group(group, max_word_length, cap)
    vecs, words, pure = [], [], []
    for g, w in enumeration:
        if g.is_identity(0.0):
            continue
        if _translation_shape(g):
            vecs.append(translation_vector(g))
            words.append(w)
        if g.is_translation(0.0):
            pure.append(translation_vector(g))
    rank, idx = rational_rank(vecs)
    pure_rank, _ = rational_rank(pure)
    return TranslationRank(rank, [vecs[i] for i in idx], [words[i] for i in idx],
                           pure_rank, 4 * group.n)


# -- orbit accumulation ----------------------------------------------------------

@dataclass
class OrbitProbe:
    start: tuple
    points: list  # C_n(start) for n = 1..N
    distances: list  # |C_n(start) - start|
    start_record: list = field(default_factory=list)  # (n, running min of distances)
    pairwise_record: list = field(default_factory=list)  # (n, running min pairwise distance)

    @property
    def min_distance(self):
        return min(self.distances) if self.distances else math.inf

    def distinct_points(self, tol=1e-9):
        reps = []
        for p in self.points:
            if all(vec_norm(vec_sub(p, r)) > tol for r in reps):
                reps.append(p)
        return len(reps)


def orbit_accumulation_probe(a, b, point, iterations=200):
    """Points ``C_n(point)``, ``C_n = a^-n b a^n b^-1``, for ``n = 1..iterations``.

    Records every strict decrease of the running minimum distance to the
    starting point, and of the running minimum pairwise distance among the
    orbit points.
    """
    a, b = a.to_float(), b.to_float()
    p0 = tuple(Quaternion(*(float(c) for c in q.coeffs)) if isinstance(q, Quaternion)
               else Quaternion(float(q)) for q in point)
    points, dists = [], []
    start_rec, pair_rec = [], []
    best_start = math.inf
    best_pair = math.inf
    for n in range(1, iterations + 1):
        c = commutator_sequence(a, b, n)
        x = c(p0)
        dist = vec_norm(vec_sub(x, p0))
        if dist < best_start:
            best_start = dist
            start_rec.append((n, dist))
        for y in points:
            dp = vec_norm(vec_sub(x, y))
            if dp < best_pair:
                best_pair = dp
                pair_rec.append((n, dp))
        points.append(x)
        dists.append(dist)
    return OrbitProbe(p0, points, dists, start_rec, pair_rec)


# -- full pipeline ---------------------------------------------------------------

NOT_COMPACT = "quotient not compact: translational parts do not span H^n over R"
COMPACTNESS_GAP = ("full translation rank is necessary for a compact quotient; "
                   "compactness itself is not verified")


@dataclass
class ExplorationReport:
    max_word_length: int
    elements_found: int
    freeness: dict
    unipotent_all: bool
    phi_image: object  # list of quaternion strings, or a dict describing the failure
    kernel_generators: list
    translation_rank: int
    closed: bool = False
    non_unipotent_witness: str = None
    quotient_order: int = None
    quotient_class: str = None
    kernel_unipotent_all: bool = None
    translation_basis: list = field(default_factory=list)
    translation_witnesses: list = field(default_factory=list)
    pure_translation_rank: int = 0
    compactness: str = COMPACTNESS_GAP
    labels: list = field(default_factory=list)

    @property
    def free(self):
        return self.freeness["status"] == "free-up-to-L"

    def as_dict(self):
        return {
            "max_word_length": self.max_word_length,
            "elements_found": self.elements_found,
            "closed": self.closed,
            "freeness": self.freeness,
            "unipotent_all": self.unipotent_all,
            "non_unipotent_witness": self.non_unipotent_witness,
            "phi_image": self.phi_image,
            "quotient_order": self.quotient_order,
            "quotient_class": self.quotient_class,
            "kernel_generators": self.kernel_generators,
            "kernel_unipotent_all": self.kernel_unipotent_all,
            "translation_rank": self.translation_rank,
            "translation_basis": self.translation_basis,
            "translation_witnesses": self.translation_witnesses,
            "pure_translation_rank": self.pure_translation_rank,
            "compactness": self.compactness,
            "labels": self.labels,
        }


def _fmt_vector(v):
    return [str(c) for c in v]


def analyze(group, max_word_length=DEFAULT_MAX_WORD_LENGTH, cap=DEFAULT_ELEMENT_CAP,
            image_cap=DEFAULT_IMAGE_CAP):
    """Enumerate, probe freeness and unipotency, split off ker phi, measure translations."""
    from .s3 import recognize

    e = enumerate_group(group, max_word_length, cap)
    verdict = freeness_probe(group, enumeration=e)
    if verdict.free:
        freeness = {"status": "free-up-to-L", "max_word_length": e.max_word_length,
                    "statement": f"free up to word length {e.max_word_length}"}
    else:
        freeness = {"status": "violated", "witness": group.format_word(verdict.witness_word),
                    "fixed_point": [format_quaternion(q) for q in verdict.fixed_point],
                    "statement": verdict.describe(group)}

    bad = next((w for g, w in e if unipotency_check(g) is None), None)

    phi_info = None
    q_order = q_class = None
    kernel_words = []
    kernel_unipotent = None
    try:
        ker = kernel_subgroup(group, image_cap)
    except ShapeError:
        culprit = next(group.labels[i] for i, g in enumerate(group.generators) if not in_G2(g))
        phi_info = {"failure": "not G2-shaped", "witness": culprit}
    else:
        phi_info = [format_quaternion(q) for q in ker.quotient]
        q_order = ker.order
        kernel_words = [group.format_word(w) for w in ker.generator_words]
        kernel_unipotent = all(is_unipotent(g) for g in ker.generator_elements)
        nonunit = [q for q in ker.quotient if not is_unit(q)]
        if nonunit:
            q_class = f"not in S3 (|d| != 1 for {format_quaternion(nonunit[0])})"
        else:
            try:
                q_class = str(recognize(ker.quotient))
            except Exception as exc:  # recognition failure is a finding, not a crash
                q_class = f"unrecognized: {exc}"

    tr = translation_rank(group, enumeration=e)
    compactness = COMPACTNESS_GAP if tr.full else f"{NOT_COMPACT}; {COMPACTNESS_GAP}"
    return ExplorationReport(
        max_word_length=e.max_word_length,
        elements_found=len(e),
        freeness=freeness,
        unipotent_all=bad is None,
        phi_image=phi_info,
        kernel_generators=kernel_words,
        translation_rank=tr.rank,
        closed=e.closed,
        non_unipotent_witness=None if bad is None else group.format_word(bad),
        quotient_order=q_order,
        quotient_class=q_class,
        kernel_unipotent_all=kernel_unipotent,
        translation_basis=[_fmt_vector(v) for v in tr.basis],
        translation_witnesses=[group.format_word(w) for w in tr.witnesses],
        pure_translation_rank=tr.pure_translation_rank,
        compactness=compactness,
        labels=list(group.labels),
    )
