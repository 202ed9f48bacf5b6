import math

import pytest

import oracles
from helpers import rand_exact, rand_fraction, rand_g2
from quatgeo.affine import AffineMap, commutator_sequence_direct, fixed_points
from quatgeo.errors import BackendMismatch, ExplosionCap, ImageNotFinite, ShapeError
from quatgeo.fixtures import example_generators, example_group
from quatgeo.groups import (NOT_COMPACT, GeneratedGroup, analyze, enumerate_group,
                            freeness_probe, invert_word, is_unipotent, kernel_subgroup, phi,
                            orbit_accumulation_probe, reduce_word, translation_rank,
                            unipotency_check)
from quatgeo.qmatrix import QMatrix, dieudonne_det_squared, right_eigenvalues, vec_norm, vec_sub
from quatgeo.quaternion import I, J, K, Quaternion
from quatgeo.s3 import TwoC, recognize


def translation_group(vectors):
    return GeneratedGroup([AffineMap.translation_by(v) for v in vectors])


def standard_lattice():
    basis = []
    for slot in range(2):
        for unit in (Quaternion(1), I, J, K):
            v = [Quaternion(0), Quaternion(0)]
            v[slot] = unit
            basis.append(v)
    return translation_group(basis)


def rand_conjugator(rng):
    """[[1, x, r], [0, y, 0]] with y a nonzero rational: keeps G2 shape and d values."""
    y = Quaternion(rand_fraction(rng, 3, (1, 2)) or 1)
    return AffineMap.from_matrix([[1, rand_exact(rng), rand_exact(rng)], [0, y, 0], [0, 0, 1]])


# -- words -------------------------------------------------------------------------

def test_word_helpers():
    assert invert_word((1, -2, 3)) == (-3, 2, -1)
    assert reduce_word((1, 2, -2, -1, 3)) == (3,)
    g = example_group()
    assert g.format_word(()) == "1"
    assert g.format_word((5, 1, -5)) == "S A S^-1"


def test_float_generators_rejected():
    with pytest.raises(BackendMismatch):
        GeneratedGroup([AffineMap.translation_by([1.0, 0.0])])


# -- enumeration --------------------------------------------------------------------

def test_identity_generator_gives_trivial_group():
    e = enumerate_group(GeneratedGroup([AffineMap.identity()]), 5)
    assert len(e) == 1 and e.closed


def test_free_cyclic_translation():
    e = enumerate_group(translation_group([[1, 0]]), 3)
    shifts = sorted(g.translation[0].w for g, _ in e)
    assert shifts == list(range(-3, 4))
    assert not e.closed


def test_words_evaluate_to_their_elements():
    g = example_group()
    e = enumerate_group(g, 3)
    for el, w in e:
        assert g.element(w) == el
        assert len(w) <= 3


def oracle_unipotent_inverse(m):
    """(1 + N)^-1 = 1 - N + N^2 for a unipotent 3x3 upper triangular matrix."""
    n = [[oracles.qadd(m[i][j], oracles.qneg(oracles.identity(3)[i][j])) for j in range(3)]
         for i in range(3)]
    n2 = oracles.mat_mul(n, n)
    ident = oracles.identity(3)
    return [[oracles.qadd(oracles.qadd(ident[i][j], oracles.qneg(n[i][j])), n2[i][j])
             for j in range(3)] for i in range(3)]


def test_example_abcd_count_matches_brute_force():
    gens = example_generators()
    mats = [oracles.matrix_from_package(gens[k].matrix) for k in "ABCD"]
    letters = mats + [oracle_unipotent_inverse(m) for m in mats]
    for m, mi in zip(mats, letters[4:]):
        assert oracles.mat_mul(m, mi) == oracles.identity(3)
    key = lambda m: tuple(x for row in m for x in row)
    seen = {key(oracles.identity(3))}
    for a in letters:
        seen.add(key(a))
        for b in letters:
            seen.add(key(oracles.mat_mul(a, b)))
    e = enumerate_group(example_group("ABCD"), 2)
    assert len(e) == len(seen)


def test_element_cap():
    with pytest.raises(ExplosionCap):
        enumerate_group(example_group(), 6, cap=100)


def test_closed_finite_group():
    rot = AffineMap.from_matrix([[1, 0, 0], [0, -1, 0], [0, 0, 1]])
    e = enumerate_group(GeneratedGroup([rot]), 6)
    assert len(e) == 2 and e.closed


# -- freeness --------------------------------------------------------------------------

def test_translation_lattice_is_free():
    v = freeness_probe(standard_lattice(), 3)
    assert v.free and v.max_word_length == 3
    assert v.describe() == "free up to word length 3"


def test_fixed_point_witness(rng):
    for _ in range(10):
        a, b, r = rand_exact(rng, nonzero=True), rand_exact(rng, nonzero=True), rand_exact(rng)
        g = AffineMap.from_matrix([[a, b, r], [0, 1, 0], [0, 0, 1]])
        v = freeness_probe(GeneratedGroup([g]), 3)
        assert not v.free
        assert v.witness(v.fixed_point) == v.fixed_point
        target = (Quaternion(0), -(b.inverse() * r))
        assert fixed_points(v.witness).contains(target)


def test_example_free_up_to_three():
    group = example_group()
    e = enumerate_group(group, 3)
    v = freeness_probe(group, enumeration=e)
    assert v.free and v.checked == len(e) - 1
    for g, _ in e.nontrivial():
        assert not oracles.has_fixed_point(oracles.matrix_from_package(g.matrix))
        assert dieudonne_det_squared(g.holonomy - QMatrix.identity(2)) == 0


def test_free_elements_have_eigenvalue_one():
    e = enumerate_group(example_group(), 2)
    for g, _ in e.nontrivial():
        assert right_eigenvalues(g.holonomy).contains(1)


# -- unipotency ---------------------------------------------------------------------------

def test_unipotency_examples():
    gens = example_generators()
    assert unipotency_check(AffineMap.identity()).exponent == 1
    cert = unipotency_check(gens["B"], (2,))
    assert cert is not None and cert.exponent <= 3 and cert.word == (2,)
    assert unipotency_check(gens["C"]).exponent == 2
    assert unipotency_check(gens["S"]) is None


def test_unipotency_matches_direct_powers():
    gens = example_generators()
    nil = gens["B"].matrix - QMatrix.identity(3)
    assert not (nil @ nil).is_zero()
    assert (nil @ nil @ nil).is_zero()
    assert unipotency_check(gens["B"]).exponent == 3


# -- phi and kernel ---------------------------------------------------------------------------

def test_phi_examples(rng):
    gens = example_generators()
    assert phi(gens["S"]) == -1
    for k in "ABCD":
        assert phi(gens[k]) == 1
    with pytest.raises(ShapeError):
        phi(AffineMap.from_matrix([[2, 0, 0], [0, 1, 0], [0, 0, 1]]))


def test_phi_multiplicative(rng):
    for _ in range(100):
        a, b = rand_g2(rng, avoid_one=False), rand_g2(rng, avoid_one=False)
        assert phi(a @ b) == phi(a) * phi(b)


def test_kernel_of_unipotent_group_is_everything():
    group = example_group("ABCD")
    ker = kernel_subgroup(group)
    assert ker.quotient == [1]
    assert ker.generator_words == [(k,) for k in range(1, 5)]


def test_example_kernel():
    group = example_group()
    gens = example_generators()
    assert gens["S"] @ gens["S"] == gens["D"]
    ker = kernel_subgroup(group)
    assert sorted(ker.quotient, key=lambda q: q.w) == [-1, 1]
    words = {group.format_word(w) for w in ker.generator_words}
    assert {"A", "B", "C", "D", "S S"} <= words
    for el in ker.generator_elements:
        assert phi(el) == 1 and is_unipotent(el)
    assert recognize(ker.quotient) == TwoC(1)


def test_conjugated_example_quotient(rng):
    for _ in range(3):
        conj = example_group().conjugate(rand_conjugator(rng))
        ker = kernel_subgroup(conj)
        assert ker.order == 2
        assert recognize(ker.quotient) == TwoC(1)


def test_infinite_image_detected():
    g = AffineMap.from_matrix([[1, 0, 0], [0, 2, 0], [0, 0, 1]])
    with pytest.raises(ImageNotFinite):
        kernel_subgroup(GeneratedGroup([g]), cap=50)


def test_schreier_generators_reproduce_kernel_ball():
    group = example_group()
    radius = 3
    ball = enumerate_group(group, radius)
    want = {g for g, _ in ball if phi(g) == 1}
    ker = kernel_subgroup(group)
    sub = enumerate_group(GeneratedGroup(ker.generator_elements), radius)
    got = {g for g, _ in sub if g in ball.elements}
    assert got == want


# -- translation rank ---------------------------------------------------------------------------

def test_full_rank_lattice():
    tr = translation_rank(standard_lattice(), 2)
    assert tr.rank == 8 and tr.full and tr.pure_translation_rank == 8


def test_single_translation_rank_one():
    tr = translation_rank(translation_group([[J, 1]]), 3)
    assert tr.rank == 1 and not tr.full


def oracle_g1_shape(m):
    return m[1][0] == oracles.ZERO and m[1][1] == oracles.ONE


def test_example_rank_against_fraction_oracle():
    group = example_group()
    e = enumerate_group(group, 4)
    tr = translation_rank(group, enumeration=e)
    rows = []
    for g, _ in e:
        m = oracles.matrix_from_package(g.matrix)
        if oracle_g1_shape(m):
            rows.append([c for i in range(2) for c in m[i][2]])
    assert tr.rank == oracles.fraction_rank(rows)
    assert tr.rank < 8
    for vec, word in zip(tr.basis, tr.witnesses):
        assert tuple(c for q in group.element(word).translation for c in q.coeffs) == vec
    report = analyze(group, 4)
    assert report.translation_rank == tr.rank
    assert NOT_COMPACT in report.compactness


# -- invariance under conjugation ------------------------------------------------------------------

def test_conjugation_invariance(rng):
    group = example_group()
    base = analyze(group, 3)
    for _ in range(3):
        conj = group.conjugate(rand_conjugator(rng))
        rep = analyze(conj, 3)
        assert rep.free == base.free
        assert rep.unipotent_all == base.unipotent_all
        assert rep.kernel_unipotent_all == base.kernel_unipotent_all
        assert rep.quotient_order == base.quotient_order
        assert rep.translation_rank == base.translation_rank
        assert rep.elements_found == base.elements_found


def test_fixed_point_verdict_survives_conjugation(rng):
    g = AffineMap.from_matrix([[1, 1, 1], [0, 1, 0], [0, 0, 1]])
    group = GeneratedGroup([g])
    for _ in range(3):
        assert not freeness_probe(group.conjugate(rand_conjugator(rng)), 2).free


# -- orbit probe ----------------------------------------------------------------------------------

def float_g2(b, r, d, s):
    z = Quaternion(0.0)
    return AffineMap.from_matrix([[Quaternion(1.0), b, r], [z, d, s], [z, z, Quaternion(1.0)]])


def test_commuting_pair_orbit_is_constant(rng):
    a = rand_g2(rng)
    probe = orbit_accumulation_probe(a, a @ a, (0, 1), 20)
    assert max(probe.distances) <= 1e-9


def test_irrational_rotation_accumulates():
    d = Quaternion(math.cos(1.0), math.sin(1.0))
    a = float_g2(Quaternion(1.0), Quaternion(0.0), d, Quaternion(0.5))
    b = float_g2(Quaternion(0.3), Quaternion(0.2), Quaternion(0.0, 0.0, 1.0), Quaternion(0.0, 0.0, 0.0, 1.0))
    probe = orbit_accumulation_probe(a, b, (0, 1), 200)
    assert probe.min_distance < 0.1 * probe.distances[0]
    assert len(probe.start_record) >= 6  # first value plus at least 5 strict decreases


def test_root_of_unity_orbit_is_finite():
    a = float_g2(Quaternion(1.0), Quaternion(0.5), Quaternion(0.0, 1.0), Quaternion(0.5))
    b = float_g2(Quaternion(0.3), Quaternion(0.2), Quaternion(0.0, 0.0, 1.0), Quaternion(0.0, 0.0, 0.0, 1.0))
    probe = orbit_accumulation_probe(a, b, (0, 1), 40)
    assert probe.distinct_points(1e-9) <= 4


def test_expanding_d_orbit_follows_closed_form(rng):
    """For |d| > 1 the orbit of (0, v - h (d-1)^-1 s) is bounded and matches the explicit x_n, y_n."""
    def gauss_q():
        return Quaternion(*(rng.gauss(0, 1) for _ in range(4)))
    one = Quaternion(1.0)
    for _ in range(3):
        d = gauss_q()
        d = d * (1.1 / d.norm())
        b, r, s = gauss_q(), gauss_q(), gauss_q()
        f, u, h, v = gauss_q(), gauss_q(), gauss_q(), gauss_q()
        a_map, b_map = float_g2(b, r, d, s), float_g2(f, u, h, v)
        e = (d - one).inverse()
        p = (Quaternion(0.0), v - h * e * s)
        probe = orbit_accumulation_probe(a_map, b_map, p, 100)
        bound = 10 * (1 + max(q.norm() for q in (b, s, h, v))) ** 3
        for n, x in enumerate(probe.points, start=1):
            assert vec_norm(x) <= bound
            dn = d ** n
            dmn = dn.inverse()
            xn = b * e * (e * (dmn - one) * s + (one - dmn) * h * e * s - (one - dmn) * v)
            yn = -(dmn * h * dn * e * s) + dmn * h * e * (dn - one) * s + dmn * v - e * (one - dmn) * s
            assert vec_norm(vec_sub(x, (xn, yn))) <= 1e-6 * max(1.0, vec_norm(x))
            if n <= 5:
                direct = commutator_sequence_direct(a_map, b_map, n)(p)
                assert vec_norm(vec_sub(x, direct)) <= 1e-9 * max(1.0, vec_norm(x))


# -- report -------------------------------------------------------------------------------------

def test_report_fields_for_example():
    rep = analyze(example_group(), 3)
    assert rep.free and rep.freeness["statement"] == "free up to word length 3"
    assert not rep.unipotent_all and rep.non_unipotent_witness
    assert rep.quotient_order == 2 and rep.quotient_class == "2C(1)"
    assert rep.kernel_unipotent_all
    assert {"A", "B", "C", "D"} <= set(rep.kernel_generators)
    d = rep.as_dict()
    for name in ("max_word_length", "elements_found", "freeness", "unipotent_all",
                 "phi_image", "kernel_generators", "translation_rank"):
        assert name in d


def test_report_for_non_g2_group():
    g = AffineMap.from_matrix([[2, 0, 0], [0, 1, 1], [0, 0, 1]])
    rep = analyze(GeneratedGroup([g], ["M"]), 2)
    assert rep.phi_image == {"failure": "not G2-shaped", "witness": "M"}
    assert rep.quotient_order is None
