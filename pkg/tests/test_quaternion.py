import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from helpers import rand_exact, rand_float, rand_unit
from quatgeo.errors import BackendMismatch, ParseError
from quatgeo.quaternion import (EPS, I, J, K, GaussianRational, Quaternion,
                                conjugate_sphere_representative, format_quaternion,
                                parse_quaternion, sphere_conjugator)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
exact_quats = st.builds(Quaternion, fractions, fractions, fractions, fractions)


def test_basis_products():
    assert I * J == K
    assert J * K == I
    assert K * I == J
    assert J * I == -K
    for u in (I, J, K):
        assert u * u == -1


def test_omega_has_order_three():
    omega = Quaternion(Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    assert omega ** 3 == 1
    assert omega ** 2 != 1
    ref = oracles.q(Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    assert oracles.qmul(ref, oracles.qmul(ref, ref)) == oracles.ONE


def test_right_identity(rng):
    for _ in range(50):
        q = rand_exact(rng)
        assert q * 1 == q
        assert q * Quaternion(1) == q


@given(exact_quats, exact_quats)
def test_product_matches_oracle(p, r):
    got = p * r
    assert oracles.q(*got.coeffs) == oracles.qmul(oracles.q(*p.coeffs), oracles.q(*r.coeffs))


@given(exact_quats, exact_quats, exact_quats)
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p + q) * r == p * r + q * r


@given(exact_quats)
def test_conjugate_times_self_is_norm(q):
    prod = q.conjugate() * q
    assert prod == Quaternion(q.norm2())
    assert prod.imag.is_zero(0.0)


def test_norm_is_multiplicative(rng):
    for _ in range(500):
        p, q = rand_float(rng), rand_float(rng)
        assert math.isclose((p * q).norm(), p.norm() * q.norm(), rel_tol=1e-12)


def test_inverse_examples():
    assert Quaternion(1).inverse() == 1
    assert I.inverse() == -I
    one_plus_i = Quaternion(1, 1)
    inv = one_plus_i.inverse()
    assert inv == Quaternion(Fraction(1, 2), Fraction(-1, 2))
    assert one_plus_i * inv == 1 and inv * one_plus_i == 1


@given(exact_quats)
def test_inverse_both_sides(q):
    if q.is_zero():
        with pytest.raises(ZeroDivisionError):
            q.inverse()
        return
    inv = q.inverse()
    assert q * inv == 1 and inv * q == 1
    assert inv == q.conjugate() / q.norm2()


def test_exact_lowest_terms():
    q = Quaternion(Fraction(2, 4), Fraction(-3, -9), Fraction(6, -8), 0)
    w, x, y, z = q.coeffs
    assert (w.numerator, w.denominator) == (1, 2)
    assert (x.numerator, x.denominator) == (1, 3)
    assert (y.numerator, y.denominator) == (-3, 4)
    assert all(c.denominator > 0 for c in q.coeffs)
    assert q.exact


def test_exact_arithmetic_never_rounds(rng):
    acc = Quaternion(1)
    for _ in range(30):
        acc = acc * rand_exact(rng, nonzero=True)
    assert acc.exact
    assert acc * acc.inverse() == 1


def test_backend_mismatch():
    with pytest.raises(BackendMismatch):
        Quaternion(1) + Quaternion(1.0)
    with pytest.raises(TypeError):
        Quaternion(1) * Quaternion(0.5)


def test_float_equality_uses_tolerance():
    assert Quaternion(1.0) == Quaternion(1.0 + EPS / 2)
    assert Quaternion(1.0) != Quaternion(1.0 + 10 * EPS)
    with pytest.raises(TypeError):
        hash(Quaternion(1.0))


def test_complex_pair_examples():
    a, b = J.to_complex_pair()
    assert complex(a) == 0 and complex(b) == 1
    a, b = Quaternion(3, 5).to_complex_pair()
    assert complex(a) == complex(3, 5) and complex(b) == 0
    a, b = (J + K).to_complex_pair()
    assert complex(a) == 0 and complex(b) == complex(1, 1)
    assert isinstance(b, GaussianRational)


@given(exact_quats)
def test_complex_pair_round_trip(q):
    a, b = q.to_complex_pair()
    assert Quaternion.from_complex_pair(a, b) == q
    # q = a + b j with complex numbers embedded as w + x I
    j_part = Quaternion(b.re, b.im) * J
    assert Quaternion(a.re, a.im) + j_part == q


def test_sphere_representative_examples():
    assert conjugate_sphere_representative(Quaternion(3)) == 3
    assert conjugate_sphere_representative(J) == I
    rep = conjugate_sphere_representative(Quaternion(1, 1, -1, 1))
    assert rep.close(Quaternion(1.0, math.sqrt(3)))
    exact_rep = conjugate_sphere_representative(Quaternion(2, 0, 3, 4))
    assert exact_rep.exact and exact_rep == Quaternion(2, 5)


def test_sphere_representative_conjugation_invariant(rng):
    for _ in range(200):
        lam = rand_float(rng)
        u = rand_float(rng)
        conj = u.inverse() * lam * u
        assert conjugate_sphere_representative(conj).close(
            conjugate_sphere_representative(lam), 1e-9 * max(1.0, lam.norm()))


def test_sphere_conjugator_reaches_representative(rng):
    for _ in range(100):
        lam = rand_float(rng)
        u = sphere_conjugator(lam)
        assert math.isclose(u.norm(), 1.0, rel_tol=1e-12)
        assert (u.inverse() * lam * u).close(conjugate_sphere_representative(lam), 1e-9)
    u = sphere_conjugator(-I)
    assert (u.inverse() * -I.to_float() * u).close(I.to_float())


def test_rep_of_unit_is_unit(rng):
    for _ in range(20):
        assert math.isclose(conjugate_sphere_representative(rand_unit(rng)).norm(), 1.0)


@given(exact_quats)
def test_text_round_trip(q):
    text = format_quaternion(q)
    assert parse_quaternion(text) == q
    assert format_quaternion(parse_quaternion(text)) == text


def test_parser_forms():
    assert parse_quaternion("1 - i + 1/2 k") == Quaternion(1, -1, 0, Fraction(1, 2))
    assert parse_quaternion("-J") == -J
    assert parse_quaternion("2*I + 3") == Quaternion(3, 2)
    assert parse_quaternion("0.5 j").exact is False
    assert parse_quaternion("0.5 j", "exact") == Quaternion(0, 0, Fraction(1, 2))
    assert format_quaternion(Quaternion(0)) == "0"
    assert format_quaternion(Quaternion(-1, 0, 0, 1)) == "-1 + k"


@pytest.mark.parametrize("text,column", [("1 + + i", 3), ("1 i j", 5), ("", None), ("2x", 2)])
def test_parser_errors_carry_position(text, column):
    with pytest.raises(ParseError) as info:
        parse_quaternion(text, line=7, column=1)
    assert info.value.line == 7
    if column is not None:
        assert info.value.column == column
