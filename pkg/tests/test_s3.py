import math

import pytest

import oracles
from helpers import rand_unit
from quatgeo.errors import ClosureError, NotAGroup
from quatgeo.quaternion import Quaternion
from quatgeo.s3 import (OneC, TwoC, TwoD, TwoI, TwoO, TwoT, build, close_under_products,
                        generators, icosahedral_generator, octahedral_generator, omega,
                        parse_class, recognize, signature)

ALL_CLASSES = ([TwoI(), TwoO(), TwoT()] + [TwoD(n) for n in range(1, 9)]
               + [TwoC(n) for n in range(1, 9)] + [OneC(n) for n in (1, 3, 5, 7, 9)])


def conjugate_all(elements, u):
    ui = u.inverse()
    return [ui * q * u for q in elements]


def oracle_order(q, limit=200):
    """Multiplicative order computed with plain float tuples."""
    p = q
    for k in range(1, limit + 1):
        if sum((a - b) ** 2 for a, b in zip(p, (1.0, 0.0, 0.0, 0.0))) < 1e-12:
            return k
        p = oracles.qmul(p, q)
    return None


def test_generators_are_units():
    for g in (icosahedral_generator(), octahedral_generator(), omega()):
        assert math.isclose(g.norm(), 1.0, abs_tol=1e-9)
    for cls in ALL_CLASSES:
        for g in generators(cls):
            assert math.isclose(g.norm(), 1.0, abs_tol=1e-9)


@pytest.mark.parametrize("cls,order", [(TwoC(1), 2), (TwoT(), 24), (TwoO(), 48), (TwoI(), 120),
                                       (TwoD(3), 12), (TwoC(5), 10), (OneC(5), 5)])
def test_orders(cls, order):
    elements = build(cls)
    assert len(elements) == order == cls.order


def test_two_c_one_is_plus_minus_one():
    elements = build(TwoC(1))
    assert sorted(q.w for q in elements) == [-1.0, 1.0]


def test_round_trip_every_class():
    for cls in ALL_CLASSES:
        assert recognize(build(cls)) == cls.canonical()


def test_binary_dihedral_one_is_cyclic_of_order_four():
    assert TwoD(1).order == 4
    assert recognize(build(TwoD(1))) == TwoC(2)


def test_conjugation_invariance(rng):
    for cls in ALL_CLASSES:
        elements = build(cls)
        for _ in range(20):
            assert recognize(conjugate_all(elements, rand_unit(rng))) == cls.canonical()


def test_same_order_classes_are_separated():
    sigs = {str(c): signature(build(c)) for c in (TwoT(), TwoD(6), TwoC(12))}
    assert len(set(sigs.values())) == 3
    for name in ("2D(6)", "2C(12)"):
        assert 12 in sigs[name][2]
    assert 12 not in sigs["2T"][2]
    # brute-force element orders agree with the signature table
    for c in (TwoT(), TwoD(6), TwoC(12)):
        brute = sorted(oracle_order(tuple(float(x) for x in q.coeffs)) for q in build(c))
        assert tuple(brute) == sigs[str(c)][2]


def test_minus_one_membership():
    minus = Quaternion(-1.0)
    for cls in ALL_CLASSES:
        inside = any(q.close(minus, 1e-9) for q in build(cls))
        assert inside == (cls.kind != "OneC")


def test_trivial_group():
    assert recognize([Quaternion(1)]) == OneC(1)


def test_example_image():
    assert recognize([Quaternion(1), Quaternion(-1)]) == TwoC(1)


def test_not_a_group():
    with pytest.raises(NotAGroup):
        recognize([Quaternion(1), Quaternion(0, 1)])
    with pytest.raises(NotAGroup):
        recognize([Quaternion(2)])
    with pytest.raises(NotAGroup):
        recognize([Quaternion(-1)])


def test_closure_cap():
    with pytest.raises(ClosureError):
        build(TwoI(), cap=50)
    with pytest.raises(ClosureError):
        close_under_products([Quaternion(math.cos(1.0), math.sin(1.0))])


def test_even_one_c_rejected():
    with pytest.raises(ValueError, match="2C"):
        OneC(4)


def test_parse_class():
    assert parse_class("2T") == TwoT()
    assert parse_class("2D(3)") == TwoD(3)
    assert parse_class("TwoD(3)") == TwoD(3)
    assert parse_class("1C(5)") == OneC(5)
    assert str(TwoD(3)) == "2D(3)" and str(TwoI()) == "2I"
    with pytest.raises(ValueError):
        parse_class("3Q")

