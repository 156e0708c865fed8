from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ckquantum.nilpotent import (
    VACUOUS,
    ExpPoly,
    NotDivisible,
    Pim,
    Q2i,
    UnsupportedExponent,
    extract_factor,
    format_monomial,
    is_homogeneous,
    monomial,
    pim_exp,
    pim_mul,
    substitute_unit,
)
from strategies import NGEN, exponents, nil_masks, nilpotents, pims, q2i, units

i1, i2, i3 = Pim.iota(1), Pim.iota(2), Pim.iota(3)
v = Pim.v()


# -- examples ---------------------------------------------------------------

def test_square_of_generator_vanishes():
    assert pim_mul(i1, i1) == 0


def test_conjugate_pair():
    assert (1 + i1) * (1 - i1) == 1


def test_square_of_sum():
    assert (i1 + i2) * (i1 + i2) == 2 * Pim.iota(1, 2)


def test_extract_factor_examples():
    assert extract_factor(Pim.iota(1, 2) + Pim.iota(1, 2, 3), monomial(1, 2)) == 1 + i3
    assert extract_factor(i1, monomial(1)) == 1
    with pytest.raises(NotDivisible):
        extract_factor(i1, monomial(2))
    with pytest.raises(NotDivisible):
        extract_factor(Pim.scalar(1), monomial(1))


def test_pim_exp_examples():
    rho = Fraction(1, 2)
    assert pim_exp(2 * rho * v * i2) == 1 + v * i2
    assert pim_exp(3 * v) == Pim.exp_rate(3)
    e = Pim.exp_rate(1)
    assert pim_exp(v + v * Pim.iota(1, 2)) == e + e * v * Pim.iota(1, 2)


def test_pim_exp_rejects_non_linear_constant_part():
    with pytest.raises(UnsupportedExponent):
        pim_exp(v * v)
    with pytest.raises(UnsupportedExponent):
        pim_exp(Pim.scalar(1))


def test_substitute_unit_examples():
    assert substitute_unit(1 + 2 * i1, {1}) == 3
    assert substitute_unit(Pim.iota(1, 2), {1}) == i2
    assert substitute_unit(Pim(), {1, 2}) == 0


def test_is_homogeneous_examples():
    assert is_homogeneous(i1 + v * i1) == monomial(1)
    assert is_homogeneous(1 + i1) is None
    assert is_homogeneous(Pim.exp_rate(1) * Pim.iota(1, 2)) == monomial(1, 2)
    assert is_homogeneous(Pim()) is VACUOUS


def test_monomial_rejects_repeats():
    with pytest.raises(ValueError):
        monomial(1, 1)
    assert format_monomial(monomial(2, 3)) == "i2i3"
    assert format_monomial(0) == "1"


def test_q2i_field():
    r2 = Q2i(0, 1)
    assert r2 * r2 == 2
    assert Q2i.I * Q2i.I == -1
    x = Q2i(1, 2, 3, 4)
    assert x * x.inverse() == 1
    assert complex(r2) == pytest.approx(2 ** 0.5)


def test_exppoly_evaluate():
    p = ExpPoly({(1, 2): 3})  # 3 v e^v
    assert complex(p.evaluate(2.0, 0.5)) == pytest.approx(3 * 0.5 * 2.0)


# -- properties -------------------------------------------------------------

@given(pims, pims, pims)
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(pims, pims)
def test_commutative(a, b):
    assert a * b == b * a


@given(pims, pims, pims)
def test_distributive(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(pims)
def test_unit_and_zero(a):
    assert a * 1 == a
    assert a * 0 == 0
    assert a - a == 0


@given(st.lists(nilpotents, min_size=NGEN + 1, max_size=NGEN + 1))
def test_long_nilpotent_products_vanish(xs):
    out = Pim.scalar(1)
    for x in xs:
        out = out * x
    assert out == 0


@given(units)
def test_inverse(a):
    assert a * a.inverse() == 1


@given(pims, nil_masks)
def test_division_round_trip(a, m):
    # keep only terms that can absorb m, then multiply and divide back
    a = Pim({k: c for k, c in a.terms.items() if not k[0] & m})
    assert extract_factor(Pim.mono(m) * a, m) == a


@given(exponents, exponents)
@settings(deadline=None)
def test_exp_homomorphism(x, y):
    assert pim_exp(x + y) == pim_exp(x) * pim_exp(y)


@given(pims, pims, st.sets(st.integers(1, NGEN)))
def test_substitute_unit_is_additive(a, b, idx):
    assert substitute_unit(a + b, idx) == substitute_unit(a, idx) + substitute_unit(b, idx)


@given(pims, st.sets(st.integers(1, NGEN)))
def test_substitute_unit_clears_slots(a, idx):
    drop = sum(1 << k for k in idx)
    assert all(not k[0] & drop for k in substitute_unit(a, idx).terms)


@given(q2i, q2i)
def test_q2i_distributes(a, b):
    assert (a + b) * (a - b) == a * a - b * b
