import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sixsphere.forms import PolyField, contract, exterior_derivative
from sixsphere.octonions import (
    EPSILON,
    EpsilonTable,
    Octonion,
    cross,
    cross_np,
    cross_via_commutator,
    dot,
    e,
    epsilon,
    is_two_plectic_at,
    multiplication_table,
    oct_multiply,
    omega_tilde,
    omega_value,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
vec7 = st.lists(rationals, min_size=7, max_size=7)
oct8 = st.lists(rationals, min_size=8, max_size=8).map(Octonion)


def test_epsilon_entries():
    assert epsilon(1, 2, 3) == 1
    assert epsilon(2, 1, 3) == -1
    assert epsilon(2, 7, 5) == 1
    assert epsilon(5, 2, 7) == 1
    assert epsilon(1, 1, 2) == 0
    with pytest.raises(IndexError):
        epsilon(0, 1, 2)
    assert len(EPSILON.nonzero()) == 42


def test_conflicting_triples_rejected():
    with pytest.raises(ValueError):
        EpsilonTable([(1, 2, 3), (2, 1, 3)])


def test_multiplication_table_regenerated():
    t = multiplication_table()
    assert t[0][1] == "e3"  # e1 e2
    assert all(t[i][i] == "-1" for i in range(7))
    # e5 e7 and e7 e5 as regenerated from the triple 275
    assert t[4][6] == "-e2"
    assert t[6][4] == "e2"


@settings(max_examples=60, deadline=None)
@given(oct8, oct8)
def test_composition_norm(a, b):
    assert oct_multiply(a, b).norm_squared() == a.norm_squared() * b.norm_squared()


@settings(max_examples=60, deadline=None)
@given(vec7, vec7)
def test_cross_product_identities(u, v):
    uv = cross(u, v)
    assert uv == cross_via_commutator(u, v)
    assert dot(uv, u) == 0 and dot(uv, v) == 0
    assert cross(v, u) == tuple(-c for c in uv)
    # |u x v|^2 = |u|^2 |v|^2 - <u,v>^2
    assert dot(uv, uv) == dot(u, u) * dot(v, v) - dot(u, v) ** 2


@settings(max_examples=40, deadline=None)
@given(vec7, vec7, vec7)
def test_omega_totally_antisymmetric(u, v, w):
    x = omega_value(u, v, w)
    assert omega_value(v, u, w) == -x
    assert omega_value(u, w, v) == -x
    assert omega_value(w, u, v) == x


def test_alternative_law(rng):
    for _ in range(20):
        a = Octonion([Fraction(rng.randint(-4, 4)) for _ in range(8)])
        b = Octonion([Fraction(rng.randint(-4, 4)) for _ in range(8)])
        assert (a * a) * b == a * (a * b)
        assert (b * a) * a == b * (a * a)


def test_float_cross_agrees():
    r = np.random.default_rng(0)
    u, v = r.normal(size=7), r.normal(size=7)
    assert np.allclose(cross_np(u, v), cross(list(u), list(v)))


def test_omega_tilde_is_closed_and_two_plectic():
    w = omega_tilde()
    assert exterior_derivative(w).is_zero()
    assert is_two_plectic_at(w, (0,) * 7, [e(k) for k in range(1, 8)])
    # the value on basis triples is the structure tensor
    assert omega_value(e(1), e(2), e(3)) == 1
    assert contract([PolyField.constant(e(1)), PolyField.constant(e(2))], w).coefficient(3) == 1


def test_corrupted_table_breaks_composition():
    triples = list(EpsilonTable().triples)
    triples[4] = (2, 5, 7)
    bad = EpsilonTable(triples)
    r = random.Random(0)
    failures = 0
    for _ in range(10):
        a = Octonion([r.randint(-3, 3) for _ in range(8)])
        b = Octonion([r.randint(-3, 3) for _ in range(8)])
        failures += oct_multiply(a, b, bad).norm_squared() != a.norm_squared() * b.norm_squared()
    assert failures > 0
