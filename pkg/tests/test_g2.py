import json
import random
from fractions import Fraction

import numpy as np
import pytest

from sixsphere.g2 import (
    NonCommutingError,
    NotInG2Error,
    basis_from_json,
    bracket,
    cartan_subalgebra,
    centralizer,
    fundamental_field,
    in_g2,
    is_zero_matrix,
    jacobi_holds,
    killing_form,
    random_g2_element,
    random_skew,
    stabilizer_system,
    standard_torus,
    totally_real_witness,
)
from sixsphere.linalg import rank
from sixsphere.octonions import EPSILON, cross, oct_multiply, Octonion
from sixsphere.sphere import random_rational_point


def test_stabilizer_system_shape():
    sys = stabilizer_system()
    assert len(sys) == 35 and all(len(r) == 49 for r in sys)
    assert rank(sys) == 35


def test_dimension_and_antisymmetry(basis):
    assert len(basis) == 14
    for m in basis.elements:
        assert all(m[i][j] == -m[j][i] for i in range(7) for j in range(7))
        assert in_g2(m)
    flat = [[x for row in m for x in row] for m in basis.elements]
    assert rank(flat) == 14


def test_jacobi_and_killing(basis):
    assert jacobi_holds(basis)
    k = killing_form(basis)
    assert np.allclose(k, k.T)
    assert np.linalg.eigvalsh(k).max() < 0


def test_g2_acts_by_derivations(basis, rng):
    # xi(u x v) = (xi u) x v + u x (xi v)
    for m in basis.elements:
        u = [Fraction(rng.randint(-3, 3)) for _ in range(7)]
        v = [Fraction(rng.randint(-3, 3)) for _ in range(7)]
        mu = [sum(m[i][j] * u[j] for j in range(7)) for i in range(7)]
        mv = [sum(m[i][j] * v[j] for j in range(7)) for i in range(7)]
        uv = cross(u, v)
        lhs = [sum(m[i][j] * uv[j] for j in range(7)) for i in range(7)]
        rhs = [a + b for a, b in zip(cross(mu, v), cross(u, mv))]
        assert lhs == rhs


def test_structure_constants_reproduce_brackets(basis):
    for (i, j, k), c in list(basis.structure_constants.items())[:40]:
        coords = basis.coordinates(bracket(basis[i], basis[j]))
        assert coords[k] == c


def test_generic_skew_not_in_g2(rng):
    skew = random_skew(rng)
    assert not in_g2(skew)
    with pytest.raises(NotInG2Error):
        fundamental_field(skew)


def test_json_roundtrip(basis):
    data = json.loads(json.dumps(basis.to_json()))
    assert len(data["basis"]) == 14
    mats = basis_from_json(data)
    assert mats == basis.elements
    assert all(in_g2(m) for m in mats)


def test_standard_torus(basis):
    t1, t2 = standard_torus(basis)
    assert is_zero_matrix(bracket(t1, t2))
    assert in_g2(t1) and in_g2(t2)
    for t in (t1, t2):
        assert all(t[0][j] == 0 and t[j][0] == 0 for j in range(7))
    assert len(centralizer(basis, [[a + 2 * b for a, b in zip(r1, r2)] for r1, r2 in zip(t1, t2)])) == 2


def test_cartan_pair(basis):
    eta1, eta2, xi = cartan_subalgebra(basis, seed=0)
    assert is_zero_matrix(bracket(eta1, eta2))
    assert is_zero_matrix(bracket(xi, eta1)) and is_zero_matrix(bracket(xi, eta2))
    assert rank([[x for row in m for x in row] for m in (eta1, eta2)]) == 2


def test_non_commuting_error_carries_bracket(basis):
    a, b = basis[0], basis[1]
    err = NonCommutingError(bracket(a, b))
    assert err.bracket == bracket(a, b)


def test_totally_real(basis):
    r = random.Random(5)
    points = [random_rational_point(r).coords for _ in range(8)]
    for _ in range(5):
        xi = random_g2_element(r, basis)
        cert = totally_real_witness(xi, points, basis)
        assert not cert.consistent
        assert cert.augmented_rank == cert.coefficient_rank + 1
    zero = [[Fraction(0)] * 7 for _ in range(7)]
    assert totally_real_witness(zero, points, basis).consistent
    with pytest.raises(ValueError):
        totally_real_witness(zero, points[:3], basis)


def test_g2_preserves_octonion_product(basis):
    # exp of a derivation is an automorphism; at first order A(xy) = (Ax)y + x(Ay)
    m = basis[3]
    r = random.Random(2)
    x = [Fraction(r.randint(-2, 2)) for _ in range(7)]
    y = [Fraction(r.randint(-2, 2)) for _ in range(7)]
    ax = [sum(m[i][j] * x[j] for j in range(7)) for i in range(7)]
    ay = [sum(m[i][j] * y[j] for j in range(7)) for i in range(7)]
    xy = oct_multiply(Octonion.imaginary(x), Octonion.imaginary(y), EPSILON)
    lhs = [sum(m[i][j] * xy.imag[j] for j in range(7)) for i in range(7)]
    rhs = (oct_multiply(Octonion.imaginary(ax), Octonion.imaginary(y))
           + oct_multiply(Octonion.imaginary(x), Octonion.imaginary(ay)))
    assert rhs.real == 0
    assert list(rhs.imag) == lhs
