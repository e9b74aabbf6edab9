"""Acceptance gate: one test per criterion, each at its stated tolerance.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from sixsphere.flows import drift_report, flow_dim1, orbit_closure_classify, as_float_matrix
from sixsphere.forms import PolyField, contract, exterior_derivative, random_poly
from sixsphere.g2 import (
    NonCommutingError,
    bracket,
    cartan_subalgebra,
    compute_g2_basis,
    is_zero_matrix,
    jacobi_holds,
    random_g2_element,
    random_skew,
    standard_torus,
    totally_real_witness,
)
from sixsphere.hdw import (
    bracket_x_jx_at,
    complete_dim1_solution_set_check,
    hdw_dim1,
    hdw_dim2,
    theta_tilde,
    zero_hamiltonian_control,
    zero_hamiltonian_residual,
)
from sixsphere.linalg import same_span
from sixsphere.linear_type import Subspace6, contraction_kernel, delta_is_trivial, delta_reduction
from sixsphere.octonions import cross, e, omega_tilde
from sixsphere.polynomials import Poly7
from sixsphere.sphere import (
    NORTH,
    nijenhuis_closed,
    nijenhuis_oracle,
    nijenhuis_rank,
    omega_metric_residual,
    random_float_point,
    random_rational_point,
    random_tangent,
)
from sixsphere.verify import iota_omega_north_reference, omega_north_reference, planar_point

PHI = (1 + 5 ** 0.5) / 2


@pytest.mark.criterion(1, "g2 dimension 14, antisymmetric, closed, Jacobi, < 1 s")
def test_c01_g2_dimension():
    start = time.perf_counter()
    basis = compute_g2_basis()
    elapsed = time.perf_counter() - start
    assert len(basis) == 14
    assert all(isinstance(x, Fraction) for m in basis.elements for row in m for x in row)
    for m in basis.elements:
        assert all(m[i][j] == -m[j][i] for i in range(7) for j in range(7))
    for i in range(14):
        for j in range(i + 1, 14):
            assert basis.coordinates(bracket(basis[i], basis[j])) is not None
    assert jacobi_holds(basis)
    assert elapsed < 1.0, f"basis took {elapsed:.2f} s"


@pytest.mark.criterion(2, "d((1/3) iota_E omega) = omega exactly")
def test_c02_potential():
    theta = contract(PolyField.euler(), omega_tilde()).scale(Fraction(1, 3))
    assert theta == theta_tilde()
    assert (exterior_derivative(theta) - omega_tilde()).is_zero()


@pytest.mark.criterion(3, "HDW dim 1 residual zero for all basis elements, gauge invariant")
def test_c03_hdw_dim1(basis):
    for xi in basis.elements:
        x = PolyField.linear(xi)
        h = -contract(x, theta_tilde())
        assert (contract(x, omega_tilde()) - exterior_derivative(h)).is_zero()
        assert hdw_dim1(xi).is_valid
    r = random.Random(3)
    for _ in range(5):
        f = random_poly(r, max_degree=3, n_terms=5)
        assert complete_dim1_solution_set_check(basis[r.randrange(14)], f)


@pytest.mark.criterion(4, "HDW dim 2 residual zero for a Cartan pair, non-commuting rejected")
def test_c04_hdw_dim2(basis):
    eta1, eta2, _ = cartan_subalgebra(basis)
    x, y = PolyField.linear(eta1), PolyField.linear(eta2)
    h = -contract([x, y], theta_tilde())
    assert (contract([x, y], omega_tilde()) + exterior_derivative(h)).is_zero()
    assert hdw_dim2(eta1, eta2).is_valid
    with pytest.raises(NonCommutingError) as info:
        hdw_dim2(basis[0], basis[1])
    assert info.value.bracket == bracket(basis[0], basis[1])
    assert not is_zero_matrix(info.value.bracket)


@pytest.mark.criterion(5, "omega_N matches the hand expansion coefficient for coefficient")
def test_c05_omega_north():
    tangential = omega_tilde().drop_index(1)
    reference = omega_north_reference()
    assert set(tangential.coeffs) == set(reference.coeffs)
    for idx in reference.coeffs:
        assert tangential.coeffs[idx] == reference.coeffs[idx]
    v = PolyField([Poly7(), *(Poly7.var(i) for i in range(6))])
    assert contract(v, tangential) == iota_omega_north_reference()


@pytest.mark.criterion(6, "Delta(omega_N) = {0} via three sum-of-squares components")
def test_c06_delta():
    local = Subspace6.north().pullback(omega_tilde(), NORTH.coords)
    comps = delta_reduction(local)
    x = [Poly7.var(i) for i in range(6)]
    assert comps[(0, 1)] == (x[0] ** 2 + x[1] ** 2) * -2
    assert comps[(2, 3)] == (x[2] ** 2 + x[3] ** 2) * -2
    assert comps[(4, 5)] == (x[4] ** 2 + x[5] ** 2) * -2
    assert delta_is_trivial(local) is True


@pytest.mark.criterion(7, "Nijenhuis closed form equals bracket oracle at 50 points; N(e3,e5) = 4 e7")
def test_c07_nijenhuis():
    r = random.Random(7)
    for _ in range(50):
        p = random_rational_point(r)
        u, v = random_tangent(r, p), random_tangent(r, p)
        assert nijenhuis_closed(p, u, v) == nijenhuis_oracle(p, u.vec, v.vec)
    assert nijenhuis_oracle(NORTH, e(3), e(5)).vec == tuple(4 * c for c in e(7))


@pytest.mark.criterion(8, "omega + g(N_J, J)/4 = 0 at 100 points")
def test_c08_metric_identity():
    r = random.Random(8)
    for _ in range(100):
        p = random_rational_point(r)
        u, v, w = (random_tangent(r, p) for _ in range(3))
        assert omega_metric_residual(p, u, v, w) == 0


@pytest.mark.criterion(9, "ker(iota_u omega_p) = span{u, p x u}, 50 instances")
def test_c09_kernel():
    r = random.Random(9)
    done = 0
    while done < 50:
        p = random_rational_point(r)
        u = random_tangent(r, p)
        if not any(u.vec):
            continue
        sub = Subspace6.tangent_at(p.coords)
        alpha = sub.pullback(omega_tilde(), p.coords)
        kern = contraction_kernel(alpha, sub.to_local(u.vec))
        assert len(kern) == 2
        assert same_span(kern, [sub.to_local(u.vec), sub.to_local(cross(p.coords, u.vec))])
        done += 1


@pytest.mark.criterion(10, "J X_xi is not fundamental: 20 inconsistent systems, xi = 0 consistent")
def test_c10_totally_real(basis):
    r = random.Random(10)
    points = [random_rational_point(r).coords for _ in range(8)]
    for _ in range(20):
        cert = totally_real_witness(random_g2_element(r, basis), points, basis)
        assert not cert.consistent
    zero = [[Fraction(0)] * 7 for _ in range(7)]
    assert totally_real_witness(zero, points, basis).consistent


@pytest.mark.criterion(11, "iota_{X ^ JX} omega = 0 at 100 points; off-sphere control nonzero")
def test_c11_zero_hamiltonian():
    r = random.Random(11)
    for _ in range(100):
        p = random_rational_point(r)
        v = [Fraction(r.randint(-5, 5), r.randint(1, 4)) for _ in range(7)]
        assert zero_hamiltonian_residual(v, p, random_tangent(r, p)) == 0
    assert zero_hamiltonian_control((2, 0, 0, 0, 0, 0, 0), e(2), e(1)) == 2


@pytest.mark.criterion(12, "[X_xi, J X_xi] = 0 at 20 points for all basis xi; generic skew fails")
def test_c12_commutation(basis):
    r = random.Random(12)
    points = [random_rational_point(r).coords for _ in range(20)]
    for xi in basis.elements:
        for p in points:
            assert bracket_x_jx_at(xi, p) == (0,) * 7
    skew = random_skew(r)
    assert any(any(bracket_x_jx_at(skew, p, check=False)) for p in points)


@pytest.mark.criterion(13, "flow over [0,100], dt 0.1: norm 1e-10, invariance 1e-9, residual 1e-8")
def test_c13_flow_fidelity(basis):
    gen = np.random.default_rng(13)
    r = random.Random(13)
    generators = [basis[0], basis[9], random_g2_element(r, basis, bound=2)]
    for xi in generators:
        p = random_float_point(gen).coords
        rep = drift_report(flow_dim1(xi, p, 0.0, 100.0, 0.1))
        assert rep.norm_defect <= 1e-10
        assert rep.invariance_defect <= 1e-9
        assert rep.dynamical_residual <= 1e-8


@pytest.mark.criterion(14, "orbit trichotomy point / circle / dense line, stable over tol x10")
def test_c14_orbits(basis):
    t1, t2 = (as_float_matrix(t) for t in standard_torus(basis))
    cases = [
        (t1, (1.0, 0, 0, 0, 0, 0, 0), "point", []),
        (t1 + t2, planar_point((1, 2), (5, 6)), "circle", [1.0, 2.0]),
        (t1 + (PHI - 1) * t2, planar_point((1, 2), (3, 4)), "dense_line_in_2torus", [PHI - 1, 1.0]),
    ]
    for xi, p, tag, freqs in cases:
        for tol in (1e-7, 1e-6, 1e-5):
            res = orbit_closure_classify(xi, p, tol)
            assert res.tag == tag
            assert res.dependence != "undetermined"
            assert res.frequencies == pytest.approx(freqs, abs=1e-12)


@pytest.mark.criterion(15, "Nijenhuis map has rank 6 at 20 random points")
def test_c15_nijenhuis_rank():
    gen = np.random.default_rng(15)
    for _ in range(20):
        assert nijenhuis_rank(random_float_point(gen), tol=1e-8) == 6
