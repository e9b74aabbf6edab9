import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sixsphere.flows import (
    FlowError,
    Trajectory,
    as_float_matrix,
    classify_pair,
    continued_fraction_convergents,
    drift_report,
    finite_difference_velocity,
    flow_dim1,
    flow_dim2,
    invariance_defect,
    invariant_planes,
    matrix_exp,
    orbit_closure_classify,
    orthogonality_defect,
    rational_verdict,
)
from sixsphere.g2 import cartan_subalgebra, standard_torus

PHI = (1 + 5 ** 0.5) / 2


def unit(*idx):
    v = np.zeros(7)
    v[list(idx)] = 1.0
    return tuple(v / np.linalg.norm(v))


@pytest.fixture(scope="module")
def float_basis(basis):
    return basis.as_float()


@pytest.fixture(scope="module")
def torus(basis):
    return tuple(as_float_matrix(t) for t in standard_torus(basis))


def test_exp_at_zero_is_identity(float_basis):
    assert np.array_equal(matrix_exp(float_basis[0], 0.0), np.eye(7))


def test_exp_rejects_non_finite():
    with pytest.raises(FlowError):
        matrix_exp(np.full((7, 7), np.nan), 1.0)


def test_exp_orthogonal_and_preserves_omega(float_basis):
    gen = np.random.default_rng(0)
    for _ in range(100):
        xi = np.tensordot(gen.normal(size=14), float_basis, axes=1)
        xi *= gen.uniform(0, 100) / np.linalg.norm(xi, 2)
        a = matrix_exp(xi, 1.0)
        assert orthogonality_defect(a) <= 1e-12
        assert invariance_defect(a) <= 1e-9


def test_exp_one_parameter_group(float_basis):
    gen = np.random.default_rng(1)
    for _ in range(20):
        xi = np.tensordot(gen.normal(size=14), float_basis, axes=1)
        s, t = gen.uniform(-10, 10, size=2)
        lhs = matrix_exp(xi, s + t)
        assert np.max(np.abs(lhs - matrix_exp(xi, s) @ matrix_exp(xi, t))) <= 1e-11


def test_fixed_point_gives_constant_trajectory(torus):
    traj = flow_dim1(torus[0], (1, 0, 0, 0, 0, 0, 0), 0, 5, 0.5)
    assert np.all(traj.points == np.array([1, 0, 0, 0, 0, 0, 0.0]))
    rep = drift_report(traj)
    assert rep.norm_defect == rep.orbit_defect == rep.dynamical_residual == 0
    assert rep.invariance_defect <= 1e-12
    still = flow_dim1(np.zeros((7, 7)), unit(1, 4), 0, 5, 0.5)
    assert drift_report(still).max_defect() == 0


def test_flow_contracts(basis):
    xi = basis[4]
    p = unit(0, 2, 5)
    traj = flow_dim1(xi, p, 0.0, 100.0, 0.1)
    assert len(traj.times) == 1001
    assert np.allclose(traj.points[0], p, atol=0, rtol=0)
    rep = drift_report(traj)
    assert rep.norm_defect <= 1e-10
    assert rep.invariance_defect <= 1e-9
    assert rep.dynamical_residual <= 1e-8


def test_finite_difference_velocity_is_second_order(basis):
    x = as_float_matrix(basis[2])
    p = unit(1, 3, 6)
    errs = []
    for dt in (0.02, 0.01):
        traj = flow_dim1(basis[2], p, 0.0, 1.0, dt)
        v = finite_difference_velocity(traj)
        exact = traj.points[1:-1] @ x.T
        errs.append(np.max(np.abs(v - exact)))
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_flow_rejects_non_g2_and_off_sphere(basis):
    skew = np.zeros((7, 7))
    skew[0, 1], skew[1, 0] = 1, -1
    with pytest.raises(FlowError):
        flow_dim1(skew, unit(0), 0, 1, 0.1)
    with pytest.raises(FlowError):
        flow_dim1(basis[0], (1, 1, 0, 0, 0, 0, 0), 0, 1, 0.1)


def test_perturbed_trajectory_is_caught(basis):
    traj = flow_dim1(basis[5], unit(0, 2), 0, 10, 0.1)
    clean = drift_report(traj).max_defect()
    # tangential kick: stays on the sphere to second order, leaves the orbit
    traj.points[40] += 1e-6 * np.array([0, 1, 0, 0, 0, 0, 0])
    rep = drift_report(traj)
    assert rep.orbit_defect >= 1e-6 > 1e-8 > clean
    # radial kick: caught by the norm defect as well
    traj.points[60] *= 1 + 1e-8
    assert drift_report(traj).norm_defect > 1e-10


def test_flow_dim2_order_and_reduction(basis):
    eta1, eta2, _ = cartan_subalgebra(basis)
    x, y = as_float_matrix(eta1), as_float_matrix(eta2)
    x, y = x / np.linalg.norm(x, 2), y / np.linalg.norm(y, 2)
    assert np.max(np.abs(matrix_exp(y) @ matrix_exp(x) - matrix_exp(x) @ matrix_exp(y))) <= 1e-11
    p = unit(0, 1, 4)
    traj = flow_dim2(x, y, p, 1.0, 1.0, 0.1)
    swapped = flow_dim2(y, x, p, 1.0, 1.0, 0.1)
    # sample (t1, t2) of the first equals sample (t2, t1) of the second
    a = traj.points.reshape(11, 11, 7)
    b = swapped.points.reshape(11, 11, 7).transpose(1, 0, 2)
    assert np.max(np.abs(a - b)) <= 1e-11
    zero = np.zeros((7, 7))
    red = flow_dim2(x, zero, p, 1.0, 0.0, 0.1)
    assert np.allclose(red.points, flow_dim1(x, p, 0.0, 1.0, 0.1).points, atol=1e-15)


def test_flow_dim2_grid_norm(basis):
    eta1, eta2, _ = cartan_subalgebra(basis)
    x, y = as_float_matrix(eta1), as_float_matrix(eta2)
    traj = flow_dim2(x / 40, y / 40, unit(1, 2, 3), 9.9, 9.9, 0.1)
    assert traj.points.shape == (10000, 7)
    assert drift_report(traj).norm_defect <= 1e-10


def test_flow_dim2_rejects_non_commuting(basis):
    with pytest.raises(FlowError):
        flow_dim2(basis[0], basis[1], unit(0), 1, 1, 0.5)


def test_csv_roundtrip(torus):
    traj = flow_dim1(torus[0], unit(1, 3), 0, 1, 0.25)
    text = traj.to_csv()
    assert text.splitlines()[0] == "t,x1,x2,x3,x4,x5,x6,x7"
    back = Trajectory.from_csv(text)
    assert np.array_equal(back.points, traj.points)
    assert np.array_equal(back.times, traj.times)
    traj2 = flow_dim2(torus[0], torus[1], unit(1, 3), 0.5, 0.5, 0.25)
    assert traj2.to_csv().splitlines()[0].startswith("t1,t2,x1")


def test_invariant_planes_of_torus(torus):
    xi = torus[0] + 2 * torus[1]
    freqs = sorted(round(pl.frequency, 12) for pl in invariant_planes(xi) if pl.frequency > 0)
    assert freqs == [1.0, 2.0, 3.0]


def test_continued_fractions():
    conv = list(continued_fraction_convergents(PHI, 10))
    assert [c.denominator for c in conv[:6]] == [1, 1, 2, 3, 5, 8]
    assert rational_verdict(2.0, 1e-6) == (True, 2)
    assert rational_verdict(PHI, 1e-6)[0] is False
    assert rational_verdict(3 / 7, 1e-6)[0] is True


def test_orbit_point(torus):
    res = orbit_closure_classify(torus[0], unit(0), 1e-6)
    assert res.tag == "point" and res.frequencies == []


def test_orbit_circle(torus):
    xi = torus[0] + torus[1]
    res = orbit_closure_classify(xi, unit(1, 2, 5, 6), 1e-6)
    assert res.tag == "circle"
    assert res.frequencies == pytest.approx([1.0, 2.0])
    assert res.dependence == "rational"


def test_orbit_dense(torus):
    xi = torus[0] + (PHI - 1) * torus[1]
    for tol in (1e-7, 1e-6, 1e-5):
        res = orbit_closure_classify(xi, unit(1, 2, 3, 4), tol)
        assert res.tag == "dense_line_in_2torus"
        assert res.dependence == "irrational"


def test_orbit_single_plane_is_circle(torus):
    res = orbit_closure_classify(torus[0] + (PHI - 1) * torus[1], unit(1, 2), 1e-6)
    assert res.tag == "circle"


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 9), st.integers(1, 9))
def test_rational_torus_elements_give_circles(a, b):
    t1 = np.zeros((7, 7))
    t1[1, 2], t1[2, 1] = a, -a
    t1[3, 4], t1[4, 3] = b, -b
    res = orbit_closure_classify(t1, unit(1, 2, 3, 4), 1e-6)
    assert res.tag == "circle" and res.dependence == "rational"


def test_classify_pair(torus):
    t1, t2 = torus
    assert classify_pair(t1, t2, unit(0)).tag == "point"
    assert classify_pair(t1, t2, unit(1, 2)).tag == "circle"
    assert classify_pair(t1, t2, unit(1, 3)).tag == "torus2"
    assert classify_pair(t1, 2 * t1, unit(1, 5, 6)).tag == "circle"
    assert classify_pair(np.zeros((7, 7)), np.zeros((7, 7)), unit(1)).tag == "point"
