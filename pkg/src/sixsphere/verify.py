"""The verification suite: one named check per geometric statement.

Each check takes a ``Context`` and returns ``(passed, detail)``. Exceptions
raised inside a check count as failures.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import flows
from .forms import PolyField, PolyForm, contract, dx, exterior_derivative, random_poly
from .g2 import (
    NonCommutingError,
    bracket,
    cartan_subalgebra,
    compute_g2_basis,
    g2_basis,
    is_zero_matrix,
    jacobi_holds,
    killing_form,
    random_g2_element,
    random_skew,
    standard_torus,
    totally_real_witness,
)
from .hdw import (
    bracket_x_jx_at,
    complete_dim1_solution_set_check,
    hdw_dim1,
    hdw_dim2,
    theta_tilde,
    zero_hamiltonian_control,
    zero_hamiltonian_residual,
)
from .linalg import same_span
from .linear_type import Subspace6, certify_complex_type, contraction_kernel, delta_is_trivial, delta_reduction
from .octonions import EPSILON, EpsilonTable, Octonion, cross, cross_via_commutator, dot, e, oct_multiply, omega_tilde
from .polynomials import Poly7
from .sphere import (
    NORTH,
    nijenhuis_closed,
    nijenhuis_oracle,
    nijenhuis_rank,
    omega_metric_residual,
    random_float_point,
    random_rational_point,
    random_tangent,
)


@dataclass
class Context:
    seed: int = 0
    samples: int = 20
    eps: EpsilonTable = EPSILON

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")


@dataclass
class CheckResult:
    slug: str
    title: str
    passed: bool
    detail: str
    seconds: float

    def as_dict(self) -> dict:
        return {
            "slug": self.slug,
            "title": self.title,
            "status": "PASS" if self.passed else "FAIL",
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


@dataclass
class Check:
    slug: str
    title: str
    run: Callable[[Context], tuple[bool, str]]


CHECKS: list[Check] = []


def check(slug: str, title: str):
    def register(fn):
        CHECKS.append(Check(slug, title, fn))
        return fn
    return register


def omega_north_reference() -> PolyForm:
    """The hand expansion of omega at N, in ambient labels."""
    return (dx(2) ^ (dx(4, 6) - dx(5, 7))) - (dx(3) ^ (dx(4, 7) + dx(5, 6)))


def iota_omega_north_reference() -> PolyForm:
    """iota_v omega_N with v = sum v^i d/dx^(i+1), v^i the polynomial variable x_i."""
    v = [Poly7.var(i) for i in range(6)]
    parts = [
        (dx(4, 6) - dx(5, 7)) * v[0],
        (-dx(4, 7) - dx(5, 6)) * v[1],
        (-dx(2, 6) + dx(3, 7)) * v[2],
        (dx(2, 7) + dx(3, 6)) * v[3],
        (dx(2, 4) - dx(3, 5)) * v[4],
        (-dx(2, 5) - dx(3, 4)) * v[5],
    ]
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    return total


def north_local_form(eps: EpsilonTable = EPSILON):
    return Subspace6.north().pullback(omega_tilde(eps), NORTH.coords)


def north_j_matrix(sign: int = 1, eps: EpsilonTable = EPSILON):
    m = Subspace6.north().j_matrix(NORTH.coords, eps)
    return [[sign * x for x in row] for row in m]


# checks --------------------------------------------------------------------


@check("octonion-composition", "octonion product is a composition algebra")
def _composition(ctx: Context):
    rng = ctx.rng("composition")
    for _ in range(ctx.samples):
        a = Octonion([Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(8)])
        b = Octonion([Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(8)])
        if oct_multiply(a, b, ctx.eps).norm_squared() != a.norm_squared() * b.norm_squared():
            return False, f"|ab|^2 != |a|^2 |b|^2 at a={a}, b={b}"
        u, v = a.imag, b.imag
        uv = cross(u, v, ctx.eps)
        if uv != cross_via_commutator(u, v, ctx.eps) or dot(uv, u) != 0 or dot(uv, v) != 0:
            return False, "cross product disagrees with the octonion commutator"
    return True, f"{ctx.samples} exact products"


@check("omega-potential", "omega is closed with potential (1/3) iota_E omega")
def _potential(ctx: Context):
    w = omega_tilde(ctx.eps)
    if not exterior_derivative(w).is_zero():
        return False, "d omega != 0"
    if not (exterior_derivative(theta_tilde(ctx.eps)) - w).is_zero():
        return False, "d theta != omega"
    return True, "d omega = 0 and d theta = omega, exact"


@check("omega-north-expansion", "omega at N matches its hand expansion")
def _north(ctx: Context):
    w = omega_tilde(ctx.eps).drop_index(1)
    if not (w - omega_north_reference()).is_zero():
        return False, "tangential part of omega at N differs from the hand expansion"
    v = PolyField([Poly7(), *(Poly7.var(i) for i in range(6))])
    if not (contract(v, w) - iota_omega_north_reference()).is_zero():
        return False, "iota_v omega_N differs from the hand expansion"
    return True, "4 monomials of omega_N and 12 of iota_v omega_N"


@check("delta-triviality", "Delta(omega_N) = {0}: omega_N is of complex type")
def _delta(ctx: Context):
    comps = delta_reduction(north_local_form(ctx.eps))
    x = [Poly7.var(i) for i in range(6)]
    expected = {
        (0, 1): (x[0] ** 2 + x[1] ** 2) * -2,
        (2, 3): (x[2] ** 2 + x[3] ** 2) * -2,
        (4, 5): (x[4] ** 2 + x[5] ** 2) * -2,
    }
    for pair, q in expected.items():
        if comps.get(pair) != q:
            return False, f"v ^ w_v component {pair} is {comps.get(pair)}"
    alpha = north_local_form(ctx.eps)
    if delta_is_trivial(alpha) is not True:
        return False, "the reduction does not certify Delta = {0}"
    if not (certify_complex_type(alpha, north_j_matrix(1, ctx.eps))
            and certify_complex_type(alpha, north_j_matrix(-1, ctx.eps))):
        return False, "omega_N is not compatible with +-J_N"
    return True, "three sum-of-squares components; +-J_N compatible"


@check("g2-dimension", "the stabilizer of omega is g2 (dimension 14)")
def _g2(ctx: Context):
    basis = compute_g2_basis(ctx.eps)
    n = len(basis)
    if n != 14:
        return False, f"dimension {n}"
    for m in basis.elements:
        if any(m[i][j] != -m[j][i] for i in range(7) for j in range(7)):
            return False, "non-antisymmetric element"
    if not jacobi_holds(basis):
        return False, "Jacobi identity fails"
    top = float(np.linalg.eigvalsh(killing_form(basis)).max())
    if top >= 0:
        return False, f"Killing form not negative definite (max eigenvalue {top})"
    return True, f"dimension 14, antisymmetric, closed, Jacobi, Killing max eigenvalue {top:g}"


@check("nijenhuis-closed-vs-oracle", "N_J(u,v) = -4 p x (u x v)")
def _nijenhuis(ctx: Context):
    rng = ctx.rng("nijenhuis")
    for _ in range(ctx.samples):
        p = random_rational_point(rng)
        u, v = random_tangent(rng, p), random_tangent(rng, p)
        if nijenhuis_closed(p, u, v, ctx.eps) != nijenhuis_oracle(p, u.vec, v.vec, ctx.eps):
            return False, f"closed form and bracket oracle disagree at {p.coords}"
    val = nijenhuis_oracle(NORTH, e(3), e(5), ctx.eps).vec
    if val != tuple(4 * x for x in e(7)):
        return False, f"N_J(e3, e5) at N = {val}"
    return True, f"{ctx.samples} exact points; N_J(e3,e5) = 4 e7 at N"


@check("nijenhuis-rank", "N_J : Lambda^2 T_p -> T_p has rank 6")
def _rank(ctx: Context):
    gen = np.random.default_rng(ctx.seed)
    for _ in range(ctx.samples):
        r = nijenhuis_rank(random_float_point(gen), ctx.eps)
        if r != 6:
            return False, f"rank {r}"
    if nijenhuis_rank(NORTH, ctx.eps) != 6:
        return False, "exact rank at N is not 6"
    return True, f"rank 6 at {ctx.samples} float points and exactly at N"


@check("omega-metric-identity", "omega(u,v,w) = -g(N_J(u,v), Jw)/4")
def _metric(ctx: Context):
    rng = ctx.rng("metric")
    for _ in range(ctx.samples):
        p = random_rational_point(rng)
        u, v, w = (random_tangent(rng, p) for _ in range(3))
        res = omega_metric_residual(p, u, v, w, ctx.eps)
        if res != 0:
            return False, f"residual {res}"
    return True, f"{ctx.samples} exact triples"


@check("contraction-kernel", "ker(iota_u omega_p) = span{u, p x u}")
def _kernel(ctx: Context):
    rng = ctx.rng("kernel")
    for _ in range(ctx.samples):
        p = random_rational_point(rng)
        u = random_tangent(rng, p)
        if not any(u.vec):
            continue
        sub = Subspace6.tangent_at(p.coords)
        alpha = sub.pullback(omega_tilde(ctx.eps), p.coords)
        kern = contraction_kernel(alpha, sub.to_local(u.vec))
        expected = [sub.to_local(u.vec), sub.to_local(cross(p.coords, u.vec, ctx.eps))]
        if len(kern) != 2 or not same_span(kern, expected):
            return False, f"kernel of dimension {len(kern)} at {p.coords}"
    return True, f"{ctx.samples} exact instances of dimension 2"


@check("totally-real", "J X_xi is never a fundamental field")
def _totally_real(ctx: Context):
    rng = ctx.rng("totally-real")
    basis = g2_basis(ctx.eps)
    points = [random_rational_point(rng).coords for _ in range(8)]
    for _ in range(ctx.samples):
        xi = random_g2_element(rng, basis)
        cert = totally_real_witness(xi, points, basis, ctx.eps)
        if cert.consistent:
            return False, "a nonzero xi admits J X_xi as a fundamental field"
    zero = [[Fraction(0)] * 7 for _ in range(7)]
    if not totally_real_witness(zero, points, basis, ctx.eps).consistent:
        return False, "xi = 0 should be consistent"
    return True, f"{ctx.samples} inconsistent systems; xi = 0 consistent"


@check("hdw-dim1", "(-iota_X theta + df, X_xi) solves the HDW equation")
def _hdw1(ctx: Context):
    rng = ctx.rng("hdw1")
    basis = g2_basis(ctx.eps)
    for k, xi in enumerate(basis.elements):
        if not hdw_dim1(xi, ctx.eps).is_valid:
            return False, f"residual nonzero for basis element {k}"
    for _ in range(5):
        f = random_poly(rng, max_degree=3, n_terms=4)
        if not complete_dim1_solution_set_check(basis[rng.randrange(14)], f, ctx.eps):
            return False, "gauge term df changes the residual"
    return True, "14 basis elements and 5 gauge terms, exact"


@check("hdw-dim2", "commuting pairs give HDW bivector solutions")
def _hdw2(ctx: Context):
    basis = g2_basis(ctx.eps)
    eta1, eta2, _ = cartan_subalgebra(basis, seed=ctx.seed)
    if not hdw_dim2(eta1, eta2, ctx.eps).is_valid:
        return False, "Cartan pair residual nonzero"
    t1, t2 = standard_torus(basis)
    if not hdw_dim2(t1, t2, ctx.eps).is_valid:
        return False, "torus pair residual nonzero"
    a, b = next(
        (basis[i], basis[j]) for i in range(14) for j in range(i + 1, 14)
        if not is_zero_matrix(bracket(basis[i], basis[j]))
    )
    try:
        hdw_dim2(a, b, ctx.eps)
    except NonCommutingError as err:
        if err.bracket != bracket(a, b):
            return False, "rejection carries the wrong bracket"
    else:
        return False, "non-commuting pair accepted"
    return True, "Cartan and torus pairs exact; non-commuting pair rejected"


@check("zero-hamiltonian", "iota_{X ^ JX} omega = 0 on the sphere")
def _zero_h(ctx: Context):
    rng = ctx.rng("zero-hamiltonian")
    for _ in range(ctx.samples):
        p = random_rational_point(rng)
        v = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(7)]
        w = random_tangent(rng, p)
        if zero_hamiltonian_residual(v, p, w, ctx.eps) != 0:
            return False, f"nonzero at {p.coords}"
    control = zero_hamiltonian_control((2, 0, 0, 0, 0, 0, 0), e(2), e(1), ctx.eps)
    if control == 0:
        return False, "off-sphere control vanishes"
    return True, f"{ctx.samples} exact zeros; off-sphere control = {control}"


@check("x-jx-commute", "[X_xi, J X_xi] = 0 for xi in g2")
def _commute(ctx: Context):
    rng = ctx.rng("commute")
    basis = g2_basis(ctx.eps)
    points = [random_rational_point(rng).coords for _ in range(ctx.samples)]
    for k, xi in enumerate(basis.elements):
        for p in points:
            if any(bracket_x_jx_at(xi, p, ctx.eps, check=False)):
                return False, f"nonzero bracket for basis element {k}"
    skew = random_skew(rng)
    if all(not any(bracket_x_jx_at(skew, p, ctx.eps, check=False)) for p in points):
        return False, "a generic skew matrix passed (negative control)"
    return True, f"14 x {ctx.samples} exact zeros; generic skew matrix fails"


@check("flow-drift", "t -> exp(t xi) p solves the dynamical HDW equation")
def _flow(ctx: Context):
    basis = g2_basis(ctx.eps)
    gen = np.random.default_rng(ctx.seed)
    xi = basis.combine([Fraction(int(c)) for c in gen.integers(-2, 3, size=14)])
    p = random_float_point(gen).coords
    traj = flows.flow_dim1(xi, p, 0.0, 100.0, 0.1, ctx.eps)
    rep = flows.drift_report(traj, ctx.eps)
    ok = rep.norm_defect <= 1e-10 and rep.invariance_defect <= 1e-9 and rep.dynamical_residual <= 1e-8
    detail = ", ".join(f"{k} {v:.2e}" for k, v in rep.as_dict().items())
    return ok, detail


@check("orbit-trichotomy", "orbit closures are points, circles or 2-tori")
def _orbits(ctx: Context):
    t1, t2 = (flows.as_float_matrix(m) for m in standard_torus(g2_basis(ctx.eps)))
    phi = (1 + 5 ** 0.5) / 2
    cases = [
        (t1, (1, 0, 0, 0, 0, 0, 0), "point"),
        (t1 + t2, planar_point((1, 2), (5, 6)), "circle"),
        (t1 + (phi - 1) * t2, planar_point((1, 2), (3, 4)), "dense_line_in_2torus"),
    ]
    for xi, p, tag in cases:
        for tol in (1e-7, 1e-6, 1e-5):
            got = flows.orbit_closure_classify(xi, p, tol)
            if got.tag != tag or got.dependence == "undetermined":
                return False, f"expected {tag}, got {got.tag} ({got.dependence}) at tol {tol:g}"
    return True, "point, circle, dense line; stable over tol in [1e-7, 1e-5]"


def planar_point(*planes) -> tuple:
    """Unit point with equal weight in the given coordinate planes (0-based pairs)."""
    v = np.zeros(7)
    for a, b in planes:
        v[a] = v[b] = 1.0
    return tuple(v / np.linalg.norm(v))


def run_checks(ctx: Context, slugs: list[str] | None = None) -> list[CheckResult]:
    results = []
    for c in CHECKS:
        if slugs is not None and c.slug not in slugs:
            continue
        start = time.perf_counter()
        try:
            passed, detail = c.run(ctx)
        except Exception as err:  # a crashing check is a failing check
            passed, detail = False, f"{type(err).__name__}: {err}"
        results.append(CheckResult(c.slug, c.title, bool(passed), detail, time.perf_counter() - start))
    return results
