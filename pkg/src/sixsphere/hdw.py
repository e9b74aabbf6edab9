"""Hamilton-de Donder-Weyl equations on the two-plectic six-sphere.

Sphere forms are represented by polynomial forms on R^7; restricting to S^6
means evaluating on tangent vectors at sphere points. The residuals below
are polynomial identities on all of R^7, a stronger statement than the
on-sphere one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .forms import PolyField, PolyForm, contract, evaluate, exterior_derivative, lie_bracket
from .g2 import NonCommutingError, bracket, fundamental_field, is_zero_matrix, require_g2
from .octonions import EPSILON, EpsilonTable, cross, omega_tilde, omega_value
from .polynomials import Poly7
from .sphere import as_point, as_tangent, j_field, project_tangent, tangent_basis

# omega is a 3-form, so n = 2
N_PLECTIC = 2


def hdw_sign(k: int, n: int = N_PLECTIC) -> int:
    """(-1)^(n+1-k)."""
    return -1 if (n + 1 - k) % 2 else 1


def theta_tilde(eps: EpsilonTable = EPSILON) -> PolyForm:
    """The potential (1/3) iota_E omega, with linear coefficients."""
    return contract(PolyField.euler(), omega_tilde(eps)).scale(Fraction(1, 3))


@dataclass
class HamiltonianForm:
    degree: int
    form: PolyForm

    def __post_init__(self):
        if self.form.degree != self.degree or self.degree not in (0, 1):
            raise ValueError("Hamiltonian degree must be 0 or 1 and match its form")

    @property
    def dimension(self) -> int:
        """HDW dimension k = n - degree."""
        return N_PLECTIC - self.degree


@dataclass
class HDWSolution:
    hamiltonian: HamiltonianForm
    field: PolyField | tuple[PolyField, PolyField]
    residual: PolyForm

    @property
    def is_valid(self) -> bool:
        return self.residual.is_zero()


def hdw_residual(fields: Sequence[PolyField], h: PolyForm, eps: EpsilonTable = EPSILON) -> PolyForm:
    """iota_X omega - (-1)^(n+1-k) dH for a decomposable k-vector X."""
    k = len(fields)
    lhs = contract(list(fields), omega_tilde(eps))
    dh = exterior_derivative(h)
    return lhs - dh if hdw_sign(k) > 0 else lhs + dh


def hdw_dim1(xi: Sequence[Sequence], eps: EpsilonTable = EPSILON) -> HDWSolution:
    """(H, X) = (-iota_{X_xi} theta, X_xi)."""
    x = fundamental_field(xi, eps)
    h = -contract(x, theta_tilde(eps))
    return HDWSolution(HamiltonianForm(1, h), x, hdw_residual([x], h, eps))


def hdw_dim2(xi: Sequence[Sequence], eta: Sequence[Sequence], eps: EpsilonTable = EPSILON) -> HDWSolution:
    """(H, X_xi ^ X_eta) with H = -iota_{X_eta} iota_{X_xi} theta, for commuting xi, eta."""
    require_g2(xi, eps)
    require_g2(eta, eps)
    br = bracket(xi, eta)
    if not is_zero_matrix(br):
        raise NonCommutingError(br, "xi and eta do not commute")
    x, y = PolyField.linear(xi), PolyField.linear(eta)
    h = -contract([x, y], theta_tilde(eps))
    return HDWSolution(HamiltonianForm(0, h), (x, y), hdw_residual([x, y], h, eps))


def complete_dim1_solution_set_check(xi: Sequence[Sequence], f: Poly7, eps: EpsilonTable = EPSILON) -> bool:
    """(H_xi + df, X_xi) still has zero residual."""
    sol = hdw_dim1(xi, eps)
    h = sol.hamiltonian.form + exterior_derivative(PolyForm.function(f))
    return hdw_residual([sol.field], h, eps).is_zero()


def hamiltonian_dim1_on_frame(xi, p, eps: EpsilonTable = EPSILON) -> list:
    """H_xi at p evaluated on the rational tangent frame at p."""
    h = hdw_dim1(xi, eps).hamiltonian.form
    pt = as_point(p).coords
    return [evaluate(h, pt, [b]) for b in tangent_basis(pt)]


def hamiltonian_dim2_at(xi, eta, p, eps: EpsilonTable = EPSILON):
    h = hdw_dim2(xi, eta, eps).hamiltonian.form
    return h.coeffs.get((), Poly7()).evaluate(as_point(p).coords)


def zero_hamiltonian_residual(v: Sequence, p, w, eps: EpsilonTable = EPSILON):
    """(iota_{X ^ JX} omega)_p(w) for X the tangent projection field of v."""
    p = as_point(p)
    w = as_tangent(p, w)
    x = project_tangent(p.coords, v)
    jx = cross(p.coords, x, eps)
    # iota_{X^JX} = iota_JX iota_X, so the value is omega(X, JX, w)
    return omega_value(x, jx, w.vec, eps)


def zero_hamiltonian_control(x: Sequence, u: Sequence, w: Sequence, eps: EpsilonTable = EPSILON):
    """omega(u, x x u, w) at an arbitrary point x of R^7 (no tangency imposed)."""
    return omega_value(u, cross(x, u, eps), w, eps)


def bracket_x_jx_at(xi: Sequence[Sequence], p, eps: EpsilonTable = EPSILON, check: bool = True) -> tuple:
    """[X_xi, J X_xi] computed as a polynomial field, evaluated at p."""
    if check:
        require_g2(xi, eps)
    x = PolyField.linear(xi)
    return lie_bracket(x, j_field(x, eps)).evaluate(as_point(p).coords)
