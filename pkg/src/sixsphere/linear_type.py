"""Linear type of 3-forms on six-dimensional spaces.

Forms on a ``Subspace6`` are constant PolyForms written in the subspace's own
basis: local index a (0..5) is the dual of the a-th basis vector. Local
vectors are 6-tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .forms import PolyField, PolyForm, contract, evaluate, wedge
from .linalg import matmul, nullspace, rank, solve, transpose
from .octonions import EPSILON, EpsilonTable, cross
from .polynomials import Poly7
from .sphere import tangent_basis

DIM = 6


class LinearType(Enum):
    COMPLEX = "complex"
    PRODUCT = "product"
    TANGENT = "tangent"
    UNKNOWN = "unknown"


class AlmostComplexError(ValueError):
    """The supplied endomorphism does not square to minus the identity."""


def _local_field(v: Sequence) -> PolyField:
    return PolyField([*(c if isinstance(c, Poly7) else Poly7.constant(c) for c in v), Poly7()])


class Subspace6:
    """A six-dimensional subspace of R^7 with a chosen basis."""

    def __init__(self, basis: Sequence[Sequence]):
        basis = [tuple(Fraction(x) if isinstance(x, int) else x for x in b) for b in basis]
        if len(basis) != DIM or any(len(b) != 7 for b in basis):
            raise ValueError("need six vectors in R^7")
        if rank(basis) != DIM:
            raise ValueError("basis vectors are linearly dependent")
        self.basis = basis

    @classmethod
    def north(cls) -> "Subspace6":
        """T_N S^6 = e1-perp with basis e2..e7."""
        return cls([[int(j == i) for j in range(7)] for i in range(1, 7)])

    @classmethod
    def tangent_at(cls, p: Sequence) -> "Subspace6":
        return cls(tangent_basis(p))

    def volume_form(self) -> PolyForm:
        return PolyForm(DIM, {tuple(range(DIM)): 1})

    def pullback(self, alpha: PolyForm, p: Sequence) -> PolyForm:
        """alpha_p restricted to the subspace, in local coordinates."""
        k = alpha.degree
        coeffs = {
            idx: evaluate(alpha, p, [self.basis[i] for i in idx])
            for idx in itertools.combinations(range(DIM), k)
        }
        return PolyForm(k, coeffs)

    def to_ambient(self, v: Sequence) -> tuple:
        return tuple(sum(c * b[r] for c, b in zip(v, self.basis)) for r in range(7))

    def to_local(self, x: Sequence) -> tuple:
        sol = solve(transpose(self.basis), list(x))
        if sol is None:
            raise ValueError("vector does not lie in the subspace")
        return tuple(sol)

    def j_matrix(self, p: Sequence, eps: EpsilonTable = EPSILON) -> list[list[Fraction]]:
        """Local matrix of u -> p x u (columns are images of basis vectors)."""
        cols = [self.to_local(cross(p, b, eps)) for b in self.basis]
        return transpose(cols)


def _check_local(alpha: PolyForm):
    for idx in alpha.coeffs:
        if any(i >= DIM for i in idx):
            raise ValueError("form uses an index outside the six local coordinates")


def delta_quadratic(alpha: PolyForm, v: Sequence) -> PolyForm:
    """q(v) = iota_v alpha ^ iota_v alpha."""
    beta = contract(_local_field(v), alpha)
    return wedge(beta, beta)


def dual_vector(alpha: PolyForm, nu: PolyForm, v: Sequence) -> tuple:
    """The unique w with (iota_v alpha) ^ alpha = iota_w nu."""
    _check_local(alpha)
    top = tuple(range(DIM))
    if nu.degree != DIM or set(nu.coeffs) != {top}:
        raise ValueError("nu must be a nonzero multiple of the local top form")
    c = nu.coeffs[top]
    c = c.constant_term() if isinstance(c, Poly7) and c.degree() <= 0 else c
    five = wedge(contract(_local_field(v), alpha), alpha)
    w = []
    for i in range(DIM):
        rest = top[:i] + top[i + 1:]
        coef = five.coeffs.get(rest, Poly7())
        if (-1) ** i < 0:
            coef = -coef
        w.append(coef * (1 / Fraction(c)))
    # constant polynomials collapse to scalars for numeric input
    return tuple(x.constant_term() if x.degree() <= 0 else x for x in w)


def symbolic_vector() -> tuple[Poly7, ...]:
    """(v1, ..., v6) as polynomial variables x1..x6."""
    return tuple(Poly7.var(i) for i in range(DIM))


def delta_reduction(alpha: PolyForm, nu: PolyForm | None = None) -> dict[tuple[int, int], Poly7]:
    """Components (v ^ w_v)_{ab}, a<b, as quadratic polynomials in v.

    The polynomial variable x_{a+1} stands for the local component v^{a+1}.
    """
    _check_local(alpha)
    nu = nu or PolyForm(DIM, {tuple(range(DIM)): 1})
    v = symbolic_vector()
    w = dual_vector(alpha, nu, v)
    w = [x if isinstance(x, Poly7) else Poly7.constant(x) for x in w]
    out = {}
    for a, b in itertools.combinations(range(DIM), 2):
        comp = v[a] * w[b] - v[b] * w[a]
        if not comp.is_zero():
            out[(a, b)] = comp
    return out


def _quadratic_matrix(q: Poly7) -> list[list[Fraction]]:
    m = [[Fraction(0)] * DIM for _ in range(DIM)]
    for exp, c in q.terms.items():
        if sum(exp) != 2 or any(exp[DIM:]):
            raise ValueError("expected a quadratic form in v1..v6")
        idx = [i for i in range(DIM) for _ in range(exp[i])]
        i, j = idx
        if i == j:
            m[i][i] += c
        else:
            m[i][j] += c / 2
            m[j][i] += c / 2
    return m


def semidefinite_sign(m: Sequence[Sequence]) -> int:
    """+1 (PSD), -1 (NSD), 0 otherwise; the zero matrix counts as +1."""
    for sign in (1, -1):
        a = [[sign * Fraction(x) for x in row] for row in m]
        n = len(a)
        ok = True
        for k in range(n):
            piv = a[k][k]
            if piv < 0:
                ok = False
                break
            if piv == 0:
                if any(a[k][j] != 0 for j in range(k, n)):
                    ok = False
                    break
                continue
            for i in range(k + 1, n):
                f = a[i][k] / piv
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        if ok:
            return sign
    return 0


@dataclass
class DeltaVerdict:
    trivial: bool | None
    components: dict[tuple[int, int], Poly7]
    witness: tuple | None = None


def analyse_delta(alpha: PolyForm, nu: PolyForm | None = None) -> DeltaVerdict:
    comps = delta_reduction(alpha, nu)
    sign_definite = []
    for q in comps.values():
        m = _quadratic_matrix(q)
        if semidefinite_sign(m) != 0:
            sign_definite.append(m)
    stacked = [row for m in sign_definite for row in m]
    common = nullspace(stacked, DIM) if stacked else [
        [Fraction(int(i == j)) for j in range(DIM)] for i in range(DIM)
    ]
    if not common:
        return DeltaVerdict(True, comps)
    candidates = [tuple(v) for v in common]
    candidates += [tuple(Fraction(int(i == j)) for j in range(DIM)) for i in range(DIM)]
    for v in candidates:
        if all(q.evaluate((*v, 0)) == 0 for q in comps.values()):
            return DeltaVerdict(False, comps, v)
    return DeltaVerdict(None, comps)


def delta_is_trivial(alpha: PolyForm, nu: PolyForm | None = None) -> bool | None:
    """True iff Delta(alpha) = {0}; None when the reduction does not decide."""
    return analyse_delta(alpha, nu).trivial


def is_nondegenerate(alpha: PolyForm) -> bool:
    cols = []
    for j in range(DIM):
        beta = contract(_local_field([int(i == j) for i in range(DIM)]), alpha)
        cols.append([beta.coeffs.get(pair, Poly7()).constant_term()
                     for pair in itertools.combinations(range(DIM), 2)])
    return rank(transpose(cols)) == DIM


def linear_type(alpha: PolyForm) -> LinearType:
    """Complex when Delta is trivial; unknown otherwise (no full classification)."""
    if not is_nondegenerate(alpha):
        return LinearType.UNKNOWN
    return LinearType.COMPLEX if delta_is_trivial(alpha) else LinearType.UNKNOWN


def _local_values(alpha: PolyForm) -> dict:
    basis = [tuple(Fraction(int(i == j)) for j in range(7)) for i in range(DIM)]
    zero = (0,) * 7
    return {
        t: evaluate(alpha, zero, [basis[i] for i in t])
        for t in itertools.product(range(DIM), repeat=3)
    }


def certify_complex_type(alpha: PolyForm, J: Sequence[Sequence]) -> bool:
    """alpha(Ju,v,w) = alpha(u,Jv,w) = alpha(u,v,Jw) on all basis triples."""
    _check_local(alpha)
    sq = matmul(J, J)
    if any(sq[i][j] != -int(i == j) for i in range(DIM) for j in range(DIM)):
        raise AlmostComplexError("J does not square to -1")
    vals = _local_values(alpha)

    def value_with_j(slot: int, t: tuple):
        # J e_b = sum_r J[r][b] e_r
        total = Fraction(0)
        for r in range(DIM):
            c = J[r][t[slot]]
            if c:
                s = list(t)
                s[slot] = r
                total += c * vals[tuple(s)]
        return total

    for t in itertools.product(range(DIM), repeat=3):
        a = value_with_j(0, t)
        if a != value_with_j(1, t) or a != value_with_j(2, t):
            return False
    return True


class ZeroVectorError(ValueError):
    pass


def contraction_kernel(alpha: PolyForm, v: Sequence) -> list[tuple]:
    """Exact basis of {w : iota_w iota_v alpha = 0}."""
    if all(c == 0 for c in v):
        raise ZeroVectorError("contraction kernel needs a nonzero vector")
    _check_local(alpha)
    beta = contract(_local_field(v), alpha)
    cols = []
    for j in range(DIM):
        gamma = contract(_local_field([int(i == j) for i in range(DIM)]), beta)
        cols.append([gamma.coeffs.get((k,), Poly7()).constant_term() for k in range(DIM)])
    return [tuple(x) for x in nullspace(transpose(cols), DIM)]
