"""Tangent calculus on S^6: J, the CR extension, the Nijenhuis tensor, the metric."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .forms import PolyField, bracket_at
from .linalg import rank
from .octonions import EPSILON, EpsilonTable, cross, dot, omega_value
from .polynomials import Poly7

FLOAT_TOL = 1e-12


class BackendError(ValueError):
    """An exact-only operation received float data."""


def _is_exact(values: Sequence) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


@dataclass(frozen=True)
class SpherePoint:
    coords: tuple

    def __post_init__(self):
        coords = tuple(Fraction(c) if isinstance(c, int) else c for c in self.coords)
        if len(coords) != 7:
            raise ValueError("a sphere point has 7 coordinates")
        object.__setattr__(self, "coords", coords)
        norm2 = sum(c * c for c in coords)
        if self.backend == "exact":
            if norm2 != 1:
                raise ValueError(f"point is not on the unit sphere (|p|^2 = {norm2})")
        elif abs(float(norm2) - 1) > FLOAT_TOL:
            raise ValueError(f"point is off the unit sphere by {abs(float(norm2) - 1):.3g}")

    @property
    def backend(self) -> str:
        return "exact" if _is_exact(self.coords) else "float"

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self) -> int:
        return 7

    def as_array(self) -> np.ndarray:
        return np.array([float(c) for c in self.coords])


NORTH = SpherePoint((1, 0, 0, 0, 0, 0, 0))


@dataclass(frozen=True)
class TangentVector:
    base: SpherePoint
    vec: tuple

    def __post_init__(self):
        vec = tuple(Fraction(c) if isinstance(c, int) else c for c in self.vec)
        if len(vec) != 7:
            raise ValueError("a tangent vector has 7 components")
        object.__setattr__(self, "vec", vec)
        ip = dot(vec, self.base.coords)
        if _is_exact(vec) and self.base.backend == "exact":
            if ip != 0:
                raise ValueError(f"vector is not tangent at the base point (<v,p> = {ip})")
        elif abs(float(ip)) > FLOAT_TOL:
            raise ValueError(f"vector is not tangent at the base point (<v,p> = {float(ip):.3g})")

    def __iter__(self):
        return iter(self.vec)

    def __getitem__(self, i):
        return self.vec[i]


def as_point(p) -> SpherePoint:
    return p if isinstance(p, SpherePoint) else SpherePoint(tuple(p))


def as_tangent(p: SpherePoint, u) -> TangentVector:
    if isinstance(u, TangentVector):
        if u.base != p:
            raise ValueError("tangent vector is based at a different point")
        return u
    return TangentVector(p, tuple(u))


def rational_sphere_point(u: Sequence) -> SpherePoint:
    """Inverse stereographic image ((1-|u|^2), 2u) / (1+|u|^2), exact."""
    if len(u) != 6:
        raise ValueError("expected 6 parameters")
    u = [Fraction(x) for x in u]
    s = sum(x * x for x in u)
    return SpherePoint(((1 - s) / (1 + s), *(2 * x / (1 + s) for x in u)))


def random_rational_point(rng: random.Random, bound: int = 3) -> SpherePoint:
    return rational_sphere_point(
        [Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(6)]
    )


def project_tangent(p: Sequence, v: Sequence) -> tuple:
    """v - <v,p> p."""
    c = dot(v, p)
    return tuple(a - c * b for a, b in zip(v, p))


def random_tangent(rng: random.Random, p: SpherePoint, bound: int = 5) -> TangentVector:
    v = [Fraction(rng.randint(-bound, bound), rng.randint(1, 3)) for _ in range(7)]
    return TangentVector(p, project_tangent(p.coords, v))


def tangent_basis(p: Sequence) -> list[tuple]:
    """Six independent rational tangent vectors at p (projected coordinate axes)."""
    coords = list(p)
    drop = max(range(7), key=lambda i: abs(coords[i]))
    basis = []
    for i in range(7):
        if i == drop:
            continue
        ei = [Fraction(int(j == i)) for j in range(7)]
        basis.append(project_tangent(coords, ei))
    return basis


def tangent_projection_field(v: Sequence) -> PolyField:
    """X(x) = v - <v,x> x, tangent to the unit sphere along it."""
    lin = Poly7.linear(v)
    return PolyField([Poly7.constant(c) - lin * Poly7.var(i) for i, c in enumerate(v)])


def j_field(y: PolyField, eps: EpsilonTable = EPSILON) -> PolyField:
    """x -> x x Y(x), the polynomial extension of J applied to a field."""
    return PolyField.euler().cross(y, eps)


def J_at(p, u, eps: EpsilonTable = EPSILON) -> TangentVector:
    p = as_point(p)
    u = as_tangent(p, u)
    return TangentVector(p, cross(p.coords, u.vec, eps))


def _exact_sqrt(q: Fraction) -> Fraction | None:
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def J_tilde(x: Sequence, u: Sequence, eps: EpsilonTable = EPSILON) -> tuple:
    """(x/|x|) x u; exact whenever |x| is rational."""
    norm2 = sum(c * c for c in x)
    if norm2 == 0:
        raise ValueError("J_tilde is undefined at the origin")
    r = _exact_sqrt(Fraction(norm2)) if _is_exact(x) else None
    if r is None:
        r = math.sqrt(float(norm2))
    return tuple(c / r for c in cross(x, u, eps))


def nijenhuis_closed(p, u, v, eps: EpsilonTable = EPSILON) -> TangentVector:
    """N_J(u, v) = -4 p x (u x v)."""
    p = as_point(p)
    u, v = as_tangent(p, u), as_tangent(p, v)
    w = J_tilde(p.coords, cross(u.vec, v.vec, eps), eps)
    return TangentVector(p, tuple(-4 * c for c in w))


def nijenhuis_oracle(p, u: Sequence, v: Sequence, eps: EpsilonTable = EPSILON) -> TangentVector:
    """[JY,JZ] - J[JY,Z] - J[Y,JZ] - [Y,Z] from polynomial vector fields, at p.

    Y, Z are the tangent projection fields of u, v and J acts as x -> x x (.);
    every bracket is an exact polynomial bracket evaluated at p.
    """
    p = as_point(p)
    if p.backend != "exact" or not _is_exact(u) or not _is_exact(v):
        raise BackendError("the bracket oracle is exact-only")
    y, z = tangent_projection_field(u), tangent_projection_field(v)
    jy, jz = j_field(y, eps), j_field(z, eps)
    pt = p.coords
    t1 = bracket_at(jy, jz, pt)
    t2 = cross(pt, bracket_at(jy, z, pt), eps)
    t3 = cross(pt, bracket_at(y, jz, pt), eps)
    t4 = bracket_at(y, z, pt)
    return TangentVector(p, tuple(a - b - c - d for a, b, c, d in zip(t1, t2, t3, t4)))


def round_metric(p, u, v):
    p = as_point(p)
    return dot(as_tangent(p, u).vec, as_tangent(p, v).vec)


def omega_metric_residual(p, u, v, w, eps: EpsilonTable = EPSILON):
    """omega_p(u,v,w) + g(N_J(u,v), J w)/4; identically zero."""
    p = as_point(p)
    u, v, w = (as_tangent(p, x) for x in (u, v, w))
    n = nijenhuis_closed(p, u, v, eps)
    jw = J_at(p, w, eps)
    return omega_value(u.vec, v.vec, w.vec, eps) + round_metric(p, n, jw) / 4


def nijenhuis_matrix(p, eps: EpsilonTable = EPSILON) -> list[list]:
    """7 x 15 matrix of N_J on the pairs of a tangent basis at p."""
    p = as_point(p)
    if p.backend == "exact":
        basis = tangent_basis(p.coords)
    else:
        basis = [tuple(b) for b in _float_tangent_frame(p.as_array())]
    cols = [
        nijenhuis_closed(p, TangentVector(p, basis[i]), TangentVector(p, basis[j]), eps).vec
        for i, j in itertools.combinations(range(6), 2)
    ]
    return [list(r) for r in zip(*cols)]


def _float_tangent_frame(p: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(np.column_stack([p, np.eye(7)]))
    frame = q[:, 1:7].T
    # remove any residual normal component
    return frame - np.outer(frame @ p, p)


def nijenhuis_rank(p, eps: EpsilonTable = EPSILON, tol: float = 1e-8) -> int:
    """Rank of Lambda^2 T_p -> T_p; exact for rational points, SVD otherwise."""
    p = as_point(p)
    m = nijenhuis_matrix(p, eps)
    if p.backend == "exact":
        return rank(m)
    s = np.linalg.svd(np.array(m, dtype=float), compute_uv=False)
    return int(np.sum(s > tol * max(s.max(), 1.0)))


def lie_derivative_J_at(xi_field: PolyField, y: PolyField, p, eps: EpsilonTable = EPSILON) -> tuple:
    """((L_X J) Y)(p) = [X, JY](p) - J[X, Y](p)."""
    pt = as_point(p).coords
    a = bracket_at(xi_field, j_field(y, eps), pt)
    b = cross(pt, bracket_at(xi_field, y, pt), eps)
    return tuple(x - z for x, z in zip(a, b))


def random_float_point(rng: np.random.Generator) -> SpherePoint:
    v = rng.normal(size=7)
    v /= np.linalg.norm(v)
    return SpherePoint(tuple(float(c) for c in v))
