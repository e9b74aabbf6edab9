"""Floating-point flows of fundamental fields and their orbit closures.

Flows are the one-parameter subgroups t -> exp(t xi) p themselves; no ODE
stepping is involved.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg

from .g2 import annihilation_defect
from .octonions import EPSILON, EpsilonTable

MEMBERSHIP_TOL = 1e-10
COMMUTE_TOL = 1e-12
DENOMINATOR_CAP = 10**6


class FlowError(ValueError):
    pass


def as_float_matrix(a) -> np.ndarray:
    m = np.array([[float(x) for x in row] for row in a], dtype=float)
    if m.shape != (7, 7):
        raise ValueError("expected a 7x7 matrix")
    return m


def matrix_exp(xi, t: float = 1.0) -> np.ndarray:
    """exp(t xi) by scaling and squaring with a Pade approximant."""
    a = t * as_float_matrix(xi)
    if not np.all(np.isfinite(a)):
        raise FlowError("non-finite matrix entries")
    return scipy.linalg.expm(a)


def orthogonality_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a.T @ a - np.eye(a.shape[0]))))


def invariance_defect(a: np.ndarray, eps: EpsilonTable = EPSILON) -> float:
    """max |omega(Au,Av,Aw) - omega(u,v,w)| over basis triples."""
    w = eps.array.astype(float)
    pulled = np.einsum("abc,ai,bj,ck->ijk", w, a, a, a)
    return float(np.max(np.abs(pulled - w)))


def _check_membership(xi: np.ndarray, eps: EpsilonTable):
    defect = max(abs(float(d)) for d in annihilation_defect(xi.tolist(), eps))
    if defect > MEMBERSHIP_TOL:
        raise FlowError(f"generator is not in g2 (defect {defect:.3g})")


def _unit_point(p) -> np.ndarray:
    v = np.array([float(c) for c in p], dtype=float)
    if v.shape != (7,):
        raise ValueError("a point needs 7 coordinates")
    n = np.linalg.norm(v)
    if abs(n - 1) > 1e-9:
        raise FlowError(f"point is off the unit sphere (|p| = {n:.12g})")
    return v / n


@dataclass
class Trajectory:
    times: np.ndarray  # shape (n,) or (n, 2)
    points: np.ndarray  # shape (n, 7)
    meta: dict = field(default_factory=dict)

    @property
    def n_params(self) -> int:
        return 1 if self.times.ndim == 1 else self.times.shape[1]

    def header(self) -> list[str]:
        tcols = ["t"] if self.n_params == 1 else ["t1", "t2"]
        return tcols + [f"x{i}" for i in range(1, 8)]

    def rows(self):
        times = self.times.reshape(len(self.times), -1)
        for t, x in zip(times, self.points):
            yield [*t, *x]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header())
        for row in self.rows():
            w.writerow([f"{v:.17g}" for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "meta": self.meta,
                "columns": self.header(),
                "rows": [[float(v) for v in row] for row in self.rows()],
            },
        )

    @classmethod
    def from_csv(cls, text: str) -> "Trajectory":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        data = np.array([[float(v) for v in row] for row in reader])
        k = 1 if header[0] == "t" else 2
        times = data[:, 0] if k == 1 else data[:, :2]
        return cls(times, data[:, k:], {})


def _grid(t0: float, t1: float, dt: float) -> np.ndarray:
    if dt <= 0:
        raise ValueError("dt must be positive")
    n = int(math.floor((t1 - t0) / dt + 1e-9)) + 1
    if n < 1:
        raise ValueError("empty time range")
    return t0 + dt * np.arange(n)


def flow_dim1(xi, p, t0: float, t1: float, dt: float, eps: EpsilonTable = EPSILON) -> Trajectory:
    """Samples of t -> exp(t xi) p on [t0, t1]."""
    x = as_float_matrix(xi)
    _check_membership(x, eps)
    p0 = _unit_point(p)
    times = _grid(t0, t1, dt)
    points = np.array([matrix_exp(x, t) @ p0 for t in times])
    meta = {
        "generator": {"xi": x.tolist()},
        "base_point": p0.tolist(),
        "grid": {"t0": t0, "t1": t1, "dt": dt},
    }
    return Trajectory(times, points, meta)


def flow_dim2(xi, eta, p, t1_max: float, t2_max: float, dt: float,
              eps: EpsilonTable = EPSILON) -> Trajectory:
    """Samples of (t1, t2) -> exp(t2 eta) exp(t1 xi) p on [0,t1_max] x [0,t2_max]."""
    x, y = as_float_matrix(xi), as_float_matrix(eta)
    _check_membership(x, eps)
    _check_membership(y, eps)
    comm = float(np.max(np.abs(x @ y - y @ x)))
    if comm > COMMUTE_TOL:
        raise FlowError(f"generators do not commute (|[xi,eta]| = {comm:.3g})")
    p0 = _unit_point(p)
    g1, g2 = _grid(0.0, t1_max, dt), _grid(0.0, t2_max, dt)
    first = [matrix_exp(x, t) @ p0 for t in g1]
    second = [matrix_exp(y, t) for t in g2]
    times, points = [], []
    for (i, a), (j, b) in itertools.product(enumerate(g1), enumerate(g2)):
        times.append((a, b))
        points.append(second[j] @ first[i])
    meta = {
        "generator": {"xi": x.tolist(), "eta": y.tolist()},
        "base_point": p0.tolist(),
        "grid": {"t1_max": t1_max, "t2_max": t2_max, "dt": dt},
    }
    return Trajectory(np.array(times), np.array(points), meta)


def tangent_frame(p: np.ndarray) -> np.ndarray:
    """Six orthonormal vectors spanning p-perp (rows)."""
    u, _, _ = np.linalg.svd(p.reshape(7, 1))
    return u[:, 1:].T


def dynamical_residual(xi, point: np.ndarray, velocity: np.ndarray | None = None,
                       eps: EpsilonTable = EPSILON, dh=None) -> float:
    """max over tangent-frame pairs of |(iota_v omega - dH_xi)(a, b)| at a point."""
    x = as_float_matrix(xi)
    if dh is None:
        dh = _dh_float(x, eps)
    v = x @ point if velocity is None else velocity
    w = eps.array.astype(float)
    frame = tangent_frame(point / np.linalg.norm(point))
    lhs = np.einsum("ijk,i,aj,bk->ab", w, v, frame, frame)
    rhs = dh(point, frame)
    return float(np.max(np.abs(lhs - rhs)))


def _dh_float(x: np.ndarray, eps: EpsilonTable):
    """dH_xi as a float closure on tangent frames.

    H_xi(c) = -(1/3) omega(x, xi x, c), so h_k = -(1/3) w_ijk x_i (xi x)_j.
    """
    w = eps.array.astype(float)

    def dh(point: np.ndarray, frame: np.ndarray) -> np.ndarray:
        xp = x @ point
        # grad[l, k] = d h_k / d x_l
        grad = -(np.einsum("ljk,j->lk", w, xp) + np.einsum("ijk,i,jl->lk", w, point, x)) / 3
        return frame @ (grad - grad.T) @ frame.T
    return dh


@dataclass
class DriftReport:
    norm_defect: float
    invariance_defect: float
    dynamical_residual: float
    orbit_defect: float

    def max_defect(self) -> float:
        return max(self.norm_defect, self.invariance_defect, self.dynamical_residual, self.orbit_defect)

    def as_dict(self) -> dict:
        return {
            "norm_defect": self.norm_defect,
            "invariance_defect": self.invariance_defect,
            "dynamical_residual": self.dynamical_residual,
            "orbit_defect": self.orbit_defect,
        }


def drift_report(traj: Trajectory, eps: EpsilonTable = EPSILON) -> DriftReport:
    """Norm, omega-invariance, dynamical-residual and orbit defects of a trajectory."""
    pts = traj.points
    norm_def = float(np.max(np.abs(np.linalg.norm(pts, axis=1) - 1))) if len(pts) else 0.0
    gen = traj.meta.get("generator", {})
    if "xi" not in gen or traj.n_params != 1:
        return DriftReport(norm_def, 0.0, 0.0, 0.0)
    x = np.array(gen["xi"], dtype=float)
    p0 = np.array(traj.meta["base_point"], dtype=float)
    dh = _dh_float(x, eps)
    inv, res, orb = 0.0, 0.0, 0.0
    for t, pt in zip(traj.times, pts):
        a = matrix_exp(x, float(t))
        inv = max(inv, invariance_defect(a, eps))
        res = max(res, dynamical_residual(x, pt, eps=eps, dh=dh))
        orb = max(orb, float(np.max(np.abs(a @ p0 - pt))))
    return DriftReport(norm_def, inv, res, orb)


def finite_difference_velocity(traj: Trajectory) -> np.ndarray:
    """Central differences of a one-parameter trajectory (interior samples)."""
    dt = np.diff(traj.times)
    return (traj.points[2:] - traj.points[:-2]) / (dt[1:] + dt[:-1])[:, None]


# orbit closures ------------------------------------------------------------


@dataclass
class InvariantPlane:
    frequency: float
    basis: np.ndarray  # 2 x 7 (or 1 x 7 for the fixed line)


def invariant_planes(xi) -> list[InvariantPlane]:
    """Orthogonal decomposition of a skew matrix into rotation planes."""
    a = as_float_matrix(xi)
    t, q = scipy.linalg.schur(a, output="real")
    planes = []
    i, n = 0, a.shape[0]
    scale = max(1.0, float(np.max(np.abs(a))))
    while i < n:
        if i + 1 < n and abs(t[i + 1, i]) > 1e-14 * scale:
            freq = math.sqrt(abs(t[i, i + 1] * t[i + 1, i]))
            planes.append(InvariantPlane(freq, q[:, i:i + 2].T))
            i += 2
        else:
            planes.append(InvariantPlane(0.0, q[:, i:i + 1].T))
            i += 1
    return planes


def continued_fraction_convergents(x: float, max_terms: int = 40):
    h0, h1, k0, k1 = 0, 1, 1, 0
    r = x
    for _ in range(max_terms):
        a = math.floor(r)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield Fraction(h1, k1)
        frac = r - a
        if frac < 1e-15:
            return
        r = 1 / frac


def rational_verdict(ratio: float, tol: float) -> tuple[bool, Fraction | None]:
    """Is ratio rational at tolerance tol?

    The first convergent within tol must have a small denominator, at most
    min(10^6, tol^(-1/3)); a generic irrational first gets within tol at a
    denominator of order tol^(-1/2).
    """
    q_max = min(DENOMINATOR_CAP, int(tol ** (-1 / 3)))
    for c in continued_fraction_convergents(ratio):
        if abs(ratio - c) <= tol * max(1.0, abs(ratio)):
            return c.denominator <= q_max, c
        if c.denominator > q_max:
            return False, None
    return False, None


@dataclass
class OrbitClass:
    tag: str  # point | circle | dense_line_in_2torus | torus2
    frequencies: list[float]
    dependence: str  # rational | irrational | undetermined
    ratios: list[Fraction | None] = field(default_factory=list)


def _retained_frequencies(xi, p: np.ndarray, tol: float) -> list[float]:
    kept = []
    for plane in invariant_planes(xi):
        if plane.frequency <= tol:
            continue
        if np.linalg.norm(plane.basis @ p) <= tol:
            continue
        kept.append(plane.frequency)
    return sorted(kept)


def _dependence(freqs: list[float], tol: float) -> tuple[bool, list]:
    base = freqs[0]
    verdicts, ratios = [], []
    for f in freqs[1:]:
        ok, c = rational_verdict(f / base, tol)
        verdicts.append(ok)
        ratios.append(c)
    return all(verdicts), ratios


def orbit_closure_classify(xi, p, tol: float = 1e-6) -> OrbitClass:
    """Closure type of the orbit t -> exp(t xi) p."""
    p0 = _unit_point(p)
    freqs = _retained_frequencies(xi, p0, tol)
    if not freqs:
        return OrbitClass("point", [], "rational")
    rational, ratios = _dependence(freqs, tol)
    verdicts = {_dependence(freqs, t)[0] for t in (tol / 10, tol, tol * 10)}
    dependence = "undetermined" if len(verdicts) > 1 else ("rational" if rational else "irrational")
    tag = "circle" if rational else "dense_line_in_2torus"
    return OrbitClass(tag, freqs, dependence, ratios)


def classify_pair(xi, eta, p, tol: float = 1e-6) -> OrbitClass:
    """Image type of (t1, t2) -> exp(t2 eta) exp(t1 xi) p for commuting xi, eta.

    Only the span-degenerate case and the Cartan (two-dimensional span) case
    are treated; in the latter the image is a torus orbit of dimension
    rank{xi p, eta p}.
    """
    x, y = as_float_matrix(xi), as_float_matrix(eta)
    p0 = _unit_point(p)
    span = np.linalg.matrix_rank(np.stack([x.ravel(), y.ravel()]), tol=tol)
    if span == 0:
        return OrbitClass("point", [], "rational")
    if span == 1:
        gen = x if np.linalg.norm(x) >= np.linalg.norm(y) else y
        return orbit_closure_classify(gen, p0, tol)
    dim = np.linalg.matrix_rank(np.stack([x @ p0, y @ p0]), tol=tol)
    tag = {0: "point", 1: "circle", 2: "torus2"}[int(dim)]
    return OrbitClass(tag, [], "undetermined" if dim == 1 else "rational")
