"""The Lie algebra g2 as the infinitesimal stabilizer of the canonical 3-form.

The basis is the reduced-echelon nullspace of A -> A.omega over all of gl(7);
antisymmetry of the result is checked, not assumed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .forms import PolyField
from .linalg import matmul, matvec, nullspace, rank, rref, solve
from .octonions import EPSILON, EpsilonTable, cross
from .polynomials import fraction_str, parse_scalar

Matrix7 = list[list[Fraction]]

TRIPLES = list(itertools.combinations(range(7), 3))


class NotInG2Error(ValueError):
    """A matrix expected in g2 fails to annihilate the canonical 3-form."""


class NonCommutingError(ValueError):
    """A pair expected to commute has a nonzero bracket (attached as .bracket)."""

    def __init__(self, bracket, message: str = "pair does not commute"):
        super().__init__(message)
        self.bracket = bracket


def stabilizer_system(eps: EpsilonTable = EPSILON) -> list[list[int]]:
    """35 x 49 integer matrix of A -> (A.omega)(e_i, e_j, e_k), i<j<k.

    (A.omega)(u,v,w) = omega(Au,v,w) + omega(u,Av,w) + omega(u,v,Aw); the
    unknown A[l][m] sits in column 7*l + m.
    """
    e = eps.array
    rows = []
    for i, j, k in TRIPLES:
        row = [0] * 49
        for l in range(7):
            # A e_i = sum_l A[l][i] e_l
            row[7 * l + i] += int(e[l, j, k])
            row[7 * l + j] += int(e[i, l, k])
            row[7 * l + k] += int(e[i, j, l])
        rows.append(row)
    return rows


def annihilation_defect(a: Sequence[Sequence], eps: EpsilonTable = EPSILON) -> list:
    """Components of A.omega on the 35 basis triples (all zero iff A in g2)."""
    flat = [x for row in a for x in row]
    return [sum(c * x for c, x in zip(r, flat) if c) for r in stabilizer_system(eps)]


def in_g2(a: Sequence[Sequence], eps: EpsilonTable = EPSILON, tol: float | None = None) -> bool:
    defect = annihilation_defect(a, eps)
    if tol is None:
        return all(d == 0 for d in defect)
    return max(abs(float(d)) for d in defect) <= tol


def require_g2(a: Sequence[Sequence], eps: EpsilonTable = EPSILON, tol: float | None = None):
    if not in_g2(a, eps, tol):
        raise NotInG2Error("matrix does not annihilate the canonical 3-form")


def bracket(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    ab, ba = matmul(a, b), matmul(b, a)
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]


def is_zero_matrix(a: Sequence[Sequence]) -> bool:
    return all(x == 0 for row in a for x in row)


def _reshape(v: Sequence) -> Matrix7:
    return [list(v[7 * r: 7 * r + 7]) for r in range(7)]


def _flatten(a: Sequence[Sequence]) -> list:
    return [x for row in a for x in row]


@dataclass
class G2Basis:
    elements: list[Matrix7]
    free_columns: list[int]
    structure_constants: dict[tuple[int, int, int], Fraction] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i: int) -> Matrix7:
        return self.elements[i]

    def coordinates(self, a: Sequence[Sequence]) -> list[Fraction] | None:
        """Exact coordinates of a in this basis, or None if a is outside the span."""
        flat = _flatten(a)
        coords = [Fraction(flat[c]) for c in self.free_columns]
        if _flatten(self.combine(coords)) != [Fraction(x) for x in flat]:
            return None
        return coords

    def combine(self, coords: Sequence) -> Matrix7:
        out = [[Fraction(0)] * 7 for _ in range(7)]
        for c, m in zip(coords, self.elements):
            if c:
                for r in range(7):
                    for s in range(7):
                        if m[r][s]:
                            out[r][s] += c * m[r][s]
        return out

    def structure_tensor(self) -> list[list[list[Fraction]]]:
        n = len(self)
        c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for (i, j, k), v in self.structure_constants.items():
            c[i][j][k] = v
        return c

    def as_float(self) -> np.ndarray:
        return np.array([[[float(x) for x in row] for row in m] for m in self.elements])

    def to_json(self) -> dict:
        return {
            "basis": [
                {"name": f"xi_{k}", "matrix": [[fraction_str(x) for x in row] for row in m]}
                for k, m in enumerate(self.elements)
            ],
            "structure_constants": [
                [i, j, k, fraction_str(v)]
                for (i, j, k), v in sorted(self.structure_constants.items())
            ],
        }


def compute_g2_basis(eps: EpsilonTable = EPSILON) -> G2Basis:
    """Exact basis of {A in gl(7) : A.omega = 0} with its structure constants."""
    system = stabilizer_system(eps)
    vectors = nullspace(system, 49)
    pivots = set(rref(system)[1])
    free = [c for c in range(49) if c not in pivots]
    elements = [_reshape(v) for v in vectors]
    basis = G2Basis(elements, free)
    consts: dict[tuple[int, int, int], Fraction] = {}
    for i, j in itertools.combinations(range(len(elements)), 2):
        coords = basis.coordinates(bracket(elements[i], elements[j]))
        if coords is None:
            raise ArithmeticError(f"bracket of basis elements {i},{j} leaves the algebra")
        for k, c in enumerate(coords):
            if c:
                consts[(i, j, k)] = c
                consts[(j, i, k)] = -c
    basis.structure_constants = consts
    return basis


_CACHE: dict[EpsilonTable, G2Basis] = {}


def g2_basis(eps: EpsilonTable = EPSILON) -> G2Basis:
    """Cached compute_g2_basis."""
    if eps not in _CACHE:
        _CACHE[eps] = compute_g2_basis(eps)
    return _CACHE[eps]


def basis_from_json(data: dict) -> list[Matrix7]:
    return [[[parse_scalar(x) for x in row] for row in item["matrix"]] for item in data["basis"]]


def killing_form(basis: G2Basis) -> np.ndarray:
    """K_ij = tr(ad xi_i ad xi_j) from the structure constants."""
    c = np.array(basis.structure_tensor(), dtype=float)
    # (ad xi_i)[k][j] = c[i][j][k]
    ad = np.transpose(c, (0, 2, 1))
    return np.einsum("ikl,jlk->ij", ad, ad)


def jacobi_holds(basis: G2Basis) -> bool:
    c = basis.structure_tensor()
    n = len(basis)
    for i, j, k in itertools.combinations(range(n), 3):
        for m in range(n):
            total = Fraction(0)
            for l in range(n):
                total += (c[i][j][l] * c[l][k][m] + c[j][k][l] * c[l][i][m]
                          + c[k][i][l] * c[l][j][m])
            if total:
                return False
    return True


def centralizer(basis: G2Basis, xi: Sequence[Sequence]) -> list[Matrix7]:
    """Exact basis of {eta in g2 : [xi, eta] = 0}."""
    brackets = [_flatten(bracket(xi, m)) for m in basis.elements]
    rows = [list(r) for r in zip(*brackets)]
    return [basis.combine(v) for v in nullspace(rows, len(basis))]


def _canonical_pair(mats: Sequence[Matrix7]) -> list[Matrix7]:
    reduced, _ = rref([_flatten(m) for m in mats])
    return [_reshape(r) for r in reduced]


def standard_torus(basis: G2Basis | None = None) -> tuple[Matrix7, Matrix7]:
    """Basis of the maximal torus of g2 acting by rotations in the planes
    (e2,e3), (e4,e5), (e6,e7); it fixes e1."""
    basis = basis or g2_basis()
    blocks = {(1, 2), (2, 1), (3, 4), (4, 3), (5, 6), (6, 5)}
    rows = [
        [m[r][s] for m in basis.elements]
        for r in range(7) for s in range(7) if (r, s) not in blocks
    ]
    pair = _canonical_pair([basis.combine(v) for v in nullspace(rows, len(basis))])
    if len(pair) != 2:
        raise ArithmeticError("expected a two-dimensional torus")
    return pair[0], pair[1]


def cartan_subalgebra(basis: G2Basis, seed: int = 0, max_tries: int = 20):
    """(eta1, eta2) spanning the centralizer of a random regular element.

    Returns the pair together with the generating element xi.
    """
    rng = random.Random(seed)
    for _ in range(max_tries):
        coords = [Fraction(rng.randint(-9, 9)) for _ in range(len(basis))]
        if not any(coords):
            continue
        xi = basis.combine(coords)
        cent = centralizer(basis, xi)
        if len(cent) == 2:
            eta1, eta2 = _canonical_pair(cent)
            if not is_zero_matrix(bracket(eta1, eta2)):
                raise ArithmeticError("centralizer of a regular element is not abelian")
            return eta1, eta2, xi
    raise RuntimeError(f"no regular element found in {max_tries} tries")


def fundamental_field(xi: Sequence[Sequence], eps: EpsilonTable = EPSILON, check: bool = True) -> PolyField:
    """The linear field x -> xi x, for xi in g2."""
    if check:
        require_g2(xi, eps)
    return PolyField.linear(xi)


@dataclass
class TotallyRealCertificate:
    consistent: bool
    coefficient_rank: int
    augmented_rank: int
    solution: list[Fraction] | None


def totally_real_witness(
    xi: Sequence[Sequence],
    sample_points: Sequence[Sequence],
    basis: G2Basis | None = None,
    eps: EpsilonTable = EPSILON,
) -> TotallyRealCertificate:
    """Try to write p x (xi p) = sum_i c_i xi_i p simultaneously at all samples.

    Inconsistency (augmented rank > coefficient rank) certifies that J X_xi is
    not a fundamental field.
    """
    if len(sample_points) < 4:
        raise ValueError("need at least 4 sample points")
    basis = basis or g2_basis(eps)
    rows, rhs = [], []
    for p in sample_points:
        images = [matvec(m, p) for m in basis.elements]
        target = cross(p, matvec(xi, p), eps)
        for r in range(7):
            rows.append([img[r] for img in images])
            rhs.append(target[r])
    r_coef = rank(rows)
    r_aug = rank([row + [b] for row, b in zip(rows, rhs)])
    solution = None
    if r_aug == r_coef:
        solution = solve(rows, rhs)
    return TotallyRealCertificate(r_aug == r_coef, r_coef, r_aug, solution)


def random_g2_element(rng: random.Random, basis: G2Basis | None = None, bound: int = 5) -> Matrix7:
    basis = basis or g2_basis()
    while True:
        coords = [Fraction(rng.randint(-bound, bound), rng.randint(1, 3)) for _ in range(len(basis))]
        if any(coords):
            return basis.combine(coords)


def random_skew(rng: random.Random, bound: int = 5) -> Matrix7:
    a = [[Fraction(0)] * 7 for _ in range(7)]
    for i, j in itertools.combinations(range(7), 2):
        v = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
        a[i][j], a[j][i] = v, -v
    return a
