"""Octonions, the 7-dimensional cross product and the canonical 3-form.

Everything here is generated from the seven positively oriented triples of
the structure tensor; the multiplication table is derived, never typed in.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .forms import PolyForm, evaluate, permutation_sign
from .linalg import rank
from .polynomials import Poly7

POSITIVE_TRIPLES: tuple[tuple[int, int, int], ...] = (
    (1, 2, 3),
    (1, 4, 5),
    (1, 6, 7),
    (2, 4, 6),
    (2, 7, 5),
    (3, 7, 4),
    (3, 6, 5),
)


class EpsilonTable:
    """Totally antisymmetric extension of a list of oriented triples."""

    def __init__(self, triples: Iterable[tuple[int, int, int]] = POSITIVE_TRIPLES):
        self.triples = tuple(tuple(t) for t in triples)
        arr = np.zeros((7, 7, 7), dtype=int)
        for t in self.triples:
            if len(set(t)) != 3 or not all(1 <= i <= 7 for i in t):
                raise ValueError(f"bad triple {t}")
            for perm in itertools.permutations(range(3)):
                i, j, k = (t[p] - 1 for p in perm)
                s = permutation_sign(perm)
                if arr[i, j, k] not in (0, s):
                    raise ValueError(f"triple {t} conflicts with an earlier entry")
                arr[i, j, k] = s
        arr.setflags(write=False)
        self.array = arr
        self._nonzero = tuple(
            ((i, j, k), int(arr[i, j, k])) for i, j, k in zip(*np.nonzero(arr))
        )

    def __call__(self, i: int, j: int, k: int) -> int:
        """epsilon_{ijk} for 1-based indices."""
        for n in (i, j, k):
            if not 1 <= n <= 7:
                raise IndexError(f"epsilon index {n} outside 1..7")
        return int(self.array[i - 1, j - 1, k - 1])

    def nonzero(self):
        """((i, j, k), sign) for the 42 nonzero entries, 0-based."""
        return self._nonzero

    def __eq__(self, other) -> bool:
        return isinstance(other, EpsilonTable) and np.array_equal(self.array, other.array)

    def __hash__(self) -> int:
        return hash(self.array.tobytes())


EPSILON = EpsilonTable()


def epsilon(i: int, j: int, k: int) -> int:
    return EPSILON(i, j, k)


class Octonion:
    """x0 e0 + x1 e1 + ... + x7 e7 with e0 = 1."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence):
        if len(coords) != 8:
            raise ValueError("an octonion has 8 coordinates")
        self.coords = tuple(Fraction(c) if isinstance(c, int) else c for c in coords)

    @classmethod
    def unit(cls, k: int) -> "Octonion":
        return cls([int(i == k) for i in range(8)])

    @classmethod
    def imaginary(cls, v: Sequence) -> "Octonion":
        return cls([0, *v])

    @property
    def real(self):
        return self.coords[0]

    @property
    def imag(self) -> tuple:
        return self.coords[1:]

    def __add__(self, other: "Octonion") -> "Octonion":
        return Octonion([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "Octonion") -> "Octonion":
        return Octonion([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "Octonion":
        return Octonion([-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return oct_multiply(self, other)
        return Octonion([a * other for a in self.coords])

    def __rmul__(self, c) -> "Octonion":
        return Octonion([c * a for a in self.coords])

    def __eq__(self, other) -> bool:
        return isinstance(other, Octonion) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def conjugate(self) -> "Octonion":
        return Octonion([self.coords[0], *(-a for a in self.coords[1:])])

    def norm_squared(self):
        return sum(a * a for a in self.coords)

    def __repr__(self) -> str:
        return f"Octonion({', '.join(str(c) for c in self.coords)})"


def oct_multiply(a: Octonion, b: Octonion, eps: EpsilonTable = EPSILON) -> Octonion:
    """Bilinear extension of e_i e_j = -delta_ij + eps_ijk e_k, e0 = 1."""
    out = [0] * 8
    x, y = a.coords, b.coords
    out[0] = x[0] * y[0]
    for i in range(1, 8):
        out[i] = x[0] * y[i] + x[i] * y[0]
        out[0] = out[0] - x[i] * y[i]
    for (i, j, k), s in eps.nonzero():
        xi, yj = x[i + 1], y[j + 1]
        if xi and yj:
            out[k + 1] = out[k + 1] + s * xi * yj
    return Octonion(out)


def multiplication_table(eps: EpsilonTable = EPSILON) -> list[list[str]]:
    """Rows e_i, columns e_j, entries such as "e3", "-e2", "-1"."""
    table = []
    for i in range(1, 8):
        row = []
        for j in range(1, 8):
            prod = oct_multiply(Octonion.unit(i), Octonion.unit(j), eps).coords
            (k,) = [n for n, c in enumerate(prod) if c != 0]
            label = "1" if k == 0 else f"e{k}"
            row.append(label if prod[k] > 0 else f"-{label}")
        table.append(row)
    return table


def table_json(eps: EpsilonTable = EPSILON) -> dict:
    return {
        "rows": [f"e{i}" for i in range(1, 8)],
        "columns": [f"e{j}" for j in range(1, 8)],
        "table": multiplication_table(eps),
        "positive_triples": [list(t) for t in eps.triples],
    }


def cross(u: Sequence, v: Sequence, eps: EpsilonTable = EPSILON) -> tuple:
    """(u x v)_k = sum eps_ijk u_i v_j; works for rationals or floats."""
    out = [0] * 7
    for (i, j, k), s in eps.nonzero():
        a, b = u[i], v[j]
        if a and b:
            out[k] = out[k] + s * a * b
    return tuple(Fraction(c) if isinstance(c, int) else c for c in out)


def cross_via_commutator(u: Sequence, v: Sequence, eps: EpsilonTable = EPSILON) -> tuple:
    """Imaginary part of (uv - vu)/2 computed in the octonions."""
    a, b = Octonion.imaginary(u), Octonion.imaginary(v)
    c = oct_multiply(a, b, eps) - oct_multiply(b, a, eps)
    return tuple(Fraction(x) / 2 if isinstance(x, (int, Fraction)) else x / 2 for x in c.imag)


def cross_np(u: np.ndarray, v: np.ndarray, eps: EpsilonTable = EPSILON) -> np.ndarray:
    return np.einsum("ijk,...i,...j->...k", eps.array, u, v)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def omega_tilde(eps: EpsilonTable = EPSILON) -> PolyForm:
    """Constant 3-form with omega(e_i, e_j, e_k) = eps_ijk."""
    coeffs = {}
    for (i, j, k), s in eps.nonzero():
        if i < j < k:
            coeffs[(i, j, k)] = Poly7.constant(s)
    return PolyForm(3, coeffs)


def omega_value(u: Sequence, v: Sequence, w: Sequence, eps: EpsilonTable = EPSILON):
    """<u x v, w>."""
    return dot(cross(u, v, eps), w)


def omega_np(eps: EpsilonTable = EPSILON) -> np.ndarray:
    return eps.array.astype(float)


class DegenerateBasisError(ValueError):
    pass


def is_two_plectic_at(alpha: PolyForm, p: Sequence, subspace_basis: Sequence[Sequence]) -> bool:
    """Whether v -> iota_v alpha restricted to the subspace is injective there."""
    if alpha.degree != 3:
        raise ValueError("expected a 3-form")
    basis = [list(b) for b in subspace_basis]
    n = len(basis)
    if rank(basis) != n:
        raise DegenerateBasisError("subspace basis is linearly dependent")
    pairs = list(itertools.combinations(range(n), 2))
    columns = [
        [evaluate(alpha, p, [basis[j], basis[k], basis[l]]) for k, l in pairs]
        for j in range(n)
    ]
    if not pairs:
        return False
    matrix = [list(row) for row in zip(*columns)]
    return rank(matrix) == n


def standard_basis(n: int = 7) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def e(k: int) -> tuple:
    """Standard basis vector e_k of R^7 (1-based)."""
    return tuple(Fraction(int(i == k - 1)) for i in range(7))
