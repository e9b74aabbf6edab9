"""Polynomial differential forms and vector fields on R^7.

Form indices are stored 0-based (index i stands for dx^{i+1}); the builders
``dx`` and ``partial`` take the 1-based coordinate labels used in formulas.
Multivector contraction follows iota_{X^Y} = iota_Y o iota_X.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .polynomials import NVARS, Poly7

Indices = tuple[int, ...]


class DegreeError(ValueError):
    """Raised when an operation would leave the range of form degrees."""


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if it has repeats."""
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    s = list(seq)
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign


class PolyField:
    """Vector field sum_i components[i] d/dx^{i+1} with polynomial components."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence):
        if len(components) != NVARS:
            raise ValueError(f"a field needs {NVARS} components")
        self.components = tuple(
            c if isinstance(c, Poly7) else Poly7.constant(c) for c in components
        )

    @classmethod
    def constant(cls, v: Sequence) -> "PolyField":
        return cls([Poly7.constant(c) for c in v])

    @classmethod
    def linear(cls, matrix: Sequence[Sequence]) -> "PolyField":
        """The field x -> A x."""
        return cls([Poly7.linear(row) for row in matrix])

    @classmethod
    def euler(cls) -> "PolyField":
        return cls([Poly7.var(i) for i in range(NVARS)])

    @classmethod
    def zero(cls) -> "PolyField":
        return cls([Poly7()] * NVARS)

    def __getitem__(self, i: int) -> Poly7:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __add__(self, other: "PolyField") -> "PolyField":
        return PolyField([a + b for a, b in zip(self, other)])

    def __sub__(self, other: "PolyField") -> "PolyField":
        return PolyField([a - b for a, b in zip(self, other)])

    def __neg__(self) -> "PolyField":
        return PolyField([-a for a in self])

    def scale(self, f) -> "PolyField":
        return PolyField([a * f for a in self])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyField):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self)

    def evaluate(self, point: Sequence) -> tuple:
        return tuple(c.evaluate(point) for c in self)

    def jacobian(self) -> list[list[Poly7]]:
        """J[i][j] = d(component i)/dx^{j+1}."""
        return [[c.diff(j) for j in range(NVARS)] for c in self]

    def apply(self, f: Poly7) -> Poly7:
        """Directional derivative v(f)."""
        total = Poly7()
        for i, c in enumerate(self.components):
            if c:
                total = total + c * f.diff(i)
        return total

    def dot(self, other: "PolyField") -> Poly7:
        total = Poly7()
        for a, b in zip(self, other):
            total = total + a * b
        return total

    def cross(self, other: "PolyField", eps=None) -> "PolyField":
        """Pointwise 7-dimensional cross product of two fields."""
        from .octonions import EPSILON

        table = EPSILON if eps is None else eps
        out = [Poly7()] * NVARS
        for (i, j, k), s in table.nonzero():
            a, b = self.components[i], other.components[j]
            if a and b:
                out[k] = out[k] + (a * b) * s
        return PolyField(out)

    def __repr__(self) -> str:
        return "PolyField(" + ", ".join(str(c) for c in self) + ")"


def partial(k: int) -> PolyField:
    """Coordinate field d/dx^k, 1-based."""
    return PolyField.constant([int(i == k - 1) for i in range(NVARS)])


class PolyForm:
    """Differential k-form sum_I f_I dx^I with polynomial coefficients."""

    __slots__ = ("degree", "_coeffs")

    def __init__(self, degree: int, coeffs: Mapping[Indices, object] | None = None):
        if not 0 <= degree <= NVARS:
            raise DegreeError(f"form degree {degree} outside 0..{NVARS}")
        self.degree = degree
        clean: dict[Indices, Poly7] = {}
        for idx, f in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index tuple {idx} does not match degree {degree}")
            if any(not 0 <= i < NVARS for i in idx):
                raise IndexError(f"index out of range in {idx}")
            s = permutation_sign(idx)
            if s == 0:
                continue
            key = tuple(sorted(idx))
            f = f if isinstance(f, Poly7) else Poly7.constant(f)
            clean[key] = clean.get(key, Poly7()) + f * s
        self._coeffs = {k: v for k, v in sorted(clean.items()) if not v.is_zero()}

    @classmethod
    def _raw(cls, degree: int, coeffs: dict) -> "PolyForm":
        out = cls.__new__(cls)
        out.degree = degree
        out._coeffs = {k: v for k, v in sorted(coeffs.items()) if not v.is_zero()}
        return out

    @classmethod
    def function(cls, f) -> "PolyForm":
        return cls(0, {(): f})

    @property
    def coeffs(self) -> Mapping[Indices, Poly7]:
        return MappingProxyType(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def coefficient(self, *labels: int) -> Poly7:
        """Coefficient of dx^{labels} (1-based, any order; sign-adjusted)."""
        idx = tuple(k - 1 for k in labels)
        s = permutation_sign(idx)
        if s == 0:
            return Poly7()
        return self._coeffs.get(tuple(sorted(idx)), Poly7()) * s

    def _check_same(self, other: "PolyForm"):
        if not isinstance(other, PolyForm):
            raise TypeError("expected a PolyForm")
        if other.degree != self.degree:
            raise DegreeError(f"degree mismatch {self.degree} vs {other.degree}")

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._check_same(other)
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out[k] + v if k in out else v
        return PolyForm._raw(self.degree, out)

    def __neg__(self) -> "PolyForm":
        return PolyForm._raw(self.degree, {k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def scale(self, f) -> "PolyForm":
        """Multiply every coefficient by a scalar or polynomial."""
        return PolyForm._raw(self.degree, {k: v * f for k, v in self._coeffs.items()})

    def __mul__(self, f) -> "PolyForm":
        if isinstance(f, PolyForm):
            return NotImplemented
        return self.scale(f)

    __rmul__ = __mul__

    def __xor__(self, other: "PolyForm") -> "PolyForm":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        return self.degree == other.degree and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.degree, tuple(self._coeffs.items())))

    def evaluate_coefficients(self, point: Sequence) -> "PolyForm":
        """Freeze coefficients at a point, giving a constant form."""
        return PolyForm._raw(
            self.degree,
            {k: Poly7.constant(v.evaluate(point)) for k, v in self._coeffs.items()},
        )

    def drop_index(self, label: int) -> "PolyForm":
        """Remove every term containing dx^label (restriction to {dx^label = 0})."""
        i = label - 1
        return PolyForm._raw(
            self.degree, {k: v for k, v in self._coeffs.items() if i not in k}
        )

    def __repr__(self) -> str:
        return f"PolyForm({self.degree}, {self})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for idx, f in self._coeffs.items():
            basis = "^".join(f"dx{i + 1}" for i in idx)
            coef = str(f)
            if not basis:
                parts.append(coef)
            elif coef == "1":
                parts.append(basis)
            elif coef == "-1":
                parts.append(f"-{basis}")
            else:
                parts.append(f"({coef})*{basis}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "terms": [
                {"indices": [i + 1 for i in idx], "coeff": f.to_json()}
                for idx, f in self._coeffs.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PolyForm":
        return cls(
            int(data["degree"]),
            {
                tuple(i - 1 for i in t["indices"]): Poly7.from_json(t["coeff"])
                for t in data["terms"]
            },
        )


def dx(*labels: int) -> PolyForm:
    """dx^{a} ^ dx^{b} ^ ... with 1-based labels."""
    return PolyForm(len(labels), {tuple(k - 1 for k in labels): 1})


def constant_form(degree: int, entries: Mapping[Indices, object]) -> PolyForm:
    return PolyForm(degree, {k: Poly7.constant(v) for k, v in entries.items()})


def wedge(a: PolyForm, b: PolyForm) -> PolyForm:
    deg = a.degree + b.degree
    if deg > NVARS:
        raise DegreeError(f"wedge of degrees {a.degree}+{b.degree} exceeds {NVARS}")
    out: dict[Indices, Poly7] = {}
    for ia, fa in a.coeffs.items():
        for ib, fb in b.coeffs.items():
            joined = ia + ib
            s = permutation_sign(joined)
            if s == 0:
                continue
            key = tuple(sorted(joined))
            term = fa * fb * s
            out[key] = out[key] + term if key in out else term
    return PolyForm._raw(deg, out)


def exterior_derivative(a: PolyForm) -> PolyForm:
    if a.degree >= NVARS:
        raise DegreeError("d of a top-degree form leaves the form range")
    out: dict[Indices, Poly7] = {}
    for idx, f in a.coeffs.items():
        for j in range(NVARS):
            if j in idx:
                continue
            g = f.diff(j)
            if g.is_zero():
                continue
            joined = (j,) + idx
            s = permutation_sign(joined)
            key = tuple(sorted(joined))
            term = g * s
            out[key] = out[key] + term if key in out else term
    return PolyForm._raw(a.degree + 1, out)


def _contract_one(v: PolyField, a: PolyForm) -> PolyForm:
    if a.degree == 0:
        raise DegreeError("cannot contract a 0-form")
    out: dict[Indices, Poly7] = {}
    for idx, f in a.coeffs.items():
        for s, i in enumerate(idx):
            vi = v.components[i]
            if vi.is_zero():
                continue
            key = idx[:s] + idx[s + 1:]
            term = vi * f
            if s % 2:
                term = -term
            out[key] = out[key] + term if key in out else term
    return PolyForm._raw(a.degree - 1, out)


def contract(v: PolyField | Sequence[PolyField], a: PolyForm) -> PolyForm:
    """Interior product; a list [X, Y, ...] contracts X first, then Y, ..."""
    fields = [v] if isinstance(v, PolyField) else list(v)
    if len(fields) > a.degree:
        raise DegreeError(f"cannot contract {len(fields)} fields into a {a.degree}-form")
    for f in fields:
        a = _contract_one(f, a)
    return a


def lie_bracket(v: PolyField, w: PolyField) -> PolyField:
    """[v, w] = (Dw) v - (Dv) w."""
    return PolyField([v.apply(wi) - w.apply(vi) for vi, wi in zip(v, w)])


def bracket_at(v: PolyField, w: PolyField, point: Sequence) -> tuple:
    """[v, w] evaluated at a point, using only first derivatives there."""
    vp, wp = v.evaluate(point), w.evaluate(point)
    out = []
    for vi, wi in zip(v, w):
        dw = sum((wi.diff(j).evaluate(point) * vp[j] for j in range(NVARS) if vp[j]), Fraction(0))
        dv = sum((vi.diff(j).evaluate(point) * wp[j] for j in range(NVARS) if wp[j]), Fraction(0))
        out.append(dw - dv)
    return tuple(out)


def lie_derivative(v: PolyField, a: PolyForm) -> PolyForm:
    """Cartan formula L_v a = iota_v da + d iota_v a."""
    parts = []
    if a.degree < NVARS:
        parts.append(contract(v, exterior_derivative(a)))
    if a.degree > 0:
        parts.append(exterior_derivative(contract(v, a)))
    result = PolyForm(a.degree)
    for p in parts:
        result = result + p
    return result


def _minor_det(vectors: Sequence[Sequence], idx: Indices):
    k = len(idx)
    total = 0
    for perm in itertools.permutations(range(k)):
        s = permutation_sign(perm)
        prod = s
        for row, col in enumerate(perm):
            prod = prod * vectors[row][idx[col]]
            if prod == 0:
                break
        total = total + prod
    return total


def evaluate(a: PolyForm, point: Sequence, vectors: Sequence[Sequence]):
    """a_p(v_1, ..., v_k); exact when all inputs are rational."""
    if len(vectors) != a.degree:
        raise ValueError(f"{a.degree}-form evaluated on {len(vectors)} vectors")
    total = Fraction(0)
    for idx, f in a.coeffs.items():
        m = _minor_det(vectors, idx)
        if m != 0:
            total = total + f.evaluate(point) * m
    return total


def random_poly(rng, max_degree: int = 2, n_terms: int = 3, coef_range: int = 5) -> Poly7:
    """Small random polynomial with integer coefficients (test helper)."""
    terms = {}
    for _ in range(n_terms):
        exp = [0] * NVARS
        for _ in range(rng.randint(0, max_degree)):
            exp[rng.randrange(NVARS)] += 1
        terms[tuple(exp)] = Fraction(rng.randint(-coef_range, coef_range), rng.randint(1, 3))
    return Poly7(terms)


def random_form(rng, degree: int, n_terms: int = 3, max_coeff_degree: int = 2) -> PolyForm:
    coeffs = {}
    for _ in range(n_terms):
        idx = tuple(sorted(rng.sample(range(NVARS), degree)))
        coeffs[idx] = random_poly(rng, max_coeff_degree)
    return PolyForm(degree, coeffs)


def random_field(rng, max_degree: int = 1) -> PolyField:
    return PolyField([random_poly(rng, max_degree, n_terms=2) for _ in range(NVARS)])


def sum_forms(forms: Iterable[PolyForm], degree: int) -> PolyForm:
    total = PolyForm(degree)
    for f in forms:
        total = total + f
    return total
