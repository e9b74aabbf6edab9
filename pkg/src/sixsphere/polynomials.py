"""Sparse multivariate polynomials in the seven coordinates of R^7."""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

NVARS = 7

Exponent = tuple[int, ...]

_ZERO_EXP: Exponent = (0,) * NVARS


def _coerce(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    return c


class Poly7:
    """Polynomial with exact (or float) coefficients in x1..x7.

    Terms are kept in a dict keyed by exponent tuples; zero coefficients are
    never stored and iteration follows sorted exponent order. Instances are
    treated as immutable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, object] | None = None):
        clean = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != NVARS or any(e < 0 for e in exp):
                    raise ValueError(f"bad exponent vector {exp!r}")
                c = _coerce(c)
                if c != 0:
                    clean[tuple(exp)] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly7":
        p = cls.__new__(cls)
        p._terms = dict(sorted((e, c) for e, c in terms.items() if c != 0))
        p._hash = None
        return p

    @classmethod
    def constant(cls, c) -> "Poly7":
        return cls({_ZERO_EXP: c})

    @classmethod
    def var(cls, i: int) -> "Poly7":
        """The coordinate function x_{i+1} (0-based index i)."""
        if not 0 <= i < NVARS:
            raise IndexError(f"variable index {i} out of range")
        exp = [0] * NVARS
        exp[i] = 1
        return cls({tuple(exp): 1})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "Poly7":
        """sum_i coeffs[i] * x_{i+1}."""
        return cls({tuple(int(j == i) for j in range(NVARS)): c for i, c in enumerate(coeffs)})

    @property
    def terms(self) -> Mapping[Exponent, object]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def constant_term(self):
        return self._terms.get(_ZERO_EXP, Fraction(0))

    # arithmetic -----------------------------------------------------------

    def __add__(self, other) -> "Poly7":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Poly7._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly7":
        return Poly7._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Poly7":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly7":
        return (-self) + other

    def __mul__(self, other) -> "Poly7":
        if not isinstance(other, Poly7):
            if isinstance(other, (int, float, Fraction)):
                if other == 0:
                    return Poly7()
                c = _coerce(other)
                return Poly7._raw({e: v * c for e, v in self._terms.items()})
            return NotImplemented
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly7._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly7":
        if n < 0:
            raise ValueError("negative power")
        result = Poly7.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    # calculus -------------------------------------------------------------

    def diff(self, i: int) -> "Poly7":
        """Partial derivative with respect to x_{i+1}."""
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                ne = list(e)
                ne[i] = k - 1
                out[tuple(ne)] = c * k
        return Poly7._raw(out)

    def gradient(self) -> list["Poly7"]:
        return [self.diff(i) for i in range(NVARS)]

    def __call__(self, point: Sequence):
        return self.evaluate(point)

    def evaluate(self, point: Sequence):
        if len(point) != NVARS:
            raise ValueError(f"expected {NVARS} coordinates, got {len(point)}")
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for xi, k in zip(point, e):
                if k:
                    term = term * xi**k
            total = total + term
        return total

    def substitute_linear(self, images: Sequence["Poly7"]) -> "Poly7":
        """Compose with x_i -> images[i]."""
        total = Poly7()
        for e, c in self._terms.items():
            term = Poly7.constant(c)
            for img, k in zip(images, e):
                if k:
                    term = term * img**k
            total = total + term
        return total

    # presentation ---------------------------------------------------------

    def __repr__(self) -> str:
        return f"Poly7({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            mono = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list[dict]:
        return [
            {"exponents": list(e), "value": fraction_str(c)} for e, c in self._terms.items()
        ]

    @classmethod
    def from_json(cls, data: Iterable[Mapping]) -> "Poly7":
        return cls({tuple(t["exponents"]): parse_scalar(t["value"]) for t in data})


def _as_poly(x):
    if isinstance(x, Poly7):
        return x
    if isinstance(x, (int, float, Fraction)):
        return Poly7.constant(x)
    return NotImplemented


def fraction_str(c) -> str:
    """Render a scalar as "p/q" (or "p" for integers)."""
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    if isinstance(c, int):
        return str(c)
    return repr(float(c))


def parse_scalar(text):
    """Parse "p/q" or an integer string exactly; anything else as float."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        return text
    s = str(text).strip()
    if "/" in s:
        return Fraction(s)
    try:
        return Fraction(int(s))
    except ValueError:
        return float(s)


def coordinate(k: int) -> Poly7:
    """The coordinate function x^k, 1-based as in x1..x7."""
    return Poly7.var(k - 1)
