"""Homogeneous polynomials in X, Y, Z with dense coefficient vectors.

Monomials of degree d are ordered graded-lex with X > Y > Z, so degree 2 reads
``X^2, XY, XZ, Y^2, YZ, Z^2``.  A :class:`HomPoly` keeps its degree as a formal
attribute: the zero polynomial of degree 5 and the zero polynomial of degree 0
are different objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache

import numpy as np

from . import linalg
from .errors import FieldMismatchError
from .field import Field

VARIABLES = ("X", "Y", "Z")


def n_monomials(d: int) -> int:
    """Dimension of S^d V*; zero for negative d."""
    return (d + 1) * (d + 2) // 2 if d >= 0 else 0


def euler_chi(k: int) -> int:
    """Euler characteristic of O(k) on the plane."""
    return (k + 1) * (k + 2) // 2


@lru_cache(maxsize=None)
def monomials(d: int) -> tuple[tuple[int, int, int], ...]:
    if d < 0:
        return ()
    return tuple((a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1))


@lru_cache(maxsize=None)
def monomial_index(d: int) -> dict[tuple[int, int, int], int]:
    return {m: i for i, m in enumerate(monomials(d))}


@lru_cache(maxsize=None)
def _product_rows(dg: int, d: int) -> np.ndarray:
    """rows[i, j] = index of (monomial i of degree dg) * (monomial j of degree d)."""
    target = monomial_index(dg + d)
    out = np.empty((n_monomials(dg), n_monomials(d)), dtype=np.intp)
    for i, u in enumerate(monomials(dg)):
        for j, v in enumerate(monomials(d)):
            out[i, j] = target[(u[0] + v[0], u[1] + v[1], u[2] + v[2])]
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _monomial_exponents(d: int) -> np.ndarray:
    return np.array(monomials(d), dtype=np.int64).reshape(-1, 3)


def monomial_to_str(m) -> str:
    parts = []
    for var, e in zip(VARIABLES, m):
        if e == 1:
            parts.append(var)
        elif e > 1:
            parts.append(f"{var}^{e}")
    return "*".join(parts)


@dataclass(frozen=True)
class HomPoly:
    field: Field
    degree: int
    coeffs: tuple = dc_field(repr=False)

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        if len(self.coeffs) != n_monomials(self.degree):
            raise ValueError(
                f"degree {self.degree} needs {n_monomials(self.degree)} coefficients, "
                f"got {len(self.coeffs)}"
            )

    # construction

    @classmethod
    def from_array(cls, field: Field, degree: int, arr) -> "HomPoly":
        arr = field.reduce(np.asarray(arr))
        if field.is_prime:
            return cls(field, degree, tuple(int(c) for c in arr))
        return cls(field, degree, tuple(field(c) for c in arr))

    @classmethod
    def zero(cls, field: Field, degree: int) -> "HomPoly":
        return cls(field, degree, (field.zero,) * n_monomials(degree))

    @classmethod
    def constant(cls, field: Field, c) -> "HomPoly":
        return cls(field, 0, (field(c),))

    @classmethod
    def from_terms(cls, field: Field, degree: int, terms: dict) -> "HomPoly":
        """Build from ``{(a, b, c): coefficient}``."""
        index = monomial_index(degree)
        coeffs = [field.zero] * n_monomials(degree)
        for mono, c in terms.items():
            if sum(mono) != degree:
                raise ValueError(f"monomial {mono} does not have degree {degree}")
            coeffs[index[tuple(mono)]] = field(coeffs[index[tuple(mono)]] + field(c))
        return cls(field, degree, tuple(coeffs))

    @classmethod
    def variable(cls, field: Field, name: str) -> "HomPoly":
        i = VARIABLES.index(name)
        return cls.from_terms(field, 1, {tuple(int(j == i) for j in range(3)): 1})

    @classmethod
    def linear(cls, field: Field, coeffs) -> "HomPoly":
        """The linear form c0*X + c1*Y + c2*Z."""
        return cls(field, 1, tuple(field(c) for c in coeffs))

    # inspection

    @cached_property
    def array(self) -> np.ndarray:
        arr = self.field.array(list(self.coeffs))
        arr.setflags(write=False)
        return arr

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def terms(self) -> dict:
        return {m: c for m, c in zip(monomials(self.degree), self.coeffs) if c != 0}

    def evaluate(self, point):
        """Value at a point given as three field scalars."""
        f = self.field
        x = [f(v) for v in point]
        total = f.zero
        for (a, b, c), coeff in zip(monomials(self.degree), self.coeffs):
            if coeff != 0:
                total = f(total + coeff * x[0] ** a * x[1] ** b * x[2] ** c)
        return total

    def to_str(self) -> str:
        out = []
        for mono, c in self.terms().items():
            s = self.field.to_str(c)
            neg = s.startswith("-")
            if neg:
                s = s[1:]
            body = monomial_to_str(mono)
            if not body:
                term = s
            elif s == "1":
                term = body
            else:
                term = f"{s}*{body}"
            out.append(("- " if neg else "+ ") + term)
        if not out:
            return "0"
        text = " ".join(out)
        return "-" + text[2:] if text.startswith("- ") else text[2:]

    def __str__(self):
        return self.to_str()

    # arithmetic

    def _coerce(self, other: "HomPoly") -> None:
        if not isinstance(other, HomPoly):
            raise TypeError(f"expected HomPoly, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: "HomPoly") -> "HomPoly":
        self._coerce(other)
        if other.degree != self.degree:
            if other.is_zero():
                return self
            if self.is_zero():
                return other
            raise ValueError(f"cannot add degrees {self.degree} and {other.degree}")
        f = self.field
        return HomPoly(f, self.degree, tuple(f(a + b) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "HomPoly":
        f = self.field
        return HomPoly(f, self.degree, tuple(f(-a) for a in self.coeffs))

    def __sub__(self, other: "HomPoly") -> "HomPoly":
        return self + (-other)

    def scale(self, c) -> "HomPoly":
        f = self.field
        c = f(c)
        return HomPoly(f, self.degree, tuple(f(c * a) for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, HomPoly):
            return poly_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__


def poly_mul(f: HomPoly, g: HomPoly) -> HomPoly:
    f._coerce(g)
    field = f.field
    if f.is_zero() or g.is_zero():
        return HomPoly.zero(field, f.degree + g.degree)
    prod = multiplication_array(f, g.degree) @ g.array
    return HomPoly.from_array(field, f.degree + g.degree, prod)


def multiplication_array(g: HomPoly, d: int) -> np.ndarray:
    """Raw matrix of h -> g*h from S^d to S^(d + deg g)."""
    field = g.field
    rows = n_monomials(d + g.degree)
    cols = n_monomials(d)
    out = field.zeros((rows, cols))
    if cols == 0 or rows == 0:
        return out
    idx = _product_rows(g.degree, d)
    garr = g.array
    colidx = np.broadcast_to(np.arange(cols), idx.shape)
    out[idx, colidx] = np.broadcast_to(garr[:, None], idx.shape)
    return out


@dataclass(frozen=True)
class SectionMatrix:
    """A scalar matrix between sums of monomial spaces, with labelled axes.

    Labels are ``(summand index, monomial index)`` pairs.
    """

    field: Field
    array: np.ndarray = dc_field(compare=False)
    row_labels: tuple = ()
    col_labels: tuple = ()

    @property
    def rows(self) -> int:
        return self.array.shape[0]

    @property
    def cols(self) -> int:
        return self.array.shape[1]

    def rank(self) -> int:
        return linalg.rank(self.array, self.field)


def multiplication_matrix(g: HomPoly, d: int) -> SectionMatrix:
    """Matrix of S^d V* -> S^(d + deg g) V*, h -> g*h, on the monomial bases."""
    if d < 0:
        raise ValueError("d must be non-negative")
    arr = multiplication_array(g, d)
    return SectionMatrix(
        g.field,
        arr,
        tuple((0, i) for i in range(arr.shape[0])),
        tuple((0, j) for j in range(arr.shape[1])),
    )


def exact_divide(f: HomPoly, g: HomPoly) -> HomPoly | None:
    """Return q with f = q*g, or None when g does not divide f."""
    f._coerce(g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    dq = f.degree - g.degree
    if dq < 0:
        return None
    q = linalg.solve(multiplication_array(g, dq), f.array, f.field)
    if q is None:
        return None
    return HomPoly.from_array(f.field, dq, q)


def evaluate_monomials(d: int, points: np.ndarray, field: Field) -> np.ndarray:
    """Values of all degree-d monomials at ``points`` (shape ``(..., 3)``).

    Returns shape ``(..., n_monomials(d))``.  Prime fields only.
    """
    p = field.prime
    exps = _monomial_exponents(d)
    pts = np.asarray(points, dtype=np.int64) % p
    out = np.ones(pts.shape[:-1] + (len(exps),), dtype=np.int64)
    for v in range(3):
        powers = np.ones(pts.shape[:-1] + (d + 1,), dtype=np.int64)
        for e in range(1, d + 1):
            powers[..., e] = powers[..., e - 1] * pts[..., v] % p
        out = out * powers[..., exps[:, v]] % p
    return out
