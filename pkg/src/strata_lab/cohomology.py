"""Cohomology of F = Coker(phi) from the section-level maps of phi.

For ``0 -> A -> B -> F -> 0`` with A, B sums of line bundles, H^1 of A and B
vanishes, so ``H^0(F(k))`` is the cokernel of ``H^0(A(k)) -> H^0(B(k))`` and
``H^1(F(k))`` is the kernel of ``H^2(A(k)) -> H^2(B(k))``.  The latter is
computed on the Serre-dual side, where it becomes a cokernel again.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .errors import ConsistencyError
from .morphism import SheafMorphism, require_injective
from .poly import HomPoly, SectionMatrix, multiplication_array, n_monomials


def _offsets(degrees) -> list[int]:
    out = [0]
    for d in degrees:
        out.append(out[-1] + n_monomials(d))
    return out


def _assemble(phi: SheafMorphism, row_degrees, col_degrees, cell) -> SectionMatrix:
    """Block matrix with block (r, c) = multiplication by ``cell(r, c)``."""
    field = phi.field
    ro, co = _offsets(row_degrees), _offsets(col_degrees)
    arr = field.zeros((ro[-1], co[-1]))
    for r, dr in enumerate(row_degrees):
        for c, dc in enumerate(col_degrees):
            if dr < 0 or dc < 0:
                continue
            e = cell(r, c)
            if e is None or e.is_zero():
                continue
            arr[ro[r]:ro[r + 1], co[c]:co[c + 1]] = multiplication_array(e, dc)
    rows = tuple((r, m) for r, d in enumerate(row_degrees) for m in range(n_monomials(d)))
    cols = tuple((c, m) for c, d in enumerate(col_degrees) for m in range(n_monomials(d)))
    return SectionMatrix(field, arr, rows, cols)


def section_matrix(phi: SheafMorphism, k: int) -> SectionMatrix:
    """``H^0(A(k)) -> H^0(B(k))``."""
    return _assemble(
        phi,
        [b + k for b in phi.target.twists],
        [a + k for a in phi.source.twists],
        lambda i, j: phi.entries[i][j],
    )


def serre_matrix(phi: SheafMorphism, k: int) -> SectionMatrix:
    """Dual of ``H^2(A(k)) -> H^2(B(k))``, i.e. ``⊕S^{-b-k-3} -> ⊕S^{-a-k-3}``."""
    return _assemble(
        phi,
        [-a - k - 3 for a in phi.source.twists],
        [-b - k - 3 for b in phi.target.twists],
        lambda j, i: phi.entries[i][j],
    )


def h0_twist(phi: SheafMorphism, k: int) -> int:
    require_injective(phi)
    s = section_matrix(phi, k)
    r = s.rank()
    expected = phi.source.h0(k)
    if r != expected:
        raise ConsistencyError(f"H^0 map at twist {k} has rank {r}, expected {expected}")
    return phi.target.h0(k) - r


def h1_twist(phi: SheafMorphism, k: int) -> int:
    require_injective(phi)
    t = serre_matrix(phi, k)
    return sum(n_monomials(-a - k - 3) for a in phi.source.twists) - t.rank()


def shape_h0(phi: SheafMorphism, k: int) -> int:
    """``sum h0(O(b+k)) - sum h0(O(a+k))``, the value when the H^0 map is injective."""
    return phi.target.h0(k) - phi.source.h0(k)


@dataclass
class SectionSpace:
    """``H^0(F(k))`` as a quotient of ``⊕S^{b_i+k}`` by the image of phi.

    Coordinates are the non-pivot positions of the reduced image basis, so a
    vector is reduced by clearing its pivot positions.
    """

    phi: SheafMorphism
    k: int
    reduced: np.ndarray
    pivots: list[int]
    free: list[int]
    ambient: int

    @property
    def dim(self) -> int:
        return len(self.free)

    @property
    def degrees(self) -> list[int]:
        return [b + self.k for b in self.phi.target.twists]

    def coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates of ambient column vectors in the quotient basis."""
        field = self.phi.field
        v = np.asarray(vectors)
        if self.pivots:
            v = field.reduce(v - self.reduced.T @ v[self.pivots])
        return v[self.free]

    def basis(self) -> np.ndarray:
        """Ambient representatives of the basis, as columns."""
        field = self.phi.field
        out = field.zeros((self.ambient, self.dim))
        for c, f in enumerate(self.free):
            out[f, c] = field.one
        return out

    def multiply(self, form: HomPoly) -> np.ndarray:
        """Matrix of ``s -> form * s`` into the space at twist ``k + deg form``."""
        target = section_space(self.phi, self.k + form.degree)
        field = self.phi.field
        src_deg = self.degrees
        so, to = _offsets(src_deg), _offsets(target.degrees)
        big = field.zeros((to[-1], so[-1]))
        for i, d in enumerate(src_deg):
            if d < 0:
                continue
            big[to[i]:to[i + 1], so[i]:so[i + 1]] = multiplication_array(form, d)
        return target.coordinates(field.reduce(big @ self.basis()))


def section_space(phi: SheafMorphism, k: int) -> SectionSpace:
    require_injective(phi)
    s = section_matrix(phi, k)
    field = phi.field
    if s.cols:
        reduced, pivots = linalg.rref(s.array.T, field)
        reduced = reduced[: len(pivots)]
    else:
        reduced, pivots = field.zeros((0, s.rows)), []
    if len(pivots) != phi.source.h0(k):
        raise ConsistencyError(f"H^0 map at twist {k} is not injective")
    free = [c for c in range(s.rows) if c not in set(pivots)]
    return SectionSpace(phi, k, reduced, list(pivots), free, s.rows)


def _variables(field):
    return [HomPoly.variable(field, v) for v in "XYZ"]


def h0_omega(phi: SheafMorphism) -> int:
    """``h0(F ⊗ Ω^1(1))`` as the kernel of ``H^0(F)^3 -> H^0(F(1))``, (s) -> Xs0+Ys1+Zs2."""
    space = section_space(phi, 0)
    if space.dim == 0:
        return 0
    blocks = [space.multiply(v) for v in _variables(phi.field)]
    stacked = np.concatenate(blocks, axis=1)
    return 3 * space.dim - linalg.rank(stacked, phi.field)


@dataclass(frozen=True)
class CohomologyProfile:
    h0_minus1: int
    h1_0: int
    h0_omega: int
    h1_plus1: int
    hilbert: tuple[int, int] = (6, 2)

    @property
    def triple(self) -> tuple[int, int, int]:
        return self.h0_minus1, self.h1_0, self.h0_omega

    def to_json(self) -> dict:
        return {"h0m1": self.h0_minus1, "h1": self.h1_0,
                "h0omega": self.h0_omega, "h1p1": self.h1_plus1}


def cohomology_profile(phi: SheafMorphism) -> CohomologyProfile:
    from .morphism import hilbert_polynomial

    return CohomologyProfile(
        h0_twist(phi, -1),
        h1_twist(phi, 0),
        h0_omega(phi),
        h1_twist(phi, 1),
        hilbert_polynomial(phi),
    )
