"""Stratum dimensions by three independent counts.

* fibration: base and fibre dimensions of the geometric descriptions;
* parameters: dim Hom minus dim of the acting group, valid where the generic
  stabiliser is just the scalars (all strata but X5, whose count comes out
  three short);
* orbit: dim of the linear space of morphisms minus the rank of the orbit
  tangent map ``(sigma, tau) -> tau phi + phi sigma`` at a random member.

The third count needs no knowledge of stabilisers, so it also covers the
strata where Hom minus group is off.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ConsistencyError
from .field import DEFAULT_FIELD, Field
from .morphism import TEMPLATES, SheafMorphism, TwistedSum
from .poly import HomPoly, monomials, n_monomials, poly_mul

AMBIENT = 6 ** 2 + 1
P2 = 2
HILB2 = 4  # length-2 subschemes of the plane
SEXTICS = n_monomials(6) - 1  # P(S^6 V*) = P^27


def kronecker_moduli_dim(m: int, n: int, q: int = 3) -> int:
    """Expected dimension of semistable Kronecker modules with q arrows."""
    return q * m * n - m * m - n * n + 1


# base pieces and fibre for the strata with a bundle description
FIBRATIONS = {
    "X0": ((AMBIENT,), 0),  # open dense
    "X1": ((kronecker_moduli_dim(4, 3), P2), 20),
    "X3": ((HILB2, kronecker_moduli_dim(2, 3)), 22),
    "X5": ((P2, HILB2), 24),
    "X6": ((P2, SEXTICS), -1),  # universal sextic: a hypersurface in P^2 x P^27
}
PARAMETER_STRATA = ("X0", "X1", "X2", "X3", "X4", "X6")
CODIMENSIONS = {"X0": 0, "X1": 3, "X2": 3, "X3": 5, "X4": 5, "X5": 7, "X6": 9}


def hom_dim(source: TwistedSum, target: TwistedSum) -> int:
    return sum(n_monomials(b - a) for b in target.twists for a in source.twists)


def aut_dim(summ: TwistedSum) -> int:
    return hom_dim(summ, summ)


def fibration_dimension(label: str) -> int | None:
    if label not in FIBRATIONS:
        return None
    base, fibre = FIBRATIONS[label]
    return sum(base) + fibre


def parameter_dimension(label: str) -> int:
    """dim Hom - (dim Aut(source) + dim Aut(target) - 1)."""
    s = TEMPLATES[label]
    return hom_dim(s.source, s.target) - (aut_dim(s.source) + aut_dim(s.target) - 1)


def _coeff_vector(phi: SheafMorphism, cells) -> np.ndarray:
    parts = [phi.entry(i, j).array for i, j in cells]
    return np.concatenate(parts) if parts else phi.field.zeros(0)


def _legal_cells(source: TwistedSum, target: TwistedSum):
    return [(i, j) for i, b in enumerate(target.twists) for j, a in enumerate(source.twists)
            if b - a >= 0]


def orbit_tangent_rank(phi: SheafMorphism) -> int:
    """Rank of ``(sigma, tau) -> tau phi + phi sigma`` on degree-legal endomorphisms."""
    field = phi.field
    src, tgt = phi.source.twists, phi.target.twists
    cells = _legal_cells(phi.source, phi.target)
    offsets = {}
    pos = 0
    for i, j in cells:
        offsets[(i, j)] = pos
        pos += n_monomials(tgt[i] - src[j])
    columns = []

    def unit(d: int, k: int) -> HomPoly:
        coeffs = [field.zero] * n_monomials(d)
        coeffs[k] = field.one
        return HomPoly(field, d, tuple(coeffs))

    # tau = E_{ik} * monomial: row i of the result picks up monomial * row k of phi
    for i in range(len(tgt)):
        for k in range(len(tgt)):
            d = tgt[i] - tgt[k]
            if d < 0:
                continue
            for mono in range(len(monomials(d))):
                col = field.zeros(pos)
                u = unit(d, mono)
                for j in range(len(src)):
                    e = phi.entries[k][j]
                    if e is None or e.is_zero():
                        continue
                    prod = poly_mul(u, e)
                    o = offsets[(i, j)]
                    col[o:o + len(prod.coeffs)] = prod.array
                columns.append(col)
    # sigma = E_{kj} * monomial: column j picks up column k of phi times monomial
    for k in range(len(src)):
        for j in range(len(src)):
            d = src[k] - src[j]
            if d < 0:
                continue
            for mono in range(len(monomials(d))):
                col = field.zeros(pos)
                u = unit(d, mono)
                for i in range(len(tgt)):
                    e = phi.entries[i][k]
                    if e is None or e.is_zero():
                        continue
                    prod = poly_mul(e, u)
                    o = offsets[(i, j)]
                    col[o:o + len(prod.coeffs)] = prod.array
                columns.append(col)
    return linalg.rank(np.stack(columns, axis=1), field)


def linear_space_dim(label: str) -> int:
    """Dimension of the linear space of morphisms the stratum's set W is open in."""
    from .classify import STRUCTURAL_ZEROS

    s = TEMPLATES[label]
    forced = sum(n_monomials(s.target.twists[i] - s.source.twists[j])
                 for i, j in STRUCTURAL_ZEROS.get(label, ()))
    return hom_dim(s.source, s.target) - forced


def orbit_dimension(label: str, seed: int = 0, field: Field = DEFAULT_FIELD) -> int:
    """dim W - dim(orbit) at an accepted random member of the stratum."""
    from .geometry import stratified_sample

    phi = stratified_sample(label, seed, field).morphism
    return linear_space_dim(label) - orbit_tangent_rank(phi)


@dataclass(frozen=True)
class DimensionRow:
    label: str
    fibration: int | None
    parameters: int | None
    orbit: int
    dimension: int
    codimension: int

    def to_json(self) -> dict:
        return self.__dict__.copy()


def dimension_row(label: str, seed: int = 0, field: Field = DEFAULT_FIELD) -> DimensionRow:
    fib = fibration_dimension(label)
    par = parameter_dimension(label) if label in PARAMETER_STRATA else None
    orb = orbit_dimension(label, seed, field)
    values = {v for v in (fib, par, orb) if v is not None}
    if len(values) != 1:
        raise ConsistencyError(f"{label}: dimension counts disagree ({fib}, {par}, {orb})")
    dim = values.pop()
    return DimensionRow(label, fib, par, orb, dim, AMBIENT - dim)


def stratum_dimension(label: str) -> int:
    if label not in TEMPLATES:
        raise KeyError(f"unknown stratum {label!r}")
    return dimension_row(label).dimension
