"""Constructing stratum members from points, and stratified sampling."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from itertools import combinations

import numpy as np

from . import linalg
from .errors import BudgetExceededError, PreconditionError
from .field import DEFAULT_FIELD, Field
from .morphism import SheafMorphism, TEMPLATES, make_morphism, random_morphism
from .poly import HomPoly, monomials, multiplication_array, n_monomials, poly_mul


@dataclass(frozen=True)
class PointP2:
    field: Field
    coords: tuple

    @classmethod
    def make(cls, field: Field, coords) -> "PointP2":
        c = [field(x) for x in coords]
        if len(c) != 3 or all(x == 0 for x in c):
            raise PreconditionError("a point needs three coordinates, not all zero")
        last = next(x for x in reversed(c) if x != 0)
        inv = field.inv(last)
        return cls(field, tuple(field(x * inv) for x in c))

    def array(self) -> np.ndarray:
        return self.field.array(list(self.coords))

    def __str__(self):
        return "(" + ":".join(self.field.to_str(x) for x in self.coords) + ")"


def forms_vanishing_at(x: PointP2) -> list[HomPoly]:
    """A basis of the linear forms through ``x``."""
    basis = linalg.nullspace(x.array().reshape(1, 3), x.field)
    return [HomPoly.from_array(x.field, 1, basis[:, k]) for k in range(basis.shape[1])]


def construct_x6(x: PointP2, f1: HomPoly, f2: HomPoly) -> SheafMorphism:
    """``[[f1, l1], [f2, l2]]`` with l1, l2 spanning the linear forms through x."""
    field = x.field
    if f1.degree != 5 or f2.degree != 5:
        raise PreconditionError("f1 and f2 must be quintics")
    l1, l2 = forms_vanishing_at(x)
    phi = make_morphism(field, [-4, 0], [1, 1], [[f1, l1], [f2, l2]])
    if phi.det.is_zero():
        raise PreconditionError("f1*l2 - f2*l1 vanishes; the cokernel is not a sheaf of this type")
    return phi


def _evaluation_matrix(points, degree: int) -> np.ndarray:
    field = points[0].field
    rows = []
    for pt in points:
        x, y, z = pt.coords
        rows.append([field(x ** a * y ** b * z ** c) for a, b, c in monomials(degree)])
    return field.array(rows)


def conic_through(points) -> HomPoly:
    if len(points) != 5:
        raise PreconditionError("a conic is fixed by five points")
    field = points[0].field
    ev = _evaluation_matrix(points, 2)
    if linalg.rank(ev, field) < 5:
        raise PreconditionError("the points do not impose independent conditions on conics")
    return HomPoly.from_array(field, 2, linalg.nullspace(ev, field)[:, 0])


def line_through(p: PointP2, q: PointP2) -> HomPoly:
    a, b = p.coords, q.coords
    f = p.field
    cross = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
    return HomPoly.linear(f, cross)


def collinear_triples(points) -> list[tuple[int, int, int]]:
    field = points[0].field
    out = []
    for i, j, k in combinations(range(len(points)), 3):
        m = field.array([list(points[t].coords) for t in (i, j, k)])
        if linalg.det(m, field) == 0:
            out.append((i, j, k))
    return out


def _polarization(f: HomPoly, p, d):
    field = f.field
    s = [field(a + b) for a, b in zip(p, d)]
    return field(f.evaluate(s) - f.evaluate(p) - f.evaluate(d))


def second_intersection(conic: HomPoly, p: PointP2, direction) -> PointP2 | None:
    """Other point where the line through p in ``direction`` meets the conic."""
    field = conic.field
    fd = conic.evaluate(direction)
    b = _polarization(conic, p.coords, direction)
    if fd == 0 or b == 0:
        return None
    coords = [field(fd * u - b * v) for u, v in zip(p.coords, direction)]
    if all(c == 0 for c in coords):
        return None
    return PointP2.make(field, coords)


def construct_x4(points, seed=0, max_tries: int = 200) -> SheafMorphism:
    """A morphism in X4 whose cokernel is supported on a sextic through the points.

    The top block ``psi`` is built from the conic f through the five points, a
    sixth point on it and the three-line cubic; the bottom row is random.
    """
    from .patterns import x4_condition

    if len(points) != 5:
        raise PreconditionError("construct_x4 takes five points")
    bad = collinear_triples(points)
    if bad:
        raise PreconditionError(f"points {[t + 1 for t in bad[0]]} are collinear")
    field = points[0].field
    if not field.is_prime:
        raise PreconditionError("construct_x4 samples at random and needs a prime field")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    f = conic_through(points)
    for _ in range(max_tries):
        direction = [int(v) for v in field.random(rng, 3)]
        p6 = second_intersection(f, points[0], direction)
        if p6 is None or p6 in points:
            continue
        l12, l22 = forms_vanishing_at(p6)
        # f = l11*l22 - l12*l21
        system = np.concatenate([multiplication_array(l22, 1),
                                 field.reduce(-multiplication_array(l12, 1))], axis=1)
        sol = linalg.solve(system, f.array, field)
        if sol is None:
            continue
        l11 = HomPoly.from_array(field, 1, sol[:3])
        l21 = HomPoly.from_array(field, 1, sol[3:])
        g = poly_mul(poly_mul(line_through(points[0], points[1]), line_through(points[2], points[3])),
                     line_through(points[4], p6))
        system = np.concatenate([multiplication_array(l22, 2),
                                 field.reduce(-multiplication_array(l12, 2))], axis=1)
        sol = linalg.solve(system, g.array, field)
        if sol is None:
            continue
        q1 = HomPoly.from_array(field, 2, sol[:6])
        q2 = HomPoly.from_array(field, 2, sol[6:])
        for _ in range(20):
            bottom = [HomPoly.from_array(field, d, field.random(rng, n_monomials(d))) for d in (4, 3, 3)]
            phi = make_morphism(field, [-3, -2, -2], [-1, -1, 1],
                                [[q1, l11, l12], [q2, l21, l22], bottom])
            if not phi.det.is_zero() and x4_condition(phi):
                return phi
    raise PreconditionError("could not complete the construction; the points may be degenerate")


@dataclass
class SampleResult:
    label: str
    morphism: SheafMorphism
    draws: int
    rejections: Counter = dc_field(default_factory=Counter)

    @property
    def acceptance_rate(self) -> float:
        return 1.0 / self.draws

    def stats(self) -> dict:
        return {"label": self.label, "draws": self.draws, "rejections": dict(self.rejections)}


def stratified_sample(label: str, seed=0, field: Field = DEFAULT_FIELD,
                      budget: int = 100_000) -> SampleResult:
    """Draw random template morphisms (with forced zero blocks) until one is accepted."""
    from .classify import STRUCTURAL_ZEROS, stratum_predicates

    if label not in TEMPLATES:
        raise KeyError(f"unknown stratum {label!r}")
    if not field.is_prime:
        raise ValueError("sampling needs a prime field")
    if isinstance(seed, np.random.Generator):
        rng = seed
    else:
        rng = np.random.default_rng(seed)
    shape = TEMPLATES[label]
    zeros = STRUCTURAL_ZEROS.get(label, ())
    rejections: Counter = Counter()
    for draw in range(1, budget + 1):
        phi = random_morphism(shape, rng, field, zero_cells=zeros)
        outcome = stratum_predicates(phi, label)
        if outcome.passed:
            return SampleResult(label, phi, draw, rejections)
        for name, value in outcome.predicates:
            if value is not True:
                rejections[name] += 1
    raise BudgetExceededError(
        f"no {label} sample accepted in {budget} draws", rejections)
