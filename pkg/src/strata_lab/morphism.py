"""Morphisms between sums of twisted line bundles on the plane.

A morphism ``phi: ⊕O(a_j) -> ⊕O(b_i)`` is a matrix whose entry ``(i, j)`` is a
homogeneous polynomial of degree ``b_i - a_j``; cells with negative degree are
empty and stored as ``None``.  Rows follow the target, columns the source.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import groupby
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DegreeError, NotInjectiveError, ShapeError
from .field import Field
from .poly import HomPoly, euler_chi, evaluate_monomials, n_monomials


@dataclass(frozen=True)
class TwistedSum:
    twists: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(int(t) for t in self.twists))
        if not self.twists:
            raise ShapeError("a twisted sum needs at least one summand")

    @property
    def rank(self) -> int:
        return len(self.twists)

    def h0(self, k: int = 0) -> int:
        """Number of global sections of the sum twisted by k."""
        return sum(n_monomials(t + k) for t in self.twists)

    def chi(self, m: int) -> int:
        return sum(euler_chi(t + m) for t in self.twists)

    def __str__(self):
        parts = []
        for t, grp in groupby(self.twists):
            n = len(list(grp))
            parts.append(f"{n if n > 1 else ''}O({t})")
        return " + ".join(parts)


def _as_sum(x) -> TwistedSum:
    return x if isinstance(x, TwistedSum) else TwistedSum(tuple(x))


@dataclass(frozen=True)
class Violation:
    row: int
    col: int
    expected: int
    found: int

    def __str__(self):
        return f"cell ({self.row + 1},{self.col + 1}) has degree {self.found}, expected {self.expected}"


@dataclass(frozen=True)
class SheafMorphism:
    """Matrix of polynomials between twisted sums.

    Use :func:`make_morphism` to build one from loose input; the constructor
    stores entries as given so that :func:`validate_morphism` has something to
    inspect.
    """

    field: Field
    source: TwistedSum
    target: TwistedSum
    entries: tuple[tuple[HomPoly | None, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.target.rank, self.source.rank

    @property
    def is_square(self) -> bool:
        return self.source.rank == self.target.rank

    def degree(self, i: int, j: int) -> int:
        return self.target.twists[i] - self.source.twists[j]

    def entry(self, i: int, j: int) -> HomPoly:
        """Entry (i, j); empty cells come back as a degree-0 zero."""
        e = self.entries[i][j]
        return HomPoly.zero(self.field, 0) if e is None else e

    def is_zero_at(self, i: int, j: int) -> bool:
        e = self.entries[i][j]
        return e is None or e.is_zero()

    @cached_property
    def det(self) -> HomPoly:
        return determinant(self)

    def __str__(self):
        rows = [", ".join(self.entry(i, j).to_str() for j in range(self.shape[1]))
                for i in range(self.shape[0])]
        return f"{self.source} -> {self.target}\n" + "\n".join(f"[{r}]" for r in rows)


def make_morphism(field: Field, source, target, entries, check: bool = True) -> SheafMorphism:
    """Build a morphism, normalising zeros to the degree their cell requires.

    Entries may be :class:`HomPoly`, ``None`` or ``0``.  With ``check`` set a
    nonzero entry of the wrong degree raises :class:`DegreeError`.
    """
    source, target = _as_sum(source), _as_sum(target)
    if len(entries) != target.rank or any(len(r) != source.rank for r in entries):
        raise ShapeError(f"entries must form a {target.rank}x{source.rank} matrix")
    rows = []
    for i, b in enumerate(target.twists):
        row = []
        for j, a in enumerate(source.twists):
            e = entries[i][j]
            d = b - a
            if isinstance(e, HomPoly):
                field.check_same(e.field)
                if e.is_zero():
                    e = None
            elif e is not None and e != 0:
                raise TypeError(f"unsupported entry {e!r}")
            else:
                e = None
            if e is None and d >= 0:
                e = HomPoly.zero(field, d)
            row.append(e)
        rows.append(tuple(row))
    phi = SheafMorphism(field, source, target, tuple(rows))
    if check:
        bad = validate_morphism(phi)
        if bad:
            raise DegreeError(bad)
    return phi


def validate_morphism(phi: SheafMorphism) -> list[Violation]:
    """Cells whose entry degree disagrees with ``b_i - a_j`` (empty list = ok)."""
    out = []
    for i in range(phi.shape[0]):
        for j in range(phi.shape[1]):
            e = phi.entries[i][j]
            if e is None or e.is_zero():
                continue
            d = phi.degree(i, j)
            if e.degree != d:
                out.append(Violation(i, j, d, e.degree))
    return out


def _require_square(phi: SheafMorphism) -> None:
    if not phi.is_square:
        raise ShapeError(f"expected a square morphism, got shape {phi.shape}")


def determinant(phi: SheafMorphism) -> HomPoly:
    """Laplace expansion along rows, memoised on the remaining column set."""
    _require_square(phi)
    n = phi.shape[0]
    field = phi.field
    total_degree = sum(phi.target.twists) - sum(phi.source.twists)
    memo: dict[tuple[int, frozenset], HomPoly | None] = {}

    def minor(r: int, cols: frozenset) -> HomPoly | None:
        # None stands for zero
        if r == n:
            return HomPoly.constant(field, 1)
        key = (r, cols)
        if key in memo:
            return memo[key]
        acc = None
        for pos, c in enumerate(sorted(cols)):
            e = phi.entries[r][c]
            if e is None or e.is_zero():
                continue
            sub = minor(r + 1, cols - {c})
            if sub is None:
                continue
            term = e * sub
            if pos % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is not None and acc.is_zero():
            acc = None
        memo[key] = acc
        return acc

    result = minor(0, frozenset(range(n)))
    if result is None:
        return HomPoly.zero(field, max(total_degree, 0))
    return result


def is_injective(phi: SheafMorphism) -> bool:
    """A square morphism is injective as a sheaf map iff its determinant is nonzero."""
    _require_square(phi)
    return not phi.det.is_zero()


def require_injective(phi: SheafMorphism) -> None:
    if not is_injective(phi):
        raise NotInjectiveError("the morphism has zero determinant")


def dual_resolution(phi: SheafMorphism) -> SheafMorphism:
    """Transpose, with twists sent to ``-t - 2``."""
    _require_square(phi)
    source = TwistedSum(tuple(-b - 2 for b in phi.target.twists))
    target = TwistedSum(tuple(-a - 2 for a in phi.source.twists))
    entries = tuple(tuple(phi.entries[i][j] for i in range(phi.shape[0]))
                    for j in range(phi.shape[1]))
    return SheafMorphism(phi.field, source, target, entries)


def shape_hilbert_polynomial(source, target) -> tuple[int, int]:
    """``(leading, constant)`` of ``sum chi(b + m) - sum chi(a + m)``."""
    source, target = _as_sum(source), _as_sum(target)
    if source.rank != target.rank:
        raise ShapeError("ranks differ; the difference is not linear in m")
    c0 = target.chi(0) - source.chi(0)
    c1 = target.chi(1) - source.chi(1)
    return c1 - c0, c0


def hilbert_polynomial(phi: SheafMorphism) -> tuple[int, int]:
    require_injective(phi)
    return shape_hilbert_polynomial(phi.source, phi.target)


def compose(psi: SheafMorphism, phi: SheafMorphism) -> SheafMorphism:
    """``psi ∘ phi``."""
    psi.field.check_same(phi.field)
    if psi.source != phi.target:
        raise ShapeError(f"cannot compose: {psi.source} != {phi.target}")
    rows = []
    for i in range(psi.shape[0]):
        row = []
        for j in range(phi.shape[1]):
            d = psi.target.twists[i] - phi.source.twists[j]
            if d < 0:
                row.append(None)
                continue
            acc = HomPoly.zero(psi.field, d)
            for k in range(psi.shape[1]):
                a, b = psi.entries[i][k], phi.entries[k][j]
                if a is None or b is None or a.is_zero() or b.is_zero():
                    continue
                acc = acc + a * b
            row.append(acc)
        rows.append(tuple(row))
    return SheafMorphism(psi.field, phi.source, psi.target, tuple(rows))


# ---------------------------------------------------------------------------
# automorphisms and the group action


def twist_groups(twists: Sequence[int]) -> list[list[int]]:
    """Index groups of equal twists (in order of first appearance)."""
    groups: dict[int, list[int]] = {}
    for i, t in enumerate(twists):
        groups.setdefault(t, []).append(i)
    return list(groups.values())


def constant_block(phi: SheafMorphism, rows: list[int], cols: list[int]) -> np.ndarray:
    out = phi.field.zeros((len(rows), len(cols)))
    for a, i in enumerate(rows):
        for b, j in enumerate(cols):
            e = phi.entries[i][j]
            if e is not None:
                out[a, b] = e.coeffs[0]
    return out


def identity_morphism(field: Field, summ) -> SheafMorphism:
    summ = _as_sum(summ)
    n = summ.rank
    entries = [[HomPoly.constant(field, 1) if i == j else 0 for j in range(n)] for i in range(n)]
    return make_morphism(field, summ, summ, entries)


def automorphism_invertible(auto: SheafMorphism) -> bool:
    if auto.source != auto.target:
        return False
    field = auto.field
    for grp in twist_groups(auto.source.twists):
        if linalg.rank(constant_block(auto, grp, grp), field) < len(grp):
            return False
    return True


@dataclass(frozen=True)
class EquivalenceElement:
    """A pair of automorphisms acting by ``phi -> target_auto ∘ phi ∘ source_auto``."""

    source_auto: SheafMorphism
    target_auto: SheafMorphism

    def __post_init__(self):
        for auto in (self.source_auto, self.target_auto):
            if auto.source != auto.target:
                raise ShapeError("automorphisms must be endomorphisms")
            if validate_morphism(auto):
                raise DegreeError(validate_morphism(auto))
            if not automorphism_invertible(auto):
                raise ZeroDivisionError("a constant diagonal block is singular")

    @classmethod
    def identity(cls, field: Field, source, target) -> "EquivalenceElement":
        return cls(identity_morphism(field, source), identity_morphism(field, target))

    def to_json(self) -> dict:
        from .io import morphism_to_json
        return {"source_auto": morphism_to_json(self.source_auto),
                "target_auto": morphism_to_json(self.target_auto)}


def apply_equivalence(g: EquivalenceElement, phi: SheafMorphism) -> SheafMorphism:
    if g.source_auto.source != phi.source or g.target_auto.source != phi.target:
        raise ShapeError("group element does not match the morphism's shape")
    return compose(compose(g.target_auto, phi), g.source_auto)


def _random_poly(field: Field, degree: int, rng: np.random.Generator) -> HomPoly:
    return HomPoly.from_array(field, degree, field.random(rng, n_monomials(degree)))


def random_automorphism(field: Field, summ, rng: np.random.Generator) -> SheafMorphism:
    """Random degree-legal automorphism with invertible constant diagonal blocks."""
    summ = _as_sum(summ)
    t = summ.twists
    n = summ.rank
    entries = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            d = t[i] - t[j]
            if d > 0:
                entries[i][j] = _random_poly(field, d, rng)
    for grp in twist_groups(t):
        while True:
            block = field.random(rng, (len(grp), len(grp)))
            if linalg.rank(block, field) == len(grp):
                break
        for a, i in enumerate(grp):
            for b, j in enumerate(grp):
                entries[i][j] = HomPoly.constant(field, int(block[a, b]))
    return make_morphism(field, summ, summ, entries)


def random_equivalence(phi: SheafMorphism, rng: np.random.Generator) -> EquivalenceElement:
    return EquivalenceElement(random_automorphism(phi.field, phi.source, rng),
                              random_automorphism(phi.field, phi.target, rng))


# ---------------------------------------------------------------------------
# the seven templates


@dataclass(frozen=True)
class StratumShape:
    label: str
    source: TwistedSum
    target: TwistedSum

    @property
    def key(self) -> tuple:
        return tuple(sorted(self.source.twists)), tuple(sorted(self.target.twists))


def _shape(label, source, target) -> StratumShape:
    return StratumShape(label, TwistedSum(tuple(source)), TwistedSum(tuple(target)))


TEMPLATES: dict[str, StratumShape] = {
    s.label: s
    for s in (
        _shape("X0", [-2, -2, -2, -2], [-1, -1, 0, 0]),
        _shape("X1", [-2, -2, -2, -2, -1], [-1, -1, -1, 0, 0]),
        _shape("X2", [-3, -2, -1], [0, 0, 0]),
        _shape("X3", [-3, -2, -1, -1], [-1, 0, 0, 0]),
        _shape("X4", [-3, -2, -2], [-1, -1, 1]),
        _shape("X5", [-3, -3, -1], [-2, 0, 1]),
        _shape("X6", [-4, 0], [1, 1]),
    )
}
LABELS = tuple(TEMPLATES)


def _check_templates() -> None:
    keys = [s.key for s in TEMPLATES.values()]
    assert len(set(keys)) == len(keys), "templates must be pairwise distinct"
    for s in TEMPLATES.values():
        assert s.source.rank == s.target.rank, s.label
        assert sum(s.target.twists) - sum(s.source.twists) == 6, s.label
        assert shape_hilbert_polynomial(s.source, s.target) == (6, 2), s.label


_check_templates()


def match_template(phi: SheafMorphism) -> StratumShape | None:
    key = tuple(sorted(phi.source.twists)), tuple(sorted(phi.target.twists))
    for s in TEMPLATES.values():
        if s.key == key:
            return s
    return None


def canonicalize(phi: SheafMorphism) -> tuple[SheafMorphism, list[int], list[int]]:
    """Sort rows and columns by ascending twist (stable).

    Returns the permuted morphism together with the row and column orders
    used, so ``canonical.entries[r][c] = phi.entries[rows[r]][cols[c]]``.
    """
    rows = sorted(range(phi.shape[0]), key=lambda i: phi.target.twists[i])
    cols = sorted(range(phi.shape[1]), key=lambda j: phi.source.twists[j])
    entries = tuple(tuple(phi.entries[i][j] for j in cols) for i in rows)
    out = SheafMorphism(
        phi.field,
        TwistedSum(tuple(phi.source.twists[j] for j in cols)),
        TwistedSum(tuple(phi.target.twists[i] for i in rows)),
        entries,
    )
    return out, rows, cols


def block_indices(twists: Sequence[int]) -> list[list[int]]:
    """Index ranges of the distinct twists, in ascending twist order."""
    order = sorted(set(twists))
    return [[i for i, t in enumerate(twists) if t == v] for v in order]


def block(phi: SheafMorphism, k: int, l: int) -> list[list[HomPoly]]:
    """The block ``phi_kl`` (1-based) of a morphism in canonical order."""
    rows = block_indices(phi.target.twists)[k - 1]
    cols = block_indices(phi.source.twists)[l - 1]
    return [[phi.entry(i, j) for j in cols] for i in rows]


def random_morphism(shape: StratumShape, seed, field: Field | None = None,
                    zero_cells: Sequence[tuple[int, int]] = ()) -> SheafMorphism:
    """Uniform random coefficients in every degree-legal cell.

    ``seed`` may be an int, a SeedSequence or a Generator.  ``zero_cells`` are
    forced to zero.
    """
    from .field import DEFAULT_FIELD

    field = field or DEFAULT_FIELD
    if not field.is_prime:
        raise ValueError("random sampling needs a prime field")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    forced = set(zero_cells)
    entries = []
    for i, b in enumerate(shape.target.twists):
        row = []
        for j, a in enumerate(shape.source.twists):
            d = b - a
            if d < 0 or (i, j) in forced:
                row.append(0)
            else:
                row.append(_random_poly(field, d, rng))
        entries.append(row)
    return make_morphism(field, shape.source, shape.target, entries)


def evaluate_at(phi: SheafMorphism, points) -> np.ndarray:
    """Scalar matrices ``phi(P)`` for an array of points, shape ``(N, rows, cols)``."""
    field = phi.field
    pts = np.asarray(points, dtype=np.int64).reshape(-1, 3)
    dtype = field.dtype
    out = np.zeros((len(pts),) + phi.shape, dtype=dtype)
    cache: dict[int, np.ndarray] = {}
    for i in range(phi.shape[0]):
        for j in range(phi.shape[1]):
            e = phi.entries[i][j]
            if e is None or e.is_zero():
                continue
            if e.degree not in cache:
                cache[e.degree] = evaluate_monomials(e.degree, pts, field)
            vals = cache[e.degree].astype(dtype)
            out[:, i, j] = (vals @ np.asarray(e.coeffs, dtype=dtype)) % field.prime
    return out


def shape_counts(phi: SheafMorphism) -> tuple[Counter, Counter]:
    return Counter(phi.source.twists), Counter(phi.target.twists)
