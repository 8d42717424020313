"""Semistability of Kronecker modules (matrices of linear forms).

An ``n x m`` matrix of linear forms is a representation ``F^m -> V ⊗ F^n`` of
the 3-arrow Kronecker quiver.  A nonzero subspace ``A'`` of the source
destabilises when ``n * dim A' > m * dim(M_X A' + M_Y A' + M_Z A')``.

Over F_p the check enumerates subspaces on whichever side is smaller.  On the
target side we run over annihilators ``U`` of candidate images ``B'``; the
largest ``A'`` mapping into ``B'`` is the common kernel of ``U M_t``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError, ShapeError
from .field import Field, GF, is_prime
from .linalg import batch_rank, nullspace, rank
from .poly import HomPoly

ENUMERATION_BUDGET = 2_000_000


@dataclass(frozen=True)
class KroneckerModule:
    field: Field
    mats: np.ndarray = dc_field(compare=False)  # shape (3, n, m)

    def __post_init__(self):
        if self.mats.ndim != 3 or self.mats.shape[0] != 3:
            raise ShapeError("expected three n x m coefficient matrices")
        if self.n == 0 or self.m == 0:
            raise ValueError("Kronecker module with an empty side")

    @property
    def n(self) -> int:
        return self.mats.shape[1]

    @property
    def m(self) -> int:
        return self.mats.shape[2]

    @classmethod
    def from_forms(cls, forms) -> "KroneckerModule":
        """From an ``n x m`` nested list of linear :class:`HomPoly`."""
        if not forms or not forms[0]:
            raise ValueError("Kronecker module with an empty side")
        field = forms[0][0].field
        n, m = len(forms), len(forms[0])
        mats = field.zeros((3, n, m))
        for i, row in enumerate(forms):
            for j, f in enumerate(row):
                if f.degree != 1 and not f.is_zero():
                    raise ShapeError(f"entry ({i},{j}) is not linear")
                if f.degree == 1:
                    for t in range(3):
                        mats[t, i, j] = f.coeffs[t]
        return cls(field, mats)

    def image_dim(self, basis: np.ndarray) -> int:
        """``dim(M_X A + M_Y A + M_Z A)`` for A spanned by the columns of ``basis``."""
        if basis.shape[1] == 0:
            return 0
        cols = np.concatenate([self.field.reduce(self.mats[t] @ basis) for t in range(3)], axis=1)
        return rank(cols, self.field)

    def destabilises(self, basis: np.ndarray) -> bool:
        k = rank(basis, self.field) if basis.size else 0
        return k > 0 and self.n * k > self.m * self.image_dim(basis)

    def reduce_mod(self, p: int) -> "KroneckerModule":
        f = GF(p)
        return KroneckerModule(f, f.array([[[f(x) for x in row] for row in mat] for mat in self.mats]))


@dataclass(frozen=True)
class SemistabilityResult:
    """``semistable`` is None when rational reductions disagreed."""

    semistable: bool | None
    witness: np.ndarray | None = dc_field(default=None, compare=False)
    probabilistic: bool = False
    primes: tuple[int, ...] = ()

    def __bool__(self):
        return bool(self.semistable)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def rref_subspaces(k: int, n: int, p: int) -> np.ndarray:
    """All k x n reduced row echelon matrices of rank k over F_p, shape (N, k, n)."""
    chunks = []
    for piv in itertools.combinations(range(n), k):
        free = [(r, c) for r in range(k) for c in range(piv[r] + 1, n) if c not in piv]
        count = p ** len(free)
        block = np.zeros((count, k, n), dtype=np.int64)
        for r, c in enumerate(piv):
            block[:, r, c] = 1
        digits = np.arange(count, dtype=np.int64)
        for r, c in free:
            block[:, r, c] = digits % p
            digits //= p
        chunks.append(block)
    if not chunks:
        return np.zeros((0, k, n), dtype=np.int64)
    return np.concatenate(chunks)


def _semistable_prime(K: KroneckerModule) -> SemistabilityResult:
    p = K.field.prime
    m, n = K.m, K.n
    mats = np.asarray(K.mats, dtype=np.int64) % p
    source_side = m <= n
    side = m if source_side else n
    total = sum(gaussian_binomial(side, k, p) for k in range(1, side + 1))
    if total > ENUMERATION_BUDGET:
        raise BudgetExceededError(
            f"semistability check would enumerate {total} subspaces over F_{p}",
            {"subspaces": total},
        )
    for k in range(1, side + 1):
        subs = rref_subspaces(k, side, p)
        if source_side:
            # images of the basis vectors under the three maps, as rows
            imgs = np.einsum("tij,skj->skti", mats, subs) % p
            imgs = imgs.reshape(len(subs), 3 * k, n)
            dims = batch_rank(imgs, p)
            bad = np.flatnonzero(n * k > m * dims)
            if bad.size:
                return SemistabilityResult(False, subs[bad[0]].T.copy())
        else:
            # k = codimension of B'; rows of U annihilate B'
            stacked = np.einsum("sri,tij->strj", subs, mats) % p
            stacked = stacked.reshape(len(subs), 3 * k, m)
            a_dims = m - batch_rank(stacked, p)
            bad = np.flatnonzero((a_dims > 0) & (n * a_dims > m * (n - k)))
            if bad.size:
                witness = nullspace(K.field.array(stacked[bad[0]]), K.field)
                return SemistabilityResult(False, witness)
    return SemistabilityResult(True)


def _reduction_primes(K: KroneckerModule, count: int = 3, start: int = 101) -> list[int]:
    dens = {Fraction(x).denominator for x in K.mats.reshape(-1)}
    out = []
    q = start
    while len(out) < count:
        if is_prime(q) and all(d % q for d in dens):
            out.append(q)
        q += 1
    return out


def kronecker_semistable(K: KroneckerModule) -> SemistabilityResult:
    if K.field.is_prime:
        return _semistable_prime(K)
    primes = _reduction_primes(K)
    results = [_semistable_prime(K.reduce_mod(q)) for q in primes]
    votes = {r.semistable for r in results}
    if len(votes) != 1:
        return SemistabilityResult(None, None, True, tuple(primes))
    witness = next((r.witness for r in results if r.witness is not None), None)
    return SemistabilityResult(votes.pop(), witness, True, tuple(primes))


def linear_forms_independent(forms: list[HomPoly]) -> bool:
    if not forms:
        return True
    field = forms[0].field
    return rank(field.array([list(f.coeffs) for f in forms]), field) == len(forms)
