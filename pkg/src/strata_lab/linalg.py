"""Exact linear algebra over a :class:`~strata_lab.field.Field`.

Everything here works on 2-d numpy arrays whose entries are field elements
(``int64``/object ints reduced mod p, or Fractions).  ``batch_rank`` is the one
vectorised routine; it handles stacks of small matrices over F_p and backs the
subspace enumerations.
"""

from __future__ import annotations

import numpy as np

from .field import Field


def rref(a, field: Field):
    """Reduced row echelon form.  Returns ``(R, pivot_columns)``."""
    m = field.array(a) if not isinstance(a, np.ndarray) else field.reduce(a.copy())
    if m.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c] != 0)
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = field.reduce(m[r] * field.inv(m[r, c]))
        col = m[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col != 0)
        if nzr.size:
            m[nzr] = field.reduce(m[nzr] - np.outer(col[nzr], m[r]))
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, field: Field) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, field)[1])


def nullspace(a, field: Field) -> np.ndarray:
    """Basis of the right kernel, returned as the columns of an array."""
    a = np.asarray(a)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return field.identity(cols)
    r, pivots = rref(a, field)
    free = [c for c in range(cols) if c not in pivots]
    basis = field.zeros((cols, len(free)))
    for k, f in enumerate(free):
        basis[f, k] = field.one
        for i, pc in enumerate(pivots):
            basis[pc, k] = field.reduce(-r[i, f])
    return basis


def left_nullspace(a, field: Field) -> np.ndarray:
    """Basis of ``{y : y a = 0}`` as the rows of an array."""
    return nullspace(np.asarray(a).T, field).T


def solve(a, b, field: Field):
    """One solution x of ``a x = b`` or ``None`` when inconsistent."""
    a = np.asarray(a)
    b = np.asarray(b)
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    rows, cols = a.shape
    if rows == 0:
        x = field.zeros((cols, b.shape[1]))
        return x[:, 0] if vector else x
    aug = np.concatenate([field.reduce(a), field.reduce(b)], axis=1)
    r, pivots = rref(aug, field)
    if any(p >= cols for p in pivots):
        return None
    x = field.zeros((cols, b.shape[1]))
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols:]
    return x[:, 0] if vector else x


def inverse(a, field: Field) -> np.ndarray:
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    r, pivots = rref(np.concatenate([field.reduce(a), field.identity(n)], axis=1), field)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return r[:, n:]


def det(a, field: Field):
    """Determinant of a square scalar matrix by elimination."""
    m = field.reduce(np.array(a, dtype=field.dtype if field.is_prime else object))
    n = m.shape[0]
    result = field.one
    for c in range(n):
        nz = np.flatnonzero(m[c:, c] != 0)
        if nz.size == 0:
            return field.zero
        k = c + int(nz[0])
        if k != c:
            m[[c, k]] = m[[k, c]]
            result = field.reduce(-result)
        piv = m[c, c]
        result = field.reduce(result * piv)
        inv = field.inv(piv)
        below = m[c + 1:, c] * inv
        m[c + 1:] = field.reduce(m[c + 1:] - np.outer(field.reduce(below), m[c]))
    return field(result) if field.is_prime else result


def complete_basis(vectors, n: int, field: Field) -> np.ndarray:
    """Extend the independent columns ``vectors`` to a basis of field^n.

    Returns the added standard basis vectors as columns.
    """
    vectors = np.asarray(vectors).reshape(n, -1)
    have = vectors.shape[1]
    current = vectors
    added = []
    for i in range(n):
        if have + len(added) == n:
            break
        e = field.zeros((n, 1))
        e[i, 0] = field.one
        trial = np.concatenate([current, e], axis=1)
        if rank(trial, field) == trial.shape[1]:
            current = trial
            added.append(e)
    if not added:
        return field.zeros((n, 0))
    return np.concatenate(added, axis=1)


def _batch_inverse_mod(x: np.ndarray, p: int) -> np.ndarray:
    """Elementwise inverse mod p by square-and-multiply (x nonzero)."""
    result = np.ones_like(x)
    base = x % p
    e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def batch_rank(stack: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices ``(N, r, c)`` over F_p (int64 path)."""
    a = np.array(stack, dtype=np.int64) % p
    n, rows, cols = a.shape
    ranks = np.zeros(n, dtype=np.int64)
    if n == 0 or rows == 0 or cols == 0:
        return ranks
    row_index = np.arange(rows)
    for c in range(cols):
        avail = (a[:, :, c] != 0) & (row_index[None, :] >= ranks[:, None])
        has = avail.any(axis=1)
        if not has.any():
            continue
        idx = np.flatnonzero(has)
        piv = np.argmax(avail[idx], axis=1)
        tgt = ranks[idx]
        swap = a[idx, tgt].copy()
        a[idx, tgt] = a[idx, piv]
        a[idx, piv] = swap
        prow = a[idx, tgt] * _batch_inverse_mod(a[idx, tgt, c], p)[:, None] % p
        a[idx, tgt] = prow
        factors = a[idx, :, c].copy()
        below = row_index[None, :] > tgt[:, None]
        factors = np.where(below, factors, 0)
        a[idx] = (a[idx] - factors[:, :, None] * prow[:, None, :]) % p
        ranks[idx] += 1
    return ranks
