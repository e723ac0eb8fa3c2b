"""Linear algebra over the prime field F_p on small numpy integer arrays."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, List, Tuple

import numpy as np

DTYPE = np.int64


def as_mat(rows, p: int, shape=None) -> np.ndarray:
    a = np.array(rows, dtype=DTYPE)
    if shape is not None:
        a = a.reshape(shape)
    return a % p


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=DTYPE)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=DTYPE)


@lru_cache(maxsize=None)
def _inverses(p: int) -> Tuple[int, ...]:
    return tuple([0] + [pow(x, -1, p) for x in range(1, p)])


def rref(a: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form and pivot columns."""
    m = np.array(a, dtype=DTYPE) % p
    rows, cols = m.shape
    inv = _inverses(p)
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * inv[m[r, c]]) % p
        col = m[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            m[nzr] = (m[nzr] - np.outer(col[nzr], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning {x : a x = 0}; shape (ncols, nullity)."""
    rows, cols = a.shape
    if cols == 0:
        return zeros(0, 0)
    if rows == 0:
        return eye(cols)
    m, piv = rref(a, p)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = zeros(cols, len(free))
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(piv):
            basis[pc, j] = (-m[i, f]) % p
    return basis


def column_space(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (as columns) of the column space, in RREF-of-transpose form."""
    if a.size == 0:
        return zeros(a.shape[0], 0)
    m, piv = rref(a.T, p)
    return m[: len(piv)].T.copy()


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    aug = np.concatenate([a % p, eye(n)], axis=1)
    m, piv = rref(aug, p)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix not invertible mod p")
    return m[:, n:].copy()


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """One solution x of a x = b (b may have several columns); raises if none."""
    rows, cols = a.shape
    aug = np.concatenate([a % p, b % p], axis=1)
    m, piv = rref(aug, p)
    if any(c >= cols for c in piv):
        raise ValueError("inconsistent linear system")
    x = zeros(cols, b.shape[1])
    for i, c in enumerate(piv):
        x[c] = m[i, cols:]
    return x


def extend_basis(sub: np.ndarray, n: int, p: int) -> np.ndarray:
    """Columns completing the columns of ``sub`` (independent) to a basis of F_p^n."""
    k = sub.shape[1]
    if k == n:
        return zeros(n, 0)
    # pivots of [sub | I] give sub plus complementary unit vectors
    aug = np.concatenate([sub, eye(n)], axis=1) if k else eye(n)
    _, piv = rref(aug, p)
    extra = [c - k for c in piv if c >= k]
    out = zeros(n, len(extra))
    for j, e in enumerate(extra):
        out[e, j] = 1
    return out


def mat_pow(a: np.ndarray, e: int, p: int) -> np.ndarray:
    n = a.shape[0]
    result = eye(n)
    base = a % p
    while e:
        if e & 1:
            result = (result @ base) % p
        base = (base @ base) % p
        e >>= 1
    return result


def is_nilpotent(a: np.ndarray, p: int) -> bool:
    n = a.shape[0]
    if n == 0:
        return True
    return not mat_pow(a, n, p).any()


def all_vectors(n: int, p: int) -> Iterator[Tuple[int, ...]]:
    return itertools.product(range(p), repeat=n)


def rref_subspaces(n: int, k: int, p: int) -> Iterator[np.ndarray]:
    """All k-dimensional subspaces of F_p^n, each as a k x n RREF matrix."""
    if k == 0:
        yield zeros(0, n)
        return
    for pivots in itertools.combinations(range(n), k):
        free = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, n)
                if c not in pivots]
        for vals in itertools.product(range(p), repeat=len(free)):
            m = zeros(k, n)
            for i, pc in enumerate(pivots):
                m[i, pc] = 1
            for (i, c), x in zip(free, vals):
                m[i, c] = x
            yield m


def gaussian_binomial(n: int, k: int, p: int) -> int:
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def surjection_count(m: int, r: int, q: int) -> int:
    """Number of surjective linear maps F_q^m -> F_q^r."""
    out = 1
    for i in range(r):
        out *= q ** m - q ** i
    return out
