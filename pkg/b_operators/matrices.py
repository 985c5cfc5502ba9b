"""Dense row reduction over exact fields.

``row_reduce``, ``nullspace`` and ``solve`` work over any field object with
the ``zero/one/add/sub/mul/inv/neg/is_zero`` protocol. ``fp_nullspace`` is
the numpy version for prime fields.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np


def row_reduce(rows: Sequence[Sequence], domain) -> Tuple[List[list], List[int]]:
    """Reduced row echelon form; returns the non-zero rows and their pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if not domain.is_zero(m[i][c])), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = domain.inv(m[r][c])
        m[r] = [domain.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and not domain.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [domain.sub(a, domain.mul(f, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int, domain) -> List[list]:
    """Canonical kernel basis: one vector per free column, with a 1 in that column."""
    reduced, pivots = row_reduce(rows, domain) if rows else ([], [])
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = [domain.zero] * ncols
        v[f] = domain.one
        for row, pc in zip(reduced, pivots):
            v[pc] = domain.neg(row[f])
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, domain) -> Optional[list]:
    """A solution of rows * x = rhs (free variables set to zero), or None."""
    if not rows:
        return []
    ncols = len(rows[0])
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = row_reduce(augmented, domain)
    if pivots and pivots[-1] == ncols:
        return None
    x = [domain.zero] * ncols
    for row, pc in zip(reduced, pivots):
        x[pc] = row[ncols]
    return x


def fp_nullspace(matrix, p: int) -> np.ndarray:
    """Kernel basis (as rows) of an integer matrix over F_p."""
    a = np.array(matrix, dtype=np.int64) % p
    nrows, ncols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-a[i, f]) % p
    return basis
