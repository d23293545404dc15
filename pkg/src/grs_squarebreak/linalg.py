"""Dense linear algebra over GF(q).

Matrices are plain 2-D numpy int64 arrays whose entries are field elements
of an accompanying :class:`~grs_squarebreak.gf.GF` instance; vectors are 1-D
arrays.  Functions never mutate their inputs.  Row reduction uses the first
nonzero pivot scanning top-to-bottom, left-to-right, so every canonical form
here is deterministic.
"""

from __future__ import annotations

import numpy as np

from .gf import GF


class DimensionMismatch(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


def as_matrix(rows) -> np.ndarray:
    a = np.asarray(rows, dtype=np.int64)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D array, got shape {a.shape}")
    return a


def rref(f: GF, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with zero rows dropped.

    Returns (R, pivots) where pivots lists the strictly increasing pivot
    columns; R has len(pivots) rows.
    """
    m = np.array(a, dtype=np.int64)
    if m.ndim != 2:
        m = m.reshape(1, -1)
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        m[r] = f.mul(m[r], f.inv(m[r, c]))
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = f.add(m[hit], f.mul(f.neg(col[hit])[:, None], m[r][None, :]))
        pivots.append(c)
        r += 1
    return m[: len(pivots)], pivots


def rank(f: GF, a: np.ndarray) -> int:
    return len(rref(f, a)[1])


def batched_rank(f: GF, mats: np.ndarray) -> np.ndarray:
    """Ranks of a stack of equally-shaped matrices, eliminated in lockstep.

    All matrices share one column schedule; each keeps its own pivot-row
    counter.  One pass over the columns with whole-batch vector operations is
    far cheaper than per-matrix elimination when thousands of small rank
    tests are needed (the attack's sampling loops).
    """
    m = np.array(mats, dtype=np.int64)
    if m.ndim != 3:
        raise DimensionMismatch(f"expected a stack of matrices, got shape {m.shape}")
    nmat, nrows, ncols = m.shape
    rowptr = np.zeros(nmat, dtype=np.int64)
    rowidx = np.arange(nrows)
    for c in range(ncols):
        col = m[:, :, c]
        eligible = (rowidx[None, :] >= rowptr[:, None]) & (col != 0)
        has = eligible.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        rp = rowptr[b]
        pr = np.argmax(eligible[b], axis=1)
        swap = m[b, rp, :].copy()
        m[b, rp, :] = m[b, pr, :]
        m[b, pr, :] = swap
        piv_row = f.mul(m[b, rp, :], f.inv0(m[b, rp, c])[:, None])
        m[b, rp, :] = piv_row
        colb = m[b, :, c]
        fac = np.where(rowidx[None, :] > rp[:, None], colb, 0)
        m[b] = f.sub(m[b], f.mul(fac[:, :, None], piv_row[:, None, :]))
        rowptr[b] += 1
        if (rowptr == nrows).all():
            break
    return rowptr


def right_kernel(f: GF, a: np.ndarray) -> np.ndarray:
    """Basis (full-rank matrix, one row per basis vector) of {x : a x^T = 0}.

    Returns a (cols - rank) x cols matrix; 0 rows when a has full column rank.
    """
    a = np.asarray(a, dtype=np.int64)
    ncols = a.shape[1] if a.ndim == 2 else a.shape[0]
    r, pivots = rref(f, a.reshape(-1, ncols))
    free = [c for c in range(ncols) if c not in set(pivots)]
    k = np.zeros((len(free), ncols), dtype=np.int64)
    for row, fc in enumerate(free):
        k[row, fc] = 1
        for i, pc in enumerate(pivots):
            k[row, pc] = f.neg(r[i, fc])
    return k


def matmul(f: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    # Row blocks keep the broadcast temporary bounded for large n.
    block = max(1, (1 << 22) // max(1, a.shape[1] * b.shape[1]))
    for i in range(0, a.shape[0], block):
        chunk = f.sum(f.mul(a[i : i + block, :, None], b[None, :, :]), axis=1)
        out[i : i + block] = chunk
    return out


def matvec(f: GF, a: np.ndarray, v: np.ndarray) -> np.ndarray:
    """a @ v^T as a 1-D array."""
    a = np.asarray(a, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if a.shape[1] != v.shape[0]:
        raise DimensionMismatch(f"cannot apply {a.shape} to length {v.shape[0]}")
    return f.sum(f.mul(a, v[None, :]), axis=1)


def vecmat(f: GF, v: np.ndarray, a: np.ndarray) -> np.ndarray:
    """v @ a as a 1-D array."""
    a = np.asarray(a, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if a.shape[0] != v.shape[0]:
        raise DimensionMismatch(f"cannot apply length {v.shape[0]} to {a.shape}")
    return f.sum(f.mul(v[:, None], a), axis=0)


def outer(f: GF, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    return f.mul(u[:, None], v[None, :])


def inverse(f: GF, a: np.ndarray) -> np.ndarray:
    a = as_matrix(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimensionMismatch("inverse needs a square matrix")
    aug = np.hstack([a, np.eye(n, dtype=np.int64)])
    r, pivots = rref(f, aug)
    if pivots != list(range(n)):
        raise SingularMatrix("matrix is not invertible")
    return r[:, n:]


def solve_right(f: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Some x with a @ x^T = b, or None; free variables are set to zero."""
    a = as_matrix(a)
    b = np.asarray(b, dtype=np.int64)
    if b.shape[0] != a.shape[0]:
        raise DimensionMismatch("right-hand side length mismatch")
    aug = np.hstack([a, b[:, None]])
    r, pivots = rref(f, aug)
    ncols = a.shape[1]
    if pivots and pivots[-1] == ncols:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, ncols]
    return x


def solve_left(f: GF, g: np.ndarray, c: np.ndarray) -> np.ndarray | None:
    """Some u with u @ g = c, or None when c is outside the row space."""
    g = as_matrix(g)
    c = np.asarray(c, dtype=np.int64)
    if g.shape[1] != c.shape[0]:
        raise DimensionMismatch("vector length does not match matrix columns")
    return solve_right(f, g.T, c)


def intersect_rowspaces(f: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Basis of rowspace(a) & rowspace(b), via duals:
    (A^perp + B^perp)^perp = A & B."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch("row spaces live in different ambient spaces")
    ka = right_kernel(f, a)
    kb = right_kernel(f, b)
    return right_kernel(f, np.vstack([ka, kb]))


def in_rowspace(f: GF, basis: np.ndarray, v: np.ndarray) -> bool:
    basis = as_matrix(basis)
    r, pivots = rref(f, basis)
    return not reduce_row(f, r, pivots, v).any()


def reduce_row(f: GF, r: np.ndarray, pivots: list[int], v: np.ndarray) -> np.ndarray:
    """Residual of v after elimination against an RREF basis (r, pivots)."""
    v = np.asarray(v, dtype=np.int64).copy()
    for i, pc in enumerate(pivots):
        if v[pc]:
            v = f.sub(v, f.mul(v[pc], r[i]))
    return v


def random_matrix(f: GF, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, f.q, size=(rows, cols), dtype=np.int64)


def random_invertible(f: GF, k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform invertible k x k matrix by rejection sampling."""
    if k < 1:
        raise DimensionMismatch("k must be >= 1")
    for _ in range(1000):
        m = random_matrix(f, k, k, rng)
        if rank(f, m) == k:
            return m
    raise RuntimeError("rejection sampling failed to find an invertible matrix")


def permutation_matrix(perm: np.ndarray) -> np.ndarray:
    """Matrix P with P[i, perm[i]] = 1, so (v @ P)[perm[i]] = v[i]."""
    perm = np.asarray(perm, dtype=np.int64)
    n = perm.shape[0]
    p = np.zeros((n, n), dtype=np.int64)
    p[np.arange(n), perm] = 1
    return p


def random_permutation(f: GF, n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise DimensionMismatch("n must be >= 1")
    return permutation_matrix(rng.permutation(n))
