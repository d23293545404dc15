"""Generalized Reed-Solomon codes as evaluation codes.

A GRS code is determined by pairwise-distinct evaluation points x, nonzero
column multipliers y and a dimension k: its codewords are
(y_1 p(x_1), ..., y_n p(x_n)) for polynomials p of degree < k.

This module provides the generator matrix, bounded-distance decoding up to
floor((n-k)/2) errors (Berlekamp-Welch), the dual-code multiplier formula,
and two reconstruction routines used by the key-recovery attack:

* ``ss_recover``: given only a code known to be GRS, find some describing
  pair (x, y) (Sidelnikov-Shestakov style, via cross-ratios of the
  systematic generator).  The pair is never unique; only code equality is
  promised.
* ``recover_multipliers``: given candidate points x and a subcode, solve the
  linear system for column multipliers y placing the subcode inside
  GRS_k(x, y).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .codes import LinearCode, code_from_generator
from .gf import GF
from .linalg import DimensionMismatch


class InvalidParams(ValueError):
    pass


class NotGrs(ValueError):
    """Reconstruction failed verification: the input is not (provably) GRS."""


@dataclass(eq=False, frozen=True)
class GrsParams:
    field: GF
    x: np.ndarray  # n pairwise-distinct evaluation points
    y: np.ndarray  # n nonzero column multipliers
    k: int

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.int64)
        y = np.asarray(self.y, dtype=np.int64)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        n = x.shape[0]
        if y.shape != (n,):
            raise InvalidParams("x and y must have the same length")
        if n > self.field.q:
            raise InvalidParams(f"length {n} exceeds field size {self.field.q}")
        if not (1 <= self.k < n):
            raise InvalidParams(f"need 1 <= k < n, got k={self.k}, n={n}")
        if np.unique(x).size != n:
            raise InvalidParams("evaluation points must be pairwise distinct")
        if np.any(y == 0):
            raise InvalidParams("column multipliers must be nonzero")

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def t(self) -> int:
        """Unique-decoding radius floor((n-k)/2)."""
        return (self.n - self.k) // 2

    def __eq__(self, other):
        return (
            isinstance(other, GrsParams)
            and self.field == other.field
            and self.k == other.k
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
        )

    def __repr__(self):
        return f"GrsParams(n={self.n}, k={self.k}, field={self.field!r})"


def generator_matrix(p: GrsParams) -> np.ndarray:
    """k x n matrix with row i equal to y * x^i (componentwise powers)."""
    f = p.field
    rows = [np.array(p.y, dtype=np.int64)]
    for _ in range(p.k - 1):
        rows.append(f.mul(rows[-1], p.x))
    return np.stack(rows)


def code(p: GrsParams) -> LinearCode:
    return code_from_generator(p.field, generator_matrix(p))


def encode(p: GrsParams, msg: np.ndarray) -> np.ndarray:
    msg = np.asarray(msg, dtype=np.int64)
    if msg.shape != (p.k,):
        raise DimensionMismatch(f"message length must be k={p.k}")
    return linalg.vecmat(p.field, msg, generator_matrix(p))


def _poly_deg(c: np.ndarray) -> int:
    nz = np.nonzero(c)[0]
    return int(nz[-1]) if nz.size else -1


def _poly_eval(f: GF, coeffs: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Horner evaluation of a coefficient vector (constant term first)."""
    acc = np.zeros_like(xs)
    for c in coeffs[::-1]:
        acc = f.add(f.mul(acc, xs), c)
    return acc


def _poly_divmod(f: GF, num: np.ndarray, den: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    dd = _poly_deg(den)
    rem = np.array(num, dtype=np.int64)
    if rem.shape[0] < dd + 1:
        rem = np.append(rem, np.zeros(dd + 1 - rem.shape[0], dtype=np.int64))
    quot = np.zeros(max(rem.shape[0] - dd, 1), dtype=np.int64)
    lead_inv = f.inv(den[dd])
    for i in range(rem.shape[0] - 1, dd - 1, -1):
        if rem[i] == 0:
            continue
        c = f.mul(rem[i], lead_inv)
        quot[i - dd] = c
        rem[i - dd : i + 1] = f.sub(rem[i - dd : i + 1], f.mul(c, den[: dd + 1]))
    return quot, rem


def decode(p: GrsParams, received: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    """Berlekamp-Welch bounded-distance decoding.

    Returns (codeword, error) when some codeword lies within Hamming distance
    t = floor((n-k)/2) of the received word (that codeword is unique), else
    None.  Solves for a monic error locator E of degree t and N of degree
    < k+t with N(x_i) = (r_i / y_i) E(x_i), then divides.
    """
    f, x, k, n, t = p.field, p.x, p.k, p.n, p.t
    r = np.asarray(received, dtype=np.int64)
    if r.shape != (n,):
        raise DimensionMismatch(f"received word must have length n={n}")
    s = f.div(r, p.y)
    # powers[:, j] = x^j for j = 0..k+t
    powers = np.empty((n, k + t + 1), dtype=np.int64)
    powers[:, 0] = 1
    for j in range(1, k + t + 1):
        powers[:, j] = f.mul(powers[:, j - 1], x)
    lhs = np.hstack([powers[:, : k + t], f.mul(f.neg(s)[:, None], powers[:, :t])])
    rhs = f.mul(s, powers[:, t])
    sol = linalg.solve_right(f, lhs, rhs)
    if sol is None:
        return None
    num = sol[: k + t]
    loc = np.append(sol[k + t :], 1)  # monic degree-t locator
    quot, rem = _poly_divmod(f, num, loc)
    if rem.any() or _poly_deg(quot) >= k:
        return None
    cw = f.mul(p.y, _poly_eval(f, quot, x))
    err = f.sub(r, cw)
    if int(np.count_nonzero(err)) > t:
        return None
    return cw, err


def _pairwise_products(f: GF, x: np.ndarray) -> np.ndarray:
    """v_i = prod_{j != i} (x_i - x_j)."""
    n = x.shape[0]
    diffs = f.sub(x[:, None], x[None, :])
    diffs[np.arange(n), np.arange(n)] = 1
    acc = np.ones(n, dtype=np.int64)
    for j in range(n):
        acc = f.mul(acc, diffs[:, j])
    return acc


def dual_params(p: GrsParams) -> GrsParams:
    """Describing pair of the dual code: GRS_k(x, y)^perp = GRS_{n-k}(x, z)
    with z_i = 1 / (y_i prod_{j != i} (x_i - x_j))."""
    f = p.field
    z = f.inv(f.mul(p.y, _pairwise_products(f, p.x)))
    return GrsParams(f, p.x.copy(), z, p.n - p.k)


def recover_multipliers(x: np.ndarray, k: int, sub: LinearCode) -> np.ndarray | None:
    """Column multipliers y (all nonzero) with sub a subcode of GRS_k(x, y).

    The reciprocals u_i = 1/y_i satisfy a linear system: for every generator
    row c of sub and every parity check h of the plain evaluation code on x,
    sum_i h_i c_i u_i = 0.  Returns None when the kernel of that system
    contains no everywhere-nonzero vector.
    """
    f = sub.field
    x = np.asarray(x, dtype=np.int64)
    n = x.shape[0]
    if sub.n != n or not (1 <= k < n) or sub.k > k:
        raise InvalidParams("subcode/point dimensions are inconsistent")
    ones = GrsParams(f, x, np.ones(n, dtype=np.int64), k)
    checks = generator_matrix(dual_params(ones))  # (n-k) x n
    constraints = f.mul(sub.gen[:, None, :], checks[None, :, :]).reshape(-1, n)
    kernel = linalg.right_kernel(f, constraints)
    if kernel.shape[0] == 0:
        return None
    for row in kernel:
        if not np.any(row == 0):
            return f.inv(row)
    if kernel.shape[0] > 1:
        mix = np.random.default_rng(0)  # deterministic local search
        for _ in range(256):
            u = linalg.vecmat(f, mix.integers(0, f.q, kernel.shape[0]), kernel)
            if not np.any(u == 0):
                return f.inv(u)
    return None


def _grs_from_points(c: LinearCode, x: np.ndarray) -> GrsParams | None:
    """Finish a reconstruction: solve multipliers for given points, verify."""
    y = recover_multipliers(x, c.k, c)
    if y is None:
        return None
    params = GrsParams(c.field, x, y, c.k)
    if code(params) == c:
        return params
    return None


def _recover_via_ratios(c: LinearCode, colperm: np.ndarray) -> GrsParams | None:
    """Core point recovery for 2 <= k <= n-2 on a column-permuted copy.

    In systematic form [I | A] w.r.t. an information set, every entry of A is
    nonzero for a genuine GRS code and row ratios A[0,j]/A[i,j] are Moebius
    images of the unknown points.  Pinning the first two information points
    to 0 and 1 and one redundancy point to a trial value v makes all other
    points solvable from cross-ratios; a bad v (one that pushes a point to
    infinity) shows up as a division by zero or a collision and is skipped.
    """
    f, n, k = c.field, c.n, c.k
    r, piv = linalg.rref(f, c.gen[:, colperm])
    pivset = set(piv)
    rest = [j for j in range(n) if j not in pivset]
    a = r[:, rest]
    if np.any(a == 0):
        return None
    u = f.div(a[0], a[1])
    w = f.div(u, u[0])
    va = f.div(a[0][None, :], a)  # va[i, j] = A[0,j] / A[i,j]
    for v in range(2, f.q):
        d = f.div(v, f.sub(v, 1))
        s = f.div(w, d)
        if np.any(s == 1):
            continue
        xr = f.inv(f.sub(1, s))  # points of the redundancy columns; xr[0] == v
        xcols = np.empty(n, dtype=np.int64)
        xcols[piv[0]] = 0
        xcols[piv[1]] = 1
        xcols[rest] = xr
        if k >= 3:
            if len(rest) < 2:
                return None
            ratio = f.div(va[2:, 0], va[2:, 1])
            rho = f.mul(ratio, f.div(xr[0], xr[1]))
            if np.any(rho == 1):
                continue
            xi = f.div(f.sub(f.mul(rho, xr[1]), xr[0]), f.sub(rho, 1))
            xcols[np.asarray(piv[2:], dtype=np.int64)] = xi
        if np.unique(xcols).size != n:
            continue
        x = np.empty(n, dtype=np.int64)
        x[colperm] = xcols
        params = _grs_from_points(c, x)
        if params is not None:
            return params
    return None


def ss_recover(c: LinearCode) -> GrsParams:
    """Some describing pair (x, y) of a GRS code given only the code.

    Raises NotGrs when no consistent pair survives verification (callers use
    this as the signal that an attack guess was wrong).  The output is one
    representative of the Moebius orbit of valid pairs, pinned at x[info_0]=0,
    x[info_1]=1.
    """
    f, n, k = c.field, c.n, c.k
    if n > f.q or k >= n:
        raise NotGrs(f"no GRS code with k={k}, n={n} over {f!r}")
    if k == 1:
        row = c.gen[0]
        if np.any(row == 0):
            raise NotGrs("a 1-dimensional GRS code has full support")
        return GrsParams(f, f.elements()[:n], row.copy(), 1)
    if k == n - 1:
        # The dual is 1-dimensional: describe it as GRS_1 and dualize back.
        h = linalg.right_kernel(f, c.gen)[0]
        if np.any(h == 0):
            raise NotGrs("dual generator has zero coordinates")
        params = dual_params(GrsParams(f, f.elements()[:n], h, 1))
        if code(params) == c:
            return params
        raise NotGrs("dual-route reconstruction failed verification")
    retry = np.random.default_rng(0)  # deterministic fallback permutations
    for attempt in range(6):
        colperm = np.arange(n) if attempt == 0 else retry.permutation(n)
        params = _recover_via_ratios(c, colperm)
        if params is not None:
            return params
    raise NotGrs("cross-ratio reconstruction failed verification")
