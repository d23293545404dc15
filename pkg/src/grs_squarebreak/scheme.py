"""The rank-one-masked McEliece variant over GRS codes.

Key generation hides a secret GRS generator G_sec behind
G_pub = S^-1 G_sec Q^-1 where Q = Pi + R, Pi a permutation matrix and
R = alpha^T beta a rank-one matrix.  Decryption guesses the scalar
gamma = <e, alpha> (q candidates), strips e R = gamma beta, and decodes in
the secret code.

Writing b = alpha and a = beta Pi^-1, the masking matrix satisfies
Q = (I + b^T a) Pi, and with lam = -b / (1 + <a, b>) every public codeword
is p + <lam, p> a for some p in the permuted secret code C = C_sec Pi^-1.
Key generation resamples (alpha, beta) until Q is invertible, lam is not a
parity check of C, and the public code differs from C; these keys are the
honest ones, and also exactly the ones the square-code attack targets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import grs, linalg
from .gf import GF
from .linalg import DimensionMismatch


class InvalidDimensions(ValueError):
    pass


class ResampleExhausted(RuntimeError):
    pass


class DecryptionFailure(RuntimeError):
    pass


@dataclass(eq=False, frozen=True)
class PublicKey:
    field: GF
    n: int
    k: int
    g_pub: np.ndarray  # k x n, rank k

    @property
    def t(self) -> int:
        """Error weight budget floor((n-k)/2)."""
        return (self.n - self.k) // 2


@dataclass(eq=False, frozen=True)
class SecretKey:
    grs: grs.GrsParams  # the secret GRS code C_sec
    s_mat: np.ndarray  # k x k invertible scrambler
    s_inv: np.ndarray
    perm: np.ndarray  # permutation as an index array; Pi[i, perm[i]] = 1
    alpha: np.ndarray
    beta: np.ndarray
    q_mat: np.ndarray  # Q = Pi + alpha^T beta
    a: np.ndarray  # beta permuted so that R Pi^-1 = b^T a
    b: np.ndarray  # alpha
    lam: np.ndarray  # -b / (1 + <a, b>)
    g_sec: np.ndarray
    g_pub: np.ndarray

    @property
    def field(self) -> GF:
        return self.grs.field

    @property
    def n(self) -> int:
        return self.grs.n

    @property
    def k(self) -> int:
        return self.grs.k

    @property
    def t(self) -> int:
        return (self.n - self.k) // 2


def masked_params(sk: SecretKey) -> grs.GrsParams:
    """Describing pair of C = C_sec Pi^-1 (the permuted secret code)."""
    return grs.GrsParams(sk.field, sk.grs.x[sk.perm], sk.grs.y[sk.perm], sk.k)


def build_keypair(
    f: GF,
    x: np.ndarray,
    y: np.ndarray,
    s_mat: np.ndarray,
    perm: np.ndarray,
    alpha: np.ndarray,
    beta: np.ndarray,
) -> tuple[PublicKey, SecretKey]:
    """Assemble a keypair from explicit components (no honesty resampling).

    Raises InvalidDimensions when Q = Pi + alpha^T beta is singular.  Used by
    keygen, by key-file loading, and by tests that need degenerate keys.
    """
    k = s_mat.shape[0]
    params = grs.GrsParams(f, np.asarray(x), np.asarray(y), k)
    n = params.n
    perm = np.asarray(perm, dtype=np.int64)
    alpha = np.asarray(alpha, dtype=np.int64)
    beta = np.asarray(beta, dtype=np.int64)
    a = beta[perm]
    b = alpha.copy()
    denom = int(f.add(1, f.dot(a, b)))
    if denom == 0:
        raise InvalidDimensions("Q = Pi + alpha^T beta is singular")
    lam = f.mul(f.neg(f.inv(denom)), b)
    q_mat = f.add(linalg.permutation_matrix(perm), linalg.outer(f, alpha, beta))
    g_sec = grs.generator_matrix(params)
    s_inv = linalg.inverse(f, s_mat)
    g_pub = linalg.matmul(f, s_inv, linalg.matmul(f, g_sec, linalg.inverse(f, q_mat)))
    pk = PublicKey(f, n, k, g_pub)
    sk = SecretKey(params, np.asarray(s_mat), s_inv, perm, alpha, beta, q_mat, a, b, lam, g_sec, g_pub)
    return pk, sk


def keygen(
    f: GF, n: int, k: int, rng: np.random.Generator, max_resample: int = 1000
) -> tuple[PublicKey, SecretKey]:
    """Generate an honest keypair.

    Draws x, y, S, Pi once, then resamples the rank-one mask (alpha, beta)
    until Q is invertible, lam is not orthogonal to the permuted secret code,
    and the public code differs from it.  A bounded retry count turns
    pathological parameter choices into a loud error instead of a hang.
    """
    if not (1 <= k < n):
        raise InvalidDimensions(f"need 1 <= k < n, got k={k}, n={n}")
    if n > f.q:
        raise InvalidDimensions(f"need n <= q, got n={n}, q={f.q}")
    x = rng.permutation(f.q)[:n].astype(np.int64)
    y = rng.integers(1, f.q, n, dtype=np.int64)
    s_mat = linalg.random_invertible(f, k, rng)
    perm = rng.permutation(n).astype(np.int64)
    g_c = grs.generator_matrix(grs.GrsParams(f, x, y, k))[:, perm]
    c_rref, _ = linalg.rref(f, g_c)

    def nonzero_vec() -> np.ndarray:
        while True:
            v = rng.integers(0, f.q, n, dtype=np.int64)
            if v.any():
                return v

    for _ in range(max_resample):
        alpha = nonzero_vec()
        beta = nonzero_vec()
        try:
            pk, sk = build_keypair(f, x, y, s_mat, perm, alpha, beta)
        except InvalidDimensions:
            continue  # singular Q
        if not linalg.matvec(f, g_c, sk.lam).any():
            continue  # lam orthogonal to C: degenerate, public code equals C
        pub_rref, _ = linalg.rref(f, pk.g_pub)
        if pub_rref.shape == c_rref.shape and np.array_equal(pub_rref, c_rref):
            continue  # public code coincides with C
        return pk, sk
    raise ResampleExhausted(f"no acceptable mask after {max_resample} samples")


def random_error(f: GF, n: int, weight: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform error vector of exact Hamming weight ``weight``."""
    e = np.zeros(n, dtype=np.int64)
    support = rng.choice(n, size=weight, replace=False)
    e[support] = rng.integers(1, f.q, weight, dtype=np.int64)
    return e


def encrypt(
    pk: PublicKey,
    msg: np.ndarray,
    rng: np.random.Generator | None = None,
    error: np.ndarray | None = None,
) -> np.ndarray:
    """c = m G_pub + e with e of weight exactly t (or a caller-provided e)."""
    f = pk.field
    msg = np.asarray(msg, dtype=np.int64)
    if msg.shape != (pk.k,):
        raise DimensionMismatch(f"message length must be k={pk.k}")
    if error is None:
        if rng is None:
            raise ValueError("encrypt needs an rng when no explicit error is given")
        error = random_error(f, pk.n, pk.t, rng)
    else:
        error = np.asarray(error, dtype=np.int64)
        if error.shape != (pk.n,):
            raise DimensionMismatch(f"error length must be n={pk.n}")
    return f.add(linalg.vecmat(f, msg, pk.g_pub), error)


def canonical_choice(candidates: list[tuple[int, np.ndarray]]) -> np.ndarray:
    """Order-independent pick among verified decryptions: smallest error
    weight, ties broken by the lexicographically smallest plaintext.

    The masking can push the public code's minimum distance below 2t+1, so a
    weight-t ciphertext occasionally sits within distance t of two public
    codewords; both decryption routes (the secret gamma sweep and the
    recovered-key alpha sweep) surface exactly the same candidate set, and
    this rule makes them return identical results.
    """
    return min(candidates, key=lambda c: (c[0], tuple(c[1].tolist())))[1]


def decrypt(sk: SecretKey, c: np.ndarray) -> np.ndarray:
    """Sweep gamma over GF(q): c Q - gamma beta = m S^-1 G_sec + e Pi for the
    true gamma = <e, alpha>, which the GRS decoder then corrects.  All
    verified candidates are collected and the canonical one returned."""
    f = sk.field
    c = np.asarray(c, dtype=np.int64)
    if c.shape != (sk.n,):
        raise DimensionMismatch(f"ciphertext length must be n={sk.n}")
    cq = linalg.vecmat(f, c, sk.q_mat)
    candidates: list[tuple[int, np.ndarray]] = []
    for gamma in f.elements():
        shifted = f.sub(cq, f.mul(gamma, sk.beta))
        dec = grs.decode(sk.grs, shifted)
        if dec is None:
            continue
        cw, _err = dec
        u = linalg.solve_left(f, sk.g_sec, cw)
        if u is None:
            continue
        msg = linalg.vecmat(f, u, sk.s_mat)
        weight = int(np.count_nonzero(f.sub(c, linalg.vecmat(f, msg, sk.g_pub))))
        if weight <= sk.t:
            candidates.append((weight, msg))
    if not candidates:
        raise DecryptionFailure("no gamma guess produced a consistent decoding")
    return canonical_choice(candidates)
