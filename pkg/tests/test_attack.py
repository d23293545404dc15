"""The key-recovery pipeline, tested against secret-key oracles."""

import numpy as np
import pytest

from grs_squarebreak import attack as atk
from grs_squarebreak import grs, linalg as la, scheme
from grs_squarebreak.attack import (
    AttackConfig,
    AttackStats,
    Branch,
    NotApplicable,
    TrialBudgetExceeded,
)
from grs_squarebreak.codes import code_from_generator
from grs_squarebreak.gf import GF
from grs_squarebreak.scheme import DecryptionFailure


@pytest.fixture(scope="module")
def gf16m():
    return GF(2, 4, 19)


@pytest.fixture(scope="module")
def low_rate_key(gf16m):
    pk, sk = scheme.keygen(gf16m, 15, 6, np.random.default_rng(42))
    return pk, sk


@pytest.fixture(scope="module")
def low_rate_attack(gf16m, low_rate_key):
    pk, sk = low_rate_key
    rk, st = atk.recover_key(pk, AttackConfig(seed=7))
    return rk, st


@pytest.fixture(scope="module")
def dual_key(gf16m):
    pk, sk = scheme.keygen(gf16m, 15, 9, np.random.default_rng(5))
    return pk, sk


@pytest.fixture(scope="module")
def dual_attack(gf16m, dual_key):
    pk, sk = dual_key
    rk, st = atk.recover_key(pk, AttackConfig(seed=11))
    return rk, st


def true_shared_subcode(f, pk, sk):
    pub = code_from_generator(f, pk.g_pub)
    c_code = grs.code(scheme.masked_params(sk))
    return code_from_generator(f, la.intersect_rowspaces(f, pub.gen, c_code.gen))


class TestApplicability:
    @pytest.mark.parametrize(
        "n,k,expected",
        [
            (15, 6, Branch.LOW_RATE),
            (15, 9, Branch.HIGH_RATE_DUAL),
            (15, 7, None),
            (15, 8, None),
            (31, 9, Branch.LOW_RATE),
            (31, 24, Branch.HIGH_RATE_DUAL),
            (15, 5, None),  # 2k+2 < n but k < 6: rank-test gap empty
        ],
    )
    def test_branch_table(self, n, k, expected):
        assert atk.applicable_branch(n, k) == expected


class TestRankTestBounds:
    def test_forced_triples_stay_bounded(self, gf16m, low_rate_key):
        """Triples drawn inside the true shared subcode never exceed 2k+2."""
        f = gf16m
        pk, sk = low_rate_key
        sub = true_shared_subcode(f, pk, sk)
        pub = code_from_generator(f, pk.g_pub)
        rng = np.random.default_rng(0)
        for _ in range(50):
            zs = la.matmul(f, la.random_matrix(f, 3, sub.k, rng), sub.gen)
            rows = f.mul(zs[:, None, :], pub.gen[None, :, :]).reshape(-1, 15)
            assert la.rank(f, rows) <= 2 * sk.k + 2

    def test_random_triples_bounded_by_3k_minus_3(self, gf16m, low_rate_key):
        f = gf16m
        pk, sk = low_rate_key
        pub = code_from_generator(f, pk.g_pub)
        rng = np.random.default_rng(1)
        for _ in range(50):
            zs = la.matmul(f, la.random_matrix(f, 3, sk.k, rng), pub.gen)
            rows = f.mul(zs[:, None, :], pub.gen[None, :, :]).reshape(-1, 15)
            assert la.rank(f, rows) <= min(3 * sk.k - 3, 15)

    def test_random_triples_typical_value_uncapped(self):
        """At GF(32), n=31, k=9 the generic span hits 3k-3 = 24 most draws."""
        f = GF(2, 5, 37)
        pk, sk = scheme.keygen(f, 31, 9, np.random.default_rng(2))
        pub = code_from_generator(f, pk.g_pub)
        rng = np.random.default_rng(3)
        hits = 0
        for _ in range(30):
            zs = la.matmul(f, la.random_matrix(f, 3, 9, rng), pub.gen)
            rows = f.mul(zs[:, None, :], pub.gen[None, :, :]).reshape(-1, 31)
            hits += la.rank(f, rows) == 24
        assert hits >= 27

    def test_product_containment_with_secret_mask(self, gf16m, low_rate_key):
        """For z_i in the shared subcode, every z_i * g_j lies inside
        square(C) + <z_1 * a> + <z_2 * a> + <z_3 * a>."""
        f = gf16m
        pk, sk = low_rate_key
        sub = true_shared_subcode(f, pk, sk)
        pub = code_from_generator(f, pk.g_pub)
        c_sq = grs.code(scheme.masked_params(sk)).square()
        rng = np.random.default_rng(4)
        for _ in range(10):
            zs = la.matmul(f, la.random_matrix(f, 3, sub.k, rng), sub.gen)
            space = np.vstack([c_sq.gen, f.mul(zs, sk.a[None, :])])
            space_code_rank = la.rank(f, space)
            rows = f.mul(zs[:, None, :], pub.gen[None, :, :]).reshape(-1, 15)
            assert la.rank(f, np.vstack([space, rows])) == space_code_rank


class TestFindSharedSubcode:
    def test_matches_secret_intersection(self, gf16m, low_rate_key):
        f = gf16m
        pk, sk = low_rate_key
        pub = code_from_generator(f, pk.g_pub)
        found = atk.find_shared_subcode(pub, AttackConfig(), np.random.default_rng(21))
        assert found == true_shared_subcode(f, pk, sk)

    def test_not_applicable_for_small_k(self, gf16m, rng):
        pub = code_from_generator(gf16m, la.random_matrix(gf16m, 4, 15, rng))
        with pytest.raises(NotApplicable):
            atk.find_shared_subcode(pub, AttackConfig(), rng)

    def test_budget_exhaustion(self, gf16m, low_rate_key):
        pk, _sk = low_rate_key
        pub = code_from_generator(gf16m, pk.g_pub)
        with pytest.raises(TrialBudgetExceeded):
            atk.find_shared_subcode(
                pub, AttackConfig(max_outer_trials=5), np.random.default_rng(1)
            )


class TestRecoverSecretGrs:
    def test_reconstructs_hidden_code(self, gf16m, low_rate_key):
        f = gf16m
        pk, sk = low_rate_key
        sub = true_shared_subcode(f, pk, sk)
        assert sub.square().k == 2 * sk.k - 1
        params = atk.recover_secret_grs(sub, sk.k)
        assert grs.code(params) == grs.code(scheme.masked_params(sk))

    def test_char2_sqrt_shortcut_agrees(self, gf16m, low_rate_key):
        """Componentwise roots of the squared multipliers describe the same
        code as the linear multiplier solve."""
        f = gf16m
        pk, sk = low_rate_key
        sub = true_shared_subcode(f, pk, sk)
        sq_params = grs.ss_recover(sub.square())
        y_sqrt = f.sqrt(sq_params.y)
        y_solve = grs.recover_multipliers(sq_params.x, sk.k, sub)
        assert y_solve is not None
        code_sqrt = grs.code(grs.GrsParams(f, sq_params.x, y_sqrt, sk.k))
        code_solve = grs.code(grs.GrsParams(f, sq_params.x, y_solve, sk.k))
        assert code_sqrt == code_solve

    def test_wrong_subcode_rejected(self, gf16m, rng):
        f = gf16m
        g = la.random_matrix(f, 5, 15, rng)
        while la.rank(f, g) != 5:
            g = la.random_matrix(f, 5, 15, rng)
        with pytest.raises(grs.NotGrs):
            atk.recover_secret_grs(code_from_generator(f, g), 6)


class TestRecoverValidPair:
    def test_constructed_pair_is_valid(self, gf16m, low_rate_key):
        f = gf16m
        pk, sk = low_rate_key
        pub = code_from_generator(f, pk.g_pub)
        c_code = grs.code(scheme.masked_params(sk))
        rng = np.random.default_rng(17)
        a0, lam0 = atk.recover_valid_pair(pub, c_code, rng)
        assert f.dot(a0, lam0) == 0  # orthogonal by construction, != -1
        assert atk.pair_is_valid(pub, c_code, a0, lam0)

    def test_denominator_factors_nonzero(self, gf16m, low_rate_key):
        """<b0, p1> != 0 for every p1 in C outside the public code."""
        f = gf16m
        pk, sk = low_rate_key
        pub = code_from_generator(f, pk.g_pub)
        c_code = grs.code(scheme.masked_params(sk))
        inter = la.intersect_rowspaces(f, pub.gen, c_code.gen)
        inter_perp = la.right_kernel(f, inter)
        c_perp = la.right_kernel(f, c_code.gen)
        cp_r, cp_piv = la.rref(f, c_perp)
        rng = np.random.default_rng(23)
        b0 = None
        while b0 is None:
            cand = la.vecmat(f, rng.integers(0, 16, inter_perp.shape[0]), inter_perp)
            if la.reduce_row(f, cp_r, cp_piv, cand).any():
                b0 = cand
        checked = 0
        while checked < 20:
            p1 = la.vecmat(f, rng.integers(0, 16, c_code.k), c_code.gen)
            if pub.contains(p1):
                continue
            assert f.dot(b0, p1) != 0
            checked += 1

    def test_precondition_rejects_wrong_code(self, gf16m, low_rate_key, rng):
        f = gf16m
        pk, _sk = low_rate_key
        pub = code_from_generator(f, pk.g_pub)
        other = code_from_generator(f, la.random_matrix(f, 6, 15, rng))
        with pytest.raises(atk.PreconditionViolated):
            atk.recover_valid_pair(pub, other, rng)


class TestEndToEnd:
    def test_low_rate_recovers_hidden_code(self, gf16m, low_rate_key, low_rate_attack):
        pk, sk = low_rate_key
        rk, st = low_rate_attack
        assert st.branch == Branch.LOW_RATE
        assert grs.code(rk.grs) == grs.code(scheme.masked_params(sk))
        assert rk.shared_subcode == true_shared_subcode(gf16m, pk, sk)

    def test_low_rate_decrypts(self, gf16m, low_rate_key, low_rate_attack):
        pk, sk = low_rate_key
        rk, _ = low_rate_attack
        rng = np.random.default_rng(31)
        for _ in range(20):
            msg = rng.integers(0, 16, pk.k)
            z = scheme.encrypt(pk, msg, rng)
            assert np.array_equal(atk.decrypt_with_pair(rk, pk, z), msg)
            assert np.array_equal(scheme.decrypt(sk, z), msg)

    def test_dual_branch_recovers_and_decrypts(self, gf16m, dual_key, dual_attack):
        pk, sk = dual_key
        rk, st = dual_attack
        assert st.branch == Branch.HIGH_RATE_DUAL
        assert grs.code(rk.grs) == grs.code(scheme.masked_params(sk))
        assert rk.shared_subcode.k == pk.k - 1
        rng = np.random.default_rng(37)
        for _ in range(20):
            msg = rng.integers(0, 16, pk.k)
            z = scheme.encrypt(pk, msg, rng)
            assert np.array_equal(atk.decrypt_with_pair(rk, pk, z), msg)

    def test_pair_validity_invariants(self, gf16m, low_rate_key, low_rate_attack):
        f = gf16m
        pk, _sk = low_rate_key
        rk, _ = low_rate_attack
        pub = code_from_generator(f, pk.g_pub)
        assert f.dot(rk.a0, rk.lam0) != int(f.neg(1))
        assert atk.pair_is_valid(pub, grs.code(rk.grs), rk.a0, rk.lam0)

    def test_dead_interval(self, gf16m):
        for k in (7, 8):
            pk, _sk = scheme.keygen(gf16m, 15, k, np.random.default_rng(k))
            with pytest.raises(NotApplicable):
                atk.recover_key(pk)

    def test_explicit_branch_mismatch(self, gf16m, low_rate_key):
        pk, _sk = low_rate_key
        with pytest.raises(NotApplicable):
            atk.recover_key(pk, AttackConfig(branch=Branch.HIGH_RATE_DUAL))

    def test_budget_exceeded(self, gf16m, low_rate_key):
        pk, _sk = low_rate_key
        with pytest.raises(TrialBudgetExceeded):
            atk.recover_key(pk, AttackConfig(max_outer_trials=3, seed=0))

    def test_deterministic_given_seed(self, gf16m, low_rate_key, low_rate_attack):
        pk, _sk = low_rate_key
        rk1, st1 = low_rate_attack
        rk2, st2 = atk.recover_key(pk, AttackConfig(seed=7))
        assert np.array_equal(rk1.a0, rk2.a0)
        assert np.array_equal(rk1.lam0, rk2.lam0)
        assert rk1.grs == rk2.grs
        assert st1.outer_trials == st2.outer_trials

    def test_signal_free_square_detected(self, gf16m):
        """A rare key whose dual square dimension shrinks to 2k+2 leaves the
        rank test without a distinguishing gap; the attack reports that
        instead of burning its whole budget."""
        f = gf16m
        pk, _sk = scheme.keygen(f, 15, 9, np.random.default_rng(3006))
        dual_sq = code_from_generator(f, pk.g_pub).dual().square()
        assert dual_sq.k == 14  # == 2(n-k)+2: every triple passes the test
        with pytest.raises(NotApplicable, match="no distinguishing gap"):
            atk.recover_key(pk, AttackConfig(seed=0))

    def test_degenerate_mask_falls_back_to_direct_recovery(self, gf16m):
        """lam in C-perp makes the public code itself GRS; the attack then
        skips the sampling loop and still decrypts."""
        f = gf16m
        rng = np.random.default_rng(51)
        n, k = 15, 6
        x = rng.permutation(16)[:n].astype(np.int64)
        y = rng.integers(1, 16, n, dtype=np.int64)
        s_mat = la.random_invertible(f, k, rng)
        perm = rng.permutation(n).astype(np.int64)
        c_gen = grs.generator_matrix(grs.GrsParams(f, x, y, k))[:, perm]
        c_perp = la.right_kernel(f, c_gen)
        while True:
            alpha = la.vecmat(f, rng.integers(0, 16, c_perp.shape[0]), c_perp)
            beta = rng.integers(0, 16, n, dtype=np.int64)
            if not alpha.any() or not beta.any():
                continue
            try:
                pk, sk = scheme.build_keypair(f, x, y, s_mat, perm, alpha, beta)
                break
            except scheme.InvalidDimensions:
                continue
        # the mask direction is a parity check of C, so C_pub == C
        pub = code_from_generator(f, pk.g_pub)
        c_code = grs.code(scheme.masked_params(sk))
        assert pub == c_code
        rk, st = atk.recover_key(pk, AttackConfig(seed=1))
        assert st.outer_trials == 0
        assert rk.shared_subcode is None
        assert not rk.lam0.any()
        for _ in range(5):
            msg = rng.integers(0, 16, k)
            z = scheme.encrypt(pk, msg, rng)
            assert np.array_equal(atk.decrypt_with_pair(rk, pk, z), msg)


class TestDecryptWithPair:
    def test_zero_error_ciphertext(self, gf16m, low_rate_key, low_rate_attack):
        pk, _sk = low_rate_key
        rk, _ = low_rate_attack
        msg = np.arange(6, dtype=np.int64)
        z = scheme.encrypt(pk, msg, error=np.zeros(15, dtype=np.int64))
        assert np.array_equal(atk.decrypt_with_pair(rk, pk, z), msg)

    def test_random_vector_fails(self, gf16m, low_rate_key, low_rate_attack):
        pk, _sk = low_rate_key
        rk, _ = low_rate_attack
        rng = np.random.default_rng(61)
        failures = 0
        for _ in range(10):
            z = rng.integers(0, 16, 15)
            try:
                atk.decrypt_with_pair(rk, pk, z)
            except DecryptionFailure:
                failures += 1
        assert failures >= 9
