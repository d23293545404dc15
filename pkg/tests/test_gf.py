"""Field arithmetic tests, checked against exhaustive table oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grs_squarebreak.gf import (
    GF,
    DegreeMismatch,
    NoRoot,
    NonPrimeCharacteristic,
    ReducibleModulus,
)


def slow_poly_mul_mod(a: int, b: int, p: int, m: int, modulus: int) -> int:
    """Independent reference multiplier: digit convolution + long division."""
    def digs(v, width):
        return [(v // p**i) % p for i in range(width)]

    da, db = digs(a, m), digs(b, m)
    conv = [0] * (2 * m - 1)
    for i in range(m):
        for j in range(m):
            conv[i + j] = (conv[i + j] + da[i] * db[j]) % p
    mod = digs(modulus, m + 1)
    for i in range(len(conv) - 1, m - 1, -1):
        c = conv[i]
        if c:
            for j in range(m + 1):
                conv[i - m + j] = (conv[i - m + j] - c * mod[j]) % p
    return sum(d * p**i for i, d in enumerate(conv[:m]))


class TestConstruction:
    def test_gf16_standard_modulus(self):
        f = GF(2, 4, 19)
        assert (f.p, f.m, f.q) == (2, 4, 16)

    def test_prime_field_ignores_modulus(self):
        f = GF(7, 1, 12345)
        assert f.modulus == 0 and f.q == 7

    def test_reducible_modulus_rejected(self):
        # X^2 + X = X(X + 1)
        with pytest.raises(ReducibleModulus):
            GF(2, 2, 6)

    def test_non_prime_characteristic(self):
        with pytest.raises(NonPrimeCharacteristic):
            GF(6)

    def test_non_monic_modulus(self):
        with pytest.raises(DegreeMismatch):
            GF(2, 4, 7)  # degree 2, not 4

    def test_equality_and_hash(self):
        assert GF(2, 4, 19) == GF(2, 4, 19)
        assert GF(2, 4, 19) != GF(2, 4, 25)
        assert hash(GF(5)) == hash(GF(5))


class TestArithmetic:
    def test_gf7_products(self, gf7):
        assert gf7.mul(3, 5) == 1
        assert gf7.inv(3) == 5
        assert gf7.inv(1) == 1

    def test_gf16_table_against_slow_oracle(self, gf16):
        for a in range(16):
            for b in range(16):
                assert gf16.mul(a, b) == slow_poly_mul_mod(a, b, 2, 4, 19)

    def test_gf16_known_product(self, gf16):
        # X * (X^3 + 1) = X^4 + X = 1 mod X^4 + X + 1
        assert gf16.mul(2, 9) == 1
        assert gf16.inv(2) == 9

    def test_absorbing_zero(self, gf16, gf7):
        elems = gf16.elements()
        assert not gf16.mul(elems, 0).any()
        assert not gf7.mul(gf7.elements(), 0).any()

    def test_inverse_of_zero_raises(self, gf16):
        with pytest.raises(ZeroDivisionError):
            gf16.inv(0)

    def test_gf9_oracle(self):
        f = GF(3, 2, 10)  # X^2 + 1
        for a in range(9):
            for b in range(9):
                assert f.mul(a, b) == slow_poly_mul_mod(a, b, 3, 2, 10)
        nz = f.elements()[1:]
        assert np.all(f.mul(nz, f.inv(nz)) == 1)

    def test_enumerate(self, gf2, gf7, gf16):
        assert gf2.elements().tolist() == [0, 1]
        assert gf7.elements().tolist() == list(range(7))
        e16 = gf16.elements()
        assert e16[0] == 0 and e16[-1] == 15 and len(e16) == 16

    def test_pow(self, gf16):
        a = gf16.elements()
        assert np.array_equal(gf16.pow(a, 1), a)
        assert np.array_equal(gf16.pow(a, 2), gf16.mul(a, a))
        assert np.array_equal(gf16.pow(a, 0), np.ones(16, dtype=np.int64))


class TestSqrt:
    def test_char2_sqrt_is_frobenius_inverse(self, gf16):
        a = gf16.elements()
        assert np.array_equal(gf16.sqrt(a), gf16.pow(a, 8))
        assert gf16.sqrt(1) == 1

    def test_gf7_squares(self, gf7):
        # squares mod 7 are {0, 1, 2, 4}; 3 is chosen over 4 as the root of 2
        assert gf7.sqrt(2) == 3
        assert gf7.sqrt(4) == 2
        for nonresidue in (3, 5, 6):
            with pytest.raises(NoRoot):
                gf7.sqrt(nonresidue)

    def test_sqrt_of_square_squares_back(self, gf7, gf16):
        for f in (gf7, gf16):
            a = f.elements()
            sq = f.mul(a, a)
            r = f.sqrt(sq)
            assert np.array_equal(f.mul(r, r), sq)


FIELDS = [GF(2), GF(5), GF(7), GF(2, 4, 19), GF(3, 2, 10), GF(2, 5, 37)]


@settings(max_examples=60, deadline=None)
@given(st.data(), st.sampled_from(FIELDS))
def test_field_axioms(data, f):
    a = data.draw(st.integers(0, f.q - 1))
    b = data.draw(st.integers(0, f.q - 1))
    c = data.draw(st.integers(0, f.q - 1))
    assert f.add(a, b) == f.add(b, a)
    assert f.mul(a, b) == f.mul(b, a)
    assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.add(a, f.neg(a)) == 0
    assert f.sub(a, b) == f.add(a, f.neg(b))
    if a != 0:
        assert f.mul(a, f.inv(a)) == 1


@settings(max_examples=40, deadline=None)
@given(st.data(), st.sampled_from([GF(2, 4, 19), GF(2, 5, 37), GF(2)]))
def test_frobenius_char2(data, f):
    a = data.draw(st.integers(0, f.q - 1))
    b = data.draw(st.integers(0, f.q - 1))
    lhs = f.mul(f.add(a, b), f.add(a, b))
    rhs = f.add(f.mul(a, a), f.mul(b, b))
    assert lhs == rhs


def test_vectorized_matches_scalar(gf16, rng):
    a = rng.integers(0, 16, 40)
    b = rng.integers(0, 16, 40)
    prods = gf16.mul(a, b)
    sums = gf16.add(a, b)
    for i in range(40):
        assert prods[i] == gf16.mul(int(a[i]), int(b[i]))
        assert sums[i] == gf16.add(int(a[i]), int(b[i]))


def test_dot_and_sum(gf16, gf5):
    assert gf16.dot([1, 2, 3], [1, 1, 1]) == 1 ^ 2 ^ 3
    assert gf5.dot([1, 2, 3], [1, 1, 1]) == (1 + 2 + 3) % 5
    f9 = GF(3, 2, 10)
    arr = np.array([[4, 4], [1, 1]])
    assert f9.sum(arr, axis=1).tolist() == [f9.add(4, 4), f9.add(1, 1)]
