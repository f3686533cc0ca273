from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from braceflows import (
    InputError,
    ScalarRing,
    binomial,
    inverse_factorial,
    is_prime,
    primitive_root,
    teichmuller_unit,
    twist_constant,
)


def egcd_inverse(x: int, m: int) -> int:
    """Extended-gcd inverse, independent of ScalarRing.inverse."""
    a, b = x % m, m
    s0, s1 = 1, 0
    while b:
        q, (a, b) = a // b, (b, a % b)
        s0, s1 = s1, s0 - q * s1
    if a != 1:
        raise ValueError(f"{x} is not a unit mod {m}")
    return s0 % m


def multiplicative_order(x: int, m: int) -> int:
    k, y = 1, x % m
    while y != 1:
        y = y * x % m
        k += 1
        if k > m:
            raise ValueError(f"{x} is not a unit mod {m}")
    return k


class TestScalarRing:
    def test_rejects_composite(self):
        with pytest.raises(InputError):
            ScalarRing(6, 2)

    def test_rejects_small_prime(self):
        with pytest.raises(InputError):
            ScalarRing(3, 2)

    def test_inverse_matches_egcd(self):
        ring = ScalarRing(5, 3)
        for x in range(1, 125):
            if x % 5:
                assert ring.inverse(x) == egcd_inverse(x, 125)

    def test_non_unit_rejected(self):
        ring = ScalarRing(5, 2)
        with pytest.raises(InputError):
            ring.inverse(10)

    @given(st.integers(-1000, 1000), st.integers(-1000, 1000))
    def test_ring_laws(self, x, y):
        ring = ScalarRing(7, 2)
        assert ring.add(x, y) == (x + y) % 49
        assert ring.mul(x, y) == (x * y) % 49
        assert ring.sub(x, y) == (x - y) % 49


class TestBinomial:
    def test_small_values(self):
        ring = ScalarRing(5, 2)
        assert binomial(10, 1, ring) == 10
        assert binomial(10, 0, ring) == 1
        assert binomial(4, 2, ring) == 6

    def test_out_of_range_is_zero(self):
        ring = ScalarRing(5, 2)
        assert binomial(3, 5, ring) == 0
        assert binomial(3, -1, ring) == 0

    @given(st.integers(0, 60), st.integers(0, 60))
    def test_matches_comb(self, n, k):
        ring = ScalarRing(7, 3)
        assert binomial(n, k, ring) == math.comb(n, k) % 343


class TestInverseFactorial:
    def test_known_values(self):
        ring = ScalarRing(5, 2)
        assert inverse_factorial(0, ring) == 1
        assert inverse_factorial(1, ring) == 1
        # 2 * 13 = 26 = 1 mod 25, via egcd oracle
        assert inverse_factorial(2, ring) == egcd_inverse(2, 25) == 13

    def test_product_is_one(self):
        ring = ScalarRing(7, 5)
        fact = 1
        for k in range(7):
            if k:
                fact = fact * k % ring.modulus
            assert inverse_factorial(k, ring) * fact % ring.modulus == 1

    def test_k_at_least_p_rejected(self):
        ring = ScalarRing(5, 2)
        with pytest.raises(InputError):
            inverse_factorial(5, ring)


class TestPrimitiveRoot:
    @pytest.mark.parametrize("p,expected", [(5, 2), (7, 3), (11, 2)])
    def test_values(self, p, expected):
        assert primitive_root(p) == expected

    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    def test_order_is_full(self, p):
        g = primitive_root(p)
        assert multiplicative_order(g, p * p) == p * (p - 1)

    @pytest.mark.parametrize("p", [5, 7])
    def test_is_smallest(self, p):
        g = primitive_root(p)
        for candidate in range(2, g):
            assert multiplicative_order(candidate, p * p) != p * (p - 1)


class TestTeichmullerUnit:
    def test_five_squared(self):
        # exhaustive oracle: the only unit of order dividing 4 that is
        # congruent to 2 mod 5
        xi = teichmuller_unit(ScalarRing(5, 2))
        matches = [x for x in range(1, 25)
                   if pow(x, 4, 25) == 1 and pow(x, 5, 25) == x and x % 5 == 2]
        assert matches == [xi] == [7]

    def test_five_first_power(self):
        assert teichmuller_unit(ScalarRing(5, 1)) == 2

    def test_seven_cubed_properties(self):
        ring = ScalarRing(7, 3)
        xi = teichmuller_unit(ring)
        assert pow(xi, 6, 343) == 1
        assert pow(xi, 7, 343) == xi
        assert xi % 7 == 3

    def test_precision_above_p_rejected(self):
        with pytest.raises(InputError):
            teichmuller_unit(ScalarRing(5, 6))


class TestTwistConstant:
    def test_known_values(self):
        assert twist_constant(ScalarRing(5, 2)) == 19
        assert twist_constant(ScalarRing(5, 1)) == 4

    def test_inverse_property(self):
        # independent oracle: the modular inverse of p-1 computed by pow
        ring = ScalarRing(7, 5)
        s = twist_constant(ring)
        assert s == pow(6, -1, ring.modulus)

    def test_geometric_sum_form(self):
        ring = ScalarRing(5, 3)
        s = twist_constant(ring)
        assert s == (-sum(5 ** i for i in range(5))) % 125


class TestIsPrime:
    @given(st.integers(2, 2000))
    def test_matches_trial_division(self, n):
        slow = n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))
        assert is_prime(n) == slow
