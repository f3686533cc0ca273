"""Exact scalar arithmetic modulo p**m.

Every structure in this package consumes scalars through ``ScalarRing``:
canonical residues in [0, p**m), exact integer arithmetic throughout, no
floating point anywhere.  The ring also hosts the two distinguished
constants the brace/pre-Lie passage needs: the order-(p-1) unit lifting
the smallest primitive root (``teichmuller_unit``) and the inverse of
p-1 given by a truncated geometric series (``twist_constant``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError, StructureError

__all__ = [
    "ScalarRing",
    "binomial",
    "inverse_factorial",
    "primitive_root",
    "teichmuller_unit",
    "twist_constant",
    "is_prime",
]

# Residues stay below this so intermediate products remain cheap exact ints.
# Nothing in scope needs p or m anywhere near the cap (p <= 13, m <= 11).
_MODULUS_CAP = 1 << 63


def is_prime(n: int) -> bool:
    """Deterministic trial division; inputs here are small by contract."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class ScalarRing:
    """The ring Z/p**m, p an odd prime >= 5, m >= 1."""

    p: int
    m: int

    def __post_init__(self) -> None:
        if not is_prime(self.p) or self.p < 5:
            raise InputError(f"p must be a prime >= 5, got {self.p}")
        if self.m < 1:
            raise InputError(f"precision exponent must be >= 1, got {self.m}")
        if self.p ** self.m > _MODULUS_CAP:
            raise InputError(
                f"modulus {self.p}**{self.m} exceeds the supported cap 2**63"
            )

    @property
    def modulus(self) -> int:
        return self.p ** self.m

    def reduce(self, x: int) -> int:
        return x % self.modulus

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.modulus

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.modulus

    def mul(self, x: int, y: int) -> int:
        return (x * y) % self.modulus

    def neg(self, x: int) -> int:
        return (-x) % self.modulus

    def pow(self, x: int, k: int) -> int:
        return pow(x, k, self.modulus)

    def inverse(self, x: int) -> int:
        """Multiplicative inverse; defined exactly for units (p does not divide x)."""
        if x % self.p == 0:
            raise InputError(f"{x} is not a unit modulo {self.p}**{self.m}")
        return pow(x, -1, self.modulus)


def binomial(n: int, k: int, ring: ScalarRing) -> int:
    """C(n, k) reduced into the ring; out-of-range k gives 0."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k) % ring.modulus


def inverse_factorial(k: int, ring: ScalarRing) -> int:
    """1/k! in the ring; k! is a unit exactly when k < p."""
    if k < 0 or k >= ring.p:
        raise InputError(
            f"1/{k}! is not defined modulo {ring.p}**{ring.m}; need 0 <= k < p"
        )
    return pow(math.factorial(k), -1, ring.modulus)


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Smallest g >= 2 generating the units modulo p**2 (hence modulo every p**k)."""
    if not is_prime(p) or p < 3:
        raise InputError(f"primitive_root needs an odd prime, got {p}")
    order = p * (p - 1)
    mod = p * p
    qs = _prime_factors(order)
    for g in range(2, mod):
        if g % p == 0:
            continue
        if all(pow(g, order // q, mod) != 1 for q in qs):
            return g
    raise StructureError(f"no primitive root modulo {p}**2")  # pragma: no cover


def teichmuller_unit(ring: ScalarRing) -> int:
    """The unique unit of multiplicative order p-1 congruent to the smallest
    primitive root modulo p.  Computed by iterating x -> x**p, which fixes the
    order-(p-1) component and kills the p-part of the starting unit."""
    p, m, mod = ring.p, ring.m, ring.modulus
    if m > p:
        raise InputError(f"precision m={m} exceeds p={p}; unit lift not supported")
    x = primitive_root(p) % mod
    for _ in range(m):
        nx = pow(x, p, mod)
        if nx == x:
            break
        x = nx
    assert pow(x, p, mod) == x
    assert pow(x, p - 1, mod) == 1
    assert x % p == primitive_root(p) % p
    return x


def twist_constant(ring: ScalarRing) -> int:
    """-(1 + p + p**2 + ... + p**(p-1)) in the ring: an explicit inverse of p-1,
    valid at precision m <= p."""
    p, m, mod = ring.p, ring.m, ring.modulus
    if m > p:
        raise InputError(f"precision m={m} exceeds p={p}; twist not supported")
    s = (-sum(p ** i for i in range(p))) % mod
    assert ((p - 1) * s) % mod == 1
    return s
