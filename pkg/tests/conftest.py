from __future__ import annotations

import pytest

from braceflows import Brace, PGroup


def shift_brace(modulus_exp: int = 2):
    """a o b = a + b + 5ab on Z/5**modulus_exp: the standard nontrivial
    small brace used across the tests."""
    g = PGroup(5, (modulus_exp,))
    mod = 5 ** modulus_exp

    def circ(a, b):
        return ((a[0] + b[0] + 5 * a[0] * b[0]) % mod,)

    return Brace.from_callable(g, circ)


@pytest.fixture
def z25_brace():
    return shift_brace(2)


@pytest.fixture
def z125_brace():
    return shift_brace(3)
