from __future__ import annotations

import pytest

from braceflows import (
    InputError,
    PGroup,
    PreLieRing,
    StructureError,
    factor_ring,
    nilpotency_index,
    ring_left_chain,
    scalar_twist,
    verify_prelie,
    zero_ring,
)


def ring_5ab() -> PreLieRing:
    return PreLieRing.from_structure_constants(PGroup(5, (3,)), {(0, 0): (5,)})


class TestConstruction:
    def test_structure_constants_compile(self):
        ring = ring_5ab()
        # a.b = 5ab: oracle by direct formula
        for a in range(0, 125, 7):
            for b in range(0, 125, 11):
                assert ring.dot((a,), (b,)) == (5 * a * b % 125,)

    def test_torsion_violation_rejected(self):
        g = PGroup(5, (2, 1))
        # g2 has order 5, so g2.g2 must be killed by 5; (1,0) is not
        with pytest.raises(InputError, match="torsion"):
            PreLieRing.from_structure_constants(g, {(1, 1): (1, 0)})

    def test_callable_ring(self):
        g = PGroup(5, (2,))
        ring = PreLieRing.from_callable(g, lambda a, b: (5 * a[0] * b[0] % 25,))
        assert not ring.biadditive_by_construction
        assert ring.dot((2,), (3,)) == (5,)

    def test_missing_pairs_are_zero(self):
        g = PGroup(5, (2, 1))
        ring = PreLieRing.from_structure_constants(g, {})
        for a in ((1, 0), (0, 1)):
            for b in ((1, 0), (0, 1)):
                assert ring.dot(a, b) == g.zero


class TestNilpotency:
    def test_zero_ring_index(self):
        assert nilpotency_index(zero_ring(PGroup(5, (3,)))) == 2

    def test_shift_ring_index(self):
        assert nilpotency_index(ring_5ab()) == 4

    def test_chain_sizes(self):
        sizes = [span.size for span in ring_left_chain(ring_5ab())]
        assert sizes == [125, 25, 5, 1]

    def test_non_nilpotent_detected(self):
        g = PGroup(5, (2,))
        ring = PreLieRing.from_structure_constants(g, {(0, 0): (1,)})
        with pytest.raises(StructureError, match="nilpotent"):
            ring_left_chain(ring)


class TestVerifyPreLie:
    def test_shift_ring_passes(self):
        rep = verify_prelie(ring_5ab())
        assert rep.passed
        names = [r.name for r in rep.results]
        assert "left-nilpotent" in names
        assert "prelie-identity" in names

    def test_product_without_p_factor_fails_nilpotency(self):
        g = PGroup(5, (2,))
        ring = PreLieRing.from_structure_constants(g, {(0, 0): (1,)})
        rep = verify_prelie(ring)
        assert not rep.passed
        bad = {r.name for r in rep.results if not r.passed}
        assert bad == {"left-nilpotent"}

    def test_require_nilpotent_raises(self):
        g = PGroup(5, (2,))
        ring = PreLieRing.from_structure_constants(g, {(0, 0): (1,)})
        with pytest.raises(StructureError):
            verify_prelie(ring, require_nilpotent=True)

    def test_non_prelie_callable_detected(self):
        # a.b = 5*a*a*b is biadditive in b only; the identity check and the
        # biadditivity check must both flag it
        g = PGroup(5, (2,))
        ring = PreLieRing.from_callable(
            g, lambda a, b: (5 * a[0] * a[0] * b[0] % 25,))
        rep = verify_prelie(ring)
        assert not rep.passed

    def test_sampled_mode_on_larger_ring(self):
        g = PGroup(7, (5,))
        ring = PreLieRing.from_structure_constants(g, {(0, 0): (7,)})
        rep = verify_prelie(ring, samples=5_000, seed=2)
        assert rep.passed


class TestTwistAndQuotient:
    def test_scalar_twist_values(self):
        ring = ring_5ab()
        twisted = scalar_twist(ring, 4)
        for a in range(0, 125, 13):
            for b in range(0, 125, 17):
                assert twisted.dot((a,), (b,)) == (20 * a * b % 125,)

    def test_twist_keeps_structure_constants(self):
        twisted = scalar_twist(ring_5ab(), 4)
        assert twisted.biadditive_by_construction

    def test_factor_ring(self):
        ring = ring_5ab()
        small = factor_ring(ring, ring.group.annihilator(2))
        assert small.group.order == 5
        assert verify_prelie(small).passed

    def test_factor_ring_products(self):
        # on classes mod 5 every product 5ab reduces to zero
        ring = ring_5ab()
        small = factor_ring(ring, ring.group.annihilator(2))
        g = small.group
        for x in g.elements():
            for y in g.elements():
                assert small.dot(x, y) == g.zero
