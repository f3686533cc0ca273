from __future__ import annotations

import pytest

from braceflows import (
    FlowContext,
    PGroup,
    PreLieRing,
    StructureError,
    flows_brace,
    trivial_brace,
    verify_brace,
    zero_ring,
)


def ring_5ab() -> PreLieRing:
    return PreLieRing.from_structure_constants(PGroup(5, (3,)), {(0, 0): (5,)})


def series_oracle_w(a: int) -> int:
    """Independent oracle for W on the 5ab ring over Z/125: left-normed
    powers are a^(.k) = 5^(k-1) a^k, and 1/2!, 1/3! are the egcd inverses
    63 and 21 mod 125."""
    t2 = 5 * a * a % 125
    t3 = 5 * a * t2 % 125
    return (a + 63 * t2 + 21 * t3) % 125


class TestSeries:
    def test_exp_map_value(self):
        ctx = FlowContext(ring_5ab())
        assert ctx.exp_map((1,)) == (series_oracle_w(1),) == (91,)

    def test_exp_map_matches_oracle_everywhere(self):
        ctx = FlowContext(ring_5ab())
        for a in range(125):
            assert ctx.exp_map((a,)) == (series_oracle_w(a),)

    def test_apply_exp_value(self):
        # sum over k of (1/k!) L_1^k(1) with L_1(x) = 5x:
        # 5 + 63*25 + 21*125 = 5 + 1575 = 1580 = 80 mod 125
        ctx = FlowContext(ring_5ab())
        assert ctx.apply_exp((1,), (1,)) == (80,)

    def test_log_inverts_exp(self):
        ctx = FlowContext(ring_5ab())
        for a in range(125):
            x = (a,)
            assert ctx.log_map(ctx.exp_map(x)) == x
            assert ctx.exp_map(ctx.log_map(x)) == x

    def test_nilpotency_index_recorded(self):
        assert FlowContext(ring_5ab()).index == 4
        assert FlowContext(zero_ring(PGroup(5, (2,)))).index == 2


class TestFlowsBrace:
    def test_verified_construction(self):
        brace = flows_brace(ring_5ab())
        assert verify_brace(brace, exhaustive=True).passed

    def test_zero_ring_gives_trivial_brace(self):
        g = PGroup(5, (2,))
        brace = flows_brace(zero_ring(g))
        reference = trivial_brace(g)
        for a in g.elements():
            for b in g.elements():
                assert brace.circ(a, b) == reference.circ(a, b)

    def test_circ_value(self):
        # circ(1,1) = 1 + 1 + star(1,1); star(1,1) = apply_exp(Omega(1), 1)
        brace = flows_brace(ring_5ab())
        ctx = brace.flow_context
        expected = (2 + ctx.apply_exp(ctx.log_map((1,)), (1,))[0]) % 125
        assert brace.circ((1,), (1,)) == (expected,)

    def test_non_nilpotent_rejected(self):
        g = PGroup(5, (2,))
        bad = PreLieRing.from_structure_constants(g, {(0, 0): (1,)})
        with pytest.raises(StructureError, match="nilpotent"):
            flows_brace(bad)

    def test_star_right_additive(self):
        brace = flows_brace(ring_5ab())
        g = brace.group
        for a in range(0, 125, 11):
            for b in range(0, 125, 7):
                for c in range(0, 125, 13):
                    lhs = brace.star((a,), g.add((b,), (c,)))
                    rhs = g.add(brace.star((a,), (b,)), brace.star((a,), (c,)))
                    assert lhs == rhs

    def test_two_generator_ring(self):
        g = PGroup(7, (3, 2))
        ring = PreLieRing.from_structure_constants(g, {(1, 0): (7, 0)})
        brace = flows_brace(ring, samples=3_000)
        assert brace.circ(g.zero, (1, 1)) == (1, 1)
