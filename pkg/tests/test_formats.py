from __future__ import annotations

import pytest

from braceflows import (
    Brace,
    InputError,
    PGroup,
    PreLieRing,
    StructureError,
    build,
    document_from,
    parse,
    parse_file,
    serialize,
    serialize_document,
    trivial_brace,
)

E1_TEXT = "prelie v1\np 7\nfactors 5\nsc 1 1 -> 7 1\n"


class TestHeader:
    def test_minimal_prelie(self):
        doc = parse("prelie v1\np 5\nfactors 3\n")
        assert (doc.kind, doc.p, doc.factors) == ("prelie", 5, (3,))
        assert doc.sc == {} and not doc.flows

    def test_comments_and_blanks_keep_line_numbers(self):
        text = "# a comment\n\nprelie v1\np 5\nfactors 9\n"
        with pytest.raises(InputError, match="line 5: .*n < p-1"):
            parse(text)

    def test_too_short(self):
        with pytest.raises(InputError, match="needs a kind line"):
            parse("prelie v1\np 5\n")

    def test_bad_kind(self):
        with pytest.raises(InputError, match="line 1: expected 'brace v1'"):
            parse("widget v1\np 5\nfactors 3\n")

    def test_bad_version(self):
        with pytest.raises(InputError, match="line 1"):
            parse("prelie v2\np 5\nfactors 3\n")

    def test_composite_p(self):
        with pytest.raises(InputError, match="line 2: p must be a prime >= 5"):
            parse("prelie v1\np 9\nfactors 3\n")

    def test_small_prime_rejected(self):
        with pytest.raises(InputError, match="line 2"):
            parse("prelie v1\np 3\nfactors 1\n")

    def test_zero_exponent(self):
        with pytest.raises(InputError, match="line 3: every exponent"):
            parse("prelie v1\np 5\nfactors 0\n")

    def test_increasing_exponents(self):
        with pytest.raises(InputError, match="line 3: exponents must be non-increasing"):
            parse("prelie v1\np 7\nfactors 2 3\n")

    def test_size_constraint(self):
        with pytest.raises(InputError, match="line 3: .*n < p-1"):
            parse("prelie v1\np 5\nfactors 4\n")
        with pytest.raises(InputError, match="n < p-1"):
            parse("prelie v1\np 7\nfactors 3 3\n")


class TestStructureConstantBody:
    def test_basic(self):
        doc = parse(E1_TEXT)
        assert doc.sc == {(0, 0): (7,)}

    def test_zero_rhs(self):
        doc = parse("prelie v1\np 5\nfactors 2 1\nsc 1 2 -> 0\n")
        assert doc.sc == {(0, 1): (0, 0)}

    def test_pairs_accumulate_and_reduce(self):
        doc = parse("prelie v1\np 5\nfactors 2 1\nsc 2 1 -> 2 1 30 2 1 1\n")
        # 2 g1 + 1 g1 = 3 g1; 30 g2 = 0 mod 5
        assert doc.sc == {(1, 0): (3, 0)}

    def test_missing_arrow(self):
        with pytest.raises(InputError, match="line 4: structure-constant line needs"):
            parse("prelie v1\np 5\nfactors 3\nsc 1 1 5 1\n")

    def test_bad_head(self):
        with pytest.raises(InputError, match="line 4: expected 'sc j k"):
            parse("prelie v1\np 5\nfactors 3\nsc 1 -> 0\n")

    def test_index_out_of_range(self):
        with pytest.raises(InputError, match="line 4: generator index out of range 1..1"):
            parse("prelie v1\np 5\nfactors 3\nsc 1 2 -> 0\n")

    def test_rhs_index_out_of_range(self):
        with pytest.raises(InputError, match="line 4: generator index out of range"):
            parse("prelie v1\np 5\nfactors 3\nsc 1 1 -> 5 2\n")

    def test_duplicate_pair(self):
        with pytest.raises(InputError, match="line 5: duplicate structure constant"):
            parse("prelie v1\np 5\nfactors 3\nsc 1 1 -> 0\nsc 1 1 -> 5 1\n")

    def test_odd_rhs(self):
        with pytest.raises(InputError, match="line 4: right-hand side"):
            parse("prelie v1\np 5\nfactors 3\nsc 1 1 -> 5\n")

    def test_unrecognized_line(self):
        with pytest.raises(InputError, match="line 4: unrecognized line"):
            parse("prelie v1\np 5\nfactors 3\ntable 1 2 3\n")

    def test_sc_forbidden_in_plain_brace(self):
        with pytest.raises(InputError, match="line 4: .*'flows' line"):
            parse("brace v1\np 5\nfactors 1\nsc 1 1 -> 0\n")

    def test_flows_forbidden_in_prelie(self):
        with pytest.raises(InputError, match="line 4: 'flows' is only valid"):
            parse("prelie v1\np 5\nfactors 3\nflows\n")


class TestCayleyBody:
    @staticmethod
    def tiny_brace_text() -> str:
        return serialize(trivial_brace(PGroup(5, (1,))))

    def test_round_trip(self):
        text = self.tiny_brace_text()
        doc = parse(text)
        assert doc.kind == "brace" and not doc.flows
        assert len(doc.cayley) == 25
        assert serialize_document(doc) == text

    def test_ascii_o_alias(self):
        text = self.tiny_brace_text().replace("∘", "o")
        assert parse(text).cayley == parse(self.tiny_brace_text()).cayley

    def test_malformed_row(self):
        with pytest.raises(InputError, match="line 4: malformed Cayley row"):
            parse("brace v1\np 5\nfactors 1\n(0) ∘ (0) = \n")

    def test_bad_element_literal(self):
        with pytest.raises(InputError, match="line 4: malformed element literal"):
            parse("brace v1\np 5\nfactors 1\n(x) ∘ (0) = (0)\n")

    def test_wrong_arity(self):
        with pytest.raises(InputError, match="line 4: .*has 2 coordinates"):
            parse("brace v1\np 5\nfactors 1\n(0,1) ∘ (0) = (0)\n")

    def test_non_canonical_coordinate(self):
        with pytest.raises(InputError, match="line 4: coordinate 5 not canonical"):
            parse("brace v1\np 5\nfactors 1\n(5) ∘ (0) = (0)\n")

    def test_incomplete_table(self):
        text = "brace v1\np 5\nfactors 1\n(0) ∘ (0) = (0)\n"
        with pytest.raises(InputError, match="expected 25"):
            parse(text)

    def test_duplicate_row(self):
        lines = self.tiny_brace_text().splitlines()
        lines[-1] = lines[3]
        with pytest.raises(InputError, match="duplicate Cayley row"):
            parse("\n".join(lines) + "\n")

    def test_rows_forbidden_after_flows(self):
        with pytest.raises(InputError, match="line 5: Cayley rows are only valid"):
            parse("brace v1\np 5\nfactors 1\nflows\n(0) ∘ (0) = (0)\n")


class TestBuild:
    def test_prelie(self):
        ring = build(parse(E1_TEXT), exhaustive=False, samples=2_000)
        assert isinstance(ring, PreLieRing)
        assert ring.dot((1,), (1,)) == (7,)

    def test_flows(self):
        doc = parse("brace v1\np 5\nfactors 3\nflows\nsc 1 1 -> 5 1\n")
        brace = build(doc)
        assert isinstance(brace, Brace)
        assert brace.circ((0,), (3,)) == (3,)
        assert brace.flow_context.index == 4

    def test_cayley(self, z25_brace):
        doc = document_from(z25_brace)
        rebuilt = build(doc)
        g = z25_brace.group
        for a in g.elements():
            for b in g.elements():
                assert rebuilt.circ(a, b) == z25_brace.circ(a, b)

    def test_verify_failure_raises(self, z25_brace):
        doc = document_from(z25_brace)
        a, b, c = doc.cayley[7]
        doc.cayley[7] = (a, b, z25_brace.group.add(c, (1,)))
        with pytest.raises(StructureError, match="verification failed"):
            build(doc)

    def test_structural_failure_ignores_no_verify(self):
        doc = parse("brace v1\np 5\nfactors 2\nflows\nsc 1 1 -> 1 1\n")
        with pytest.raises(StructureError, match="nilpotent"):
            build(doc, verify=False)


class TestRoundTrips:
    def test_prelie_documents(self):
        for text in (E1_TEXT,
                     "prelie v1\np 7\nfactors 3 2\nsc 2 1 -> 7 1\n",
                     "prelie v1\np 5\nfactors 2 1\nsc 1 1 -> 5 1\nsc 1 2 -> 0\n"):
            doc = parse(text)
            again = parse(serialize_document(doc))
            assert (again.kind, again.p, again.factors) == (doc.kind, doc.p, doc.factors)
            # canonical form omits zero pairs; absent pairs build as zero
            zero = (0,) * len(doc.factors)
            assert again.sc == {k: v for k, v in doc.sc.items() if v != zero}
            assert serialize_document(again) == serialize_document(doc)

    def test_serialize_is_canonical(self):
        # zero pairs are dropped and pairs are sorted
        messy = "prelie v1\np 5\nfactors 2 1\nsc 2 1 -> 0\nsc 1 1 -> 5 1 0 2\n"
        assert serialize_document(parse(messy)) == (
            "prelie v1\np 5\nfactors 2 1\nsc 1 1 -> 5 1\n")

    def test_ring_object_round_trip(self):
        ring = build(parse(E1_TEXT), verify=False)
        doc = document_from(ring)
        assert doc.sc == {(0, 0): (7,)}
        rebuilt = build(doc, verify=False)
        assert rebuilt.dot((3,), (4,)) == ring.dot((3,), (4,))

    def test_flows_brace_object_round_trip(self):
        doc = parse("brace v1\np 5\nfactors 3\nflows\nsc 1 1 -> 5 1\n")
        brace = build(doc)
        text = serialize(brace)
        assert text == "brace v1\np 5\nfactors 3\nflows\nsc 1 1 -> 5 1\n"
        again = build(parse(text))
        assert again.circ((1,), (1,)) == brace.circ((1,), (1,))

    def test_parse_file(self, tmp_path):
        path = tmp_path / "ring.prelie"
        path.write_text(E1_TEXT, encoding="utf-8")
        assert parse_file(str(path)).sc == {(0, 0): (7,)}


class TestDocumentFrom:
    def test_zero_exponent_coordinates_stripped(self):
        g = PGroup(7, (1, 0), allow_zero=True)
        ring = PreLieRing.from_structure_constants(g, {(0, 0): (3, 0)})
        doc = document_from(ring)
        assert doc.factors == (1,)
        assert doc.sc == {(0, 0): (3,)}
        assert serialize_document(doc) == "prelie v1\np 7\nfactors 1\nsc 1 1 -> 3 1\n"

    def test_trivial_carrier_rejected(self):
        g = PGroup(7, (0,), allow_zero=True)
        ring = PreLieRing.from_structure_constants(g, {})
        with pytest.raises(InputError, match="trivial carrier"):
            document_from(ring)

    def test_large_table_brace_rejected(self):
        brace = trivial_brace(PGroup(7, (5,)))
        with pytest.raises(InputError, match="too\\s+large for a Cayley body"):
            document_from(brace)

    def test_unsupported_object(self):
        with pytest.raises(InputError, match="cannot serialize"):
            document_from("not a brace")
