"""Desk-scale example inputs used by the acceptance suite and the CLI.

Five fixtures:

    T0  trivial brace on Z/5^3, stored as the flows of the zero ring
    A1  a.b = 5ab on Z/5^3 (one generator, product 5 g1)
    E1  a.b = 7ab on Z/7^5
    E2  a.b = 49ab on Z/7^5
    M1  a two-generator ring on Z/7^3 x Z/7^2 with nonzero mixed products,
        found by a deterministic grid search (see search_mixed_ring)

M1 is generated once by the search and frozen as a golden file under the
test tree; the test suite re-runs the search and compares.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError, StructureError
from .formats import InputDocument, build, parse, serialize_document
from .groups import Element, PGroup
from .prelie import PreLieRing, ring_left_chain

__all__ = ["Fixture", "example_suite", "search_mixed_ring", "mixed_ring_document"]


@dataclass(frozen=True)
class Fixture:
    name: str
    text: str

    def document(self) -> InputDocument:
        return parse(self.text)

    def build(self, **kw):
        return build(self.document(), **kw)


_T0 = """\
# trivial brace: a o b = a + b (flows of the zero ring)
brace v1
p 5
factors 3
flows
"""

_A1 = """\
# a.b = 5ab on Z/125
prelie v1
p 5
factors 3
sc 1 1 -> 5 1
"""

_E1 = """\
# a.b = 7ab on Z/7^5
prelie v1
p 7
factors 5
sc 1 1 -> 7 1
"""

_E2 = """\
# a.b = 49ab on Z/7^5
prelie v1
p 7
factors 5
sc 1 1 -> 49 1
"""


def _mixed_candidates(group: PGroup) -> list[Element]:
    """Candidate structure-constant values, smallest first.  Multiples of p
    keep every candidate torsion-compatible for exponents differing by one."""
    p = group.p
    g1 = (p, 0)
    g2 = (0, p)
    z = group.zero
    menu = [z, g1, g2, group.add(g1, g1), group.add(g2, g2), group.add(g1, g2)]
    return menu


def search_mixed_ring(p: int = 7, factors: tuple[int, ...] = (3, 2)) -> dict[tuple[int, int], Element]:
    """Deterministic grid search for a two-generator left-nilpotent pre-Lie
    ring with a nonzero mixed product.

    Candidates are assigned to the four generator pairs (1,1), (1,2), (2,1),
    (2,2) in lexicographic order over a fixed small menu of values; the
    first assignment that is torsion-compatible, satisfies the pre-Lie
    identity on all generator triples (enough, by triadditivity), and is
    left nilpotent wins.  Same inputs always give the same ring.
    """
    group = PGroup(p, factors)
    if group.rank != 2:
        raise InputError(f"the mixed-ring search needs two generators, got {group.rank}")
    menu = _mixed_candidates(group)
    gens = group.generators()
    pairs = [(0, 0), (0, 1), (1, 0), (1, 1)]
    zero = group.zero

    for i11 in range(len(menu)):
        for i12 in range(len(menu)):
            for i21 in range(len(menu)):
                for i22 in range(len(menu)):
                    choice = (menu[i11], menu[i12], menu[i21], menu[i22])
                    if choice[1] == zero and choice[2] == zero:
                        continue  # mixed products must not both vanish
                    sc = {jk: v for jk, v in zip(pairs, choice)}
                    try:
                        ring = PreLieRing.from_structure_constants(group, sc)
                    except InputError:
                        continue
                    if not _prelie_on_generators(ring, gens):
                        continue
                    try:
                        ring_left_chain(ring)
                    except StructureError:
                        continue
                    return {jk: v for jk, v in sc.items() if v != zero}
    raise StructureError("the candidate menu contains no valid mixed ring")


def _prelie_on_generators(ring: PreLieRing, gens: list[Element]) -> bool:
    """The associator-symmetry defect is triadditive, so vanishing on all
    generator triples proves the pre-Lie identity."""
    g = ring.group
    dot = ring.dot
    for a in gens:
        for b in gens:
            ab = dot(a, b)
            ba = dot(b, a)
            for c in gens:
                left = g.sub(dot(ab, c), dot(a, dot(b, c)))
                right = g.sub(dot(ba, c), dot(b, dot(a, c)))
                if left != right:
                    return False
    return True


def mixed_ring_document(p: int = 7, factors: tuple[int, ...] = (3, 2)) -> InputDocument:
    doc = InputDocument("prelie", p, factors)
    doc.sc = dict(sorted(search_mixed_ring(p, factors).items()))
    return doc


@lru_cache(maxsize=1)
def _m1_text() -> str:
    doc = mixed_ring_document()
    header = ("# two-generator ring on Z/7^3 x Z/7^2, found by the\n"
              "# deterministic grid search in fixtures.search_mixed_ring\n")
    return header + serialize_document(doc)


def example_suite() -> list[Fixture]:
    return [
        Fixture("T0", _T0),
        Fixture("A1", _A1),
        Fixture("E1", _E1),
        Fixture("E2", _E2),
        Fixture("M1", _m1_text()),
    ]
