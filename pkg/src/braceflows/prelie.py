"""Left-nilpotent pre-Lie rings on finite abelian p-groups.

A pre-Lie ring here is the carrier group with a biadditive product whose
associator defect is symmetric in the first two arguments:

    (a.b).c - a.(b.c) == (b.a).c - b.(a.c).

Rings enter either through structure constants on the cyclic generators
(biadditive by construction, torsion-compatibility enforced) or as a
closure/table on a small carrier (biadditivity then verified).  Left
nilpotency -- the chain L^1 = A, L^(i+1) = span(A . L^i) reaching 0 -- is
what the group-of-flows construction needs; it is checked cheaply through
generator products since the product is biadditive.
"""

from __future__ import annotations

import random
from typing import Callable

from .errors import InputError, StructureError
from .groups import (
    Element,
    PGroup,
    Span,
    Subgroup,
    additive_span,
    quotient,
)
from .reports import CheckReport

__all__ = [
    "PreLieRing",
    "verify_prelie",
    "ring_left_chain",
    "nilpotency_index",
    "scalar_twist",
    "factor_ring",
    "zero_ring",
]

TABLE_THRESHOLD = 4096


class PreLieRing:
    """Biadditive product on a PGroup carrier."""

    def __init__(self, group: PGroup, dot_fn: Callable[[Element, Element], Element],
                 sc: dict[tuple[int, int], Element] | None):
        self.group = group
        self._dot_fn = dot_fn
        self.sc = sc  # generator products, when structure-constant backed

    @classmethod
    def from_structure_constants(cls, group: PGroup,
                                 sc: dict[tuple[int, int], Element]) -> "PreLieRing":
        """sc maps (j, k) (0-based coordinates) to the element g_j . g_k.
        Missing pairs default to zero.  Torsion compatibility -- the product
        of two generators must be killed by the smaller generator order --
        is enforced here; it is exactly what makes the biadditive extension
        well defined on the quotiented coordinates.
        """
        p = group.p
        r = group.rank
        full: dict[tuple[int, int], Element] = {}
        for j in range(r):
            for k in range(r):
                v = sc.get((j, k), group.zero)
                group.check(v)
                bound = p ** min(group.factors[j], group.factors[k])
                if group.smul(bound, v) != group.zero:
                    raise InputError(
                        f"structure constant ({j + 1},{k + 1}) -> {v} violates "
                        f"torsion: p^{min(group.factors[j], group.factors[k])} "
                        f"times it must vanish"
                    )
                full[(j, k)] = v
        moduli = group.moduli

        def dot(a: Element, b: Element) -> Element:
            acc = [0] * r
            for j in range(r):
                aj = a[j]
                if not aj:
                    continue
                for k in range(r):
                    bk = b[k]
                    if not bk:
                        continue
                    v = full[(j, k)]
                    w = aj * bk
                    for l in range(r):
                        acc[l] += w * v[l]
            return tuple(x % m for x, m in zip(acc, moduli))

        return cls(group, dot, full)

    @classmethod
    def from_callable(cls, group: PGroup,
                      dot: Callable[[Element, Element], Element]) -> "PreLieRing":
        return cls(group, dot, None)

    def dot(self, a: Element, b: Element) -> Element:
        return self._dot_fn(a, b)

    @property
    def biadditive_by_construction(self) -> bool:
        return self.sc is not None

    def generator_products(self) -> dict[tuple[int, int], Element]:
        if self.sc is not None:
            return dict(self.sc)
        g = self.group
        gens = g.generators()
        out = {}
        idx = [j for j, e in enumerate(g.factors) if e > 0]
        for a, j in zip(gens, idx):
            for b, k in zip(gens, idx):
                out[(j, k)] = self.dot(a, b)
        return out

    def index_table(self):
        import numpy as np

        if self.group.order > TABLE_THRESHOLD:
            raise InputError(
                f"carrier of order {self.group.order} exceeds the dense-table "
                f"threshold {TABLE_THRESHOLD}"
            )
        from ._tables import build_table

        return build_table(self.group, self.dot)


def zero_ring(group: PGroup) -> PreLieRing:
    return PreLieRing.from_structure_constants(group, {})


# ---------------------------------------------------------------------------
# chains and verification


def ring_left_chain(ring: PreLieRing, *, assume_biadditive: bool = True,
                    max_steps: int | None = None) -> list[Span]:
    """L^1 = A, L^(i+1) = span(A . L^i).  For a biadditive product each level
    is spanned by generator products g_j . h with h over the previous level's
    essential generators, so the chain costs O(rank^2) products per level.
    """
    g = ring.group
    if max_steps is None:
        max_steps = g.n + 1
    chain = [additive_span(g, g.generators())]
    while not chain[-1].is_zero:
        if len(chain) > max_steps:
            raise StructureError(
                f"left chain did not reach 0 within {max_steps} steps; "
                f"ring is not left nilpotent"
            )
        prods = []
        left = g.generators() if assume_biadditive else list(g.elements())
        for a in left:
            for h in chain[-1].gens:
                prods.append(ring.dot(a, h))
        chain.append(additive_span(g, prods))
    return chain


def nilpotency_index(ring: PreLieRing) -> int:
    """Smallest s with L^s = 0 (so s-fold left-nested products vanish)."""
    return len(ring_left_chain(ring))


def verify_prelie(ring: PreLieRing, *, exhaustive: bool | None = None,
                  samples: int = 100_000, seed: int = 0,
                  require_nilpotent: bool = False) -> CheckReport:
    """Axiom report: torsion compatibility, biadditivity, the pre-Lie
    identity, and left nilpotency.

    Biadditivity on structure-constant rings holds by construction and is
    reported as such; closure-backed rings get the generator-increment check
    (complete by induction on coordinates) when a dense table fits, sampling
    otherwise.  The pre-Lie identity is checked on generator triples (which
    suffices once the product is biadditive) plus a full exhaustive pass on
    small carriers.
    """
    g = ring.group
    order = g.order
    if order <= 125:
        exhaustive = True
    elif exhaustive is None:
        exhaustive = order <= 1000
    report = CheckReport()
    p = g.p

    ctx = table = None
    if exhaustive:
        from . import _tables

        ctx = _tables.IndexContext(g)
        table = ring.index_table()

    # torsion compatibility of generator products
    bad = None
    for (j, k), v in sorted(ring.generator_products().items()):
        bound = p ** min(g.factors[j], g.factors[k])
        if g.smul(bound, v) != g.zero:
            bad = f"generators ({j + 1},{k + 1}) product {v}"
            break
    report.add("torsion-compatible", bad is None, witness=bad)

    # biadditivity
    if ring.biadditive_by_construction:
        report.add("biadditive", True, info="by construction (structure constants)")
        biadditive_ok = True
    elif exhaustive:
        from . import _tables

        w = _tables.check_additivity_steps(ctx, table)
        report.add("biadditive", w is None,
                   witness=None if w is None else
                   f"{w[0]} argument at x={g.decode(w[1])} y={g.decode(w[2])}",
                   info="generator increments, all pairs")
        biadditive_ok = w is None
    else:
        rng = random.Random(seed)
        bad = None
        for _ in range(samples):
            a, b, c = (g.random_element(rng) for _ in range(3))
            if ring.dot(g.add(a, b), c) != g.add(ring.dot(a, c), ring.dot(b, c)):
                bad = f"left: a={a} b={b} c={c}"
                break
            if ring.dot(a, g.add(b, c)) != g.add(ring.dot(a, b), ring.dot(a, c)):
                bad = f"right: a={a} b={b} c={c}"
                break
        report.add("biadditive", bad is None, witness=bad,
                   info=f"sampled n={samples} seed={seed}")
        biadditive_ok = bad is None

    # pre-Lie identity
    def defect(a: Element, b: Element, c: Element) -> Element:
        return g.sub(ring.dot(ring.dot(a, b), c), ring.dot(a, ring.dot(b, c)))

    bad = None
    gens = g.generators()
    for a in gens:
        for b in gens:
            for c in gens:
                if defect(a, b, c) != defect(b, a, c):
                    bad = f"a={a} b={b} c={c}"
                    break
            if bad:
                break
        if bad:
            break
    report.add("prelie-identity-generators", bad is None, witness=bad,
               info="all generator triples")

    if exhaustive:
        from . import _tables

        w = _tables.check_prelie_symmetry(ctx, table)
        report.add("prelie-identity", w is None,
                   witness=None if w is None else
                   f"a={g.decode(w[0])} b={g.decode(w[1])} c={g.decode(w[2])}",
                   info="exhaustive")
    else:
        rng = random.Random(seed + 7)
        bad = None
        for _ in range(min(samples, 20_000)):
            a, b, c = (g.random_element(rng) for _ in range(3))
            if defect(a, b, c) != defect(b, a, c):
                bad = f"a={a} b={b} c={c}"
                break
        report.add("prelie-identity", bad is None, witness=bad,
                   info=f"sampled n={min(samples, 20_000)} seed={seed + 7}")

    # left nilpotency
    try:
        chain = ring_left_chain(ring, assume_biadditive=biadditive_ok)
        report.add("left-nilpotent", True,
                   info=f"index {len(chain)}, chain sizes "
                        f"{[s.size for s in chain]}")
    except StructureError as exc:
        report.add("left-nilpotent", False, witness=str(exc))
        if require_nilpotent:
            raise
    return report


# ---------------------------------------------------------------------------
# constructions


def scalar_twist(ring: PreLieRing, s: int) -> PreLieRing:
    """The product (a, b) -> s * (a . b); biadditivity, the pre-Lie identity
    and left nilpotency all survive scalar twisting."""
    g = ring.group
    if ring.sc is not None:
        sc = {jk: g.smul(s, v) for jk, v in ring.sc.items()}
        return PreLieRing.from_structure_constants(g, sc)
    return PreLieRing.from_callable(g, lambda a, b: g.smul(s, ring.dot(a, b)))


def factor_ring(ring: PreLieRing, sub: Subgroup, *, check: bool = True) -> PreLieRing:
    """Quotient by a coordinate-aligned two-sided ideal.

    For a biadditive product the ideal condition reduces to generator pairs:
    g_j . s and s . g_j must stay in the subgroup for subgroup generators s.
    """
    g = ring.group
    if sub.group != g:
        raise InputError("subgroup does not live on the ring carrier")
    if check:
        for a in g.generators():
            for s in sub.generators():
                if ring.dot(a, s) not in sub or ring.dot(s, a) not in sub:
                    raise InputError(
                        f"subgroup is not a two-sided ideal: products of {a} "
                        f"and {s} escape"
                    )
    space = quotient(g, sub)
    qg = space.group
    if ring.sc is not None:
        sc = {jk: space.project(v) for jk, v in ring.sc.items()}
        return PreLieRing.from_structure_constants(qg, sc)

    def qdot(x: Element, y: Element) -> Element:
        return space.project(ring.dot(space.lift(x), space.lift(y)))

    return PreLieRing.from_callable(qg, qdot)
