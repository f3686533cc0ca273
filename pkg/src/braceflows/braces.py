"""Left braces: one carrier, two group structures.

A left brace here is an abelian group (A, +) together with a second group
operation circ on the same carrier satisfying

    a circ (b + c) = a circ b - a + a circ c.

The defect star(a, b) = a circ b - a - b is additive in its right argument,
and lambda_a(b) = a circ b - b is an automorphism action of (A, circ) on
(A, +).  Small braces hold a dense circle table; large ones evaluate a
closure through a bounded memo cache.
"""

from __future__ import annotations

import math
import random
from typing import Callable, Iterable

from .errors import InputError, StructureError
from .groups import (
    Element,
    PGroup,
    QuotientSpace,
    Span,
    Subgroup,
    additive_span,
    quotient,
)
from .reports import CheckReport

__all__ = [
    "Brace",
    "FactorBrace",
    "trivial_brace",
    "verify_brace",
    "left_chain",
    "factor_brace",
    "ideal_quotient",
    "quoted_identity_report",
]

TABLE_THRESHOLD = 4096
MEMO_CAP = 1 << 20


class Brace:
    """A left brace on a PGroup carrier.

    The circle operation is stored as a dense table of encoded indices when
    the carrier has at most TABLE_THRESHOLD elements, otherwise as the given
    closure plus a bounded memo cache (safe under CPython's atomic dict ops).
    Construction does not verify the axioms; see verify_brace.
    """

    def __init__(self, group: PGroup, circ_fn: Callable[[Element, Element], Element] | None,
                 table: list[list[int]] | None):
        self.group = group
        self._circ_fn = circ_fn
        self._table = table
        self._memo: dict[tuple[Element, Element], Element] = {}
        self._inverses: dict[Element, Element] = {}

    # -- constructors ----------------------------------------------------------
    @classmethod
    def from_callable(cls, group: PGroup, circ: Callable[[Element, Element], Element],
                      *, materialize: bool | None = None) -> "Brace":
        if materialize is None:
            materialize = group.order <= TABLE_THRESHOLD
        if not materialize:
            return cls(group, circ, None)
        enc = group.encode
        elems = [group.decode(i) for i in range(group.order)]
        table = [[enc(circ(a, b)) for b in elems] for a in elems]
        return cls(group, circ, table)

    @classmethod
    def from_table(cls, group: PGroup, table: list[list[int]]) -> "Brace":
        n = group.order
        if len(table) != n or any(len(row) != n for row in table):
            raise InputError(f"circle table must be {n}x{n}")
        for row in table:
            for v in row:
                if not (0 <= v < n):
                    raise InputError(f"table entry {v} out of range 0..{n - 1}")
        return cls(group, None, [list(row) for row in table])

    # -- operations -------------------------------------------------------------
    def circ(self, a: Element, b: Element) -> Element:
        if self._table is not None:
            g = self.group
            return g.decode(self._table[g.encode(a)][g.encode(b)])
        key = (a, b)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        val = self._circ_fn(a, b)
        if len(self._memo) >= MEMO_CAP:
            self._memo.clear()
        self._memo[key] = val
        return val

    def star(self, a: Element, b: Element) -> Element:
        g = self.group
        return g.sub(self.circ(a, b), g.add(a, b))

    def lambda_map(self, a: Element, b: Element) -> Element:
        return self.group.sub(self.circ(a, b), a)

    def circ_pow(self, a: Element, k: int) -> Element:
        """k-th circle power by square-and-multiply; k >= 0."""
        if k < 0:
            raise InputError(f"circle power exponent must be >= 0, got {k}")
        result = self.group.zero
        base = a
        while k:
            if k & 1:
                result = self.circ(result, base)
            k >>= 1
            if k:
                base = self.circ(base, base)
        return result

    def circ_order(self, a: Element) -> int:
        """Order of a in (A, circ); a power of p."""
        p = self.group.p
        t = 1
        x = a
        while x != self.group.zero:
            x = self.circ_pow(x, p)
            t *= p
            if t > self.group.order:
                raise StructureError(
                    f"circle order of {a} exceeds the group order; not a p-group law"
                )
        return t

    def circ_inverse(self, a: Element) -> Element:
        inv = self._inverses.get(a)
        if inv is not None:
            return inv
        if self._table is not None:
            g = self.group
            row = self._table[g.encode(a)]
            try:
                inv = g.decode(row.index(0))
            except ValueError:
                raise StructureError(f"{a} has no right circle inverse") from None
        else:
            inv = self.circ_pow(a, self.circ_order(a) - 1)
        if self.circ(a, inv) != self.group.zero or self.circ(inv, a) != self.group.zero:
            raise StructureError(f"inverse computation failed for {a}")
        self._inverses[a] = inv
        return inv

    def index_table(self):
        """Dense encoded circle table as an int64 array (small carriers only)."""
        import numpy as np

        if self._table is not None:
            return np.array(self._table, dtype=np.int64)
        if self.group.order > TABLE_THRESHOLD:
            raise InputError(
                f"carrier of order {self.group.order} exceeds the dense-table "
                f"threshold {TABLE_THRESHOLD}"
            )
        from ._tables import build_table

        return build_table(self.group, self.circ)


def trivial_brace(group: PGroup) -> Brace:
    """circ = +; the brace of the zero ring."""
    return Brace.from_callable(group, group.add)


class FactorBrace(Brace):
    """A brace on a quotient carrier, remembering where it came from."""

    def __init__(self, parent: Brace, space: QuotientSpace,
                 circ_fn, table):
        super().__init__(space.group, circ_fn, table)
        self.parent = parent
        self.space = space


# ---------------------------------------------------------------------------
# verification


def _sampled_triples(group: PGroup, samples: int, seed: int):
    rng = random.Random(seed)
    for _ in range(samples):
        yield (group.random_element(rng), group.random_element(rng),
               group.random_element(rng))


def verify_brace(brace: Brace, *, exhaustive: bool | None = None,
                 samples: int = 100_000, seed: int = 0) -> CheckReport:
    """Axiom report: abelian +, neutral zero, associativity of circ, circle
    inverses, and the left brace law.  Exhaustive mode is forced on carriers
    of order <= 125, defaults on up to order 1000, and falls back to
    fixed-seed sampling above that.
    """
    g = brace.group
    order = g.order
    if order <= 125:
        exhaustive = True
    elif exhaustive is None:
        exhaustive = order <= 1000
    report = CheckReport()
    mode = "exhaustive" if exhaustive else f"sampled n={samples} seed={seed}"

    if exhaustive:
        _verify_brace_exhaustive(brace, report, mode)
    else:
        _verify_brace_sampled(brace, report, samples, seed, mode)
    return report


def _verify_brace_exhaustive(brace: Brace, report: CheckReport, mode: str) -> None:
    from . import _tables

    g = brace.group
    ctx = _tables.IndexContext(g)
    table = brace.index_table()

    # (A, +) commutes coordinatewise by construction; assert on a full pass.
    bad = None
    for i, a in enumerate(g.elements()):
        b = g.decode((i * 2 + 1) % g.order)
        if g.add(a, b) != g.add(b, a):  # pragma: no cover - structural
            bad = (a, b)
            break
    report.add("abelian-add", bad is None,
               witness=None if bad is None else f"a={bad[0]} b={bad[1]}", info=mode)

    w = _tables.check_identity(table)
    report.add("zero-neutral", w is None,
               witness=None if w is None else f"a={g.decode(w)}", info=mode)

    w = _tables.check_associativity(table)
    report.add("circ-associative", w is None,
               witness=None if w is None else
               f"a={g.decode(w[0])} b={g.decode(w[1])} c={g.decode(w[2])}", info=mode)

    w = _tables.check_solvability(table)
    report.add("circ-inverses", w is None,
               witness=None if w is None else f"a={g.decode(w)}", info=mode)

    w = _tables.check_left_brace_law(ctx, table)
    report.add("left-brace-law", w is None,
               witness=None if w is None else
               f"a={g.decode(w[0])} b={g.decode(w[1])} c={g.decode(w[2])}", info=mode)


def _verify_brace_sampled(brace: Brace, report: CheckReport, samples: int,
                          seed: int, mode: str) -> None:
    g = brace.group
    rng = random.Random(seed)
    zero = g.zero

    bad = None
    for _ in range(min(samples, 10_000)):
        a, b = g.random_element(rng), g.random_element(rng)
        if g.add(a, b) != g.add(b, a):  # pragma: no cover - structural
            bad = f"a={a} b={b}"
            break
    report.add("abelian-add", bad is None, witness=bad, info=mode)

    bad = None
    for _ in range(min(samples, 10_000)):
        a = g.random_element(rng)
        if brace.circ(zero, a) != a or brace.circ(a, zero) != a:
            bad = f"a={a}"
            break
    report.add("zero-neutral", bad is None, witness=bad, info=mode)

    bad = None
    for a, b, c in _sampled_triples(g, samples, seed + 1):
        if brace.circ(brace.circ(a, b), c) != brace.circ(a, brace.circ(b, c)):
            bad = f"a={a} b={b} c={c}"
            break
    report.add("circ-associative", bad is None, witness=bad, info=mode)

    bad = None
    rng2 = random.Random(seed + 2)
    for _ in range(min(samples, 2_000)):
        a = g.random_element(rng2)
        try:
            brace.circ_inverse(a)
        except StructureError:
            bad = f"a={a}"
            break
    report.add("circ-inverses", bad is None, witness=bad, info=mode)

    bad = None
    for a, b, c in _sampled_triples(g, samples, seed + 3):
        lhs = brace.circ(a, g.add(b, c))
        rhs = g.add(g.sub(brace.circ(a, b), a), brace.circ(a, c))
        if lhs != rhs:
            bad = f"a={a} b={b} c={c}"
            break
    report.add("left-brace-law", bad is None, witness=bad, info=mode)


# ---------------------------------------------------------------------------
# left chain and quotients


def left_chain(brace: Brace, *, max_steps: int | None = None) -> list[Span]:
    """Descending chain A = A^1 >= A^2 >= ... with A^(i+1) = span(a * A^i),
    computed via star's right-argument additivity: each level is spanned by
    {a * g} with a over the carrier and g over the previous level's essential
    generators.  Fails if the chain does not reach 0 within n+1 steps.
    """
    g = brace.group
    if max_steps is None:
        max_steps = g.n + 1
    chain = [additive_span(g, g.generators())]
    while not chain[-1].is_zero:
        if len(chain) > max_steps:
            raise StructureError(
                f"left chain did not reach 0 within {max_steps} steps; "
                f"not left nilpotent"
            )
        gens = []
        if g.order > 1 << 18:
            raise InputError(f"left chain on order {g.order} not supported")
        for a in g.elements():
            for h in chain[-1].gens:
                gens.append(brace.star(a, h))
        chain.append(additive_span(g, gens))
    return chain


def factor_brace(brace: Brace, sub: Subgroup, *, check: bool = True,
                 samples: int = 10_000, seed: int = 0) -> FactorBrace:
    """Quotient brace by a coordinate-aligned ideal.

    The ideal precondition (lambda-invariance and circle-normality of the
    subgroup) is checked exhaustively on small carriers and by fixed-seed
    sampling on large ones.
    """
    g = brace.group
    if sub.group != g:
        raise InputError("subgroup does not live on the brace carrier")
    space = quotient(g, sub)
    if check:
        _check_ideal(brace, sub, samples=samples, seed=seed)
    qg = space.group

    def qcirc(x: Element, y: Element) -> Element:
        return space.project(brace.circ(space.lift(x), space.lift(y)))

    if qg.order <= TABLE_THRESHOLD:
        enc = qg.encode
        elems = [qg.decode(i) for i in range(qg.order)]
        table = [[enc(qcirc(a, b)) for b in elems] for a in elems]
        return FactorBrace(brace, space, None, table)
    return FactorBrace(brace, space, qcirc, None)


def ideal_quotient(brace: Brace, i: int, kind: str = "ann", **kw) -> FactorBrace:
    """Convenience wrapper: quotient by ann(p**i) or by p**i * A."""
    if kind == "ann":
        sub = brace.group.annihilator(i)
    elif kind == "pk":
        sub = brace.group.power_image(i)
    else:
        raise InputError(f"unknown ideal kind {kind!r}; use 'ann' or 'pk'")
    return factor_brace(brace, sub, **kw)


def _check_ideal(brace: Brace, sub: Subgroup, *, samples: int, seed: int) -> None:
    g = brace.group
    exhaustive = g.order * max(sub.size, 1) <= 1 << 14
    zero = g.zero
    if exhaustive:
        pairs = ((a, s) for a in g.elements() for s in sub.elements())
    else:
        rng = random.Random(seed)

        def _gen():
            for _ in range(samples):
                yield g.random_element(rng), sub.random_element(rng)

        pairs = _gen()
    for a, s in pairs:
        if s == zero:
            continue
        if brace.lambda_map(a, s) not in sub:
            raise InputError(
                f"subgroup is not lambda-invariant: lambda_{a}({s}) escapes"
            )
        conj = brace.circ(brace.circ(a, s), brace.circ_inverse(a))
        if conj not in sub:
            raise InputError(
                f"subgroup is not circle-normal: {a} conjugates {s} out"
            )


# ---------------------------------------------------------------------------
# classical star-product identities ("quoted identities" in the CLI)


def _engel_sum_rhs(brace: Brace, a: Element, b: Element, c: Element,
                   cutoff: int) -> Element:
    """a*c + b*c + sum_i (-1)^(i+1) ((d_i * d_i') * c - d_i * (d_i' * c))
    with d_0 = a, d_0' = b, d_{i+1} = d_i + d_i', d_{i+1}' = d_i * d_i'."""
    g = brace.group
    acc = g.add(brace.star(a, c), brace.star(b, c))
    d, dp = a, b
    for i in range(cutoff + 1):
        if dp == g.zero:
            break
        term = g.sub(brace.star(brace.star(d, dp), c),
                     brace.star(d, brace.star(dp, c)))
        acc = g.sub(acc, term) if i % 2 == 0 else g.add(acc, term)
        d, dp = g.add(d, dp), brace.star(d, dp)
    return acc


def _star_chain(brace: Brace, a: Element, limit: int) -> list[Element]:
    """[a, a*a, a*(a*a), ...] up to limit entries, stopping at zero."""
    out = [a]
    for _ in range(limit - 1):
        nxt = brace.star(a, out[-1])
        if nxt == brace.group.zero:
            break
        out.append(nxt)
    return out


def _binomial_circ_pow(brace: Brace, chain: list[Element], k: int) -> Element:
    """sum_i C(k, i) * chain[i-1]; exact for every k >= 0 by the binomial
    expansion of circle powers in a left brace."""
    g = brace.group
    acc = g.zero
    for i, e in enumerate(chain, start=1):
        if i > k:
            break
        acc = g.add(acc, g.smul(math.comb(k, i), e))
    return acc


def _word_value_sets(brace: Brace, a: Element, c: Element,
                     max_letters: int) -> list:
    """Values of all bracketed star-words in a ending with a single final c,
    with at least two a's, up to max_letters total letters.

    pure[k]: value set of all-a words with k letters; ended[k]: value set of
    c-terminated words with k a's.  Every c-terminated word splits uniquely
    at the top as (pure a-word) * (c-terminated word).
    """
    star = brace.star
    pure: dict[int, set] = {1: {a}}
    for k in range(2, max_letters):
        vals = set()
        for i in range(1, k):
            for u in pure.get(i, ()):
                for v in pure.get(k - i, ()):
                    vals.add(star(u, v))
        pure[k] = vals
    ended: dict[int, set] = {0: {c}}
    for k in range(1, max_letters):
        vals = set()
        for i in range(1, k + 1):
            for u in pure.get(i, ()):
                for v in ended.get(k - i, ()):
                    vals.add(star(u, v))
        ended[k] = vals
    gens: set = set()
    for k in range(2, max_letters):
        gens |= ended[k]
    return sorted(gens)


def quoted_identity_report(brace: Brace, *, samples: int = 10_000,
                           seed: int = 0) -> CheckReport:
    """Five classical identities of the star product, checked numerically.

    (i)   additivity defect of star in its left argument expands into the
          alternating chain sum;
    (ii)  circle powers and their stars expand binomially along star chains;
    (iii) the circle subgroup generated by p**i-th circle powers equals p**i*A;
    (iv)  any (p-1)-fold left-nested star product of elements of p*A vanishes;
    (v)   (m a) * c - m (a * c) lies in the span of star words in a, c with
          at least two a's.
    """
    g = brace.group
    p = g.p
    report = CheckReport()
    rng = random.Random(seed)
    cutoff = 2 * (g.n + 1)

    # (i) additivity defect chain
    bad = None
    for _ in range(samples):
        a, b, c = (g.random_element(rng) for _ in range(3))
        if brace.star(g.add(a, b), c) != _engel_sum_rhs(brace, a, b, c, cutoff):
            bad = f"a={a} b={b} c={c}"
            break
    report.add("star-additivity-chain", bad is None, witness=bad,
               info=f"samples={samples}")

    # (ii) binomial expansions vs square-and-multiply
    bad = None
    rng2 = random.Random(seed + 1)
    exponents = [2, 3, p - 1, p, p + 1, p * p, p ** min(3, g.n)]
    for _ in range(samples):
        a, b = g.random_element(rng2), g.random_element(rng2)
        k = exponents[rng2.randrange(len(exponents))]
        chain = _star_chain(brace, a, g.n + 1)
        direct = brace.circ_pow(a, k)
        if direct != _binomial_circ_pow(brace, chain, k):
            bad = f"a={a} k={k} (power form)"
            break
        bchain = _star_chain_on(brace, a, b, g.n + 1)
        expect = _binomial_star_sum(brace, bchain, k)
        if brace.star(direct, b) != expect:
            bad = f"a={a} b={b} k={k} (star form)"
            break
    report.add("circ-power-binomial", bad is None, witness=bad,
               info=f"samples={samples}")

    # (iii) p**i-th circle powers generate p**i * A
    bad = None
    if g.order <= 1 << 18:
        chains = {}
        for a in g.elements():
            chains[a] = _star_chain(brace, a, g.n + 1)
        for i in range(1, g.max_exp + 1):
            target = g.power_image(i)
            power_set = set()
            for a, chain in chains.items():
                v = _binomial_circ_pow(brace, chain, p ** i)
                if v not in target:
                    bad = f"i={i} a={a} power={v} escapes p^{i}A"
                    break
                power_set.add(v)
            if bad:
                break
            if power_set != set(target.elements()):
                closure = _circ_closure(brace, power_set)
                if closure != set(target.elements()):
                    bad = f"i={i}: generated subgroup has {len(closure)} elements, p^{i}A has {target.size}"
                    break
    else:  # pragma: no cover - no fixture this large
        bad = "carrier too large"
    report.add("circ-powers-generate-image", bad is None, witness=bad,
               info="exhaustive")

    # (iv) (p-1)-fold left-nested star products over p*A vanish
    bad = None
    rng4 = random.Random(seed + 3)
    for _ in range(samples):
        xs = [g.smul(p, g.random_element(rng4)) for _ in range(p - 1)]
        acc = xs[-1]
        for x in reversed(xs[:-1]):
            acc = brace.star(x, acc)
        if acc != g.zero:
            bad = f"xs={xs} product={acc}"
            break
    report.add("pA-products-vanish", bad is None, witness=bad,
               info=f"samples={samples}")

    # (v) scalar defect of star lies in the two-a word span
    bad = None
    rng5 = random.Random(seed + 4)
    pair_count = max(1, samples // 4)
    for _ in range(pair_count):
        a, c = g.random_element(rng5), g.random_element(rng5)
        span = None
        for m in (2, 3, p, p + 2):
            diff = g.sub(brace.star(g.smul(m, a), c),
                         g.smul(m, brace.star(a, c)))
            if diff == g.zero:
                continue
            if span is None:
                span = additive_span(
                    g, _word_value_sets(brace, a, c, g.n + 2))
            if diff not in span:
                # widen the word length before declaring failure
                span = additive_span(
                    g, _word_value_sets(brace, a, c, 2 * g.n + 2))
                if diff not in span:
                    bad = f"a={a} c={c} m={m} defect={diff}"
                    break
        if bad:
            break
    report.add("scalar-star-defect-span", bad is None, witness=bad,
               info=f"samples={4 * pair_count}")
    return report


def _star_chain_on(brace: Brace, a: Element, b: Element, limit: int) -> list[Element]:
    """[b-chain] e_1 = a*b, e_{i+1} = a*e_i, stopping at zero."""
    out = [brace.star(a, b)]
    for _ in range(limit - 1):
        if out[-1] == brace.group.zero:
            break
        out.append(brace.star(a, out[-1]))
    return out


def _binomial_star_sum(brace: Brace, bchain: list[Element], k: int) -> Element:
    g = brace.group
    acc = g.zero
    for i, e in enumerate(bchain, start=1):
        if i > k:
            break
        acc = g.add(acc, g.smul(math.comb(k, i), e))
    return acc


def _circ_closure(brace: Brace, seed_set: set) -> set:
    """Closure of a set under the circle product (it already contains the
    inverses' generators since the ambient group is a finite p-group)."""
    closed = set(seed_set)
    closed.add(brace.group.zero)
    frontier = list(closed)
    gens = sorted(seed_set)
    while frontier:
        x = frontier.pop()
        for s in gens:
            for y in (brace.circ(x, s), brace.circ(s, x)):
                if y not in closed:
                    closed.add(y)
                    frontier.append(y)
    return closed
