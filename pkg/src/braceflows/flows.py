"""The group of flows of a left-nilpotent pre-Lie ring.

Writing L_a for left multiplication by a, the construction exponentiates:

    W(a)      = a + (1/2!) a.a + (1/3!) a.(a.a) + ...      (left-normed)
    star(a,b) = sum_{k>=1} (1/k!) L_{Omega(a)}^k (b)
    a circ b  = a + b + star(a, b)

where Omega is the inverse of W.  Every series is finite: a left-normed
product of k factors lies in the k-th left chain level, so terms vanish
once the chain reaches zero at level s, and s <= n+1 < p keeps every 1/k!
a unit.  Sums truncate by exact elementwise zero detection, with the chain
index as a hard structural cap.

Omega is computed by the fixed-point iteration x <- a - (W(x) - x); if the
iteration fails to stabilize within the cap (no left-nilpotent input in
scope does), the finite carrier is enumerated to invert W exactly, and an
error is raised only if W is genuinely non-invertible.
"""

from __future__ import annotations

from .braces import Brace
from .errors import StructureError
from .groups import Element
from .padic import ScalarRing, inverse_factorial
from .prelie import PreLieRing, ring_left_chain

__all__ = ["FlowContext", "flows_brace"]


class FlowContext:
    """Evaluator for the exponential-type series of one pre-Lie ring.

    The constructor runs the left chain (raising StructureError when the
    ring is not left nilpotent) and records the nilpotency index s =
    smallest level with L^s = 0.  Nonzero series terms never reach factor
    count s, so 1/k! is only ever needed for k < s <= n+1 < p.
    """

    def __init__(self, ring: PreLieRing):
        self.ring = ring
        g = ring.group
        self.group = g
        chain = ring_left_chain(ring)
        self.index = len(chain)
        self.scalars = ScalarRing(g.p, max(g.max_exp, 1))
        self.inv_fact = [inverse_factorial(k, self.scalars)
                         for k in range(self.index)]
        self._omega_cache: dict[Element, Element] = {}
        self._w_inverse_table: dict[Element, Element] | None = None

    # -- series ----------------------------------------------------------------
    def apply_exp(self, a: Element, b: Element) -> Element:
        """sum_{k>=1} (1/k!) L_a^k(b); the k-th term has k+1 factors."""
        g = self.group
        dot = self.ring.dot
        acc = g.zero
        term = b
        for k in range(1, self.index + 1):
            term = dot(a, term)
            if term == g.zero:
                break
            if k >= len(self.inv_fact):
                raise StructureError(
                    "exponential series failed to truncate at the nilpotency "
                    "index; input ring is inconsistent"
                )
            acc = g.add(acc, g.smul(self.inv_fact[k], term))
        return acc

    def exp_map(self, a: Element) -> Element:
        """W(a) = a + sum_{k>=2} (1/k!) a^(.k) with left-normed powers."""
        g = self.group
        dot = self.ring.dot
        acc = a
        term = a
        for k in range(2, self.index + 2):
            term = dot(a, term)
            if term == g.zero:
                break
            if k >= len(self.inv_fact):
                raise StructureError(
                    "flow series failed to truncate at the nilpotency index; "
                    "input ring is inconsistent"
                )
            acc = g.add(acc, g.smul(self.inv_fact[k], term))
        return acc

    def log_map(self, a: Element) -> Element:
        """Omega(a): the unique x with W(x) = a."""
        hit = self._omega_cache.get(a)
        if hit is not None:
            return hit
        g = self.group
        x = a
        for _ in range(self.index + 1):
            w = self.exp_map(x)
            if w == a:
                self._omega_cache[a] = x
                return x
            x = g.sub(a, g.sub(w, x))
        x = self._invert_by_enumeration(a)  # pragma: no cover - safety net
        self._omega_cache[a] = x
        return x

    def _invert_by_enumeration(self, a: Element) -> Element:  # pragma: no cover
        if self._w_inverse_table is None:
            table: dict[Element, Element] = {}
            for x in self.group.elements():
                w = self.exp_map(x)
                if w in table:
                    raise StructureError(f"W is not injective: W({table[w]}) = W({x})")
                table[w] = x
            self._w_inverse_table = table
        try:
            return self._w_inverse_table[a]
        except KeyError:
            raise StructureError(f"{a} is not in the image of W") from None

    # -- the brace --------------------------------------------------------------
    def star(self, a: Element, b: Element) -> Element:
        return self.apply_exp(self.log_map(a), b)

    def circ(self, a: Element, b: Element) -> Element:
        g = self.group
        return g.add(g.add(a, b), self.star(a, b))


def flows_brace(ring: PreLieRing, *, verify: bool = True,
                samples: int = 100_000, seed: int = 0) -> Brace:
    """Brace of the group of flows.  Left nilpotency is always required
    (FlowContext raises on its absence); with verify=True the resulting
    brace's axioms are also checked and a failure raises StructureError.
    """
    ctx = FlowContext(ring)
    brace = Brace.from_callable(ring.group, ctx.circ)
    brace.flow_context = ctx
    if verify:
        from .braces import verify_brace

        report = verify_brace(brace, samples=samples, seed=seed)
        if not report.passed:
            raise StructureError(
                "group-of-flows output failed brace verification:\n" + str(report)
            )
    return brace
