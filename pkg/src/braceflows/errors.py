"""Exception types shared across the package."""

from __future__ import annotations

__all__ = ["InputError", "StructureError"]


class InputError(ValueError):
    """Malformed or out-of-contract input (bad file, bad parameters)."""


class StructureError(RuntimeError):
    """An algebraic guarantee failed at runtime (non-nilpotent input,
    a map that should be invertible is not, a product left its expected
    subgroup).  Signals either corrupt input or a genuine counterexample."""
