"""Weighted hypergraphs over integer vertex ids.

Vertices are ints in [0, n).  A hyperedge is a vertex set with a non-negative
rational mass; duplicate vertex sets are legal and are never merged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = ["Hyperedge", "WeightedHypergraph", "InputError", "InvariantError", "as_fraction"]


class InputError(ValueError):
    """Malformed user input (bad file, bad id, bad weight)."""


class InvariantError(AssertionError):
    """A structural invariant that must hold by construction was violated."""


def as_fraction(value) -> Fraction:
    """Exact rational from int/Fraction/str/float.

    Floats go through their shortest decimal repr so that 0.3 means 3/10,
    not the binary double closest to it.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        return Fraction(value)
    raise InputError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class Hyperedge:
    vertices: frozenset[int]
    weight: Fraction

    def __post_init__(self):
        if self.weight < 0:
            raise InputError(f"negative hyperedge weight {self.weight}")


@dataclass
class WeightedHypergraph:
    """n vertices plus a list of weighted hyperedges (duplicates allowed)."""

    n: int
    edges: list[Hyperedge] = field(default_factory=list)

    @classmethod
    def build(cls, n: int, edges: Iterable[tuple[Sequence[int], object]]) -> "WeightedHypergraph":
        out = cls(n=n, edges=[Hyperedge(frozenset(v), as_fraction(w)) for v, w in edges])
        out.validate()
        return out

    def validate(self) -> None:
        if self.n < 0:
            raise InputError(f"vertex count must be non-negative, got {self.n}")
        for e in self.edges:
            for v in e.vertices:
                if not isinstance(v, int) or not (0 <= v < self.n):
                    raise InputError(f"vertex id {v!r} outside [0, {self.n})")
            if e.weight < 0:
                raise InputError(f"negative weight {e.weight}")

    @property
    def total_weight(self) -> Fraction:
        return sum((e.weight for e in self.edges), Fraction(0))

    @property
    def support(self) -> frozenset[int]:
        """Vertices lying on at least one positive-weight hyperedge."""
        out: set[int] = set()
        for e in self.edges:
            if e.weight > 0:
                out.update(e.vertices)
        return frozenset(out)

    def induced_weight(self, s: frozenset[int] | set[int]) -> Fraction:
        """Total mass of hyperedges entirely contained in s."""
        s = frozenset(s)
        return sum((e.weight for e in self.edges if e.vertices <= s), Fraction(0))

    def residual_weight(self, s: frozenset[int] | set[int]) -> Fraction:
        """Mass not captured by s: total minus induced."""
        return self.total_weight - self.induced_weight(s)
