"""Nested chain of Lagrangian minimizers across all multipliers.

As lam sweeps upward, the inclusion-minimal minimizer of Phi(K, lam) =
|K| - lam * e(K) moves through a strictly nested family
empty = S_0 < S_1 < ... < S_k with strictly increasing induced weight; the lam
values where it changes are the breakpoints.  The chain is recovered with
at most 2k+1 max-flow calls by divide and conquer on multiplier intervals:
probe the intersection of the value lines of the two bracketing sets; if the
minimal minimizer at the probe equals the lower set, the probe is the single
breakpoint between them, otherwise the probe's minimizer splits the interval.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

from .flows import LagrangianCutSolver
from .hypergraph import WeightedHypergraph, InvariantError

__all__ = ["NestedChain", "nested_chain"]


@dataclass(frozen=True)
class NestedChain:
    """Strictly nested minimizer family with its breakpoints.

    sets[j] is the minimal minimizer on the open interval
    (breakpoints[j-1], breakpoints[j]) (with lam below breakpoints[0] giving
    sets[0] = empty and lam above breakpoints[-1] giving sets[-1]).
    induced[j] = e(sets[j]); total = W.
    """

    sets: tuple[frozenset[int], ...]
    breakpoints: tuple[Fraction, ...]
    induced: tuple[Fraction, ...]
    total: Fraction

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.sets)

    @property
    def residuals(self) -> tuple[Fraction, ...]:
        return tuple(self.total - e for e in self.induced)

    def __len__(self) -> int:
        return len(self.sets)

    def set_at(self, lam: Fraction) -> frozenset[int]:
        """Minimal minimizer at lam (at a breakpoint: the set below it)."""
        return self.sets[bisect.bisect_left(self.breakpoints, lam)]

    def validate(self) -> None:
        if len(self.sets) != len(self.breakpoints) + 1 or len(self.sets) != len(self.induced):
            raise InvariantError("chain arrays disagree in length")
        if self.sets[0] != frozenset():
            raise InvariantError("chain must start at the empty set")
        for j in range(1, len(self.sets)):
            if not self.sets[j - 1] < self.sets[j]:
                raise InvariantError(f"chain sets not strictly nested at {j}")
            if not self.induced[j - 1] < self.induced[j]:
                raise InvariantError(f"induced weights not strictly increasing at {j}")
            if j >= 2 and not self.breakpoints[j - 2] < self.breakpoints[j - 1]:
                raise InvariantError(f"breakpoints not strictly increasing at {j}")
            # both neighbours are optimal exactly at the breakpoint
            lam = self.breakpoints[j - 1]
            lo = len(self.sets[j - 1]) - lam * self.induced[j - 1]
            hi = len(self.sets[j]) - lam * self.induced[j]
            if lo != hi:
                raise InvariantError(f"breakpoint identity fails at {j}: {lo} != {hi}")


def nested_chain(h: WeightedHypergraph, method: str = "auto") -> NestedChain:
    """Compute the full chain for ``h``.

    ``method`` picks the max-flow route ("auto", "scipy", "dinic").
    """
    solver = LagrangianCutSolver(h)
    base_induced = solver.const_mass  # empty-vertex hyperedges sit inside every set
    if not solver.edge_members:
        chain = NestedChain((frozenset(),), (), (base_induced,), h.total_weight)
        chain.validate()
        return chain

    cache: dict[frozenset[int], Fraction] = {}

    def induced(s: frozenset[int]) -> Fraction:
        if s not in cache:
            cache[s] = h.induced_weight(s)
        return cache[s]

    lam_max = Fraction(h.n + 1) / solver.min_positive
    top = solver.solve(lam_max, method).vertex_set
    expected_top = frozenset(solver.support)
    if top != expected_top:
        raise InvariantError(
            f"terminal multiplier {lam_max} did not force the full support: "
            f"{sorted(top)} vs {sorted(expected_top)}"
        )

    breaks: list[tuple[Fraction, frozenset[int]]] = []

    def recurse(lo: frozenset[int], hi: frozenset[int]) -> None:
        lam = Fraction(len(hi) - len(lo)) / (induced(hi) - induced(lo))
        mid = solver.solve(lam, method).vertex_set
        if mid == lo:
            breaks.append((lam, hi))
            return
        if mid == hi:
            raise InvariantError(
                f"probe at {lam} returned the upper bracket set; minimal-cut "
                "tie-breaking is broken"
            )
        recurse(lo, mid)
        recurse(mid, hi)

    recurse(frozenset(), top)
    breaks.sort(key=lambda item: item[0])
    sets = (frozenset(),) + tuple(s for _, s in breaks)
    chain = NestedChain(
        sets=sets,
        breakpoints=tuple(lam for lam, _ in breaks),
        induced=tuple(induced(s) for s in sets),
        total=h.total_weight,
    )
    chain.validate()
    return chain
