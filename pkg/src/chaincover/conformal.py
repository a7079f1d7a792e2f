"""Split calibration of distance and coverage thresholds.

Stage 1 calibrates a distance cutoff d* so the truth lands inside the
candidate family with probability 1-delta.  Stage 2 scores each remaining
calibration pair by the smallest coverage target tau whose chain selection
contains the truth (1 when even the candidate family misses it), and takes a
conformal quantile tau* of those scores.  Prediction then runs the chain
selector at tau*.

Also provides the fixed-context fitter: split the samples in half, build the
chain on the first half, and return the shortest prefix of a fixed vertex
order meeting a conformal covered-count level on the second half.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .chain import NestedChain, nested_chain
from .compress import select, tau_threshold
from .hypergraph import InputError, WeightedHypergraph, as_fraction

__all__ = [
    "LabeledPair",
    "EtaScore",
    "CalibrationState",
    "FixedContextFit",
    "distance_edge_symdiff",
    "quantile_index",
    "calibrate_stage1",
    "calibrate_stage2",
    "calibrate",
    "predict",
    "fixed_context_fit",
]


@dataclass(frozen=True)
class LabeledPair:
    """Predicted hyperedge, observed hyperedge, and the candidate universe."""

    prediction: frozenset[int]
    truth: frozenset[int]
    universe: WeightedHypergraph


@dataclass(frozen=True)
class EtaScore:
    value: Fraction
    censored: bool  # truth missed the stage-1 candidate family entirely


@dataclass(frozen=True)
class CalibrationState:
    d_star: float  # +inf when the stage-1 index overflows
    tau_star: Fraction
    phi: Fraction
    delta: Fraction
    kappa: Fraction
    etas: tuple[EtaScore, ...]


def distance_edge_symdiff(a: frozenset[int], b: frozenset[int]) -> int:
    """Number of vertices on which the two hyperedges differ."""
    return len(a ^ b)


def quantile_index(level: Fraction, m: int) -> int:
    """1-based conformal order-statistic index ceil(level * (m + 1))."""
    return math.ceil(level * (m + 1))


def calibrate_stage1(
    pairs: Sequence[LabeledPair],
    delta,
    distance: Callable[[frozenset[int], frozenset[int]], float] = distance_edge_symdiff,
) -> float:
    """Distance cutoff: the ceil((1-delta)(m+1))-th smallest score, inf on overflow."""
    if not pairs:
        raise InputError("stage-1 calibration needs at least one pair")
    delta = as_fraction(delta)
    if not 0 < delta < 1:
        raise InputError(f"delta must lie in (0, 1), got {delta}")
    scores = sorted(distance(p.prediction, p.truth) for p in pairs)
    idx = quantile_index(1 - delta, len(scores))
    if idx > len(scores):
        return math.inf
    return scores[idx - 1]


def calibrate_stage2(
    pairs: Sequence[LabeledPair],
    d_star: float,
    phi,
    kappa,
    edge_source: Callable[[LabeledPair, float], WeightedHypergraph] | None = None,
    distance: Callable[[frozenset[int], frozenset[int]], float] = distance_edge_symdiff,
) -> tuple[Fraction, tuple[EtaScore, ...]]:
    """Coverage threshold tau* plus the per-pair scores that produced it.

    ``edge_source`` maps a pair to the weighted family of candidates within
    distance d* of its prediction; the default enumerates the pair's universe.
    """
    phi = as_fraction(phi)
    if not 0 <= phi <= 1:
        raise InputError(f"phi must lie in [0, 1], got {phi}")
    kappa = as_fraction(kappa)
    if edge_source is None:
        edge_source = lambda pair, d: _enumerated_candidates(pair, d, distance)
    etas: list[EtaScore] = []
    for pair in pairs:
        if distance(pair.prediction, pair.truth) > d_star:
            etas.append(EtaScore(Fraction(1), True))
            continue
        family = edge_source(pair, d_star)
        chain = nested_chain(family)
        etas.append(EtaScore(tau_threshold(chain, pair.truth, kappa), False))
    if not etas:
        return Fraction(1), ()
    ordered = sorted(e.value for e in etas)
    idx = quantile_index(phi, len(ordered))
    tau_star = Fraction(1) if idx > len(ordered) else ordered[idx - 1]
    return tau_star, tuple(etas)


def _enumerated_candidates(pair: LabeledPair, d_star: float, distance) -> WeightedHypergraph:
    """Uniform-weight family of universe hyperedges within d* of the prediction."""
    members = [
        (e.vertices, 1)
        for e in pair.universe.edges
        if distance(pair.prediction, e.vertices) <= d_star
    ]
    return WeightedHypergraph.build(pair.universe.n, members)


def calibrate(
    d1: Sequence[LabeledPair],
    d2: Sequence[LabeledPair],
    phi,
    delta=None,
    kappa=1,
    edge_source=None,
    distance: Callable[[frozenset[int], frozenset[int]], float] = distance_edge_symdiff,
) -> CalibrationState:
    """Run both stages.  delta defaults to 0.05 * phi."""
    phi = as_fraction(phi)
    delta = phi * Fraction(1, 20) if delta is None else as_fraction(delta)
    kappa = as_fraction(kappa)
    d_star = calibrate_stage1(d1, delta, distance)
    tau_star, etas = calibrate_stage2(d2, d_star, phi, kappa, edge_source, distance)
    return CalibrationState(d_star, tau_star, phi, delta, kappa, etas)


def predict(chain: NestedChain, state: CalibrationState) -> frozenset[int]:
    """Calibrated vertex set for a new context's candidate chain.

    Uses the boundary-inclusive reading of the residual rule: the smallest
    chain set whose residual is strictly below (1+kappa)(1-tau*)W, falling
    back to the top set when the bound is zero.  At the knife edge this sits
    one level above ``select``, which makes a truth scoring exactly tau*
    covered; scores are heavily tied there (every level-1 entry scores
    kappa/(1+kappa)), so the open-boundary rule would forfeit the conformal
    guarantee outright.
    """
    bound = (1 + state.kappa) * (1 - state.tau_star) * chain.total
    for index, r in enumerate(chain.residuals):
        if r < bound:
            return chain.sets[index]
    return chain.sets[-1]


@dataclass(frozen=True)
class FixedContextFit:
    vertex_set: frozenset[int]
    order: tuple[int, ...]           # full fixed vertex order over [0, n)
    prefix_len: int
    level_count: int                 # required covered count on the second half
    second_half_coverage: Fraction
    chain: NestedChain


def fixed_context_fit(
    samples: Sequence[frozenset[int]],
    phi,
    n_vertices: int,
) -> FixedContextFit:
    """Shortest adequate prefix of the first-half-driven vertex order.

    The first half of the samples builds the chain and the fixed order
    (chain blocks in order; inside a block, vertices sorted by how many
    still-uncovered first-half samples they complete, ties by ascending id;
    vertices outside the top set appended in ascending id).  The returned set
    is the shortest prefix whose second-half covered count reaches
    ceil(phi * (T2 + 1)); if that level exceeds T2 the full vertex set is
    returned.  Coverage of the prefix family is monotone, so this matches
    top-down deletion that stops when the level would be violated.
    """
    phi = as_fraction(phi)
    if not 0 <= phi <= 1:
        raise InputError(f"phi must lie in [0, 1], got {phi}")
    t = len(samples)
    if t < 2:
        raise InputError(f"need at least two samples, got {t}")
    t1 = t // 2
    first = [frozenset(s) for s in samples[:t1]]
    second = [frozenset(s) for s in samples[t1:]]
    for s in first + second:
        for v in s:
            if not 0 <= v < n_vertices:
                raise InputError(f"sample vertex {v} outside [0, {n_vertices})")
    h1 = WeightedHypergraph.build(n_vertices, [(s, 1) for s in first])
    chain = nested_chain(h1)
    order = _fixed_order(chain, first, n_vertices)
    level = quantile_index(phi, len(second))
    if level > len(second):
        full = frozenset(range(n_vertices))
        return FixedContextFit(full, order, n_vertices, level, Fraction(1), chain)
    if level <= 0:
        empty_cov = Fraction(sum(1 for s in second if not s), len(second))
        return FixedContextFit(frozenset(), order, 0, level, empty_cov, chain)
    pos = {v: i for i, v in enumerate(order)}
    last_needed = sorted(max((pos[v] for v in s), default=-1) for s in second)
    prefix_len = last_needed[level - 1] + 1
    prefix = frozenset(order[:prefix_len])
    covered = sum(1 for m in last_needed if m < prefix_len)
    return FixedContextFit(
        prefix, order, prefix_len, level, Fraction(covered, len(second)), chain
    )


def _fixed_order(
    chain: NestedChain, first: Sequence[frozenset[int]], n_vertices: int
) -> tuple[int, ...]:
    """Chain blocks in order; greedy first-half completion count inside each."""
    order: list[int] = []
    placed: set[int] = set()
    uncovered = [s for s in first if s]
    for j in range(1, len(chain.sets)):
        block = set(chain.sets[j] - chain.sets[j - 1])
        while block:
            best = min(
                block,
                key=lambda v: (-sum(1 for s in uncovered if v in s and s <= placed | {v}), v),
            )
            block.remove(best)
            placed.add(best)
            order.append(best)
            uncovered = [s for s in uncovered if not s <= placed]
    tail = sorted(set(range(n_vertices)) - placed)
    order.extend(tail)
    return tuple(order)
