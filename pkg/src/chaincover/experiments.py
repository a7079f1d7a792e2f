"""Synthetic generators and the method-comparison harness.

Three families: grid routing (weighted shortest paths plus a fixed bypass
route), trip planning (one activity per type, planted high-probability core),
and the adversarial long-path-versus-parallel-edges instance.  All draws are
stream-split per (seed, split, sample index, purpose), so regenerating with
the same seed is bit-identical and train/test splits never share a stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .baselines import forward_greedy, reverse_greedy
from .chain import nested_chain
from .hypergraph import InputError, WeightedHypergraph, as_fraction
from .rng import stream

__all__ = [
    "GridRoutingConfig",
    "TripPlanConfig",
    "GridData",
    "TripData",
    "ResultRow",
    "default_phi_grid",
    "gen_grid_routes",
    "gen_trip_samples",
    "gen_adversarial",
    "chain_cover",
    "run_comparison",
]

_TRAIN, _TEST = 0, 1


def default_phi_grid() -> tuple[Fraction, ...]:
    """0.05-step coverage grid spanning (0, 1]."""
    return tuple(Fraction(j, 20) for j in range(1, 21))


# ---------------------------------------------------------------- grid routing


@dataclass(frozen=True)
class GridRoutingConfig:
    side: int = 6                 # nodes per row/column
    bypass_len: int = 20          # fresh edge ids forming the fixed bypass route
    bypass_share: float = 0.15
    weight_low: float = 0.1
    weight_high: float = 2.0
    n_train: int = 50
    n_test: int = 50

    def __post_init__(self):
        if self.side < 2:
            raise InputError(f"grid needs side >= 2, got {self.side}")
        if not 0 <= self.bypass_share <= 1:
            raise InputError(f"bypass share must lie in [0, 1], got {self.bypass_share}")

    @property
    def n_grid_edges(self) -> int:
        return 2 * self.side * (self.side - 1)

    @property
    def n_vertices(self) -> int:
        return self.n_grid_edges + self.bypass_len


@dataclass(frozen=True)
class GridData:
    config: GridRoutingConfig
    seed: int
    n: int
    train: tuple[frozenset[int], ...]
    test: tuple[frozenset[int], ...]
    bypass: frozenset[int]


def _edge_id_right(cfg: GridRoutingConfig, i: int, j: int) -> int:
    return i * (cfg.side - 1) + j


def _edge_id_down(cfg: GridRoutingConfig, i: int, j: int) -> int:
    return cfg.side * (cfg.side - 1) + i * cfg.side + j


def _shortest_monotone_path(cfg: GridRoutingConfig, weights) -> frozenset[int]:
    """Min-weight right/down path, ties by lexicographically smallest id sequence."""
    side = cfg.side
    best: dict[tuple[int, int], tuple[float, tuple[int, ...]]] = {(0, 0): (0.0, ())}
    for i in range(side):
        for j in range(side):
            if (i, j) == (0, 0):
                continue
            cands = []
            if j > 0:
                d, seq = best[(i, j - 1)]
                e = _edge_id_right(cfg, i, j - 1)
                cands.append((d + weights[e], seq + (e,)))
            if i > 0:
                d, seq = best[(i - 1, j)]
                e = _edge_id_down(cfg, i - 1, j)
                cands.append((d + weights[e], seq + (e,)))
            best[(i, j)] = min(cands)
    return frozenset(best[(side - 1, side - 1)][1])


def _grid_sample(cfg: GridRoutingConfig, seed: int, tag: int, index: int,
                 bypass: frozenset[int]) -> frozenset[int]:
    if stream(seed, tag, index, 0).random() < cfg.bypass_share:
        return bypass
    weights = stream(seed, tag, index, 1).uniform(
        cfg.weight_low, cfg.weight_high, size=cfg.n_grid_edges
    )
    return _shortest_monotone_path(cfg, weights)


def gen_grid_routes(cfg: GridRoutingConfig, seed: int) -> GridData:
    bypass = frozenset(range(cfg.n_grid_edges, cfg.n_vertices))
    train = tuple(_grid_sample(cfg, seed, _TRAIN, s, bypass) for s in range(cfg.n_train))
    test = tuple(_grid_sample(cfg, seed, _TEST, s, bypass) for s in range(cfg.n_test))
    return GridData(cfg, seed, cfg.n_vertices, train, test, bypass)


# ---------------------------------------------------------------- trip planning


@dataclass(frozen=True)
class TripPlanConfig:
    groups: int = 5
    group_size: int = 10
    core_density: float = 0.4     # fraction of each group planted as core
    core_mass: float = 0.8        # probability of a pure-core itinerary
    n_train: int = 100
    n_test: int = 100

    def __post_init__(self):
        if not 0 < self.core_density <= 1:
            raise InputError(f"core density must lie in (0, 1], got {self.core_density}")
        if not 0 < self.core_mass <= 1:
            raise InputError(f"core mass must lie in (0, 1], got {self.core_mass}")

    @property
    def core_per_group(self) -> int:
        return math.ceil(self.core_density * self.group_size)

    @property
    def per_group_core_prob(self) -> float:
        return self.core_mass ** (1.0 / self.groups)

    @property
    def n_vertices(self) -> int:
        return self.groups * self.group_size


@dataclass(frozen=True)
class TripData:
    config: TripPlanConfig
    seed: int
    n: int
    train: tuple[frozenset[int], ...]
    test: tuple[frozenset[int], ...]
    core: frozenset[int]
    degenerate_complement: bool  # complement draws fell back to the core


def _trip_sample(cfg: TripPlanConfig, seed: int, tag: int, index: int) -> tuple[frozenset[int], bool]:
    p = cfg.per_group_core_prob
    c = cfg.core_per_group
    picks = []
    fell_back = False
    for g in range(cfg.groups):
        base = g * cfg.group_size
        take_core = stream(seed, tag, index, g, 0).random() < p
        idx_gen = stream(seed, tag, index, g, 1)
        if take_core or c == cfg.group_size:
            fell_back = fell_back or (not take_core)
            picks.append(base + int(idx_gen.integers(0, c)))
        else:
            picks.append(base + c + int(idx_gen.integers(0, cfg.group_size - c)))
    return frozenset(picks), fell_back


def gen_trip_samples(cfg: TripPlanConfig, seed: int) -> TripData:
    core = frozenset(
        g * cfg.group_size + a for g in range(cfg.groups) for a in range(cfg.core_per_group)
    )
    degenerate = False
    train = []
    for s in range(cfg.n_train):
        sample, fb = _trip_sample(cfg, seed, _TRAIN, s)
        degenerate = degenerate or fb
        train.append(sample)
    test = []
    for s in range(cfg.n_test):
        sample, fb = _trip_sample(cfg, seed, _TEST, s)
        degenerate = degenerate or fb
        test.append(sample)
    return TripData(cfg, seed, cfg.n_vertices, tuple(train), tuple(test), core, degenerate)


# ---------------------------------------------------------------- adversarial


def gen_adversarial(a: int, b: int, eps) -> WeightedHypergraph:
    """Long path (vertices 0..a-1, mass eps) plus b singletons of mass (1-eps)/b.

    Singletons take the high ids a..a+b-1 so that count-based peeling with
    descending-id ties reaches them first.
    """
    if not a > b >= 1:
        raise InputError(f"need a > b >= 1, got a={a}, b={b}")
    eps = as_fraction(eps)
    if not 0 < eps < 1:
        raise InputError(f"eps must lie in (0, 1), got {eps}")
    edges: list[tuple[list[int], Fraction]] = [(list(range(a)), eps)]
    for i in range(b):
        edges.append(([a + i], (1 - eps) / b))
    return WeightedHypergraph.build(a + b, edges)


# ---------------------------------------------------------------- comparison


@dataclass(frozen=True)
class ResultRow:
    method: str
    phi: Fraction
    size: int
    coverage: Fraction
    seed: int


def chain_cover(
    n: int,
    train: Sequence[frozenset[int]],
    test: Sequence[frozenset[int]],
    phi_grid: Sequence,
) -> dict[Fraction, tuple[frozenset[int], Fraction]]:
    """Smallest chain set reaching each target coverage on the held-out samples.

    The chain is fit on the training multiset; if even its top set
    under-covers, remaining vertices are appended in ascending id.
    """
    if not test:
        raise InputError("evaluation sample set must be nonempty")
    h = WeightedHypergraph.build(n, [(s, 1) for s in train])
    ch = nested_chain(h)
    covered = [sum(1 for s in test if s <= k) for k in ch.sets]
    out: dict[Fraction, tuple[frozenset[int], Fraction]] = {}
    aug_order = sorted(set(range(n)) - ch.sets[-1])
    for raw in phi_grid:
        phi = as_fraction(raw)
        if not 0 <= phi <= 1:
            raise InputError(f"phi must lie in [0, 1], got {phi}")
        need = math.ceil(phi * len(test))
        hit = next((j for j, c in enumerate(covered) if c >= need), None)
        if hit is not None:
            out[phi] = (ch.sets[hit], Fraction(covered[hit], len(test)))
            continue
        grown = set(ch.sets[-1])
        count = covered[-1]
        for v in aug_order:
            if count >= need:
                break
            grown.add(v)
            count = sum(1 for s in test if s <= grown)
        out[phi] = (frozenset(grown), Fraction(count, len(test)))
    return out


def run_comparison(
    n: int,
    train: Sequence[frozenset[int]],
    test: Sequence[frozenset[int]],
    phi_grid: Sequence,
    methods: Sequence[str],
    seed: int,
) -> list[ResultRow]:
    phis = [as_fraction(p) for p in phi_grid]
    known = {"chain", "forward_greedy", "reverse_greedy"}
    bad = set(methods) - known
    if bad:
        raise InputError(f"unknown methods {sorted(bad)}; pick from {sorted(known)}")
    rows: list[ResultRow] = []
    if "chain" in methods:
        for phi, (k, cov) in chain_cover(n, train, test, phis).items():
            rows.append(ResultRow("chain", phi, len(k), cov, seed))
    if "forward_greedy" in methods:
        results, _ = forward_greedy(train, test, phis)
        for phi, res in results.items():
            rows.append(ResultRow("forward_greedy", phi, len(res.vertex_set), res.coverage, seed))
    if "reverse_greedy" in methods:
        results, _ = reverse_greedy(train, test, phis, n)
        for phi, res in results.items():
            rows.append(ResultRow("reverse_greedy", phi, len(res.vertex_set), res.coverage, seed))
    rows.sort(key=lambda r: (r.method, r.phi, r.seed))
    return rows
