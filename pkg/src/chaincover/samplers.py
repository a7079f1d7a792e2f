"""Exact uniform samplers over bounded-deviation structured outputs.

Each family counts its objects with an arbitrary-precision dynamic program
and then samples by walking the DP backwards with exactly proportional
integer draws, so the output distribution is uniform by construction:

* walks: s-t walks in a graph where the reference path's edges are directed
  forward at cost 0 and every other edge is undirected at cost 1; a walk is
  admissible when its total cost is at most the budget;
* itineraries: one activity per group, cost 1 per activity off the reference;
* subtrees: root-containing connected subtrees, cost 1 per node off the
  reference subtree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hypergraph import InputError, InvariantError
from .rng import choice_weighted

__all__ = [
    "WalkDPTable",
    "WalkSample",
    "GroupedDPTable",
    "TreeDPTable",
    "build_walk_table",
    "sample_walk",
    "build_group_table",
    "sample_itinerary",
    "build_tree_table",
    "sample_subtree",
    "sample_size",
]


# ---------------------------------------------------------------- walks


@dataclass(frozen=True)
class WalkDPTable:
    """Counts N[(u, k)] of cost-k u->t walks; absorbing target."""

    path: tuple[int, ...]
    other_edges: tuple[tuple[int, int], ...]
    budget: int
    nodes: tuple[int, ...]
    counts: dict[tuple[int, int], int]
    partition: int  # total admissible walks from s

    def moves(self, u: int) -> list[tuple[int, int, tuple[str, int]]]:
        """(successor, cost, edge key) triples leaving u; none leave t."""
        if u == self.path[-1]:
            return []
        out: list[tuple[int, int, tuple[str, int]]] = []
        for i in range(len(self.path) - 1):
            if self.path[i] == u:
                out.append((self.path[i + 1], 0, ("path", i)))
        for j, (a, b) in enumerate(self.other_edges):
            if a == u:
                out.append((b, 1, ("free", j)))
            elif b == u:
                out.append((a, 1, ("free", j)))
        return out

    def verify(self) -> None:
        """Re-derive every filled cell from its defining sum."""
        t = self.path[-1]
        for (u, k), value in self.counts.items():
            if u == t:
                expect = 1 if k == 0 else 0
            else:
                expect = sum(
                    self.counts.get((v, k - c), 0) for v, c, _ in self.moves(u) if k >= c
                )
            if value != expect:
                raise InvariantError(f"walk DP cell ({u},{k}) inconsistent: {value} != {expect}")
        if self.partition != sum(self.counts.get((self.path[0], k), 0) for k in range(self.budget + 1)):
            raise InvariantError("walk DP partition total inconsistent")


@dataclass(frozen=True)
class WalkSample:
    vertices: tuple[int, ...]
    edge_keys: tuple[tuple[str, int], ...]
    cost: int

    @property
    def edge_set(self) -> frozenset[tuple[str, int]]:
        return frozenset(self.edge_keys)


def build_walk_table(
    path: Sequence[int],
    other_edges: Sequence[tuple[int, int]],
    budget: int,
) -> WalkDPTable:
    path = tuple(path)
    if len(set(path)) != len(path) or not path:
        raise InputError("reference must be a nonempty simple path")
    if budget < 0:
        raise InputError(f"budget must be non-negative, got {budget}")
    seen = set()
    for a, b in other_edges:
        if a == b:
            raise InputError(f"self-loop on {a}")
        if frozenset((a, b)) in seen:
            raise InputError(f"duplicate edge {{{a},{b}}}")
        seen.add(frozenset((a, b)))
    nodes = tuple(sorted(set(path) | {v for e in other_edges for v in e}))
    table = WalkDPTable(path, tuple((a, b) for a, b in other_edges), budget, nodes, {}, 0)
    counts = table.counts
    t = path[-1]
    on_path = set(path)
    off_nodes = [u for u in nodes if u not in on_path]
    rev_path = [u for u in reversed(path) if u != t]
    for k in range(budget + 1):
        counts[(t, k)] = 1 if k == 0 else 0
        # off-path cells depend only on layer k-1; on-path cells additionally
        # depend on the same layer through the forward 0-cost edge, so they
        # are filled from the target backwards
        for u in off_nodes + rev_path:
            counts[(u, k)] = sum(
                counts.get((v, k - c), 0) for v, c, _ in table.moves(u) if k >= c
            )
    partition = sum(counts[(path[0], k)] for k in range(budget + 1))
    object.__setattr__(table, "partition", partition)
    return table


def sample_walk(table: WalkDPTable, gen: np.random.Generator) -> WalkSample:
    if table.partition <= 0:
        raise InputError("empty walk family")
    s = table.path[0]
    budgets = [table.counts[(s, k)] for k in range(table.budget + 1)]
    k = choice_weighted(gen, budgets)
    u = s
    vertices = [u]
    keys: list[tuple[str, int]] = []
    cost = 0
    t = table.path[-1]
    while u != t:
        options = [(v, c, key) for v, c, key in table.moves(u) if k >= c]
        weights = [table.counts.get((v, k - c), 0) for v, c, _ in options]
        v, c, key = options[choice_weighted(gen, weights)]
        k -= c
        cost += c
        u = v
        vertices.append(u)
        keys.append(key)
    return WalkSample(tuple(vertices), tuple(keys), cost)


# ---------------------------------------------------------------- itineraries


@dataclass(frozen=True)
class GroupedDPTable:
    groups: tuple[tuple[int, ...], ...]
    reference: tuple[int, ...]  # one member per group
    budget: int
    counts: tuple[tuple[int, ...], ...]  # counts[r][k], suffix groups r..R-1
    partition: int

    def verify(self) -> None:
        r_groups = len(self.groups)
        for r in range(r_groups + 1):
            for k in range(self.budget + 1):
                if r == r_groups:
                    expect = 1 if k == 0 else 0
                else:
                    expect = self.counts[r + 1][k]
                    if k >= 1:
                        expect += (len(self.groups[r]) - 1) * self.counts[r + 1][k - 1]
                if self.counts[r][k] != expect:
                    raise InvariantError(f"group DP cell ({r},{k}) inconsistent")
        if self.partition != sum(self.counts[0]):
            raise InvariantError("group DP partition total inconsistent")


def build_group_table(
    groups: Sequence[Sequence[int]],
    reference: Sequence[int],
    budget: int,
) -> GroupedDPTable:
    if budget < 0:
        raise InputError(f"budget must be non-negative, got {budget}")
    groups = tuple(tuple(g) for g in groups)
    reference = tuple(reference)
    if len(reference) != len(groups):
        raise InputError("reference needs exactly one activity per group")
    for r, g in enumerate(groups):
        if len(set(g)) != len(g) or not g:
            raise InputError(f"group {r} must be nonempty without repeats")
        if reference[r] not in g:
            raise InputError(f"reference activity {reference[r]} not in group {r}")
    r_groups = len(groups)
    counts = [[0] * (budget + 1) for _ in range(r_groups + 1)]
    counts[r_groups][0] = 1
    for r in range(r_groups - 1, -1, -1):
        for k in range(budget + 1):
            c = counts[r + 1][k]
            if k >= 1:
                c += (len(groups[r]) - 1) * counts[r + 1][k - 1]
            counts[r][k] = c
    return GroupedDPTable(
        groups, reference, budget, tuple(tuple(row) for row in counts), sum(counts[0])
    )


def sample_itinerary(table: GroupedDPTable, gen: np.random.Generator) -> tuple[int, ...]:
    if table.partition <= 0:
        raise InputError("empty itinerary family")
    k = choice_weighted(gen, list(table.counts[0]))
    picks: list[int] = []
    for r, group in enumerate(table.groups):
        stay = table.counts[r + 1][k]
        deviate = (len(group) - 1) * table.counts[r + 1][k - 1] if k >= 1 else 0
        if choice_weighted(gen, [stay, deviate]) == 0:
            picks.append(table.reference[r])
        else:
            others = [v for v in group if v != table.reference[r]]
            picks.append(others[choice_weighted(gen, [1] * len(others))])
            k -= 1
    return tuple(picks)


# ---------------------------------------------------------------- subtrees


@dataclass(frozen=True)
class TreeDPTable:
    parent: tuple[int, ...]  # parent[root] == root
    root: int
    reference: frozenset[int]  # root-containing subtree, cost-0 nodes
    budget: int
    children: tuple[tuple[int, ...], ...]
    counts: tuple[tuple[int, ...], ...]  # counts[u][k]
    partition: int

    def verify(self) -> None:
        for u in range(len(self.parent)):
            expect = _tree_row(u, self.children, self.reference, self.budget, self.counts)
            if tuple(self.counts[u]) != tuple(expect):
                raise InvariantError(f"tree DP row {u} inconsistent")
        if self.partition != sum(self.counts[self.root]):
            raise InvariantError("tree DP partition total inconsistent")


def _child_factor(row: Sequence[int]) -> list[int]:
    """Include-or-skip series for one child: skipping contributes the unit at 0."""
    f = list(row)
    f[0] += 1
    return f


def _convolve(a: Sequence[int], b: Sequence[int], cap: int) -> list[int]:
    out = [0] * (cap + 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if i + j <= cap and y:
                    out[i + j] += x * y
    return out


def _tree_row(
    u: int,
    children: Sequence[Sequence[int]],
    reference: frozenset[int],
    budget: int,
    counts: Sequence[Sequence[int]],
) -> list[int]:
    acc = [1] + [0] * budget
    for child in children[u]:
        acc = _convolve(acc, _child_factor(counts[child]), budget)
    w = 0 if u in reference else 1
    return [acc[k - w] if k >= w else 0 for k in range(budget + 1)]


def build_tree_table(
    parent: Sequence[int],
    root: int,
    reference: Sequence[int],
    budget: int,
) -> TreeDPTable:
    if budget < 0:
        raise InputError(f"budget must be non-negative, got {budget}")
    parent = tuple(parent)
    n = len(parent)
    if not 0 <= root < n or parent[root] != root:
        raise InputError("root must be its own parent")
    reference = frozenset(reference)
    if root not in reference:
        raise InputError("reference subtree must contain the root")
    for v in reference:
        if v != root and parent[v] not in reference:
            raise InputError(f"reference subtree disconnected at {v}")
    children: list[list[int]] = [[] for _ in range(n)]
    top_down: list[int] = [root]
    for v in range(n):
        if v != root:
            children[parent[v]].append(v)
    idx = 0
    while idx < len(top_down):
        top_down.extend(children[top_down[idx]])
        idx += 1
    if len(top_down) != n:
        raise InputError("parent array does not describe one tree")
    counts: list[tuple[int, ...]] = [()] * n
    for u in reversed(top_down):  # children before parents
        counts[u] = tuple(_tree_row(u, children, reference, budget, counts))
    return TreeDPTable(
        parent,
        root,
        reference,
        budget,
        tuple(tuple(c) for c in children),
        tuple(counts),
        sum(counts[root]),
    )


def sample_subtree(table: TreeDPTable, gen: np.random.Generator) -> frozenset[int]:
    if table.partition <= 0:
        raise InputError("empty subtree family")
    k = choice_weighted(gen, list(table.counts[table.root]))
    chosen: set[int] = set()

    def descend(u: int, k_u: int) -> None:
        chosen.add(u)
        k_rem = k_u - (0 if u in table.reference else 1)
        kids = table.children[u]
        # peel children left to right against suffix convolutions
        suffixes: list[list[int]] = [[1] + [0] * table.budget]
        for child in reversed(kids):
            suffixes.append(
                _convolve(_child_factor(table.counts[child]), suffixes[-1], table.budget)
            )
        suffixes.reverse()
        for i, child in enumerate(kids):
            factor = _child_factor(table.counts[child])
            weights = [
                factor[j] * suffixes[i + 1][k_rem - j] if j <= k_rem else 0
                for j in range(table.budget + 1)
            ]
            j = choice_weighted(gen, weights)
            k_rem -= j
            if j == 0:
                # unit at zero means "skip"; an included zero-cost subtree
                # carries counts[child][0] of the mass
                stay_out = 1
                stay_in = table.counts[child][0]
                if choice_weighted(gen, [stay_out, stay_in]) == 1:
                    descend(child, 0)
            else:
                descend(child, j)

    descend(table.root, k)
    return frozenset(chosen)


# ---------------------------------------------------------------- sizing


def sample_size(n_vertices: int, alpha: float, delta: float, c: float = 1.0) -> int:
    """Candidate-family sample budget sufficient for alpha-accurate coverage.

    ceil(c * (n + ln(1/delta)) / alpha^2); the class dimension is bounded by
    the vertex count.
    """
    if not 0 < alpha < 1 or not 0 < delta < 1:
        raise InputError("alpha and delta must lie in (0, 1)")
    return math.ceil(c * (n_vertices + math.log(1 / delta)) / alpha**2)
