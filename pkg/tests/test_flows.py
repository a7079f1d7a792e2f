from fractions import Fraction

import numpy as np
import pytest

from chaincover import WeightedHypergraph
from chaincover.flows import LagrangianCutSolver

from oracles import mass_table, minimal_minimizer, phi_minimizers, random_hypergraph


@pytest.fixture
def pair_edge():
    return WeightedHypergraph.build(2, [({0, 1}, 1)])


def test_single_edge_below_breakpoint(pair_edge):
    res = LagrangianCutSolver(pair_edge).solve(Fraction(1))
    assert res.vertex_set == frozenset()
    assert res.phi == 0
    assert res.cut_value == 1  # lam * W with nothing captured


def test_single_edge_above_breakpoint(pair_edge):
    res = LagrangianCutSolver(pair_edge).solve(Fraction(3))
    assert res.vertex_set == frozenset({0, 1})
    assert res.phi == -1
    assert res.cut_value == 2


def test_single_edge_tie_goes_minimal(pair_edge):
    # at lam = 2 both the empty set and {0,1} score 0; minimal wins
    res = LagrangianCutSolver(pair_edge).solve(Fraction(2))
    assert res.vertex_set == frozenset()
    assert res.phi == 0


def test_lambda_zero_selects_empty(pair_edge):
    res = LagrangianCutSolver(pair_edge).solve(Fraction(0))
    assert res.vertex_set == frozenset()
    assert res.cut_value == 0


def test_negative_lambda_rejected(pair_edge):
    with pytest.raises(ValueError):
        LagrangianCutSolver(pair_edge).solve(Fraction(-1))


def test_unknown_route_rejected(pair_edge):
    with pytest.raises(ValueError):
        LagrangianCutSolver(pair_edge).solve(Fraction(1), method="bfs")


def test_no_network_edges_is_trivial():
    h = WeightedHypergraph.build(3, [({0, 1}, 0), (frozenset(), "1/2")])
    res = LagrangianCutSolver(h).solve(Fraction(4))
    assert res.route == "trivial"
    assert res.vertex_set == frozenset()
    # the vertexless mass is captured by every set, the empty one included
    assert res.phi == -4 * Fraction(1, 2)


def test_auto_gate_routes_large_capacities_to_dinic(pair_edge):
    solver = LagrangianCutSolver(pair_edge)
    assert solver.solve(Fraction(1)).route == "scipy"
    big = solver.solve(Fraction(2**33))
    assert big.route == "dinic"
    assert big.vertex_set == frozenset({0, 1})


def test_forced_routes_agree(pair_edge):
    solver = LagrangianCutSolver(pair_edge)
    for lam in (Fraction(1, 3), Fraction(2), Fraction(9, 4)):
        a = solver.solve(lam, method="scipy")
        b = solver.solve(lam, method="dinic")
        assert (a.vertex_set, a.cut_value, a.phi) == (b.vertex_set, b.cut_value, b.phi)


@pytest.mark.parametrize("seed", range(12))
def test_routes_and_oracle_agree_on_randoms(seed):
    rng = np.random.default_rng(1000 + seed)
    for _ in range(5):
        h = random_hypergraph(rng, 7, 9)
        solver = LagrangianCutSolver(h)
        table = mass_table(h)
        for lam in (Fraction(1, 2), Fraction(3, 2), Fraction(4), Fraction(22, 7)):
            want_phi, _, _ = phi_minimizers(h, lam, table)
            want_set = minimal_minimizer(h, lam, table)
            if not solver.edge_members:
                continue
            a = solver.solve(lam, method="scipy")
            b = solver.solve(lam, method="dinic")
            assert a.vertex_set == b.vertex_set == want_set
            assert a.phi == b.phi == want_phi
            assert a.cut_value == b.cut_value == want_phi + lam * h.total_weight


def test_zero_weight_edges_stay_out_of_network():
    h = WeightedHypergraph.build(4, [({0, 1}, 1), ({2, 3}, 0)])
    solver = LagrangianCutSolver(h)
    assert len(solver.edge_members) == 1
    res = solver.solve(Fraction(5))
    assert res.vertex_set == frozenset({0, 1})
