from fractions import Fraction

import pytest

from chaincover import WeightedHypergraph


@pytest.fixture
def three_path_instance() -> WeightedHypergraph:
    """Eight vertices; three disjoint route bundles plus one isolated vertex.

    Bundle A = {0,1} and bundle B = {2,3} each carry mass 3/10; bundle
    C = {4,5,6} carries 2/5; vertex 7 is on no route.  Small enough to
    enumerate, rich enough to have two nontrivial chain levels and
    non-nested exhaustive optima across thresholds.
    """
    return WeightedHypergraph.build(
        8,
        [
            (frozenset({0, 1}), Fraction(3, 10)),
            (frozenset({2, 3}), Fraction(3, 10)),
            (frozenset({4, 5, 6}), Fraction(2, 5)),
        ],
    )


@pytest.fixture
def skewed_instance() -> WeightedHypergraph:
    """Ten vertices, nested edges with sharply uneven per-vertex value.

    Rounding the fractional cover and re-solving from scratch disagree
    here, which pins down that the two selection routes stay distinct.
    """
    return WeightedHypergraph.build(
        10,
        [
            (frozenset({0}), Fraction(1, 5)),
            (frozenset({0, 1, 2}), Fraction(3, 10)),
            (frozenset(range(10)), Fraction(1, 2)),
        ],
    )
