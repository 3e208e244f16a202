from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import random_connected
from oracles import flow_w1, integer_potentials
from ricci_idleness.graphkit import GraphError, cycle, distances_from, from_edge_list, path, petersen
from ricci_idleness.transport import (
    Potential,
    ProbMeasure,
    TransportPlan,
    ceil_potential,
    check_slackness,
    dual_potential,
    edge_measures,
    essential_pairs,
    floor_potential,
    has_diagonal_property,
    integerize_potential,
    lipschitz_check,
    maximize_over_lipschitz,
    normalize_plan,
    optimal_potential,
    vertex_measure,
    w1_edge_profile,
    w1_primal,
)


class TestMeasures:
    def test_lazy_walk_masses(self):
        mu = vertex_measure(cycle(5), 0, F(1, 3))
        assert mu.as_dict() == {0: F(1, 3), 1: F(1, 3), 4: F(1, 3)}

    def test_endpoints(self):
        assert vertex_measure(cycle(4), 0, 0).vertices == (1, 3)
        assert vertex_measure(cycle(4), 0, 1).as_dict() == {0: 1}

    def test_rejects_bad_idleness_and_isolated_vertex(self):
        with pytest.raises(ValueError):
            vertex_measure(cycle(4), 0, F(3, 2))
        with pytest.raises(GraphError):
            vertex_measure(from_edge_list([(0, 1)], 3), 2, F(1, 2))

    def test_measure_validation(self):
        with pytest.raises(ValueError):
            ProbMeasure(((0, F(1, 2)), (1, F(1, 3))))
        with pytest.raises(ValueError):
            ProbMeasure(((1, F(1, 2)), (0, F(1, 2))))
        with pytest.raises(ValueError):
            ProbMeasure(((0, F(3, 2)), (1, F(-1, 2))))
        assert ProbMeasure.from_masses({2: "1/4", 0: "3/4", 5: 0}).vertices == (0, 2)

    def test_plan_marginals_validated(self):
        a = ProbMeasure(((0, 1),))
        b = ProbMeasure(((1, 1),))
        with pytest.raises(ValueError):
            TransportPlan(((0, 1, F(1, 2)),), a, b)


class TestPrimal:
    def test_identical_measures_cost_nothing(self):
        mu1, mu2 = edge_measures(path(2), 0, 1, F(1, 2))
        assert w1_primal(path(2), mu1, mu2)[0] == 0

    def test_c4_at_zero(self):
        value, plan = w1_primal(cycle(4), *edge_measures(cycle(4), 0, 1, 0))
        assert value == 1 and plan.cost(cycle(4)) == 1

    def test_disconnected_support_is_an_error(self):
        g = from_edge_list([(0, 1), (2, 3)])
        with pytest.raises(GraphError):
            w1_primal(g, vertex_measure(g, 0, 1), vertex_measure(g, 2, 1))

    def test_profile_matches_single_solves(self):
        g = petersen()
        ps = [0, F(1, 7), F(1, 4), F(1, 3), F(9, 10), 1]
        for p, (value, plan) in zip(ps, w1_edge_profile(g, 0, 1, ps)):
            assert value == w1_primal(g, *edge_measures(g, 0, 1, p))[0]
            assert plan.cost(g) == value


@st.composite
def graph_edge_p(draw, max_n=8):
    seed = draw(st.integers(0, 10**6))
    import random

    g = random_connected(random.Random(seed), max_n)
    u, v = draw(st.sampled_from(g.edges()))
    p = draw(st.fractions(0, 1, max_denominator=30))
    return g, u, v, p


@settings(max_examples=80, deadline=None)
@given(graph_edge_p())
def test_primal_matches_network_simplex(case):
    g, u, v, p = case
    mu1, mu2 = edge_measures(g, u, v, p)
    value, plan = w1_primal(g, mu1, mu2)
    assert value == flow_w1(g, mu1, mu2) == plan.cost(g)


@settings(max_examples=60, deadline=None)
@given(graph_edge_p())
def test_duality_slackness_and_integerization(case):
    g, u, v, p = case
    mu1, mu2 = edge_measures(g, u, v, p)
    value, plan = w1_primal(g, mu1, mu2)
    phi = optimal_potential(g, mu1, mu2)
    assert phi.dual_value(mu1, mu2) == value
    assert lipschitz_check(g, phi)
    assert check_slackness(g, plan, phi)
    ip = integerize_potential(g, phi, mu1, mu2)
    assert ip.is_integral() and ip.dual_value(mu1, mu2) == value
    normal = normalize_plan(g, plan)
    assert has_diagonal_property(normal) and normal.cost(g) == value


def test_integer_potentials_of_c4_attain_w1():
    g = cycle(4)
    for p in (0, F(1, 5), F(1, 3), F(1, 2), F(4, 5)):
        mu1, mu2 = edge_measures(g, 0, 1, p)
        value, _ = w1_primal(g, mu1, mu2)
        domain = sorted(set(mu1.vertices) | set(mu2.vertices))
        best = max(Potential(phi).dual_value(mu1, mu2) for phi in integer_potentials(g, domain, domain[0], 2))
        assert best == value


def test_non_optimal_potential_is_rejected():
    g = cycle(4)
    mu1, mu2 = edge_measures(g, 0, 1, 0)
    zero = Potential({w: 0 for w in range(4)})
    with pytest.raises(ValueError):
        integerize_potential(g, zero, mu1, mu2)


def test_pin_outside_support_is_rejected():
    g = cycle(6)
    mu1, mu2 = edge_measures(g, 0, 1, F(1, 2))
    with pytest.raises(ValueError):
        optimal_potential(g, mu1, mu2, pin=4)


def test_dual_potential_value():
    g = cycle(5)
    mu1, mu2 = edge_measures(g, 0, 1, F(1, 3))
    value, phi = dual_potential(g, mu1, mu2, pin=1)
    assert value == F(2, 3) and phi[1] == 0


def _min_of_cones(g, centres, offsets):
    # a minimum of 1-Lipschitz cones is 1-Lipschitz
    dist = {c: distances_from(g, c) for c in centres}
    return Potential({v: min(o + dist[c][v] for c, o in zip(centres, offsets)) for v in range(g.vertex_count)})


@settings(max_examples=80, deadline=None)
@given(
    st.integers(0, 10**6),
    st.lists(st.fractions(-3, 3, max_denominator=7), min_size=1, max_size=3),
)
def test_floor_and_ceil_stay_lipschitz(seed, offsets):
    import random

    rng = random.Random(seed)
    g = random_connected(rng, 9)
    centres = [rng.randrange(g.vertex_count) for _ in offsets]
    phi = _min_of_cones(g, centres, offsets)
    assert lipschitz_check(g, phi)
    assert lipschitz_check(g, floor_potential(phi))
    assert lipschitz_check(g, ceil_potential(phi))


class TestPlans:
    def setup_method(self):
        self.g = path(3)
        self.mu1 = ProbMeasure(((0, F(1, 2)), (1, F(1, 2))))
        self.mu2 = ProbMeasure(((1, F(1, 2)), (2, F(1, 2))))

    def test_rerouting_restores_the_diagonal(self):
        shifted = TransportPlan(((0, 1, F(1, 2)), (1, 2, F(1, 2))), self.mu1, self.mu2)
        assert not has_diagonal_property(shifted)
        normal = normalize_plan(self.g, shifted)
        assert normal.entries == ((0, 2, F(1, 2)), (1, 1, F(1, 2)))
        assert normal.cost(self.g) == shifted.cost(self.g) == 1

    def test_slackness_detects_a_gap(self):
        plan = TransportPlan(((0, 2, F(1, 2)), (1, 1, F(1, 2))), self.mu1, self.mu2)
        assert check_slackness(self.g, plan, Potential({0: 2, 1: 1, 2: 0}))
        assert not check_slackness(self.g, plan, Potential({0: 1, 1: 1, 2: 0}))
        with pytest.raises(KeyError):
            check_slackness(self.g, plan, Potential({0: 2, 1: 1}))


def test_essential_pairs_drop_geodesic_interior():
    pairs = essential_pairs(path(3), [0, 1, 2])
    assert (0, 2) not in pairs and (0, 1) in pairs and (1, 0) in pairs


def test_lipschitz_maximisation_with_pins():
    value, phi = maximize_over_lipschitz(path(4), range(4), {3: 1}, {0: 0})
    assert value == 3 and phi[3] == 3
    with pytest.raises(ValueError):
        maximize_over_lipschitz(path(4), range(4), {}, {0: 0, 1: 5})
