from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lp_vertex_max
from ricci_idleness.exactnum import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    Constraint,
    LinearProgram,
    as_rational,
    ceil,
    floor,
    is_integral,
    parse_rational,
    render,
    solve_lp,
    solve_lp_sequence,
)


class TestRationals:
    def test_render_drops_unit_denominator(self):
        assert render(F(3)) == "3"
        assert render(F(-6, 4)) == "-3/2"
        assert render(0) == "0"

    @given(st.fractions())
    def test_render_parse_round_trip(self, q):
        assert parse_rational(render(q)) == q

    @pytest.mark.parametrize("bad", ["", "1/", "a/2", "1.5", "  "])
    def test_parse_rejects_garbage(self, bad):
        with pytest.raises(ValueError):
            parse_rational(bad)

    def test_floats_and_bools_are_rejected(self):
        with pytest.raises(TypeError):
            as_rational(0.5)
        with pytest.raises(TypeError):
            as_rational(True)

    def test_numpy_and_text_inputs(self):
        assert as_rational(np.int64(4)) == 4
        assert as_rational(" 7/21 ") == F(1, 3)

    @given(st.fractions())
    def test_floor_ceil_bracket(self, q):
        lo, hi = floor(q), ceil(q)
        assert is_integral(lo) and is_integral(hi)
        assert lo <= q <= hi and hi - lo <= 1
        assert (lo == hi) == is_integral(q)


class TestSimplexExamples:
    def test_single_bound(self):
        sol = solve_lp(LinearProgram([1], [([1], "<=", 3)]))
        assert sol.optimal and sol.value == 3

    def test_two_variables(self):
        lp = LinearProgram([1, 1], [([1, 2], "<=", 6), ([3, 1], "<=", 8)])
        sol = solve_lp(lp)
        assert sol.value == 4 and sol.primal_point == (2, 2)
        assert sol.dual_values == (F(2, 5), F(1, 5))
        assert sol.dual_objective(lp) == sol.value
        assert sol.dual_feasible(lp)

    def test_minimisation_with_ge_rows(self):
        lp = LinearProgram([2, 3], [([1, 1], ">=", 2), ([1, 3], ">=", F(7, 2))], maximize=False)
        sol = solve_lp(lp)
        assert sol.value == F(19, 4) and sol.primal_point == (F(5, 4), F(3, 4))
        assert sol.dual_objective(lp) == sol.value and sol.dual_feasible(lp)

    def test_unbounded(self):
        assert solve_lp(LinearProgram([1, 0], [([0, 1], "<=", 1)])).status == UNBOUNDED

    def test_infeasible(self):
        lp = LinearProgram([1], [([1], "<=", 1), ([1], ">=", 2)])
        assert solve_lp(lp).status == INFEASIBLE

    def test_free_and_boxed_variables(self):
        lp = LinearProgram([1, -1], [([1, 1], "<=", 4)], bounds=[(None, None), (-2, 3)])
        sol = solve_lp(lp)
        assert sol.value == 8 and sol.primal_point == (6, -2)

    def test_upper_bound_only(self):
        lp = LinearProgram([-1], [], bounds=[(None, F(5, 2))], maximize=False)
        assert solve_lp(lp).value == F(-5, 2)

    def test_crossed_bounds_are_infeasible(self):
        assert solve_lp(LinearProgram([1], [], bounds=[(2, 1)])).status == INFEASIBLE

    def test_redundant_equalities(self):
        rows = [([1, 1], "=", 1), ([2, 2], "=", 2), ([1, 0], "<=", F(1, 3))]
        sol = solve_lp(LinearProgram([1, 2], rows, maximize=False))
        assert sol.value == F(5, 3) and sol.primal_point == (F(1, 3), F(2, 3))

    def test_degenerate_cycling_example(self):
        # Beale's example cycles under the textbook rule; Bland's rule terminates
        obj = [F(3, 4), -150, F(1, 50), -6]
        rows = [
            ([F(1, 4), -60, F(-1, 25), 9], "<=", 0),
            ([F(1, 2), -90, F(-1, 50), 3], "<=", 0),
            ([0, 0, 1, 0], "<=", 1),
        ]
        assert solve_lp(LinearProgram(obj, rows)).value == F(1, 20)

    def test_huge_coefficients_switch_to_big_integers(self):
        big = 10**30
        lp = LinearProgram([big, 1], [([big, 1], "<=", big + 7), ([1, 0], "<=", 1)])
        sol = solve_lp(lp)
        assert sol.value == big + 7

    def test_width_mismatch_rejected(self):
        with pytest.raises(ValueError):
            LinearProgram([1, 2], [([1], "<=", 1)])
        with pytest.raises(ValueError):
            Constraint((1,), "<", 1)

    def test_sequence_matches_fresh_solves(self):
        lp = LinearProgram([2, 3], [([1, 1], ">=", 2), ([1, 3], ">=", F(7, 2))], maximize=False)
        family = [[2, F(7, 2)], [3, F(7, 2)], [1, 5], [F(1, 3), -1]]
        for rhs, sol in zip(family, solve_lp_sequence(lp, family)):
            fresh = solve_lp(lp.with_rhs(rhs))
            assert sol.status == fresh.status
            assert sol.value == fresh.value


_coef = st.integers(-4, 4)


@st.composite
def small_lps(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(0, 3))
    obj = [draw(_coef) for _ in range(n)]
    rows = []
    for _ in range(m):
        a = [F(draw(_coef), draw(st.integers(1, 3))) for _ in range(n)]
        rel = draw(st.sampled_from(["<=", ">=", "="]))
        rows.append((a, rel, F(draw(st.integers(-6, 6)), draw(st.integers(1, 3)))))
    box = [(draw(st.integers(-3, 0)), draw(st.integers(0, 3))) for _ in range(n)]
    return obj, rows, box


@settings(max_examples=150, deadline=None)
@given(small_lps())
def test_simplex_agrees_with_vertex_enumeration(case):
    obj, rows, box = case
    sol = solve_lp(LinearProgram(obj, rows, bounds=box))
    expected = lp_vertex_max(obj, rows, box)
    if expected is None:
        assert sol.status == INFEASIBLE
    else:
        assert sol.status == OPTIMAL and sol.value == expected
        lp = LinearProgram(obj, rows, bounds=box)
        assert sol.dual_objective(lp) == sol.value
        assert sol.dual_feasible(lp)


@settings(max_examples=60, deadline=None)
@given(small_lps(), st.lists(st.lists(st.fractions(-5, 5, max_denominator=4), min_size=3, max_size=3), min_size=1, max_size=5))
def test_warm_started_family_agrees_with_fresh(case, rhs_family):
    obj, rows, box = case
    lp = LinearProgram(obj, rows, bounds=box)
    family = [r[: len(rows)] for r in rhs_family]
    for rhs, sol in zip(family, solve_lp_sequence(lp, family)):
        fresh = solve_lp(lp.with_rhs(rhs))
        assert sol.status == fresh.status
        if fresh.optimal:
            assert sol.value == fresh.value
