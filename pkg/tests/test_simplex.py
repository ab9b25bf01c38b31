import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pathforge.lp import LinearProgram
from pathforge.simplex import (INFEASIBLE, OPTIMAL, UNBOUNDED, Tolerances, check_solution,
                               dual_objective, shadow_price, solve, verify_farkas)

from oracles import vertex_optimum


def make_lp(A, b, senses, c, lb, ub):
    lp = LinearProgram("rand")
    m, n = np.shape(A)
    for j in range(n):
        lp.add_column(f"x{j}", lb[j], ub[j], c[j])
    for i in range(m):
        lp.add_row(f"r{i}", {j: A[i][j] for j in range(n)}, senses[i], b[i])
    return lp


def random_lp(rng, max_cols=6, max_rows=5, box=10.0):
    n = int(rng.integers(1, max_cols + 1))
    m = int(rng.integers(1, max_rows + 1))
    A = rng.integers(-5, 6, (m, n)).astype(float)
    b = rng.integers(-10, 11, m).astype(float)
    c = rng.integers(-5, 6, n).astype(float)
    senses = list(rng.choice(["<=", ">=", "="], m, p=[0.5, 0.3, 0.2]))
    lb = np.where(rng.random(n) < 0.2, -box, 0.0)
    ub = np.full(n, box)
    return A, b, senses, c, lb, ub


def assert_certified(lp, sol):
    """Optimal solutions satisfy the KKT conditions; others carry a certificate."""
    if sol.status == OPTIMAL:
        ch = check_solution(lp, sol)
        assert ch["row_violation"] <= 1e-9
        assert ch["bound_violation"] <= 1e-9
        assert ch["dual_violation"] <= 1e-7
        assert ch["complementary_slackness"] <= 1e-7
        assert ch["relative_gap"] <= 1e-6
    elif sol.status == INFEASIBLE:
        assert verify_farkas(lp, sol.farkas) > 1e-9


class TestSmall:
    def test_one_dimensional(self):
        lp = LinearProgram()
        lp.add_column("x", cost=-1.0)
        lp.add_row("cap", {"x": 1.0}, "<=", 5.0)
        sol = solve(lp)
        assert sol.status == OPTIMAL
        assert sol.value("x") == pytest.approx(5.0)
        assert sol.objective == pytest.approx(-5.0)
        # relaxing the cap by one saves one unit of cost
        assert sol.row_dual("cap") == pytest.approx(1.0)

    def test_hand_solution(self):
        lp = LinearProgram()
        lp.add_column("x", cost=1.0)
        lp.add_column("y", cost=1.0)
        lp.add_row("sum", {"x": 1, "y": 1}, ">=", 2)
        lp.add_row("eq", {"x": 1, "y": -1}, "=", 0)
        sol = solve(lp)
        assert (sol.value("x"), sol.value("y")) == (pytest.approx(1.0), pytest.approx(1.0))
        assert sol.objective == pytest.approx(2.0)
        # tightening the >= row by one costs one
        assert sol.row_dual("sum") == pytest.approx(-1.0)

    def test_nonbinding_shadow_price_zero(self):
        lp = LinearProgram()
        lp.add_column("x", cost=1.0)
        lp.add_row("need", {"x": 1}, ">=", 1)
        lp.add_row("cap", {"x": 1}, "<=", 10)
        sol = solve(lp)
        assert shadow_price(sol, "cap") == 0.0

    def test_shadow_price_needs_optimal(self):
        lp = LinearProgram()
        lp.add_column("x")
        lp.add_row("r", {"x": 1}, "<=", -1)
        with pytest.raises(ValueError):
            shadow_price(solve(lp), "r")

    def test_objective_offset(self):
        lp = LinearProgram()
        lp.add_column("x", 1.0, 2.0, 3.0)
        lp.objective_offset = 10.0
        assert solve(lp).objective == pytest.approx(13.0)

    def test_free_and_negative_columns(self):
        lp = LinearProgram()
        lp.add_column("f", -math.inf, math.inf, 1.0)
        lp.add_column("n", -math.inf, -2.0, -1.0)
        lp.add_row("r", {"f": 1, "n": 1}, ">=", -5)
        sol = solve(lp)
        assert sol.status == OPTIMAL
        assert sol.value("n") == pytest.approx(-2.0)
        assert sol.value("f") == pytest.approx(-3.0)
        assert_certified(lp, sol)

    def test_empty_problem(self):
        sol = solve(LinearProgram())
        assert sol.status == OPTIMAL and sol.objective == 0.0

    def test_empty_row_infeasible(self):
        lp = LinearProgram()
        lp.add_column("x")
        lp.add_row("empty", {}, "=", 3.0)
        sol = solve(lp)
        assert sol.status == INFEASIBLE
        assert verify_farkas(lp, sol.farkas) > 0

    def test_infeasible_certificate(self):
        lp = LinearProgram()
        lp.add_column("x", 0, 4)
        lp.add_column("y", 0, 4)
        lp.add_row("a", {"x": 1, "y": 1}, ">=", 10)
        sol = solve(lp)
        assert sol.status == INFEASIBLE
        assert verify_farkas(lp, sol.farkas) == pytest.approx(2.0 * abs(sol.farkas[0]))

    def test_unbounded_ray(self):
        lp = LinearProgram()
        lp.add_column("x", cost=-1.0)
        lp.add_column("y", cost=0.0)
        lp.add_row("r", {"x": 1, "y": -1}, "<=", 1)
        sol = solve(lp)
        assert sol.status == UNBOUNDED
        A = lp.matrix().toarray()
        c = np.array(lp.col_cost)
        assert c @ sol.ray < 0
        assert A[0] @ sol.ray <= 1e-12
        assert np.all(sol.ray >= -1e-12)

    def test_beale_cycling_example(self):
        # classic degenerate problem on which textbook Dantzig pricing cycles
        lp = LinearProgram()
        for j, cj in enumerate([-0.75, 150.0, -0.02, 6.0]):
            lp.add_column(f"x{j}", cost=cj)
        lp.add_row("r1", {0: 0.25, 1: -60, 2: -0.04, 3: 9}, "<=", 0)
        lp.add_row("r2", {0: 0.5, 1: -90, 2: -0.02, 3: 3}, "<=", 0)
        lp.add_row("r3", {2: 1}, "<=", 1)
        sol = solve(lp)
        assert sol.status == OPTIMAL
        assert sol.objective == pytest.approx(-0.05)
        assert_certified(lp, sol)

    def test_redundant_equalities(self):
        lp = LinearProgram()
        lp.add_column("x", cost=1.0)
        lp.add_column("y", cost=2.0)
        lp.add_row("a", {"x": 1, "y": 1}, "=", 3)
        lp.add_row("b", {"x": 2, "y": 2}, "=", 6)
        sol = solve(lp)
        assert sol.objective == pytest.approx(3.0)
        assert_certified(lp, sol)

    def test_invalid_lp_rejected(self):
        lp = LinearProgram()
        lp.add_column("x", cost=math.nan)
        with pytest.raises(ValueError):
            solve(lp)


class TestAgainstVertexEnumeration:
    def test_seeded_batch(self):
        rng = np.random.default_rng(20240)
        statuses = {}
        for _ in range(200):
            A, b, senses, c, lb, ub = random_lp(rng)
            lp = make_lp(A, b, senses, c, lb, ub)
            sol = solve(lp)
            best = vertex_optimum(A, b, senses, lb, ub, c)
            statuses[sol.status] = statuses.get(sol.status, 0) + 1
            if best is None:
                assert sol.status == INFEASIBLE
            else:
                assert sol.status == OPTIMAL
                assert sol.objective == pytest.approx(best, abs=1e-8, rel=1e-10)
            assert_certified(lp, sol)
        # the generator exercises both outcomes
        assert statuses.get(OPTIMAL, 0) > 50 and statuses.get(INFEASIBLE, 0) > 10

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_property(self, seed):
        rng = np.random.default_rng(seed)
        A, b, senses, c, lb, ub = random_lp(rng, max_cols=4, max_rows=4)
        lp = make_lp(A, b, senses, c, lb, ub)
        sol = solve(lp)
        best = vertex_optimum(A, b, senses, lb, ub, c)
        if best is None:
            assert sol.status == INFEASIBLE
        else:
            assert sol.objective == pytest.approx(best, abs=1e-8, rel=1e-10)
        assert_certified(lp, sol)


class TestDuals:
    def test_sensitivity_matches_dual(self):
        # perturb each binding row and compare the objective change with the dual
        rng = np.random.default_rng(7)
        checked = 0
        for _ in range(60):
            A, b, senses, c, lb, ub = random_lp(rng)
            lp = make_lp(A, b, senses, c, lb, ub)
            sol = solve(lp)
            if sol.status != OPTIMAL:
                continue
            for i in range(len(b)):
                h = 1e-4
                b2 = b.copy()
                b2[i] += h
                s2 = solve(make_lp(A, b2, senses, c, lb, ub))
                b3 = b.copy()
                b3[i] -= h
                s3 = solve(make_lp(A, b3, senses, c, lb, ub))
                if s2.status != OPTIMAL or s3.status != OPTIMAL:
                    continue
                up = (sol.objective - s2.objective) / h
                down = (s3.objective - sol.objective) / h
                if abs(up - down) > 1e-6:
                    continue       # degenerate: dual not unique at this rhs
                assert sol.dual[i] == pytest.approx(up, abs=1e-6)
                checked += 1
        assert checked > 50

    def test_dual_objective_equals_primal(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            lp = make_lp(*random_lp(rng))
            sol = solve(lp)
            if sol.status == OPTIMAL:
                assert dual_objective(lp, sol) == pytest.approx(sol.objective, abs=1e-7)

    def test_less_equal_duals_nonnegative(self):
        rng = np.random.default_rng(13)
        for _ in range(80):
            A, b, senses, c, lb, ub = random_lp(rng)
            lp = make_lp(A, b, senses, c, lb, ub)
            sol = solve(lp)
            if sol.status != OPTIMAL:
                continue
            for i, s in enumerate(senses):
                if s == "<=":
                    assert sol.dual[i] >= -1e-9
                elif s == ">=":
                    assert sol.dual[i] <= 1e-9


class TestTolerances:
    @pytest.mark.parametrize("interval", [5, 30, 200])
    def test_refactor_interval_does_not_change_answer(self, interval):
        rng = np.random.default_rng(3)
        tol = Tolerances(refactor_interval=interval)
        for _ in range(30):
            A, b, senses, c, lb, ub = random_lp(rng)
            lp = make_lp(A, b, senses, c, lb, ub)
            a, ref = solve(lp, tol), solve(lp)
            assert a.status == ref.status
            if a.status == OPTIMAL:
                assert a.objective == pytest.approx(ref.objective, abs=1e-9)

    def test_unscaled(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            A, b, senses, c, lb, ub = random_lp(rng)
            lp = make_lp(A, b, senses, c, lb, ub)
            a, ref = solve(lp, Tolerances(scale=False)), solve(lp)
            assert a.status == ref.status
            if a.status == OPTIMAL:
                assert a.objective == pytest.approx(ref.objective, abs=1e-9)
