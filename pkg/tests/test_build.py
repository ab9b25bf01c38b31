import math
from dataclasses import replace

import numpy as np
import pytest

from pathforge.build import (balance_row, build_window_lp, emission_coefficient, emissions_row,
                             new_col, op_col, residual_col)
from pathforge.model import (CapacityStock, DemandSet, EmissionsSchedule, Model, ModelError,
                             ProcessSpec, Product, ScenarioConfig, Vintage, annuity_factor)
from pathforge.pathway import typical_periods_for
from pathforge.simplex import INFEASIBLE, shadow_price, solve
from pathforge.timeagg import aggregate

from oracles import combustion_co2

YEAR = 2020
HOURS = 8760


def flat_tps(n=2, k=3):
    return aggregate({"flat": np.ones(HOURS)}, n, k)


def one_year(products, processes, demand, cap=math.inf, penalty=None, **scen):
    sc = ScenarioConfig(investment_years=(YEAR,), foresight_periods=1, **scen)
    return Model(products, processes, DemandSet(demand), EmissionsSchedule({YEAR: cap}, penalty), sc)


def two_route_model(cap_fraction=0.5, demand=10.0):
    products = {"x": Product("x")}
    procs = {
        "dirty": ProcessSpec("dirty", "x", {"x": 1}, opex_var=1.0, direct_emissions=1.0),
        "clean": ProcessSpec("clean", "x", {"x": 1}, opex_var=2.0),
    }
    dirty_only = demand * HOURS * 1.0 / 1e6          # Mt
    return one_year(products, procs, {"x": demand}, cap=cap_fraction * dirty_only)


class TestEmissionCoefficient:
    def test_no_co2(self):
        p = ProcessSpec("p", "x", {"x": 1, "e": -2})
        assert emission_coefficient(p, YEAR, {"x": Product("x"), "e": Product("e", unit="MWh")}) == 0.0

    def test_ccu_methanol_cancels_to_direct(self):
        # feed 1.46 t captured CO2, product releases 1.46 t at end of life
        products = {"meoh": Product("meoh", carbon_mass_fraction=1.46 * 12 / 44,
                                    use_phase_combusts=True),
                    "co2": Product("co2", unit="tonne-CO2", co2_role="captured")}
        p = ProcessSpec("ccu", "meoh", {"meoh": 1, "co2": -1.46}, direct_emissions=0.07)
        assert emission_coefficient(p, YEAR, products) == pytest.approx(0.07, abs=1e-12)

    def test_dac_chain_balances_the_atmosphere(self):
        # DAC takes 1 t from the air and spends 0.04 t on its own energy: direct -0.96.
        # The captured tonne is credited where it is consumed, so DAC itself
        # books -0.96 + 1 = +0.04 and the chain DAC -> CCU methanol -> combustion
        # books exactly what reaches the atmosphere: the energy emissions.
        products = {
            "co2": Product("co2", unit="tonne-CO2", co2_role="captured"),
            "meoh": Product("meoh", carbon_mass_fraction=12 / 32, use_phase_combusts=True),
        }
        dac = ProcessSpec("dac", "co2", {"co2": 1}, direct_emissions=-0.96)
        feed = combustion_co2("CH3OH")
        ccu = ProcessSpec("ccu", "meoh", {"meoh": 1, "co2": -feed})
        assert dac.direct_emissions.at(YEAR) == -0.96
        assert emission_coefficient(dac, YEAR, products) == pytest.approx(0.04)
        chain = feed * emission_coefficient(dac, YEAR, products) + emission_coefficient(ccu, YEAR, products)
        # atmosphere: +feed*0.04 energy emissions; air uptake and end-of-life release cancel
        assert chain == pytest.approx(feed * 0.04, abs=1e-12)

    def test_intermediate_carbon_not_double_counted(self):
        products = {"meoh": Product("meoh", carbon_mass_fraction=0.375, use_phase_combusts=True),
                    "eth": Product("eth", carbon_mass_fraction=24 / 28, use_phase_combusts=True)}
        mto = ProcessSpec("mto", "eth", {"eth": 1, "meoh": -2.0})
        expected = combustion_co2("C2H4") - 2.0 * combustion_co2("CH3OH")
        assert emission_coefficient(mto, YEAR, products) == pytest.approx(expected)

    def test_roundoff_snapped(self):
        products = {"meoh": Product("meoh", carbon_mass_fraction=0.375, use_phase_combusts=True)}
        p = ProcessSpec("p", "meoh", {"meoh": 1}, direct_emissions=-1.375 + 1e-12)
        assert emission_coefficient(p, YEAR, products) == 0.0


class TestSingleProcess:
    def test_forced_solution(self):
        products = {"x": Product("x")}
        procs = {"p": ProcessSpec("p", "x", {"x": 1}, capex=100.0, opex_var=0.5)}
        tps = flat_tps()
        m = one_year(products, procs, {"x": 4.0})
        lp = build_window_lp(m, CapacityStock(), [YEAR], tps)
        sol = solve(lp)
        assert sol.value(new_col("p", YEAR)) == pytest.approx(4.0)
        for k, s in tps.steps():
            assert sol.value(op_col("p", YEAR, k, s)) == pytest.approx(4.0)
        expected = 4.0 * (annuity_factor(0.05, 30) * 100.0 + 0.5 * HOURS)
        assert sol.objective == pytest.approx(expected)

    def test_stock_used_before_building(self):
        products = {"x": Product("x")}
        procs = {"p": ProcessSpec("p", "x", {"x": 1}, capex=100.0)}
        m = one_year(products, procs, {"x": 4.0})
        stock = CapacityStock((Vintage("p", 2010, 3.0),))
        sol = solve(build_window_lp(m, stock, [YEAR], flat_tps()))
        assert sol.value(new_col("p", YEAR)) == pytest.approx(1.0)

    def test_available_from_blocks_builds(self):
        products = {"x": Product("x")}
        procs = {"p": ProcessSpec("p", "x", {"x": 1}, available_from=2030)}
        lp = build_window_lp(one_year(products, procs, {"x": 1.0}), CapacityStock(), [YEAR], flat_tps())
        assert lp.col_ub[lp.col(new_col("p", YEAR))] == 0.0
        assert solve(lp).status == INFEASIBLE


class TestCapSplit:
    def test_fifty_fifty(self):
        tps = flat_tps()
        lp = build_window_lp(two_route_model(), CapacityStock(), [YEAR], tps)
        sol = solve(lp)
        # the cap is annual, so only the weighted totals are determined
        annual = {p: sum(tps.weights[k] * sol.value(op_col(p, YEAR, k, s)) for k, s in tps.steps())
                  for p in ("dirty", "clean")}
        assert annual["dirty"] == pytest.approx(5.0 * HOURS)
        assert annual["clean"] == pytest.approx(5.0 * HOURS)

    def test_shadow_price_analytic(self):
        # one tonne more allowance lets one unit move from clean to dirty: saves 2 - 1
        lp = build_window_lp(two_route_model(), CapacityStock(), [YEAR], flat_tps())
        sol = solve(lp)
        assert shadow_price(sol, emissions_row(YEAR)) == pytest.approx((2.0 - 1.0) / 1.0)

    def test_nonbinding_cap(self):
        lp = build_window_lp(two_route_model(cap_fraction=2.0), CapacityStock(), [YEAR], flat_tps())
        assert shadow_price(solve(lp), emissions_row(YEAR)) == 0.0

    def test_residual_caps_price_at_penalty(self):
        m = two_route_model(cap_fraction=0.5)
        m = Model(m.products, {"dirty": m.processes["dirty"]}, m.demands,
                  EmissionsSchedule(m.schedule.caps, residual_penalty=0.3), m.scenario)
        sol = solve(build_window_lp(m, CapacityStock(), [YEAR], flat_tps()))
        assert sol.value(residual_col(YEAR)) == pytest.approx(0.5 * 10 * HOURS)
        assert shadow_price(sol, emissions_row(YEAR)) == pytest.approx(0.3)


class TestStructure:
    def test_infeasible_empty_balance(self):
        products = {"x": Product("x"), "y": Product("y")}
        procs = {"p": ProcessSpec("p", "x", {"x": 1})}
        lp = build_window_lp(one_year(products, procs, {"x": 1.0, "y": 2.0}), CapacityStock(),
                             [YEAR], flat_tps())
        assert lp.row_coefficients(balance_row("y", YEAR, 0, 0)) == {}
        assert solve(lp).status == INFEASIBLE

    def test_one_balance_row_per_step_and_unique_names(self, toy_model):
        tps = typical_periods_for(toy_model)
        years = list(toy_model.scenario.investment_years)
        lp = build_window_lp(toy_model, CapacityStock(), years, tps)
        assert len(set(lp.row_names)) == lp.n_rows
        assert len(set(lp.col_names)) == lp.n_cols
        for q in toy_model.demands.products():
            for y in years:
                for k, s in tps.steps():
                    assert lp.has_row(balance_row(q, y, k, s))
        assert lp.validate() == []

    def test_bit_identical_rebuild(self, toy_model):
        tps = typical_periods_for(toy_model)
        a = build_window_lp(toy_model, CapacityStock(), [2020, 2025], tps).to_json()
        b = build_window_lp(toy_model, CapacityStock(), [2020, 2025], tps).to_json()
        assert a == b

    def test_errors(self, toy_model):
        tps = typical_periods_for(toy_model)
        with pytest.raises(ModelError):
            build_window_lp(toy_model, CapacityStock((Vintage("ghost", 2000, 1.0),)), [2020], tps)
        with pytest.raises(ModelError):
            build_window_lp(toy_model, CapacityStock(), [2020, 2030], tps)
        with pytest.raises(ModelError):
            build_window_lp(toy_model, CapacityStock(), [2020], tps, caps={2025: 1.0})

    def test_availability_scales_capacity_rows(self):
        products = {"e": Product("e", unit="MWh")}
        procs = {"pv": ProcessSpec("pv", "e", {"e": 1}, capex=10.0, availability="sun")}
        sun = np.tile(np.r_[np.zeros(12), np.full(12, 0.5)], 365)
        tps = aggregate({"sun": sun}, 1, 24)
        m = one_year(products, procs, {"e": 0.0})
        lp = build_window_lp(m, CapacityStock((Vintage("pv", 2015, 2.0),)), [YEAR], tps)
        row = lp.row_coefficients("cap[pv,2020,0,13]")
        assert row == {op_col("pv", YEAR, 0, 13): 1.0, new_col("pv", YEAR): -0.5}
        assert lp.row_rhs[lp.row("cap[pv,2020,0,13]")] == pytest.approx(1.0)


class TestLinearity:
    @pytest.mark.parametrize("alpha", [0.5, 3.0, 17.0])
    def test_demand_scaling(self, toy_model, alpha):
        tps = typical_periods_for(toy_model)
        # scale demand and the caps with it so the problem is the same up to units
        caps = {y: c * alpha for y, c in toy_model.schedule.caps.items()}
        scaled_series = {k: v * alpha for k, v in toy_model.series.items()}
        scaled_tps = replace(tps, values={k: v * alpha if k.startswith("demand:") else v
                                          for k, v in tps.values.items()})
        m2 = replace(toy_model,
                     demands=DemandSet({q: d * alpha for q, d in toy_model.demands.constant.items()},
                                       toy_model.demands.profiles),
                     schedule=EmissionsSchedule(caps, toy_model.schedule.residual_penalty),
                     series=scaled_series)
        base = solve(build_window_lp(toy_model, CapacityStock(), [2020, 2025, 2030, 2035], tps))
        scaled = solve(build_window_lp(m2, CapacityStock(), [2020, 2025, 2030, 2035], scaled_tps))
        assert scaled.objective == pytest.approx(alpha * base.objective, rel=1e-9)


class TestCheapestRoute:
    def test_uncapped_uses_unit_cost_argmin(self):
        rng = np.random.default_rng(1)
        tps = flat_tps()
        af = annuity_factor(0.05, 30)
        for trial in range(10):
            products = {f"q{i}": Product(f"q{i}") for i in range(3)}
            procs, unit_cost = {}, {}
            for i in range(3):
                for r in range(3):
                    pid = f"p{i}_{r}"
                    capex, opex = float(rng.uniform(0, 5000)), float(rng.uniform(0, 1))
                    procs[pid] = ProcessSpec(pid, f"q{i}", {f"q{i}": 1}, capex=capex,
                                             opex_var=opex, direct_emissions=float(rng.random()))
                    # constant demand: capacity runs every hour
                    unit_cost[pid] = af * capex + opex * HOURS
            m = one_year(products, procs, {f"q{i}": 1.0 + i for i in range(3)})
            sol = solve(build_window_lp(m, CapacityStock(), [YEAR], tps))
            for i in range(3):
                best = min((p for p in procs if p.startswith(f"p{i}_")), key=unit_cost.get)
                assert sol.value(new_col(best, YEAR)) == pytest.approx(1.0 + i)
