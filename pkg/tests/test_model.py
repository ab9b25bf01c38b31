import math

import numpy as np
import pytest

from pathforge.model import (CapacityStock, DemandSet, EmissionsSchedule, ModelError, ProcessSpec,
                             Product, ScenarioConfig, Vintage, YearTable, annuity_factor,
                             retire_and_seed_stock, seed_stock, use_phase_emissions, validate,
                             validate_model)

from oracles import carbon_fraction, combustion_co2


def _products(*ids, **extra):
    out = {i: Product(i) for i in ids}
    out.update(extra)
    return out


class TestYearTable:
    def test_piecewise_constant_fill(self):
        t = YearTable.parse({"2020": 3.0, "2030": 1.0})
        assert t.at(2010) == 3.0
        assert t.at(2025) == 3.0
        assert t.at(2030) == 1.0
        assert t.at(2045) == 1.0

    def test_scalar_round_trip(self):
        t = YearTable.parse(2.5)
        assert t.is_constant and t.to_json() == 2.5

    def test_empty_rejected(self):
        with pytest.raises(ModelError):
            YearTable.parse({})


class TestProduct:
    def test_carbon_fraction_bounds(self):
        with pytest.raises(ModelError):
            Product("x", carbon_mass_fraction=1.2)

    def test_import_price_needs_emissions(self):
        with pytest.raises(ModelError):
            Product("x", import_price=1.0)

    def test_unknown_unit(self):
        with pytest.raises(ModelError):
            Product("x", unit="barrel")


class TestAnnuity:
    def test_reference_value(self):
        assert annuity_factor(0.05, 30) == pytest.approx(0.06505, abs=1e-5)

    def test_zero_rate_limit(self):
        assert annuity_factor(0.0, 10) == pytest.approx(0.1)

    def test_single_year(self):
        assert annuity_factor(0.05, 1) == pytest.approx(1.05)

    def test_present_value_identity(self):
        # the annuity repays the unit loan: sum of discounted payments is 1
        for r, n in [(0.03, 20), (0.08, 15), (0.05, 30)]:
            a = annuity_factor(r, n)
            pv = sum(a / (1 + r) ** t for t in range(1, n + 1))
            assert pv == pytest.approx(1.0, rel=1e-12)

    def test_invalid(self):
        with pytest.raises(ModelError):
            annuity_factor(0.05, 0)
        with pytest.raises(ModelError):
            annuity_factor(-0.01, 10)


class TestUsePhase:
    @pytest.mark.parametrize("formula", ["C2H4", "CH3OH", "C6H6", "C7H8", "C8H10", "C3H6"])
    def test_matches_combustion_balance(self, formula):
        p = Product(formula, carbon_mass_fraction=carbon_fraction(formula), use_phase_combusts=True)
        assert use_phase_emissions(p) == pytest.approx(combustion_co2(formula), rel=1e-12)

    def test_reference_values(self):
        eth = Product("ethylene", carbon_mass_fraction=24 / 28, use_phase_combusts=True)
        meoh = Product("methanol", carbon_mass_fraction=12 / 32, use_phase_combusts=True)
        nh3 = Product("ammonia", carbon_mass_fraction=0.0, use_phase_combusts=True)
        assert use_phase_emissions(eth) == pytest.approx(3.143, abs=1e-3)
        assert use_phase_emissions(meoh) == pytest.approx(1.375, abs=1e-3)
        assert use_phase_emissions(nh3) == 0.0

    def test_non_combusting(self):
        p = Product("x", carbon_mass_fraction=0.5, use_phase_combusts=False)
        assert use_phase_emissions(p) == 0.0

    def test_needs_mass_unit(self):
        with pytest.raises(ModelError):
            use_phase_emissions(Product("e", unit="MWh"))


class TestStock:
    def _procs(self, lifetime=30):
        return {"f": ProcessSpec("f", "x", {"x": 1}, lifetime=lifetime, tags={"fossil"})}

    def test_uniform_age_seed(self):
        procs = self._procs()
        stock = retire_and_seed_stock(None, DemandSet({"x": 6.0}), procs, 2020, step=5)
        assert len(stock) == 6
        assert all(v.capacity == pytest.approx(1.0) for v in stock)
        later = retire_and_seed_stock(stock, DemandSet({"x": 6.0}), procs, 2025, step=5)
        assert len(later) == 5
        assert later.total() == pytest.approx(5.0)

    def test_one_vintage_retires_per_step(self):
        procs = self._procs()
        stock = seed_stock(DemandSet({"x": 6.0}), procs, 2020, 5)
        for i, year in enumerate(range(2020, 2051, 5)):
            assert len(stock.retire(year, {"f": 30})) == max(6 - i, 0)

    def test_empty(self):
        stock = retire_and_seed_stock(None, DemandSet({}), self._procs(), 2020)
        assert len(stock) == 0

    def test_retire_at_lifetime_boundary(self):
        stock = CapacityStock((Vintage("f", 2020, 1.0),))
        assert len(stock.retire(2039, {"f": 20})) == 1
        assert len(stock.retire(2040, {"f": 20})) == 0
        assert stock.retirements(2040, {"f": 20}).total() == 1.0

    def test_positive_capacity_only(self):
        with pytest.raises(ModelError):
            CapacityStock((Vintage("f", 2020, 0.0),))

    def test_extra_unknown_process(self):
        with pytest.raises(ModelError):
            seed_stock(DemandSet({}), self._procs(), 2020, 5, {"nope": 1.0})


class TestValidate:
    def _base(self):
        products = _products("x", "e")
        procs = {"p": ProcessSpec("p", "x", {"x": 1, "e": -1}),
                 "g": ProcessSpec("g", "e", {"e": 1})}
        return products, procs, DemandSet({"x": 1.0}), EmissionsSchedule({2020: 1.0})

    def test_clean(self):
        assert validate_model(*self._base(), investment_years=[2020]) == []

    def test_missing_reference_flow(self):
        products, procs, dem, sch = self._base()
        procs["q"] = ProcessSpec("q", "x", {"e": -1})
        report = validate_model(products, procs, dem, sch, [2020])
        assert any("missing reference flow" in r for r in report)

    def test_reference_flow_not_one(self):
        products, procs, dem, sch = self._base()
        procs["q"] = ProcessSpec("q", "x", {"x": 2.0})
        assert any("exactly +1" in r for r in validate_model(products, procs, dem, sch, [2020]))

    def test_uncovered_demand(self):
        products, procs, dem, sch = self._base()
        products["y"] = Product("y")
        report = validate_model(products, procs, DemandSet({"y": 1.0}), sch, [2020])
        assert any("uncovered demand" in r for r in report)

    def test_import_covers_demand(self):
        products, procs, dem, sch = self._base()
        products["y"] = Product("y", import_price=1.0, import_emissions=0.0)
        assert validate_model(products, procs, DemandSet({"y": 1.0}), sch, [2020]) == []

    def test_dangling_ids(self):
        products, procs, dem, sch = self._base()
        procs["q"] = ProcessSpec("q", "x", {"x": 1, "ghost": -1})
        stock = CapacityStock((Vintage("gone", 2000, 1.0),))
        report = validate_model(products, procs, dem, sch, [2020], stock)
        assert any("dangling product id ghost" in r for r in report)
        assert any("dangling process id gone" in r for r in report)

    def test_year_table_coverage(self):
        products, procs, dem, sch = self._base()
        procs["q"] = ProcessSpec("q", "x", {"x": 1}, capex={2030: 1.0}, available_from=2020)
        report = validate_model(products, procs, dem, sch, [2020, 2030])
        assert any("does not cover 2020" in r for r in report)

    def test_negative_capex_and_nonfinite(self):
        products, procs, dem, sch = self._base()
        procs["q"] = ProcessSpec("q", "x", {"x": 1}, capex=YearTable.constant(-1.0),
                                 opex_var=YearTable.constant(math.nan))
        report = validate_model(products, procs, dem, sch, [2020])
        assert any("negative capex" in r for r in report)
        assert any("non-finite opex_var" in r for r in report)

    def test_missing_cap_year(self):
        products, procs, dem, _ = self._base()
        report = validate_model(products, procs, dem, EmissionsSchedule({2020: 1.0}), [2020, 2025])
        assert any("no cap for 2025" in r for r in report)

    def test_series_length(self):
        products, procs, dem, sch = self._base()
        report = validate_model(products, procs, dem, sch, [2020], series={"s": np.ones(10)})
        assert any("expected 8760" in r for r in report)

    def test_bundled_datasets_clean(self, desk_model, toy_model):
        assert validate(desk_model) == []
        assert validate(toy_model) == []


class TestScenarioConfig:
    def test_window(self):
        sc = ScenarioConfig()
        assert sc.window(2020) == (2020, 2025, 2030, 2035)
        assert sc.window(2040) == (2040, 2045)
        assert sc.step == 5

    @pytest.mark.parametrize("kw", [{"foresight_periods": 0},
                                    {"typical_periods": 2000, "hours_per_typical_period": 6},
                                    {"investment_years": (2030, 2020)}])
    def test_invalid(self, kw):
        with pytest.raises(ModelError):
            ScenarioConfig(**kw)


class TestDatasetInvariants:
    def test_desk_caps_non_increasing(self, desk_model):
        caps = [desk_model.schedule.cap(y) for y in sorted(desk_model.schedule.caps)]
        assert all(a >= b for a, b in zip(caps, caps[1:]))

    def test_chemical_demands_constant(self, desk_model):
        for q in ("methanol", "ammonia", "ethylene", "benzene"):
            assert q in desk_model.demands.constant
