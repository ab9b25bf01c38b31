"""Write the bundled ``desk`` and ``toy`` datasets.

Run from the repository root::

    python3 tools/make_datasets.py

Public coefficients follow the process tables of the source study; entries
whose source data is proprietary are marked ``"provenance": "placeholder"``.
"""

from __future__ import annotations

import json
from pathlib import Path


from pathforge.dataset import write_series_csv
from pathforge.profiles import synthetic_profiles

ROOT = Path(__file__).resolve().parents[1] / "src" / "pathforge" / "data"
YEARS = [2020, 2025, 2030, 2035, 2040, 2045]
PH = {"provenance": "placeholder"}
# national net targets in Mt CO2-eq, scaled to the emissions of the desk system
NET_TARGETS = {"2016": 742, "2020": 613, "2025": 483, "2030": 354, "2035": 236, "2040": 118,
               "2045": 0}
CAP_SCALE = 0.3


def with_base(v2016: float, values) -> dict:
    return {"2016": v2016, **by_year(values)}


def by_year(values) -> dict:
    return {str(y): v for y, v in zip(YEARS, values)}


def carbon_fraction(c: int, h: int, o: int = 0) -> float:
    return 12 * c / (12 * c + h + 16 * o)


def use_phase(c: int, h: int, o: int = 0) -> float:
    # from the stored fraction, so balancing direct emissions cancel exactly
    return round(carbon_fraction(c, h, o), 9) * 44 / 12


def chemical(pid, name, formula):
    c, h, o = (*formula, 0)[:3]
    return {"id": pid, "name": name, "unit": "tonne", "sector": "chemicals",
            "carbon_mass_fraction": round(carbon_fraction(c, h, o), 9),
            "use_phase_combusts": c > 0}


def optimistic(procs, like: str) -> dict:
    """Cost fields copied from a cheaper, mature heat technology."""
    ref = next(p for p in procs if p["id"] == like)
    return {k: ref.get(k, 0.0) for k in ("capex", "opex_fixed", "opex_var")}


def desk() -> dict:
    meoh_up = use_phase(1, 4, 1)
    products = [
        {"id": "electricity", "unit": "MWh", "sector": "power"},
        {"id": "heat_lt", "unit": "MWh", "sector": "residential"},
        {"id": "heat_mt", "unit": "MWh", "sector": "industry_heat"},
        {"id": "heat_ht", "unit": "MWh", "sector": "industry_heat"},
        {"id": "natural_gas", "unit": "MWh", "import_price": 0.025, "import_emissions": 0.02,
         "sector": "imports"},
        {"id": "oil", "unit": "MWh", "import_price": 0.04, "import_emissions": 0.03,
         "sector": "imports"},
        {"id": "naphtha", "unit": "tonne", "import_price": 0.44, "import_emissions": 0.35,
         "sector": "imports", **PH},
        {"id": "h2", "unit": "tonne", "import_price": 1e5, "import_emissions": 0.0,
         "disposal_emissions": 0.0, "sector": "chemicals"},
        {"id": "co2_1bar", "unit": "tonne-CO2", "co2_role": "point_source",
         "disposal_emissions": 1.0, "sector": "chemicals"},
        {"id": "co2_100bar", "unit": "tonne-CO2", "co2_role": "captured", "sector": "chemicals"},
        chemical("ammonia", "ammonia", (0, 3)),
        chemical("methanol", "methanol", (1, 4, 1)),
        chemical("ethylene", "ethylene", (2, 4)),
        chemical("propylene", "propylene", (3, 6)),
        chemical("benzene", "benzene", (6, 6)),
        chemical("toluene", "toluene", (7, 8)),
        chemical("xylene", "xylene", (8, 10)),
    ]
    gas_ef = 0.2
    procs = [
        # power
        {"id": "wind", "reference_product": "electricity", "flows": {"electricity": 1},
         "capex": {"2016": 1400, "2020": 1300, "2030": 1150, "2040": 1050},
         "opex_fixed": 35, "lifetime": 25, "tags": ["renewable"], "sector": "power",
         "availability": "wind", "max_capacity": 300000, **PH},
        {"id": "pv", "reference_product": "electricity", "flows": {"electricity": 1},
         "capex": {"2016": 800, "2020": 650, "2030": 450, "2040": 380},
         "opex_fixed": 12, "lifetime": 25, "tags": ["renewable"], "sector": "power",
         "availability": "pv", "max_capacity": 450000, **PH},
        {"id": "ccgt", "reference_product": "electricity",
         "flows": {"electricity": 1, "natural_gas": -1.8}, "capex": 800, "opex_fixed": 20,
         "opex_var": 0.003, "direct_emissions": round(1.8 * gas_ef, 6), "lifetime": 30,
         "tags": ["fossil"], "sector": "power", **PH},
        {"id": "battery", "reference_product": "electricity", "flows": {"electricity": 1},
         "capex": {"2016": 900, "2020": 700, "2030": 450, "2040": 350}, "opex_fixed": 10,
         "lifetime": 15, "tags": ["storage"], "sector": "power", "storage_hours": 4,
         "efficiency": 0.9, **PH},
        # residential and low-temperature heat
        {"id": "heat_pump_lt", "reference_product": "heat_lt",
         "flows": {"heat_lt": 1, "electricity": -0.33}, "capex": 900, "opex_fixed": 15,
         "lifetime": 20, "tags": ["electrified", "heat"], "sector": "residential", **PH},
        {"id": "gas_boiler_lt", "reference_product": "heat_lt",
         "flows": {"heat_lt": 1, "natural_gas": -1.1}, "capex": 100, "opex_fixed": 3,
         "direct_emissions": round(1.1 * gas_ef, 6), "lifetime": 20,
         "tags": ["fossil", "heat"], "sector": "residential", **PH},
        # industrial heat
        {"id": "eboiler_mt", "reference_product": "heat_mt",
         "flows": {"heat_mt": 1, "electricity": -1.01}, "capex": 150, "opex_fixed": 3,
         "opex_var": 0.001, "lifetime": 20, "tags": ["electrified", "heat"],
         "sector": "industry_heat", **PH},
        {"id": "gas_boiler_mt", "reference_product": "heat_mt",
         "flows": {"heat_mt": 1, "natural_gas": -1.1}, "capex": 100, "opex_fixed": 3,
         "direct_emissions": round(1.1 * gas_ef, 6), "lifetime": 20,
         "tags": ["fossil", "heat"], "sector": "industry_heat", **PH},
        {"id": "resistance_heater_ht", "reference_product": "heat_ht",
         "flows": {"heat_ht": 1, "electricity": -1.0}, "capex": 8670, "opex_var": 0.002,
         "direct_emissions": 0.001, "lifetime": 20, "tags": ["electrified", "heat"],
         "sector": "industry_heat"},
        {"id": "h2_boiler_ht", "reference_product": "heat_ht",
         "flows": {"heat_ht": 1, "h2": -0.03}, "capex": 8670, "opex_var": 0.002,
         "direct_emissions": 0.001, "lifetime": 20, "tags": ["electrified", "heat"],
         "sector": "industry_heat"},
        {"id": "gas_furnace_ht", "reference_product": "heat_ht",
         "flows": {"heat_ht": 1, "natural_gas": -1.15}, "capex": 150, "opex_fixed": 4,
         "direct_emissions": round(1.15 * gas_ef, 6), "lifetime": 20,
         "tags": ["fossil", "heat"], "sector": "industry_heat", **PH},
        # hydrogen and CO2 supply
        {"id": "electrolysis", "reference_product": "h2",
         "flows": {"h2": 1, "electricity": with_base(-49.8, [-48.3, -47.0, -45.7, -44.5,
                                                              -43.4, -42.3])},
         "capex": with_base(39797, [36460, 35454, 30324, 25166, 20271, 16233]),
         "opex_fixed": with_base(696, [681, 615, 507, 449, 350, 299]), "lifetime": 20,
         "tags": ["electrified"], "sector": "chemicals"},
        {"id": "point_source_capture", "reference_product": "co2_100bar",
         "flows": {"co2_100bar": 1, "co2_1bar": -1, "electricity": -0.1, "heat_ht": -0.003},
         "capex": 119, "opex_var": 0.00043, "lifetime": 30, "tags": ["capture"],
         "sector": "chemicals"},
        {"id": "dac", "reference_product": "co2_100bar",
         "flows": {"co2_100bar": 1,
                   "electricity": by_year([-0.81, -0.776, -0.742, -0.708, -0.674, -0.64]),
                   "heat_lt": by_year([-3.3, -2.992, -2.684, -2.376, -2.068, -1.76])},
         "capex": by_year([5840, 4272, 2704, 2300, 1896, 1744]),
         "opex_fixed_percent": 4.0,
         "direct_emissions": by_year([-0.96, -0.9648, -0.9696, -0.9744, -0.9792, -0.984]),
         "lifetime": 20, "tags": ["capture", "electrified"], "sector": "chemicals"},
        # ammonia
        {"id": "ammonia_smr_hb", "reference_product": "ammonia",
         "flows": {"ammonia": 1, "natural_gas": -8.0, "electricity": -0.3, "co2_1bar": 1.2},
         "capex": 4000, "opex_var": 0.02, "direct_emissions": 0.45, "lifetime": 30,
         "tags": ["fossil"], "sector": "chemicals", **PH},
        {"id": "ammonia_ehb", "reference_product": "ammonia",
         "flows": {"ammonia": 1, "electricity": -0.83, "h2": -0.18}, "capex": 3300,
         "opex_var": 0.00825, "lifetime": 30, "tags": ["electrified"], "sector": "chemicals"},
        # methanol
        {"id": "methanol_syngas", "reference_product": "methanol",
         "flows": {"methanol": 1, "natural_gas": -10.0, "electricity": -0.1},
         "capex": 7000, "opex_var": 0.02, "direct_emissions": 0.5, "lifetime": 30,
         "tags": ["fossil"], "sector": "chemicals", **PH},
        {"id": "methanol_ccu", "reference_product": "methanol",
         "flows": {"methanol": 1, "electricity": -0.018, "heat_mt": -0.44, "h2": -0.2,
                   "co2_100bar": -1.46},
         "capex": 2000, "opex_var": 0.01,
         "direct_emissions": 1.46 - meoh_up, "lifetime": 30,
         "tags": ["electrified"], "sector": "chemicals", **PH},
    ]
    olefin_feed = 2.85
    for pid, prod, naphtha, direct in (("ethylene", "ethylene", 1.7, 0.7),
                                       ("propylene", "propylene", 1.6, 0.6)):
        flows = {prod: 1, "naphtha": -naphtha, "natural_gas": -2.0}
        if prod == "ethylene":
            flows["h2"] = 0.0124
        procs.append({"id": f"{pid}_cracker", "reference_product": prod, "flows": flows,
                      "capex": 13000, "opex_var": 0.03, "direct_emissions": direct,
                      "lifetime": 30, "tags": ["fossil"], "sector": "chemicals", **PH})
        up = use_phase(2, 4) if prod == "ethylene" else use_phase(3, 6)
        procs.append({"id": f"mto_{pid}", "reference_product": prod,
                      "flows": {prod: 1, "methanol": -olefin_feed, "electricity": -1.5},
                      "capex": 9000, "opex_var": 0.03,
                      "direct_emissions": olefin_feed * meoh_up - up,
                      "lifetime": 30, "tags": ["electrified"], "sector": "chemicals", **PH})
    arom_feed = 4.4
    for prod, formula in (("benzene", (6, 6)), ("toluene", (7, 8)), ("xylene", (8, 10))):
        procs.append({"id": f"{prod}_reformer", "reference_product": prod,
                      "flows": {prod: 1, "naphtha": -1.25, "natural_gas": -1.0},
                      "capex": 4000, "opex_var": 0.02, "direct_emissions": 0.3,
                      "lifetime": 30, "tags": ["fossil"], "sector": "chemicals", **PH})
        procs.append({"id": f"mta_{prod}", "reference_product": prod,
                      "flows": {prod: 1, "methanol": -arom_feed, "electricity": -1.5},
                      "capex": 8000, "opex_var": 0.03,
                      "direct_emissions": arom_feed * meoh_up - use_phase(*formula),
                      "lifetime": 30, "tags": ["electrified"], "sector": "chemicals", **PH})

    services = [
        {"id": "methanol", "product": "methanol", "fossil_process": "methanol_syngas",
         "electrified_process": "methanol_ccu", "group": "methanol"},
        {"id": "ammonia", "product": "ammonia", "fossil_process": "ammonia_smr_hb",
         "electrified_process": "ammonia_ehb", "group": "ammonia"},
        {"id": "ethylene", "product": "ethylene", "fossil_process": "ethylene_cracker",
         "electrified_process": "mto_ethylene", "group": "olefins"},
        {"id": "propylene", "product": "propylene", "fossil_process": "propylene_cracker",
         "electrified_process": "mto_propylene", "group": "olefins"},
        {"id": "benzene", "product": "benzene", "fossil_process": "benzene_reformer",
         "electrified_process": "mta_benzene", "group": "aromatics"},
        {"id": "toluene", "product": "toluene", "fossil_process": "toluene_reformer",
         "electrified_process": "mta_toluene", "group": "aromatics"},
        {"id": "xylene", "product": "xylene", "fossil_process": "xylene_reformer",
         "electrified_process": "mta_xylene", "group": "aromatics"},
        {"id": "heat_mt", "product": "heat_mt", "fossil_process": "gas_boiler_mt",
         "electrified_process": "eboiler_mt", "group": "heat", "report_factor": 1 / 15.4},
        {"id": "heat_ht", "product": "heat_ht", "fossil_process": "gas_furnace_ht",
         "electrified_process": "resistance_heater_ht", "group": "heat",
         "report_factor": 1 / 15.4},
    ]
    return {
        "name": "desk",
        "description": "Desk-scale single-node energy system with a chemical industry.",
        "profiles": "profiles.csv",
        "products": products,
        "processes": procs,
        "demands": {
            "annual": {"ammonia": 2.56e6, "methanol": 1.40e6, "ethylene": 4.52e6,
                       "propylene": 3.44e6, "benzene": 1.51e6, "toluene": 0.55e6,
                       "xylene": 0.40e6, "heat_mt": 100e6, "heat_ht": 150e6},
            "profiles": {"electricity": {"series": "elec_demand", "annual": 520e6},
                         "heat_lt": {"series": "heat_demand", "annual": 300e6}},
        },
        "emissions_schedule": {
            "caps": {y: round(v * CAP_SCALE, 3) for y, v in NET_TARGETS.items()},
            "residual_penalty": 5.0,
        },
        "scenario": {"name": "base", "investment_years": YEARS, "base_year": 2016,
                     "foresight_periods": 4, "typical_periods": 6,
                     "hours_per_typical_period": 6, "interest_rate": 0.05,
                     "annuity_years": 30, "h2_import_penalty": 1e5, "seed": 0},
        "scenarios": {
            "optimistic-ht-heat": {
                "processes": {
                    "resistance_heater_ht": optimistic(procs, "eboiler_mt"),
                    "h2_boiler_ht": optimistic(procs, "gas_furnace_ht"),
                },
            },
        },
        "initial_stock": {"ccgt": 85000, "wind": 55000, "pv": 50000, "gas_boiler_lt": 75000,
                          "gas_boiler_mt": 11500, "gas_furnace_ht": 17200},
        "services": services,
        "priority_sectors": ["power", "residential"],
    }


def toy() -> dict:
    """Three chemicals with equal emissions and electricity use but ordered costs."""
    products = [
        {"id": "electricity", "unit": "MWh", "sector": "power"},
        {"id": "gas", "unit": "MWh", "import_price": 0.03, "import_emissions": 0.0,
         "sector": "imports"},
    ]
    procs = [
        {"id": "grid", "reference_product": "electricity", "flows": {"electricity": 1},
         "opex_var": 0.05, "lifetime": 30, "tags": ["renewable"], "sector": "power"},
    ]
    services = []
    for i, capex, opex in zip((1, 2, 3), (1000, 2000, 3000), (0.0, 0.02, 0.04)):
        x = f"x{i}"
        products.append({"id": x, "unit": "tonne", "sector": "chemicals"})
        procs.append({"id": f"fossil_{x}", "reference_product": x, "flows": {x: 1, "gas": -3.0},
                      "direct_emissions": 1.0, "lifetime": 30, "tags": ["fossil"],
                      "sector": "chemicals"})
        procs.append({"id": f"elec_{x}", "reference_product": x,
                      "flows": {x: 1, "electricity": -5.0}, "capex": capex, "opex_var": opex,
                      "lifetime": 30,
                      "tags": ["electrified"], "sector": "chemicals"})
        services.append({"id": x, "product": x, "fossil_process": f"fossil_{x}",
                         "electrified_process": f"elec_{x}", "group": x})
    unit = 10 * 8760 / 1e6
    return {
        "name": "toy",
        "description": "Three-product toy with a linearly tightening cap.",
        "profiles": "profiles.csv",
        "products": products,
        "processes": procs,
        "demands": {"hourly": {"x1": 10.0, "x2": 10.0, "x3": 10.0},
                    "profiles": {"electricity": {"series": "elec_demand", "annual": 87600.0}}},
        "emissions_schedule": {"caps": {"2020": round(3 * unit, 9), "2025": round(2 * unit, 9),
                                        "2030": round(unit, 9), "2035": 0.0},
                               "residual_penalty": 10.0},
        "scenario": {"name": "base", "investment_years": [2020, 2025, 2030, 2035],
                     "base_year": 2016, "foresight_periods": 4, "typical_periods": 6,
                     "hours_per_typical_period": 6, "interest_rate": 0.05, "annuity_years": 30,
                     "seed": 0},
        "scenarios": {"no-residual": {"emissions_schedule": {"residual_penalty": None}},
                      "myopic": {"scenario": {"foresight_periods": 1}}},
        "services": services,
        "priority_sectors": ["power"],
    }


def main() -> None:
    series = synthetic_profiles(0)
    for name, doc, keep in (("desk", desk(), ("wind", "pv", "elec_demand", "heat_demand")),
                            ("toy", toy(), ("elec_demand",))):
        out = ROOT / name
        out.mkdir(parents=True, exist_ok=True)
        (out / "dataset.json").write_text(json.dumps(doc, indent=1) + "\n")
        write_series_csv(out / "profiles.csv", {k: series[k] for k in keep})
        print(f"wrote {out}")


if __name__ == "__main__":
    main()
