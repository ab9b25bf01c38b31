"""Rolling-horizon transition pathway.

Each investment year solves one foresight window, commits that year's
builds and operation, and hands the evolved stock to the next window.
Builds planned for later window years are discarded.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .build import (TONNES_PER_MT, build_window_lp, charge_col, disposal_col, emission_coefficient,
                    emissions_row, import_col, new_col, op_col, residual_col, balance_row, surviving)
from .lp import LinearProgram
from .model import (CapacityStock, Model, Vintage, annuity_factor,
                    retire_and_seed_stock)
from .simplex import LpSolution, Tolerances, solve
from .timeagg import TypicalPeriodSet, aggregate

# builds below this many unit/h are solver noise and are not committed
COMMIT_TOL = 1e-7


class PathwayInfeasible(RuntimeError):
    """A window LP has no feasible point; carries the Farkas certificate."""

    def __init__(self, year: int, window: tuple[int, ...], certificate: dict[str, float],
                 status: str, message: str = ""):
        self.year = year
        self.window = window
        self.certificate = certificate
        self.status = status
        super().__init__(f"window {list(window)} is {status}: {message}".strip())

    def to_dict(self) -> dict:
        return {"year": self.year, "window": list(self.window), "status": self.status,
                "farkas": self.certificate,
                "note": "y with y.A x compared to y.b proves no x meets the rows and bounds"}


@dataclass
class YearResult:
    """Committed decisions and accounting of one investment year.

    Operation, charge, import and disposal arrays have shape
    (n_periods, steps_per_period) in unit/h.
    """

    year: int
    window: tuple[int, ...]
    new_capacity: dict[str, float]
    capacity: dict[str, float]
    retired: dict[str, float]
    operation: dict[str, np.ndarray]
    charge: dict[str, np.ndarray]
    imports: dict[str, np.ndarray]
    disposal: dict[str, np.ndarray]
    production: dict[str, dict[str, float]]
    emissions_by_sector: dict[str, float]
    residual: float
    cap: float
    co2_price: float
    electricity_price: np.ndarray | None
    cost: float
    objective: float
    iterations: int

    @property
    def net_emissions(self) -> float:
        return float(sum(self.emissions_by_sector.values()))

    def to_dict(self) -> dict:
        arr = lambda d: {k: d[k].tolist() for k in sorted(d)}
        return {
            "year": self.year, "window": list(self.window),
            "new_capacity": dict(sorted(self.new_capacity.items())),
            "capacity": dict(sorted(self.capacity.items())),
            "retired": dict(sorted(self.retired.items())),
            "operation": arr(self.operation), "charge": arr(self.charge),
            "imports": arr(self.imports), "disposal": arr(self.disposal),
            "production": {q: dict(sorted(v.items())) for q, v in sorted(self.production.items())},
            "emissions_by_sector": dict(sorted(self.emissions_by_sector.items())),
            "residual": self.residual, "cap": _num(self.cap), "co2_price": self.co2_price,
            "electricity_price": None if self.electricity_price is None
            else self.electricity_price.tolist(),
            "cost": self.cost, "objective": self.objective, "iterations": self.iterations,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "YearResult":
        arr = lambda m: {k: np.asarray(v, dtype=float) for k, v in m.items()}
        ep = d.get("electricity_price")
        return cls(
            year=int(d["year"]), window=tuple(d["window"]),
            new_capacity=dict(d["new_capacity"]), capacity=dict(d["capacity"]),
            retired=dict(d["retired"]), operation=arr(d["operation"]), charge=arr(d["charge"]),
            imports=arr(d["imports"]), disposal=arr(d["disposal"]),
            production={q: dict(v) for q, v in d["production"].items()},
            emissions_by_sector=dict(d["emissions_by_sector"]), residual=float(d["residual"]),
            cap=_unnum(d["cap"]), co2_price=float(d["co2_price"]),
            electricity_price=None if ep is None else np.asarray(ep, dtype=float),
            cost=float(d["cost"]), objective=float(d["objective"]),
            iterations=int(d["iterations"]),
        )


def _num(v: float):
    return "inf" if v == math.inf else v


def _unnum(v) -> float:
    return math.inf if v == "inf" else float(v)


@dataclass
class PathwayResult:
    scenario: str
    base_year: int
    tps: TypicalPeriodSet
    years: dict[int, YearResult]
    initial_capacity: dict[str, float]
    process_tags: dict[str, list[str]] = field(default_factory=dict)
    process_sectors: dict[str, str] = field(default_factory=dict)
    process_outputs: dict[str, dict[str, dict[str, float]]] = field(default_factory=dict)
    vintages: list[tuple[str, int, float]] = field(default_factory=list)

    def year(self, y: int) -> YearResult:
        try:
            return self.years[int(y)]
        except KeyError:
            raise ValueError(f"year {y} not in result (solved: {sorted(self.years)})") from None

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario, "base_year": self.base_year,
            "initial_capacity": dict(sorted(self.initial_capacity.items())),
            "process_tags": {k: sorted(v) for k, v in sorted(self.process_tags.items())},
            "process_sectors": dict(sorted(self.process_sectors.items())),
            "process_outputs": self.process_outputs,
            "vintages": [list(v) for v in self.vintages],
            "typical_periods": self.tps.to_dict(),
            "years": [self.years[y].to_dict() for y in sorted(self.years)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    @classmethod
    def from_dict(cls, d: Mapping) -> "PathwayResult":
        return cls(
            scenario=d["scenario"], base_year=int(d["base_year"]),
            tps=TypicalPeriodSet.from_dict(d["typical_periods"]),
            years={int(r["year"]): YearResult.from_dict(r) for r in d["years"]},
            initial_capacity=dict(d["initial_capacity"]),
            process_tags={k: list(v) for k, v in d["process_tags"].items()},
            process_sectors=dict(d["process_sectors"]),
            process_outputs=d.get("process_outputs", {}),
            vintages=[(v[0], int(v[1]), float(v[2])) for v in d.get("vintages", [])],
        )

    @classmethod
    def from_json(cls, text: str) -> "PathwayResult":
        return cls.from_dict(json.loads(text))

    # CSV extracts ---------------------------------------------------------
    def capacities_csv(self) -> str:
        rows = [["year", "process", "capacity_unit_per_h", "new_capacity_unit_per_h",
                 "retired_unit_per_h"]]
        for y in sorted(self.years):
            r = self.years[y]
            for p in sorted(set(r.capacity) | set(r.new_capacity) | set(r.retired)):
                rows.append([y, p, _f(r.capacity.get(p, 0.0)), _f(r.new_capacity.get(p, 0.0)),
                             _f(r.retired.get(p, 0.0))])
        return _csv(rows)

    def operation_csv(self) -> str:
        rows = [["year", "process", "period", "step", "weight_periods", "operation_unit_per_h"]]
        for y in sorted(self.years):
            r = self.years[y]
            for p in sorted(r.operation):
                a = r.operation[p]
                for k, s in self.tps.steps():
                    rows.append([y, p, k, s, int(self.tps.weights[k]), _f(a[k, s])])
        return _csv(rows)

    def emissions_csv(self) -> str:
        rows = [["year", "sector", "emissions_Mt"]]
        for y in sorted(self.years):
            r = self.years[y]
            for sec, v in sorted(r.emissions_by_sector.items()):
                rows.append([y, sec, _f(v)])
            rows.append([y, "residual_purchase", _f(r.residual)])
            rows.append([y, "cap", _f(r.cap)])
        return _csv(rows)

    def prices_csv(self) -> str:
        rows = [["year", "co2_price_kEUR_per_t", "mean_electricity_price_kEUR_per_MWh",
                 "annual_cost_kEUR"]]
        for y in sorted(self.years):
            r = self.years[y]
            ep = ""
            if r.electricity_price is not None:
                w = self.tps.weights[:, None] * np.ones_like(r.electricity_price)
                ep = _f(float((r.electricity_price * w).sum() / w.sum()))
            rows.append([y, _f(r.co2_price), ep, _f(r.cost)])
        return _csv(rows)


def _f(v: float) -> str:
    return repr(round(float(v), 10) + 0.0)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def typical_periods_for(model: Model) -> TypicalPeriodSet:
    """Aggregate the model's hourly series per its scenario settings."""
    sc = model.scenario
    series = dict(model.series)
    if not series:
        series = {"__flat__": np.ones(8760)}
    return aggregate(series, sc.typical_periods, sc.hours_per_typical_period, seed=sc.seed)


def run_pathway(model: Model, tps: TypicalPeriodSet | None = None,
                tol: Tolerances | None = None,
                on_window: Callable[[int, LinearProgram], None] | None = None,
                foresight: int | None = None) -> PathwayResult:
    """Solve the transition year by year with a rolling foresight window.

    Parameters
    ----------
    model : Model
    tps : TypicalPeriodSet, optional
        Defaults to aggregating ``model.series`` per the scenario.
    on_window : callable, optional
        Called with ``(year, lp)`` before each solve (MPS dumps).
    foresight : int, optional
        Overrides ``model.scenario.foresight_periods``.

    Raises
    ------
    PathwayInfeasible
        When a window has no feasible point.
    """
    sc = model.scenario
    if tps is None:
        tps = typical_periods_for(model)
    years = list(sc.investment_years)
    n_fore = foresight or sc.foresight_periods
    af = annuity_factor(sc.interest_rate, sc.annuity_years)
    lifetimes = model.lifetimes
    stock = retire_and_seed_stock(None, model.demands, model.processes, years[0],
                                  sc.step, model.initial_stock)
    seeded = {(v.process, v.build_year) for v in stock}
    result = PathwayResult(
        scenario=sc.name, base_year=sc.base_year, tps=tps, years={},
        initial_capacity=stock.by_process(),
        process_tags={p.id: sorted(p.tags) for p in model.processes.values()},
        process_sectors={p.id: p.sector for p in model.processes.values()},
    )
    for i, y in enumerate(years):
        retired = stock.retirements(y, lifetimes).by_process()
        stock = stock.retire(y, lifetimes)
        window = tuple(years[i:i + n_fore])
        lp = build_window_lp(model, stock, window, tps)
        if on_window is not None:
            on_window(y, lp)
        sol = solve(lp, tol)
        if not sol.optimal:
            cert = {}
            if sol.farkas is not None:
                cert = {lp.row_names[r]: float(v) for r, v in enumerate(sol.farkas) if v != 0.0}
            raise PathwayInfeasible(y, window, cert, sol.status, sol.message)
        builds = {}
        for p in sorted(model.processes):
            v = sol.value(new_col(p, y))
            if v > COMMIT_TOL:
                builds[p] = v
        stock = stock.add(Vintage(p, y, c) for p, c in builds.items())
        rec = _record(model, stock, lp, sol, y, window, tps, builds, retired, af, seeded)
        result.years[y] = rec
        result.process_outputs[str(y)] = {
            p.id: {q: f for q, f in p.outputs(y).items()} for p in model.processes.values()}
    result.vintages = [(v.process, v.build_year, v.capacity) for v in stock]
    return result


def _record(model: Model, stock: CapacityStock, lp: LinearProgram, sol: LpSolution, y: int,
            window, tps: TypicalPeriodSet, builds, retired, af: float, seeded) -> YearResult:
    products = model.products
    shape = (tps.n_periods, tps.steps_per_period)
    w = tps.weights.astype(float)

    def grid(name_fn, key):
        if not lp.has_col(name_fn(key, y, 0, 0)):
            return None
        a = np.zeros(shape)
        for k, s in tps.steps():
            a[k, s] = sol.value(name_fn(key, y, k, s))
        return a

    operation, charge, imports, disposal = {}, {}, {}, {}
    for p in sorted(model.processes):
        a = grid(op_col, p)
        if a is not None:
            operation[p] = a
        c = grid(charge_col, p)
        if c is not None:
            charge[p] = c
    for q in sorted(products):
        a = grid(import_col, q)
        if a is not None:
            imports[q] = a
        d = grid(disposal_col, q)
        if d is not None:
            disposal[q] = d

    annual = lambda a: float((a * w[:, None]).sum())
    production: dict[str, dict[str, float]] = {}
    sectors: dict[str, float] = {}
    cost = 0.0
    for p, a in operation.items():
        proc = model.processes[p]
        tot = annual(a)
        for q, f in proc.outputs(y).items():
            production.setdefault(q, {})[p] = f * tot
        sec = proc.sector or "other"
        sectors[sec] = sectors.get(sec, 0.0) + emission_coefficient(proc, y, products) * tot / TONNES_PER_MT
        cost += proc.opex_var.at(y) * tot
    for q, a in imports.items():
        prod = products[q]
        tot = annual(a)
        if tot > 0:
            production.setdefault(q, {})[f"import:{q}"] = tot
        sec = prod.sector or "other"
        if prod.import_emissions:
            sectors[sec] = sectors.get(sec, 0.0) + prod.import_emissions * tot / TONNES_PER_MT
        price = prod.import_price
        if q == model.scenario.h2_product and model.scenario.h2_import_penalty is not None:
            price = model.scenario.h2_import_penalty
        cost += price * tot
    for q, a in disposal.items():
        prod = products[q]
        if prod.disposal_emissions:
            sec = prod.sector or "other"
            sectors[sec] = sectors.get(sec, 0.0) + prod.disposal_emissions * annual(a) / TONNES_PER_MT
    for vint in stock:
        proc = model.processes[vint.process]
        if vint.build_year > y or y - vint.build_year >= proc.lifetime:
            continue
        cost += proc.opex_fixed.at(vint.build_year) * vint.capacity
        if (vint.process, vint.build_year) not in seeded:
            cost += af * proc.capex.at(vint.build_year) * vint.capacity
    residual = 0.0
    if lp.has_col(residual_col(y)):
        residual = sol.value(residual_col(y))
        cost += model.schedule.residual_penalty * residual
    price = 0.0
    if lp.has_row(emissions_row(y)):
        price = max(sol.row_dual(emissions_row(y)), 0.0)
    ep = None
    elec = "electricity"
    if lp.has_row(balance_row(elec, y, 0, 0)):
        ep = np.zeros(shape)
        for k, s in tps.steps():
            # per-hour marginal cost: the row dual carries the step weight
            ep[k, s] = -sol.row_dual(balance_row(elec, y, k, s)) / w[k]
    capacity = {p: surviving(stock, model.processes[p], y) for p in sorted(model.processes)}
    capacity = {p: c for p, c in capacity.items() if c > 0}
    return YearResult(
        year=y, window=tuple(window), new_capacity=builds, capacity=capacity, retired=retired,
        operation=operation, charge=charge, imports=imports, disposal=disposal,
        production=production, emissions_by_sector={k: v for k, v in sorted(sectors.items())},
        residual=residual / TONNES_PER_MT, cap=model.schedule.cap(y), co2_price=price,
        electricity_price=ep, cost=cost, objective=sol.objective, iterations=sol.iterations,
    )


# ---------------------------------------------------------------------------
# queries
# ---------------------------------------------------------------------------

def sector_emissions(result: PathwayResult, year: int) -> dict[str, float]:
    """Accounted annual emissions per sector in Mt CO2-eq."""
    return dict(result.year(year).emissions_by_sector)


def production_mix(result: PathwayResult, product: str, year: int) -> dict[str, float]:
    """Share of annual output of ``product`` per producing process (or import)."""
    prod = result.year(year).production.get(product, {})
    total = sum(v for v in prod.values() if v > 0)
    if total <= 0:
        return {}
    return {p: v / total for p, v in sorted(prod.items()) if v > 0}


def electrified_share(result: PathwayResult, product: str | Sequence[str], year: int) -> float:
    """Electrified share of annual output of a product or a product group.

    A group (e.g. the three aromatics) is weighted by mass of output.
    """
    names = [product] if isinstance(product, str) else list(product)
    total = elec = 0.0
    rec = result.year(year)
    for q in names:
        for p, v in rec.production.get(q, {}).items():
            if v > 0:
                total += v
                if "electrified" in result.process_tags.get(p, ()):
                    elec += v
    return elec / total if total > 0 else 0.0


def first_electrification_year(result: PathwayResult, product: str | Sequence[str],
                               threshold: float = 0.25) -> int | None:
    """First year whose electrified production share reaches ``threshold``.

    The default threshold sits above the share methanol can reach through
    CCU on by-product hydrogen alone, so that does not count as a switch.
    """
    for y in sorted(result.years):
        if electrified_share(result, product, y) >= threshold - 1e-9:
            return y
    return None


def product_groups(model: Model) -> dict[str, tuple[str, ...]]:
    """Products of each service group, in declaration order."""
    out: dict[str, list[str]] = {}
    for s in model.services:
        out.setdefault(s.group, [])
        if s.product not in out[s.group]:
            out[s.group].append(s.product)
    return {g: tuple(v) for g, v in out.items()}
