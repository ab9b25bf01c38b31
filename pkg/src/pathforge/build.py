"""Window LP construction.

One window covers a contiguous slice of investment years. Per year it has
new-capacity columns, per-typical-step operation columns, import and
disposal columns, storage charge and state-of-charge columns and an
optional residual-emissions column. Rows are product balances, capacity
limits, storage balances, capacity ceilings and the annual emissions cap.

Units: capacities and operation in unit/h, emissions in tonnes, costs in
k€. Each window year contributes its full annual cost (no discounting
inside the window).
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence

from .lp import LinearProgram
from .model import (CapacityStock, Model, ModelError, ProcessSpec, Product, annuity_factor,
                    use_phase_emissions)
from .timeagg import TypicalPeriodSet

TONNES_PER_MT = 1e6
EMISSION_ROUNDOFF = 1e-9


# column and row names ------------------------------------------------------

def new_col(p: str, y: int) -> str:
    return f"new[{p},{y}]"


def op_col(p: str, y: int, k: int, s: int) -> str:
    return f"op[{p},{y},{k},{s}]"


def charge_col(p: str, y: int, k: int, s: int) -> str:
    return f"chg[{p},{y},{k},{s}]"


def soc_col(p: str, y: int, k: int, s: int) -> str:
    return f"soc[{p},{y},{k},{s}]"


def import_col(q: str, y: int, k: int, s: int) -> str:
    return f"imp[{q},{y},{k},{s}]"


def disposal_col(q: str, y: int, k: int, s: int) -> str:
    return f"disp[{q},{y},{k},{s}]"


def residual_col(y: int) -> str:
    return f"residual[{y}]"


def balance_row(q: str, y: int, k: int, s: int) -> str:
    return f"bal[{q},{y},{k},{s}]"


def emissions_row(y: int) -> str:
    return f"co2[{y}]"


# accounting -----------------------------------------------------------------

def _use_phase(product: Product) -> float:
    if product.unit != "tonne" or not product.use_phase_combusts:
        return 0.0
    return use_phase_emissions(product)


def emission_coefficient(process: ProcessSpec, year: int,
                         products: Mapping[str, Product]) -> float:
    """Accounted tonnes CO2-eq per unit of reference output.

    Direct emissions, plus every captured-CO2 flow at face value (outflows
    positive, inflows negative), plus the use-phase emissions of every
    combusting product the process outputs, minus those of combusting
    products it consumes. The last term keeps the carbon of an intermediate
    such as methanol from being counted both at the intermediate and at the
    chemical made from it.
    """
    total = process.direct_emissions.at(year)
    for q, table in process.flows.items():
        prod = products.get(q)
        if prod is None:
            raise ModelError(f"process {process.id}: unknown product {q}")
        f = table.at(year)
        if prod.co2_role == "captured":
            total += f
        total += f * _use_phase(prod)
    # flows that close the carbon balance leave round-off residues
    return 0.0 if abs(total) < EMISSION_ROUNDOFF else total


def surviving(stock: CapacityStock, process: ProcessSpec, year: int) -> float:
    return float(sum(v.capacity for v in stock
                     if v.process == process.id and v.build_year <= year
                     and year - v.build_year < process.lifetime))


# builder --------------------------------------------------------------------

def build_window_lp(model: Model, stock: CapacityStock, window_years: Sequence[int],
                    tps: TypicalPeriodSet, caps: Mapping[int, float] | None = None,
                    name: str | None = None) -> LinearProgram:
    """Build the LP of one foresight window.

    Parameters
    ----------
    model : Model
    stock : CapacityStock
        Capacity valid at the window start; vintages that retire inside the
        window drop out of the capacity rows of later years.
    window_years : sequence of int
        Contiguous investment years.
    tps : TypicalPeriodSet
        Must contain every availability and demand-profile series.
    caps : mapping of int to float, optional
        Annual caps in Mt; defaults to the model's schedule. ``inf`` drops
        the cap row.

    Returns
    -------
    LinearProgram
    """
    years = [int(y) for y in window_years]
    if not years:
        raise ModelError("empty window")
    inv = list(model.scenario.investment_years)
    if any(y not in inv for y in years):
        raise ModelError(f"window {years} contains non-investment years")
    i0 = inv.index(years[0])
    if years != inv[i0:i0 + len(years)]:
        raise ModelError(f"window {years} is not a contiguous slice of investment years")
    caps = dict(model.schedule.caps if caps is None else caps)
    missing = [y for y in years if y not in caps]
    if missing:
        raise ModelError(f"emissions schedule does not cover {missing}")
    for v in stock:
        if v.process not in model.processes:
            raise ModelError(f"stock references unknown process {v.process}")
    products = model.products
    procs = [model.processes[k] for k in sorted(model.processes)]
    sc = model.scenario
    af = annuity_factor(sc.interest_rate, sc.annuity_years)
    penalty = model.schedule.residual_penalty
    w = [float(x) for x in tps.weights]
    steps = list(tps.steps())
    for p in procs:
        if p.availability is not None and p.availability not in tps.values:
            raise ModelError(f"series {p.availability} missing from typical periods")
    for q, sid in model.demands.profiles.items():
        if sid not in tps.values:
            raise ModelError(f"series {sid} missing from typical periods")

    lp = LinearProgram(name or f"window_{years[0]}_{years[-1]}")
    lp.metadata["__years__"] = ",".join(map(str, years))

    # investment columns; cost summed over the window years each build serves
    buildable: dict[str, list[int]] = {}
    for p in procs:
        for yb in years:
            serve = [y for y in years if y >= yb and y - yb < p.lifetime]
            coef = len(serve) * (af * p.capex.at(yb) + p.opex_fixed.at(yb))
            ub = 0.0 if yb < p.available_from else math.inf
            if p.max_capacity is not None and ub > 0:
                ub = max(p.max_capacity - surviving(stock, p, yb), 0.0)
            lp.add_column(new_col(p.id, yb), 0.0, ub, coef, tag="new_capacity")
            if ub > 0:
                buildable.setdefault(p.id, []).append(yb)

    # existing stock fixed costs go into the offset so the objective is total cost
    for p in procs:
        for y in years:
            lp.objective_offset += surviving(stock, p, y) * p.opex_fixed.at(y)

    balance: dict[tuple, dict[int, float]] = {}

    def bal(q, y, k, s):
        key = (q, y, k, s)
        row = balance.get(key)
        if row is None:
            row = balance[key] = {}
        return row

    emis: dict[int, dict[int, float]] = {y: {} for y in years}
    for y in years:
        for p in procs:
            stock_y = surviving(stock, p, y)
            builds = [yb for yb in buildable.get(p.id, []) if yb <= y and y - yb < p.lifetime]
            if stock_y <= 0 and not builds:
                continue
            flows = p.flows_at(y)
            ecoef = emission_coefficient(p, y, products)
            vcost = p.opex_var.at(y)
            avail = tps.values[p.availability] if p.availability is not None else None
            for k, s in steps:
                a = 1.0 if avail is None else float(avail[k, s])
                j = lp.add_column(op_col(p.id, y, k, s), 0.0, math.inf, w[k] * vcost,
                                  tag="operation")
                for q, f in flows.items():
                    if f != 0.0:
                        bal(q, y, k, s)[j] = f
                if ecoef != 0.0:
                    emis[y][j] = w[k] * ecoef
                row = {j: 1.0}
                for yb in builds:
                    row[new_col(p.id, yb)] = -a
                lp.add_row(f"cap[{p.id},{y},{k},{s}]", row, "<=", a * stock_y, tag="capacity")
            if p.is_storage:
                _add_storage(lp, p, y, tps, stock_y, builds, bal)
            if p.max_capacity is not None and builds:
                lp.add_row(f"maxcap[{p.id},{y}]", {new_col(p.id, yb): 1.0 for yb in builds},
                           "<=", max(p.max_capacity - stock_y, 0.0), tag="max_capacity")

        # imports and disposal
        for qid in sorted(products):
            q = products[qid]
            for k, s in steps:
                if q.importable:
                    price = q.import_price
                    if qid == sc.h2_product and sc.h2_import_penalty is not None:
                        price = sc.h2_import_penalty
                    j = lp.add_column(import_col(qid, y, k, s), 0.0, math.inf, w[k] * price,
                                      tag="import")
                    bal(qid, y, k, s)[j] = 1.0
                    if q.import_emissions:
                        emis[y][j] = w[k] * q.import_emissions
                if q.disposal_emissions is not None and (qid, y, k, s) in balance:
                    j = lp.add_column(disposal_col(qid, y, k, s), 0.0, math.inf, 0.0,
                                      tag="disposal")
                    bal(qid, y, k, s)[j] = -1.0
                    if q.disposal_emissions:
                        emis[y][j] = w[k] * q.disposal_emissions

    # balance rows, one per product and step wherever something happens
    demanded = set(model.demands.products())
    for y in years:
        for qid in sorted(set(products) | demanded):
            if qid in model.demands.constant:
                base = model.demands.constant[qid]
                dem = lambda k, s, b=base: b
            elif qid in model.demands.profiles:
                arr = tps.values[model.demands.profiles[qid]]
                dem = lambda k, s, a=arr: float(a[k, s])
            else:
                dem = None
            for k, s in steps:
                row = balance.get((qid, y, k, s))
                rhs = 0.0 if dem is None else dem(k, s)
                if row is None and rhs == 0.0:
                    continue
                lp.add_row(balance_row(qid, y, k, s), row or {}, "=", rhs, tag="balance")

    # emissions caps
    for y in years:
        cap = caps[y]
        if not math.isfinite(cap):
            continue
        row = dict(emis[y])
        if penalty is not None:
            j = lp.add_column(residual_col(y), 0.0, math.inf, penalty, tag="residual")
            row[j] = -1.0
        lp.add_row(emissions_row(y), row, "<=", cap * TONNES_PER_MT, tag="emissions")
    return lp


def _add_storage(lp, p: ProcessSpec, y: int, tps: TypicalPeriodSet, stock_y: float,
                 builds: list[int], bal) -> None:
    """Charge and state-of-charge columns with a cyclic balance per period.

    Discharge is the operation column (reference output +1). Charging draws
    from the reference product; ``efficiency`` applies on the way in.
    """
    ref = p.reference_product
    n = tps.steps_per_period
    for k in range(tps.n_periods):
        for s in range(n):
            jc = lp.add_column(charge_col(p.id, y, k, s), tag="storage_charge")
            lp.add_column(soc_col(p.id, y, k, s), tag="storage_level")
            bal(ref, y, k, s)[jc] = -1.0
            row = {jc: 1.0}
            for yb in builds:
                row[new_col(p.id, yb)] = -1.0
            lp.add_row(f"chgcap[{p.id},{y},{k},{s}]", row, "<=", stock_y, tag="capacity")
            row = {soc_col(p.id, y, k, s): 1.0}
            for yb in builds:
                row[new_col(p.id, yb)] = -p.storage_hours
            lp.add_row(f"soccap[{p.id},{y},{k},{s}]", row, "<=", p.storage_hours * stock_y,
                       tag="capacity")
        for s in range(n):
            prev = (s - 1) % n
            lp.add_row(f"socbal[{p.id},{y},{k},{s}]",
                       [(soc_col(p.id, y, k, s), 1.0), (soc_col(p.id, y, k, prev), -1.0),
                        (charge_col(p.id, y, k, s), -p.efficiency),
                        (op_col(p.id, y, k, s), 1.0)],
                       "=", 0.0, tag="storage_balance")
