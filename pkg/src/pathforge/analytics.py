"""Electrification analytics on solved pathways.

Supply-chain intensities are a Leontief solve over products: the intensity
of a product is the share-weighted direct intensity of its producing routes
plus their inputs' intensities. Routes that make a product only as a
by-product carry no burden (full allocation to the reference product).

Cost-Avoided of an electrified route, per MWh of electricity it uses::

    M = 1 / E
    dC = M (C_fossil - C_elec) + C_co2 M (e_fossil - e_elec)

The merit order stacks services by descending dC with widths E min(P, D).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .build import emission_coefficient
from .model import Model, Service
from .pathway import PathwayResult

QUANTITIES = ("electricity", "cost", "emissions")
DEFAULT_LEAVES = {"electricity": {"electricity": 1.0, "cost": 0.0, "emissions": 0.0}}
GAS_HEATING_VALUE = 15.4  # MWh per tonne natural gas


class UnresolvedProduct(ValueError):
    """A product in the supply chain has no producer or the system is singular."""


# ---------------------------------------------------------------------------
# supply-chain rollup
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Route:
    """One way of supplying a product, per unit of that product.

    ``inputs`` are positive amounts consumed; ``direct`` holds the route's
    own contribution per quantity (operating cost, accounted emissions).
    """

    id: str
    product: str
    inputs: Mapping[str, float] = field(default_factory=dict)
    direct: Mapping[str, float] = field(default_factory=dict)


def routes_from_model(model: Model, year: int) -> dict[str, Route]:
    """Routes for every process plus ``import:<product>`` pseudo-routes."""
    routes = {}
    for p in model.processes.values():
        inputs = {q: -f for q, f in p.flows_at(year).items() if f < 0}
        routes[p.id] = Route(p.id, p.reference_product, inputs, {
            "electricity": 0.0,
            "cost": p.opex_var.at(year),
            "emissions": emission_coefficient(p, year, model.products),
        })
    sc = model.scenario
    for q in model.products.values():
        if q.importable:
            price = q.import_price
            if q.id == sc.h2_product and sc.h2_import_penalty is not None:
                price = sc.h2_import_penalty
            routes[f"import:{q.id}"] = Route(f"import:{q.id}", q.id, {}, {
                "electricity": 0.0, "cost": price, "emissions": q.import_emissions or 0.0})
    return routes


def _check_mixes(mixes: Mapping[str, Mapping[str, float]]) -> None:
    for q, mix in mixes.items():
        total = sum(mix.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"mix shares for {q} sum to {total!r}, not 1")
        if any(v < 0 for v in mix.values()):
            raise ValueError(f"negative mix share for {q}")


def _route_direct(route: Route, quantity: str, leaves) -> float:
    v = float(route.direct.get(quantity, 0.0))
    for q, amt in route.inputs.items():
        if q in leaves:
            v += amt * leaves[q].get(quantity, 0.0)
    return v


def _system(mixes, routes, leaves, quantity, roots: Iterable[str]):
    """Products reachable from ``roots``, matrix A and direct vector d."""
    order: list[str] = []
    seen = set()
    stack = [r for r in roots if r not in leaves]
    while stack:
        q = stack.pop()
        if q in seen:
            continue
        seen.add(q)
        order.append(q)
        if q not in mixes:
            raise UnresolvedProduct(f"no production mix for {q}")
        for rid in mixes[q]:
            if rid not in routes:
                raise UnresolvedProduct(f"unknown route {rid} in mix of {q}")
            r = routes[rid]
            if r.product != q:
                continue
            stack.extend(i for i in r.inputs if i not in leaves and i not in seen)
    order.sort()
    idx = {q: i for i, q in enumerate(order)}
    n = len(order)
    A = np.zeros((n, n))
    d = np.zeros(n)
    for q in order:
        i = idx[q]
        for rid, share in mixes[q].items():
            r = routes[rid]
            if r.product != q or share == 0:
                # by-product supply carries no upstream burden
                continue
            d[i] += share * _route_direct(r, quantity, leaves)
            for inp, amt in r.inputs.items():
                if inp not in leaves:
                    A[i, idx[inp]] += share * amt
    return order, idx, A, d


def _leontief(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    M = np.eye(n) - A
    try:
        T = np.linalg.solve(M, np.eye(n))
    except np.linalg.LinAlgError:
        raise UnresolvedProduct("supply chain is singular (a loop produces nothing net)") from None
    if not np.all(np.isfinite(T)) or np.linalg.cond(M) > 1e12:
        raise UnresolvedProduct("supply chain is singular (a loop produces nothing net)")
    return T


def rollup_all(mixes: Mapping[str, Mapping[str, float]], routes: Mapping[str, Route],
               quantity: str = "electricity", leaves: Mapping | None = None,
               roots: Iterable[str] | None = None) -> dict[str, float]:
    """Intensity of every product reachable from ``roots`` (default: all mixes)."""
    if quantity not in QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}")
    leaves = DEFAULT_LEAVES if leaves is None else leaves
    _check_mixes(mixes)
    order, idx, A, d = _system(mixes, routes, leaves, quantity,
                               sorted(mixes) if roots is None else roots)
    x = _leontief(A) @ d if order else np.zeros(0)
    out = {q: float(x[idx[q]]) for q in order}
    for q, vals in leaves.items():
        out[q] = float(vals.get(quantity, 0.0))
    return out


def rollup_intensity(product: str, mixes: Mapping[str, Mapping[str, float]],
                     routes: Mapping[str, Route], quantity: str = "electricity",
                     leaves: Mapping | None = None) -> float:
    """Per-unit supply-chain intensity of ``product``.

    Parameters
    ----------
    product : str
    mixes : mapping
        ``{product: {route id: share}}`` at the analysed time; shares sum to 1.
    routes : mapping of str to Route
    quantity : {"electricity", "cost", "emissions"}
    leaves : mapping, optional
        Products resolved to fixed intensities; electricity by default
        (1 MWh/MWh, no cost or emissions of its own).
    """
    return rollup_all(mixes, routes, quantity, leaves, roots=[product])[product]


def rollup_breakdown(product: str, mixes, routes, quantity: str = "electricity",
                     leaves: Mapping | None = None) -> dict[str, float]:
    """Split an intensity into the direct contribution of each supply-chain node.

    The contribution of node q is (total requirement of q per unit product)
    times q's own direct intensity; contributions sum to the intensity.
    """
    leaves = DEFAULT_LEAVES if leaves is None else leaves
    _check_mixes(mixes)
    if product in leaves:
        return {product: float(leaves[product].get(quantity, 0.0))}
    order, idx, A, d = _system(mixes, routes, leaves, quantity, [product])
    T = _leontief(A)
    row = T[idx[product]]
    return {q: float(row[idx[q]] * d[idx[q]]) for q in order}


def route_intensity(route: Route, intensities: Mapping[str, float], quantity: str,
                    leaves: Mapping | None = None) -> float:
    """Intensity of a single route given its inputs' intensities."""
    leaves = DEFAULT_LEAVES if leaves is None else leaves
    v = _route_direct(route, quantity, leaves)
    for q, amt in route.inputs.items():
        if q not in leaves:
            if q not in intensities:
                raise UnresolvedProduct(f"no intensity for input {q} of {route.id}")
            v += amt * intensities[q]
    return v


# ---------------------------------------------------------------------------
# Cost-Avoided
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntensityVector:
    """Per-unit intensities of the fossil and electrified routes of a service."""

    electricity: float
    op_cost_fossil: float
    op_cost_elec: float
    emissions_fossil: float
    emissions_elec: float


@dataclass(frozen=True)
class CostAvoided:
    service: str
    electricity: float
    d_cost: float          # k€ per MWh
    d_emissions: float     # t per MWh
    per_mwh: float         # k€ per MWh
    per_unit: float        # k€ per unit of product
    d_cost_unit: float
    d_emissions_unit: float


def cost_avoided(iv: IntensityVector, co2_price: float, service: str = "") -> CostAvoided:
    """Cost-Avoided of electrifying one service, per MWh and per unit.

    >>> round(cost_avoided(IntensityVector(11.1, 0.24, 0.0, 0.33, 0.0), 2.46).per_unit, 2)
    1.05
    """
    if not iv.electricity > 0:
        raise ValueError(f"service {service!r}: electricity intensity must be positive")
    m = 1.0 / iv.electricity
    dcu = iv.op_cost_fossil - iv.op_cost_elec
    deu = iv.emissions_fossil - iv.emissions_elec
    return CostAvoided(service, iv.electricity, m * dcu, m * deu,
                       m * dcu + co2_price * m * deu, dcu + co2_price * deu, dcu, deu)


def service_intensity(service: Service, mixes, routes: Mapping[str, Route],
                      leaves: Mapping | None = None) -> IntensityVector:
    """Intensities of a service's two routes under the given supply mixes."""
    f = routes[service.fossil_process]
    e = routes[service.electrified_process]
    roots = sorted(set(f.inputs) | set(e.inputs))
    roots = [q for q in roots if q in mixes or (leaves or DEFAULT_LEAVES).get(q) is None]
    vals = {}
    for quantity in QUANTITIES:
        intens = rollup_all(mixes, routes, quantity, leaves, roots=roots)
        vals[quantity] = (route_intensity(f, intens, quantity, leaves),
                          route_intensity(e, intens, quantity, leaves))
    return IntensityVector(vals["electricity"][1], vals["cost"][0], vals["cost"][1],
                           vals["emissions"][0], vals["emissions"][1])


# ---------------------------------------------------------------------------
# merit order
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeritOrderEntry:
    service: str
    cost_avoided: float   # k€ per MWh
    width: float          # MWh/h
    start: float          # MWh/h


@dataclass(frozen=True)
class MeritOrderCurve:
    entries: tuple[MeritOrderEntry, ...]
    timestamp: tuple[int, int] | None = None
    renewable_supply: float | None = None

    @property
    def total_width(self) -> float:
        return self.entries[-1].start + self.entries[-1].width if self.entries else 0.0

    def to_csv(self) -> str:
        rows = [["rank", "service", "cost_avoided_kEUR_per_MWh", "width_MWh_per_h",
                 "cumulative_start_MWh_per_h", "cumulative_end_MWh_per_h"]]
        # services without electrified capacity or demand take no width
        for i, e in enumerate(e for e in self.entries if e.width > 0):
            rows.append([i, e.service, _f(e.cost_avoided), _f(e.width), _f(e.start),
                         _f(e.start + e.width)])
        return _csv(rows)


def merit_order_curve(t, capacities: Mapping[str, float], demands: Mapping[str, float],
                      intensities: Mapping[str, IntensityVector], co2_price: float,
                      renewable_supply: float | None = None) -> MeritOrderCurve:
    """Stack services by descending Cost-Avoided, widths E min(P, D).

    Ties in Cost-Avoided are broken by service id.
    """
    rows = []
    for sid in sorted(intensities):
        iv = intensities[sid]
        dc = cost_avoided(iv, co2_price, sid).per_mwh
        p = max(float(capacities.get(sid, 0.0)), 0.0)
        d = max(float(demands.get(sid, 0.0)), 0.0)
        rows.append((-dc, sid, iv.electricity * min(p, d)))
    rows.sort()
    entries, start = [], 0.0
    for neg, sid, width in rows:
        entries.append(MeritOrderEntry(sid, -neg, width, start))
        start += width
    return MeritOrderCurve(tuple(entries), t, renewable_supply)


def predict_dispatch(curve: MeritOrderCurve, renewable_supply: float) -> dict[str, float]:
    """Electrified fraction per service where the supply meets the curve.

    Zero-width entries count as electrified once the supply passes their start.
    """
    r = float(renewable_supply)
    if r < 0 or math.isnan(r):
        raise ValueError("renewable supply must be nonnegative")
    out = {}
    for e in curve.entries:
        if e.width > 0:
            out[e.service] = min(max((r - e.start) / e.width, 0.0), 1.0)
        else:
            out[e.service] = 1.0 if r > e.start else 0.0
    return out


# ---------------------------------------------------------------------------
# result-driven analytics
# ---------------------------------------------------------------------------

def mixes_from_result(result: PathwayResult, year: int, step: tuple[int, int] | None = None,
                      model: Model | None = None) -> dict[str, dict[str, float]]:
    """Production shares per product from the solved year.

    With ``step`` the shares of that typical step are used, otherwise the
    annual weighted mix.
    """
    rec = result.year(year)
    if step is None:
        prod = rec.production
    else:
        k, s = step
        outputs = result.process_outputs[str(year)]
        prod = {}
        for p, a in rec.operation.items():
            for q, f in outputs.get(p, {}).items():
                prod.setdefault(q, {})[p] = f * float(a[k, s])
        for q, a in rec.imports.items():
            if a[k, s] > 0:
                prod.setdefault(q, {})[f"import:{q}"] = float(a[k, s])
    mixes = {}
    for q, by in prod.items():
        total = sum(v for v in by.values() if v > 0)
        if total > 0:
            mix = {p: v / total for p, v in sorted(by.items()) if v > 0}
            # renormalise so shares sum to one within rounding
            corr = 1.0 - sum(mix.values())
            first = next(iter(mix))
            mix[first] += corr
            mixes[q] = mix
    if model is not None:
        _fill_missing(mixes, model, year)
    return mixes


def _fill_missing(mixes, model: Model, year: int) -> None:
    """Give unproduced products a fallback mix so every route can be evaluated.

    Unused products take their cheapest referencing process (or import),
    which is the marginal supply the route would draw on.
    """
    routes = routes_from_model(model, year)
    for q in sorted(model.products):
        if q in mixes:
            continue
        cands = [r for r in routes.values() if r.product == q]
        if not cands:
            by = [p.id for p in model.processes.values() if p.flow(q, year) > 0]
            if by:
                mixes[q] = {sorted(by)[0]: 1.0}
            continue
        best = min(cands, key=lambda r: (r.direct.get("cost", 0.0), r.id))
        mixes[q] = {best.id: 1.0}


def _point_source_products(model: Model) -> set[str]:
    return {q.id for q in model.products.values() if q.co2_role == "point_source"}


def service_intensities(result: PathwayResult, model: Model, year: int,
                        step: tuple[int, int] | None = None) -> dict[str, IntensityVector]:
    mixes = mixes_from_result(result, year, step, model)
    routes = routes_from_model(model, year)
    return {s.id: service_intensity(s, mixes, routes) for s in model.services}


def cost_avoided_table(result: PathwayResult, model: Model, year: int) -> list[CostAvoided]:
    """Cost-Avoided of every service under the year's aggregate mix."""
    ivs = service_intensities(result, model, year)
    price = result.year(year).co2_price
    return [cost_avoided(ivs[s], price, s) for s in sorted(ivs)]


def _service_demand(model: Model, service: Service, rec, tps, k: int, s: int) -> float:
    """Hourly output of the service product (fossil plus electrified routes)."""
    d = 0.0
    for pid in (service.fossil_process, service.electrified_process):
        a = rec.operation.get(pid)
        if a is not None:
            d += float(a[k, s])
    return d


def _ccu_point_source_use(model: Model, rec, year: int, k: int, s: int) -> float:
    """Point-source CO2 taken up by capture processes in one step."""
    ps = _point_source_products(model)
    use = 0.0
    for pid, a in rec.operation.items():
        proc = model.processes[pid]
        for q in ps:
            f = proc.flow(q, year)
            if f < 0:
                use += -f * float(a[k, s])
    return use


def tranche_split(model: Model, service: Service, iv: IntensityVector, rec, year: int,
                  k: int, s: int, capacity: float, demand: float):
    """Split a service whose fossil route emits point-source CO2 in two tranches.

    The ``co2_utilized`` tranche is the fossil output whose CO2 is captured
    for CCU in this step; it keeps the allocated intensities. The rest is
    ``co2_vented``: its fossil route also carries the venting emissions and
    so has the higher Cost-Avoided. The split is a reconstruction; the
    source describes the two tranches but prints no sizing formula.

    Returns a list of ``(id, IntensityVector, capacity, demand)``.
    """
    fossil = model.processes[service.fossil_process]
    ps = _point_source_products(model)
    c = sum(fossil.flow(q, year) for q in ps if fossil.flow(q, year) > 0)
    if c <= 0:
        return [(service.id, iv, capacity, demand)]
    vent = sum(c_q * (model.products[q].disposal_emissions or 0.0)
               for q in ps for c_q in [fossil.flow(q, year)] if c_q > 0)
    used = _ccu_point_source_use(model, rec, year, k, s)
    d_util = min(demand, used / c)
    d_vent = demand - d_util
    p_vent = min(capacity, d_vent)
    p_util = max(capacity - p_vent, 0.0)
    vented = replace(iv, emissions_fossil=iv.emissions_fossil + vent)
    return [(f"{service.id}:co2_utilized", iv, p_util, d_util),
            (f"{service.id}:co2_vented", vented, p_vent, d_vent)]


def excess_renewables(result: PathwayResult, model: Model, year: int) -> np.ndarray:
    """Renewable potential minus priority-sector electricity use per typical step."""
    rec = result.year(year)
    tps = result.tps
    shape = (tps.n_periods, tps.steps_per_period)
    supply = np.zeros(shape)
    for pid, cap in rec.capacity.items():
        proc = model.processes[pid]
        if "renewable" not in proc.tags:
            continue
        avail = tps.values[proc.availability] if proc.availability else np.ones(shape)
        supply += cap * avail
    fixed = np.zeros(shape)
    elec = "electricity"
    if elec in model.demands.constant:
        fixed += model.demands.constant[elec]
    elif elec in model.demands.profiles:
        fixed += tps.values[model.demands.profiles[elec]]
    prio = set(model.priority_sectors)
    for pid, a in rec.operation.items():
        proc = model.processes[pid]
        if proc.sector in prio:
            f = proc.flow(elec, year)
            if f < 0:
                fixed += -f * a
    return supply - fixed


def step_curves(result: PathwayResult, model: Model, year: int,
                hourly_mix: bool = False) -> dict[tuple[int, int], MeritOrderCurve]:
    """Merit-order curve of every typical step of ``year``."""
    rec = result.year(year)
    tps = result.tps
    base = service_intensities(result, model, year)
    excess = excess_renewables(result, model, year)
    curves = {}
    for k, s in tps.steps():
        ivs = service_intensities(result, model, year, (k, s)) if hourly_mix else base
        intens, caps, dems = {}, {}, {}
        for svc in model.services:
            cap = rec.capacity.get(svc.electrified_process, 0.0)
            dem = _service_demand(model, svc, rec, tps, k, s)
            for sid, iv, c, d in tranche_split(model, svc, ivs[svc.id], rec, year, k, s, cap, dem):
                intens[sid], caps[sid], dems[sid] = iv, c, d
        curves[(k, s)] = merit_order_curve((k, s), caps, dems, intens, rec.co2_price,
                                           max(float(excess[k, s]), 0.0))
    return curves


@dataclass(frozen=True)
class LoadDuration:
    """Hours ordered by excess renewables, with per-service production split."""

    hours: np.ndarray          # original hour index, in plotted order
    steps: np.ndarray          # (n, 2) typical (period, step)
    excess: np.ndarray         # MWh/h
    services: tuple[str, ...]
    electrified: np.ndarray    # (n, n_services) reporting units per hour
    fossil: np.ndarray

    def to_csv(self) -> str:
        head = ["rank", "hour", "period", "step", "excess_renewables_MWh_per_h"]
        for sid in self.services:
            head += [f"{sid}_electrified_per_h", f"{sid}_fossil_per_h"]
        rows = [head]
        for i in range(len(self.hours)):
            r = [i, int(self.hours[i]), int(self.steps[i, 0]), int(self.steps[i, 1]),
                 _f(self.excess[i])]
            for j in range(len(self.services)):
                r += [_f(self.electrified[i, j]), _f(self.fossil[i, j])]
            rows.append(r)
        return _csv(rows)

    def electrified_fraction_hours(self, service: str, tol: float = 1e-6) -> float:
        """Share of hours in which the service runs fully electrified."""
        j = self.services.index(service)
        e, f = self.electrified[:, j], self.fossil[:, j]
        busy = (e + f) > tol
        if not busy.any():
            return 0.0
        return float(np.mean(f[busy] <= tol * np.maximum(e[busy] + f[busy], 1.0)))


def load_duration(result: PathwayResult, year: int, model: Model) -> LoadDuration:
    """Expand typical steps to the year's hours and sort by excess renewables.

    Heat services are reported in natural-gas-equivalent tonnes through
    each service's ``report_factor``.
    """
    rec = result.year(year)
    tps = result.tps
    excess = excess_renewables(result, model, year)
    hm = tps.hour_map
    ex_h = excess[hm[:, 0], hm[:, 1]]
    order = np.lexsort((np.arange(len(ex_h)), -ex_h))
    services = tuple(s.id for s in model.services)
    n = len(order)
    el = np.zeros((n, len(services)))
    fo = np.zeros((n, len(services)))
    for j, svc in enumerate(model.services):
        for pid, target in ((svc.electrified_process, el), (svc.fossil_process, fo)):
            a = rec.operation.get(pid)
            if a is not None:
                target[:, j] = a[hm[order, 0], hm[order, 1]] * svc.report_factor
    return LoadDuration(order, hm[order], ex_h[order], services, el, fo)


def utilization_rate(result: PathwayResult, process: str, year: int) -> float:
    """Annual output over installed capacity times the represented hours."""
    rec = result.year(year)
    cap = rec.capacity.get(process, 0.0)
    if cap <= 0:
        return 0.0
    a = rec.operation.get(process)
    if a is None:
        return 0.0
    w = result.tps.weights.astype(float)
    hours = float(w.sum() * result.tps.steps_per_period)
    return float((a * w[:, None]).sum() / (cap * hours))


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def cost_avoided_csv(rows: Sequence[CostAvoided], co2_price: float) -> str:
    out = [["service", "electricity_MWh_per_unit", "d_cost_kEUR_per_unit",
            "d_emissions_t_per_unit", "cost_avoided_kEUR_per_unit", "d_cost_kEUR_per_MWh",
            "d_emissions_t_per_MWh", "cost_avoided_kEUR_per_MWh", "co2_price_kEUR_per_t"]]
    for r in rows:
        out.append([r.service, _f(r.electricity), _f(r.d_cost_unit), _f(r.d_emissions_unit),
                    _f(r.per_unit), _f(r.d_cost), _f(r.d_emissions), _f(r.per_mwh),
                    _f(co2_price)])
    return _csv(out)


def utilization_csv(result: PathwayResult, year: int) -> str:
    rows = [["process", "capacity_unit_per_h", "utilization_fraction"]]
    rec = result.year(year)
    for p in sorted(rec.capacity):
        rows.append([p, _f(rec.capacity[p]), _f(utilization_rate(result, p, year))])
    return _csv(rows)


def merit_order_svg(curve: MeritOrderCurve, width: int = 640, height: int = 360) -> str:
    """Staircase plot of a merit-order curve with the supply line."""
    pad = 40
    total = max(curve.total_width, curve.renewable_supply or 0.0, 1e-9)
    vals = [e.cost_avoided for e in curve.entries] or [0.0]
    top, bot = max(max(vals), 0.0), min(min(vals), 0.0)
    span = (top - bot) or 1.0
    sx = lambda x: pad + (width - 2 * pad) * x / total
    sy = lambda y: height - pad - (height - 2 * pad) * (y - bot) / span
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<line x1="{pad}" y1="{sy(0):.2f}" x2="{width - pad}" y2="{sy(0):.2f}" stroke="black"/>']
    for e in curve.entries:
        if e.width <= 0:
            continue
        x0, x1 = sx(e.start), sx(e.start + e.width)
        y0, y1 = sy(max(e.cost_avoided, 0.0)), sy(min(e.cost_avoided, 0.0))
        parts.append(f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{x1 - x0:.2f}" '
                     f'height="{y1 - y0:.2f}" fill="#6a9fb5" stroke="white">'
                     f'<title>{e.service}</title></rect>')
    if curve.renewable_supply is not None:
        xr = sx(curve.renewable_supply)
        parts.append(f'<line x1="{xr:.2f}" y1="{pad}" x2="{xr:.2f}" y2="{height - pad}" '
                     'stroke="green" stroke-dasharray="4"/>')
    parts.append(f'<text x="{pad}" y="{pad - 10}" font-size="12">Cost-Avoided [kEUR/MWh] '
                 f'vs electricity demand [MWh/h]</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _f(v: float) -> str:
    return repr(round(float(v), 10) + 0.0)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()
