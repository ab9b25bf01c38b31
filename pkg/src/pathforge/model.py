"""Domain model: products, processes, demands, stock and accounting formulas.

All objects are immutable once built; the LP builder, the pathway driver
and the analytics read them concurrently without copying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

HOURS_PER_YEAR = 8760
UNITS = ("tonne", "MWh", "vehicle-km", "tonne-CO2")
TAGS = frozenset({"fossil", "electrified", "import", "capture", "heat", "storage", "renewable"})
CO2_ROLES = ("captured", "point_source")
# integer molar masses of the combustion balance C + O2 -> CO2
M_CO2 = 44.0
M_C = 12.0


class ModelError(ValueError):
    """Invalid argument or inconsistent model data."""


# ---------------------------------------------------------------------------
# year-keyed parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class YearTable:
    """Piecewise-constant parameter keyed by calendar year.

    A year before the first key takes the first value; any later year takes
    the value of the latest key not after it.
    """

    years: tuple[int, ...]
    values: tuple[float, ...]

    @classmethod
    def constant(cls, value: float) -> "YearTable":
        return cls((0,), (float(value),))

    @classmethod
    def parse(cls, raw) -> "YearTable":
        if isinstance(raw, YearTable):
            return raw
        if isinstance(raw, Mapping):
            if not raw:
                raise ModelError("empty year table")
            items = sorted((int(k), float(v)) for k, v in raw.items())
            return cls(tuple(k for k, _ in items), tuple(v for _, v in items))
        return cls.constant(float(raw))

    @property
    def is_constant(self) -> bool:
        return len(set(self.values)) == 1

    def at(self, year: int) -> float:
        idx = int(np.searchsorted(self.years, year, side="right")) - 1
        return self.values[max(idx, 0)]

    def first_year(self) -> int:
        return self.years[0]

    def to_json(self):
        if len(self.years) == 1 and self.years[0] == 0:
            return self.values[0]
        return {str(y): v for y, v in zip(self.years, self.values)}


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Product:
    """A tradable commodity, energy carrier or service.

    ``co2_role`` marks the captured (compressed) and point-source CO2
    products; ``disposal_emissions`` enables a disposal column whose every
    unit emits that many tonnes (venting of point-source CO2 uses 1.0).
    """

    id: str
    name: str = ""
    unit: str = "tonne"
    carbon_mass_fraction: float = 0.0
    use_phase_combusts: bool = False
    import_price: float | None = None
    import_emissions: float | None = None
    co2_role: str | None = None
    disposal_emissions: float | None = None
    sector: str | None = None
    provenance: str = "public"

    def __post_init__(self):
        if self.unit not in UNITS:
            raise ModelError(f"product {self.id}: unknown unit {self.unit!r}")
        if not 0.0 <= self.carbon_mass_fraction <= 1.0:
            raise ModelError(f"product {self.id}: carbon_mass_fraction outside [0, 1]")
        if self.import_price is not None and self.import_emissions is None:
            raise ModelError(f"product {self.id}: import_price without import_emissions")
        if self.co2_role is not None and self.co2_role not in CO2_ROLES:
            raise ModelError(f"product {self.id}: unknown co2_role {self.co2_role!r}")

    @property
    def importable(self) -> bool:
        return self.import_price is not None


@dataclass(frozen=True)
class ProcessSpec:
    """A conversion technology, normalised to one unit of reference output.

    Costs: ``capex`` in k€ per (unit/h) of capacity, ``opex_fixed`` in k€ per
    (unit/h) per year, ``opex_var`` in k€ per unit of output. Emissions are in
    tonne CO2-eq per unit of output. ``availability`` names an hourly series
    that caps operation relative to installed capacity (renewables).
    """

    id: str
    reference_product: str
    flows: Mapping[str, YearTable]
    capex: YearTable = field(default_factory=lambda: YearTable.constant(0.0))
    opex_fixed: YearTable = field(default_factory=lambda: YearTable.constant(0.0))
    opex_var: YearTable = field(default_factory=lambda: YearTable.constant(0.0))
    direct_emissions: YearTable = field(default_factory=lambda: YearTable.constant(0.0))
    lifetime: int = 30
    available_from: int = 0
    tags: frozenset = frozenset()
    sector: str = "other"
    name: str = ""
    availability: str | None = None
    max_capacity: float | None = None
    storage_hours: float | None = None
    efficiency: float = 1.0
    provenance: str = "public"

    def __post_init__(self):
        object.__setattr__(self, "flows", MappingProxyType(
            {k: YearTable.parse(v) for k, v in self.flows.items()}))
        for attr in ("capex", "opex_fixed", "opex_var", "direct_emissions"):
            object.__setattr__(self, attr, YearTable.parse(getattr(self, attr)))
        object.__setattr__(self, "tags", frozenset(self.tags))
        if self.lifetime <= 0:
            raise ModelError(f"process {self.id}: lifetime must be positive")

    @property
    def is_storage(self) -> bool:
        return "storage" in self.tags

    def flows_at(self, year: int) -> dict[str, float]:
        return {k: t.at(year) for k, t in self.flows.items()}

    def flow(self, product: str, year: int) -> float:
        t = self.flows.get(product)
        return 0.0 if t is None else t.at(year)

    def inputs(self, year: int) -> dict[str, float]:
        return {k: v for k, v in self.flows_at(year).items() if v < 0}

    def outputs(self, year: int) -> dict[str, float]:
        return {k: v for k, v in self.flows_at(year).items() if v > 0}

    def year_tables(self) -> dict[str, YearTable]:
        tables = {"capex": self.capex, "opex_fixed": self.opex_fixed,
                  "opex_var": self.opex_var, "direct_emissions": self.direct_emissions}
        tables.update({f"flow:{k}": v for k, v in self.flows.items()})
        return tables


@dataclass(frozen=True)
class Vintage:
    process: str
    build_year: int
    capacity: float


@dataclass(frozen=True)
class CapacityStock:
    """Installed capacity as vintages (process, build year, unit/h)."""

    vintages: tuple[Vintage, ...] = ()

    def __post_init__(self):
        for v in self.vintages:
            if not v.capacity > 0:
                raise ModelError(f"vintage {v}: capacity must be positive")

    def __len__(self):
        return len(self.vintages)

    def __iter__(self):
        return iter(self.vintages)

    def add(self, vintages: Iterable[Vintage]) -> "CapacityStock":
        return CapacityStock(self.vintages + tuple(v for v in vintages if v.capacity > 0))

    def retire(self, year: int, lifetimes: Mapping[str, int]) -> "CapacityStock":
        return CapacityStock(tuple(v for v in self.vintages
                                   if year - v.build_year < lifetimes[v.process]))

    def retirements(self, year: int, lifetimes: Mapping[str, int]) -> "CapacityStock":
        return CapacityStock(tuple(v for v in self.vintages
                                   if year - v.build_year >= lifetimes[v.process]))

    def by_process(self) -> dict[str, float]:
        out: dict[str, float] = {}
        for v in self.vintages:
            out[v.process] = out.get(v.process, 0.0) + v.capacity
        return out

    def surviving(self, process: str, year: int, lifetime: int) -> float:
        return float(sum(v.capacity for v in self.vintages
                         if v.process == process and 0 <= year - v.build_year < lifetime))

    def total(self) -> float:
        return float(sum(v.capacity for v in self.vintages))


@dataclass(frozen=True)
class DemandSet:
    """Exogenous demand per product in unit/h.

    ``constant`` holds flat demands (chemicals: annual tonnage / 8760),
    ``profiles`` names an hourly series for time-varying demands.
    """

    constant: Mapping[str, float] = field(default_factory=dict)
    profiles: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "constant", MappingProxyType(dict(self.constant)))
        object.__setattr__(self, "profiles", MappingProxyType(dict(self.profiles)))
        for k, v in self.constant.items():
            if not v >= 0:
                raise ModelError(f"demand for {k} must be nonnegative")
        both = set(self.constant) & set(self.profiles)
        if both:
            raise ModelError(f"products with both constant and profile demand: {sorted(both)}")

    @classmethod
    def from_annual(cls, annual: Mapping[str, float], profiles: Mapping[str, str] | None = None):
        return cls({k: v / HOURS_PER_YEAR for k, v in annual.items()}, profiles or {})

    def products(self) -> list[str]:
        return sorted(set(self.constant) | set(self.profiles))


@dataclass(frozen=True)
class EmissionsSchedule:
    """Annual caps in Mt CO2-eq (``inf`` for no cap) and the residual penalty.

    ``residual_penalty`` is in k€ per tonne; ``None`` removes the residual
    purchase option so that caps become hard.
    """

    caps: Mapping[int, float]
    residual_penalty: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "caps", MappingProxyType(
            {int(k): (math.inf if v is None else float(v)) for k, v in self.caps.items()}))

    def cap(self, year: int) -> float:
        try:
            return self.caps[year]
        except KeyError:
            raise ModelError(f"emissions schedule has no cap for {year}") from None


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "base"
    investment_years: tuple[int, ...] = (2020, 2025, 2030, 2035, 2040, 2045)
    base_year: int = 2016
    foresight_periods: int = 4
    typical_periods: int = 6
    hours_per_typical_period: int = 6
    interest_rate: float = 0.05
    annuity_years: int = 30
    h2_import_penalty: float | None = None
    h2_product: str = "h2"
    seed: int = 0
    overrides: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "investment_years", tuple(int(y) for y in self.investment_years))
        if self.foresight_periods < 1:
            raise ModelError("foresight_periods must be at least 1")
        if self.typical_periods < 1 or self.hours_per_typical_period < 1:
            raise ModelError("typical period counts must be positive")
        if self.typical_periods * self.hours_per_typical_period > HOURS_PER_YEAR:
            raise ModelError("typical_periods x hours_per_typical_period exceeds 8760")
        ys = self.investment_years
        if list(ys) != sorted(set(ys)) or not ys:
            raise ModelError("investment years must be strictly increasing")

    @property
    def step(self) -> int:
        ys = self.investment_years
        return ys[1] - ys[0] if len(ys) > 1 else 5

    def window(self, year: int) -> tuple[int, ...]:
        i = self.investment_years.index(year)
        return self.investment_years[i:i + self.foresight_periods]


@dataclass(frozen=True)
class Service:
    """An electrifiable service for Cost-Avoided analytics.

    ``report_factor`` converts the service unit to a reporting unit
    (heat in tonnes of natural-gas equivalent uses 1/15.4).
    """

    id: str
    product: str
    fossil_process: str
    electrified_process: str
    group: str = ""
    report_factor: float = 1.0


@dataclass(frozen=True)
class Model:
    products: Mapping[str, Product]
    processes: Mapping[str, ProcessSpec]
    demands: DemandSet
    schedule: EmissionsSchedule
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    series: Mapping[str, np.ndarray] = field(default_factory=dict)
    initial_stock: Mapping[str, float] = field(default_factory=dict)
    services: tuple[Service, ...] = ()
    priority_sectors: tuple[str, ...] = ()
    name: str = "model"

    def __post_init__(self):
        for attr in ("products", "processes", "series", "initial_stock"):
            object.__setattr__(self, attr, MappingProxyType(dict(getattr(self, attr))))

    @property
    def lifetimes(self) -> dict[str, int]:
        return {p.id: p.lifetime for p in self.processes.values()}

    def with_processes(self, processes: Mapping[str, ProcessSpec]) -> "Model":
        return replace(self, processes=processes)

    def producers(self, product: str, year: int) -> list[str]:
        return [p.id for p in self.processes.values() if p.flow(product, year) > 0]


# ---------------------------------------------------------------------------
# formulas
# ---------------------------------------------------------------------------

def annuity_factor(rate: float, years: float) -> float:
    """Capital recovery factor r(1+r)^n / ((1+r)^n - 1); 1/n at zero rate.

    >>> round(annuity_factor(0.05, 30), 5)
    0.06505
    """
    if not years > 0:
        raise ModelError("annuity years must be positive")
    if rate < 0:
        raise ModelError("interest rate must be nonnegative")
    if rate == 0:
        return 1.0 / years
    g = (1.0 + rate) ** years
    return rate * g / (g - 1.0)


def use_phase_emissions(product: Product) -> float:
    """Tonnes CO2 released per tonne when the product's carbon fully combusts."""
    if product.unit != "tonne":
        raise ModelError(f"use-phase emissions need a mass unit, {product.id} is in {product.unit}")
    if not product.use_phase_combusts:
        return 0.0
    return product.carbon_mass_fraction * M_CO2 / M_C


def seed_stock(demands: DemandSet, processes: Mapping[str, ProcessSpec], first_year: int,
               step: int, extra: Mapping[str, float] | None = None) -> CapacityStock:
    """Uniform-age initial stock.

    Every chemical's fossil process (tag ``fossil``, reference product with
    a constant mass demand) starts with capacity equal to the hourly demand;
    ``extra`` adds capacities for named processes. Each capacity is split
    into floor(lifetime / step) equal vintages, one retiring per step.
    """
    targets: dict[str, float] = {}
    for prod, d in demands.constant.items():
        if d <= 0:
            continue
        fossil = sorted(p.id for p in processes.values()
                        if p.reference_product == prod and "fossil" in p.tags)
        if fossil:
            targets[fossil[0]] = targets.get(fossil[0], 0.0) + d
    for pid, cap in (extra or {}).items():
        if pid not in processes:
            raise ModelError(f"initial stock references unknown process {pid}")
        targets[pid] = targets.get(pid, 0.0) + float(cap)
    vintages = []
    for pid in sorted(targets):
        cap = targets[pid]
        if cap <= 0:
            continue
        life = processes[pid].lifetime
        n = max(life // step, 1)
        for k in range(1, n + 1):
            vintages.append(Vintage(pid, first_year - life + step * k, cap / n))
    return CapacityStock(tuple(vintages))


def retire_and_seed_stock(stock: CapacityStock | None, demands: DemandSet,
                          processes: Mapping[str, ProcessSpec], period_year: int,
                          step: int = 5, extra: Mapping[str, float] | None = None) -> CapacityStock:
    """Seed the initial stock when ``stock`` is None, then retire by age.

    Vintages with age >= lifetime at ``period_year`` are removed.
    """
    if stock is None:
        stock = seed_stock(demands, processes, period_year, step, extra)
    for v in stock:
        if v.process not in processes:
            raise ModelError(f"stock references unknown process {v.process}")
    return stock.retire(period_year, {k: p.lifetime for k, p in processes.items()})


def surviving_capacity(stock: CapacityStock, process: ProcessSpec, year: int) -> float:
    return float(sum(v.capacity for v in stock.vintages
                     if v.process == process.id and v.build_year <= year
                     and year - v.build_year < process.lifetime))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate_model(products: Mapping[str, Product], processes: Mapping[str, ProcessSpec],
                   demands: DemandSet, schedule: EmissionsSchedule,
                   investment_years: Iterable[int] | None = None,
                   stock: CapacityStock | None = None,
                   series: Mapping[str, np.ndarray] | None = None) -> list[str]:
    """Return human-readable violations; an empty list means well-formed."""
    report: list[str] = []
    years = sorted(investment_years) if investment_years is not None else sorted(schedule.caps)
    for pid, proc in processes.items():
        if proc.reference_product not in products:
            report.append(f"process {pid}: dangling reference product {proc.reference_product}")
        ref = proc.flows.get(proc.reference_product)
        if ref is None:
            report.append(f"process {pid}: missing reference flow")
        elif any(v != 1.0 for v in ref.values):
            report.append(f"process {pid}: reference flow must be exactly +1")
        for q in proc.flows:
            if q not in products:
                report.append(f"process {pid}: dangling product id {q}")
        for name, table in proc.year_tables().items():
            if any(not math.isfinite(v) for v in table.values):
                report.append(f"process {pid}: non-finite {name}")
        if any(v < 0 for v in proc.capex.values):
            report.append(f"process {pid}: negative capex")
        if proc.max_capacity is not None and proc.max_capacity < 0:
            report.append(f"process {pid}: negative max_capacity")
        if proc.availability is not None and series is not None and proc.availability not in series:
            report.append(f"process {pid}: unknown availability series {proc.availability}")
        if proc.is_storage and not proc.storage_hours:
            report.append(f"process {pid}: storage without storage_hours")
        covered = [y for y in years if y >= proc.available_from]
        for name, table in proc.year_tables().items():
            if table.years != (0,) and covered and table.first_year() > covered[0]:
                report.append(f"process {pid}: {name} does not cover {covered[0]}")
    for prod in demands.products():
        if prod not in products:
            report.append(f"demand: dangling product id {prod}")
            continue
        makers = [p for p in processes.values() if any(v > 0 for v in
                  (processes[p.id].flows.get(prod) or YearTable.constant(0.0)).values)]
        if not makers and not products[prod].importable:
            report.append(f"demand for {prod}: uncovered demand (no producing process or import)")
    for prod, pid in demands.profiles.items():
        if series is not None and pid not in series:
            report.append(f"demand for {prod}: unknown profile series {pid}")
    for prod, d in demands.constant.items():
        if prod in products and products[prod].unit == "tonne" and d < 0:
            report.append(f"demand for {prod}: negative")
    if stock is not None:
        for v in stock:
            if v.process not in processes:
                report.append(f"stock: dangling process id {v.process}")
            if v.capacity < 0:
                report.append(f"stock: negative capacity for {v.process}")
    for y in years:
        if y not in schedule.caps:
            report.append(f"emissions schedule: no cap for {y}")
    if schedule.residual_penalty is not None and schedule.residual_penalty < 0:
        report.append("emissions schedule: negative residual penalty")
    if series is not None:
        for sid, arr in series.items():
            if len(arr) != HOURS_PER_YEAR:
                report.append(f"series {sid}: expected {HOURS_PER_YEAR} values, got {len(arr)}")
    return report


def validate(model: Model, stock: CapacityStock | None = None) -> list[str]:
    report = validate_model(model.products, model.processes, model.demands, model.schedule,
                            model.scenario.investment_years, stock, model.series)
    for pid in model.initial_stock:
        if pid not in model.processes:
            report.append(f"initial stock: dangling process id {pid}")
    for s in model.services:
        for pid in (s.fossil_process, s.electrified_process):
            if pid not in model.processes:
                report.append(f"service {s.id}: dangling process id {pid}")
    return report
