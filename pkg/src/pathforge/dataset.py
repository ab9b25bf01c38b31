"""Dataset files: one JSON document plus a side-car CSV of hourly series.

Layout of the JSON document::

    products            list of product records
    processes           list of process records; year-keyed values are
                        either a number or {"year": value}
    demands             {"annual": {...}, "hourly": {...},
                         "profiles": {product: {"series": id, "annual": total}}}
    emissions_schedule  {"caps": {year: Mt or null}, "residual_penalty": k€/t}
    scenario            scenario settings
    scenarios           named overrides of scenario, processes, products,
                        emissions_schedule
    profiles            CSV file name, relative to the JSON document
    initial_stock, services, priority_sectors

Values with ``"provenance": "placeholder"`` stand in for unpublished data.
"""

from __future__ import annotations

import copy
import csv
import hashlib
import json
from pathlib import Path
from typing import Mapping

import numpy as np

from .model import (HOURS_PER_YEAR, DemandSet, EmissionsSchedule, Model, ModelError, ProcessSpec,
                    Product, ScenarioConfig, Service, YearTable)

BUNDLED = Path(__file__).resolve().parent / "data"


class DatasetError(ValueError):
    """A dataset file is missing, unreadable or malformed."""


def bundled(name: str) -> Path:
    """Path of a bundled dataset document (``desk`` or ``toy``)."""
    return BUNDLED / name / "dataset.json"


def read_series_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Read an 8760-row CSV with a header row of series ids."""
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DatasetError(f"cannot read series file {path}: {exc}") from exc
    if not rows:
        raise DatasetError(f"{path}: empty series file")
    header, body = rows[0], rows[1:]
    try:
        data = np.array(body, dtype=float)
    except ValueError as exc:
        raise DatasetError(f"{path}: non-numeric value ({exc})") from exc
    if data.shape != (HOURS_PER_YEAR, len(header)):
        raise DatasetError(f"{path}: expected {HOURS_PER_YEAR} rows of {len(header)} columns, "
                           f"got shape {data.shape}")
    return {h: data[:, i].copy() for i, h in enumerate(header)}


def write_series_csv(path: str | Path, series: Mapping[str, np.ndarray]) -> None:
    ids = sorted(series)
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ids)
        cols = [np.asarray(series[i], dtype=float) for i in ids]
        for h in range(HOURS_PER_YEAR):
            w.writerow([repr(round(float(c[h]), 9)) for c in cols])


def load_document(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DatasetError(f"cannot read dataset {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise DatasetError(f"{path}: top level must be an object")
    for key in ("products", "processes", "demands", "emissions_schedule", "scenario"):
        if key not in doc:
            raise DatasetError(f"{path}: missing top-level key {key!r}")
    return doc


def apply_scenario(doc: dict, scenario: str | None) -> dict:
    """Return a copy of ``doc`` with the named scenario's overrides merged in."""
    if scenario is None or scenario == doc["scenario"].get("name", "base"):
        return doc
    table = doc.get("scenarios", {})
    if scenario not in table:
        raise DatasetError(f"unknown scenario {scenario!r}; available: {sorted(table)}")
    over = table[scenario]
    out = copy.deepcopy(doc)
    out["scenario"].update(over.get("scenario", {}))
    out["scenario"]["name"] = scenario
    out["scenario"]["overrides"] = over
    for key in ("processes", "products"):
        recs = {r["id"]: r for r in out[key]}
        for rid, fields in over.get(key, {}).items():
            if rid not in recs:
                raise DatasetError(f"scenario {scenario!r} overrides unknown {key[:-1]} {rid!r}")
            recs[rid].update(fields)
    if "emissions_schedule" in over:
        out["emissions_schedule"].update(over["emissions_schedule"])
    return out


def config_hash(doc: dict, series: Mapping[str, np.ndarray] | None = None) -> str:
    """SHA-256 over the canonical JSON document and the series values."""
    h = hashlib.sha256(json.dumps(doc, sort_keys=True, separators=(",", ":")).encode())
    for sid in sorted(series or {}):
        h.update(sid.encode())
        h.update(np.ascontiguousarray(series[sid], dtype="<f8").tobytes())
    return h.hexdigest()


def _process(rec: Mapping) -> ProcessSpec:
    rec = dict(rec)
    capex = YearTable.parse(rec.get("capex", 0.0))
    if "opex_fixed_percent" in rec:
        pct = YearTable.parse(rec["opex_fixed_percent"])
        years = sorted(set(capex.years) | set(pct.years))
        opex_fixed = YearTable(tuple(years), tuple(capex.at(y) * pct.at(y) / 100.0 for y in years))
    else:
        opex_fixed = YearTable.parse(rec.get("opex_fixed", 0.0))
    return ProcessSpec(
        id=rec["id"], reference_product=rec["reference_product"], flows=rec["flows"],
        capex=capex, opex_fixed=opex_fixed,
        opex_var=YearTable.parse(rec.get("opex_var", 0.0)),
        direct_emissions=YearTable.parse(rec.get("direct_emissions", 0.0)),
        lifetime=int(rec.get("lifetime", 30)), available_from=int(rec.get("available_from", 0)),
        tags=frozenset(rec.get("tags", ())), sector=rec.get("sector", "other"),
        name=rec.get("name", ""), availability=rec.get("availability"),
        max_capacity=rec.get("max_capacity"), storage_hours=rec.get("storage_hours"),
        efficiency=float(rec.get("efficiency", 1.0)),
        provenance=rec.get("provenance", "public"),
    )


def _product(rec: Mapping) -> Product:
    known = {"id", "name", "unit", "carbon_mass_fraction", "use_phase_combusts", "import_price",
             "import_emissions", "co2_role", "disposal_emissions", "sector", "provenance"}
    return Product(**{k: v for k, v in rec.items() if k in known})


def model_from_document(doc: dict, series: Mapping[str, np.ndarray]) -> Model:
    try:
        products = {r["id"]: _product(r) for r in doc["products"]}
        processes = {r["id"]: _process(r) for r in doc["processes"]}
    except KeyError as exc:
        raise DatasetError(f"record without required field {exc}") from exc
    series = dict(series)
    dem = doc["demands"]
    constant = {q: v / HOURS_PER_YEAR for q, v in dem.get("annual", {}).items()}
    for q, v in dem.get("hourly", {}).items():
        constant[q] = float(v)
    profiles = {}
    for q, spec in dem.get("profiles", {}).items():
        sid = spec["series"]
        if sid not in series:
            raise DatasetError(f"demand profile for {q} references unknown series {sid}")
        arr = np.asarray(series[sid], dtype=float)
        if "annual" in spec:
            total = arr.sum()
            if total <= 0:
                raise DatasetError(f"series {sid} cannot be scaled to an annual total")
            arr = arr * (float(spec["annual"]) / total)
        key = f"demand:{q}"
        series[key] = arr
        profiles[q] = key
    sch = doc["emissions_schedule"]
    schedule = EmissionsSchedule(
        {int(y): (None if v is None else float(v)) for y, v in sch["caps"].items()},
        sch.get("residual_penalty"))
    sc = dict(doc["scenario"])
    if "investment_years" in sc:
        sc["investment_years"] = tuple(sc["investment_years"])
    scenario = ScenarioConfig(**sc)
    services = tuple(Service(**s) for s in doc.get("services", []))
    return Model(products, processes, DemandSet(constant, profiles), schedule, scenario,
                 series, doc.get("initial_stock", {}), services,
                 tuple(doc.get("priority_sectors", ())), doc.get("name", "model"))


def load_dataset(path: str | Path, scenario: str | None = None) -> Model:
    """Load a dataset document, its series and optional scenario overrides.

    Raises
    ------
    DatasetError
        Missing or malformed files.
    ModelError
        Records that violate type invariants (unknown unit, bad lifetime).
    """
    path = Path(path)
    doc = apply_scenario(load_document(path), scenario)
    series = {}
    if doc.get("profiles"):
        series = read_series_csv(path.parent / doc["profiles"])
    try:
        return model_from_document(doc, series)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (DatasetError, ModelError)):
            raise
        raise DatasetError(f"{path}: {exc}") from exc


def load_with_hash(path: str | Path, scenario: str | None = None) -> tuple[Model, str, dict]:
    """Model, configuration hash and the merged document."""
    path = Path(path)
    doc = apply_scenario(load_document(path), scenario)
    series = read_series_csv(path.parent / doc["profiles"]) if doc.get("profiles") else {}
    return model_from_document(doc, series), config_hash(doc, series), doc
