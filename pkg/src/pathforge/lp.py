"""Sparse linear program container, MPS export/import and JSON dumps."""

from __future__ import annotations

import base64
import hashlib
import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

SENSES = ("<=", "=", ">=")
_MPS_SENSE = {"<=": "L", "=": "E", ">=": "G"}
_MPS_SENSE_INV = {v: k for k, v in _MPS_SENSE.items()}


class LpError(ValueError):
    """Raised for malformed linear programs."""


class LinearProgram:
    """A minimisation LP with named, bounded columns and sensed rows.

    Coefficients are stored as COO triplets and assembled on demand, so
    building large models row by row stays cheap.
    """

    def __init__(self, name: str = "lp"):
        self.name = name
        self.col_names: list[str] = []
        self.col_lb: list[float] = []
        self.col_ub: list[float] = []
        self.col_cost: list[float] = []
        self.row_names: list[str] = []
        self.row_sense: list[str] = []
        self.row_rhs: list[float] = []
        self.metadata: dict[str, str] = {}
        self.objective_offset = 0.0
        self._ri: list[int] = []
        self._cj: list[int] = []
        self._val: list[float] = []
        self._col_index: dict[str, int] = {}
        self._row_index: dict[str, int] = {}
        self._matrix_cache = None

    # -- construction -----------------------------------------------------
    @property
    def n_cols(self) -> int:
        return len(self.col_names)

    @property
    def n_rows(self) -> int:
        return len(self.row_names)

    @property
    def nnz(self) -> int:
        return len(self._val)

    def add_column(self, name: str, lb: float = 0.0, ub: float = math.inf,
                   cost: float = 0.0, tag: str | None = None) -> int:
        if name in self._col_index:
            raise LpError(f"duplicate column name {name!r}")
        if lb > ub:
            raise LpError(f"column {name!r}: lower bound {lb} > upper bound {ub}")
        j = len(self.col_names)
        self.col_names.append(name)
        self.col_lb.append(float(lb))
        self.col_ub.append(float(ub))
        self.col_cost.append(float(cost))
        self._col_index[name] = j
        if tag is not None:
            self.metadata[name] = tag
        return j

    def add_row(self, name: str, coeffs: Mapping | Iterable, sense: str,
                rhs: float, tag: str | None = None) -> int:
        """Add a row; ``coeffs`` maps column index or name to coefficient.

        Repeated columns are summed. Zero coefficients are dropped.
        """
        if sense not in SENSES:
            raise LpError(f"row {name!r}: unknown sense {sense!r}")
        if name in self._row_index:
            raise LpError(f"duplicate row name {name!r}")
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        merged: dict[int, float] = {}
        for key, val in items:
            j = self._col_index[key] if isinstance(key, str) else int(key)
            if not 0 <= j < self.n_cols:
                raise LpError(f"row {name!r} references missing column {key!r}")
            merged[j] = merged.get(j, 0.0) + float(val)
        i = len(self.row_names)
        for j, v in merged.items():
            if v != 0.0:
                self._ri.append(i)
                self._cj.append(j)
                self._val.append(v)
        self.row_names.append(name)
        self.row_sense.append(sense)
        self.row_rhs.append(float(rhs))
        self._row_index[name] = i
        if tag is not None:
            self.metadata[name] = tag
        self._matrix_cache = None
        return i

    def col(self, name: str) -> int:
        return self._col_index[name]

    def row(self, name: str) -> int:
        return self._row_index[name]

    def has_col(self, name: str) -> bool:
        return name in self._col_index

    def has_row(self, name: str) -> bool:
        return name in self._row_index

    # -- views --------------------------------------------------------------
    def matrix(self) -> sp.csr_matrix:
        """Constraint matrix as CSR (rows x columns)."""
        if self._matrix_cache is None or self._matrix_cache.shape != (self.n_rows, self.n_cols):
            self._matrix_cache = sp.csr_matrix(
                (np.asarray(self._val, dtype=float),
                 (np.asarray(self._ri, dtype=np.int64), np.asarray(self._cj, dtype=np.int64))),
                shape=(self.n_rows, self.n_cols),
            )
            self._matrix_cache.sum_duplicates()
        return self._matrix_cache

    def arrays(self):
        """Return ``(A, b, c, lb, ub, senses)`` as numpy/scipy objects."""
        return (self.matrix(), np.asarray(self.row_rhs, dtype=float),
                np.asarray(self.col_cost, dtype=float),
                np.asarray(self.col_lb, dtype=float), np.asarray(self.col_ub, dtype=float),
                list(self.row_sense))

    def validate(self) -> list[str]:
        problems = []
        for name, v in zip(self.row_names, self.row_rhs):
            if not math.isfinite(v):
                problems.append(f"row {name}: non-finite rhs")
        for name, lo, hi, c in zip(self.col_names, self.col_lb, self.col_ub, self.col_cost):
            if not math.isfinite(c):
                problems.append(f"column {name}: non-finite cost")
            if lo > hi:
                problems.append(f"column {name}: lb > ub")
            if lo == math.inf or hi == -math.inf:
                problems.append(f"column {name}: empty bound interval")
        if any(not math.isfinite(v) for v in self._val):
            problems.append("non-finite matrix coefficient")
        return problems

    def row_coefficients(self, name: str) -> dict[str, float]:
        i = self.row(name)
        A = self.matrix()
        start, end = A.indptr[i], A.indptr[i + 1]
        return {self.col_names[j]: float(v) for j, v in zip(A.indices[start:end], A.data[start:end])}

    # -- serialisation ----------------------------------------------------------
    def to_dict(self) -> dict:
        A = self.matrix()
        rows = []
        for i, name in enumerate(self.row_names):
            s, e = A.indptr[i], A.indptr[i + 1]
            rows.append({
                "name": name,
                "sense": self.row_sense[i],
                "rhs": self.row_rhs[i],
                "coefficients": {self.col_names[j]: float(v) for j, v in zip(A.indices[s:e], A.data[s:e])},
            })
        cols = [{"name": n, "lb": _json_num(lo), "ub": _json_num(hi), "cost": c}
                for n, lo, hi, c in zip(self.col_names, self.col_lb, self.col_ub, self.col_cost)]
        return {"name": self.name, "objective_offset": self.objective_offset,
                "columns": cols, "rows": rows, "metadata": dict(sorted(self.metadata.items()))}

    @classmethod
    def from_dict(cls, data: dict) -> "LinearProgram":
        lp = cls(data.get("name", "lp"))
        lp.objective_offset = float(data.get("objective_offset", 0.0))
        for col in data["columns"]:
            lp.add_column(col["name"], _from_json_num(col["lb"]), _from_json_num(col["ub"]), col["cost"])
        for row in data["rows"]:
            lp.add_row(row["name"], row["coefficients"], row["sense"], row["rhs"])
        lp.metadata.update(data.get("metadata", {}))
        return lp

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=False)


def _json_num(v: float):
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    return v


def _from_json_num(v) -> float:
    return float(v)


# ---------------------------------------------------------------------------
# MPS
# ---------------------------------------------------------------------------

@dataclass
class MpsDocument:
    text: str
    names: dict[str, str]
    """Short MPS name -> original LP name (rows, columns and the objective)."""

    def name_map_json(self) -> str:
        return json.dumps(self.names, indent=1, sort_keys=True)


def short_names(names: Iterable[str], prefix: str, taken: set[str]) -> dict[str, str]:
    """Map long names to unique 8-character MPS identifiers.

    The identifier is ``prefix`` followed by seven base32 characters of the
    SHA-1 digest of the name; a collision is resolved by re-hashing with an
    integer salt, so the mapping depends only on the names and their order.
    """
    out: dict[str, str] = {}
    for name in names:
        salt = 0
        while True:
            payload = name if salt == 0 else f"{name}#{salt}"
            digest = hashlib.sha1(payload.encode("utf-8")).digest()
            short = prefix + base64.b32encode(digest).decode("ascii")[:7]
            if short not in taken:
                break
            salt += 1
        taken.add(short)
        out[name] = short
    return out


def _fmt(v: float) -> str:
    s = repr(float(v))
    if s.endswith(".0"):
        s = s[:-2]
    if s == "-0":
        s = "0"
    if len(s) > 12:
        s = f"{v:.6E}"
        if len(s) > 12:
            s = f"{v:.5E}"
    return s


def _line(code: str, name1: str, name2: str = "", v1: str = "", name3: str = "", v2: str = "") -> str:
    # fixed fields: 2-3, 5-12, 15-22, 25-36, 40-47, 50-61 (1-based)
    s = f" {code:<2} {name1:<8}  {name2:<8}  {v1:>12}"
    if name3:
        s += f"   {name3:<8}  {v2:>12}"
    return s.rstrip()


def export_mps(lp: LinearProgram, objective_name: str = "OBJ") -> MpsDocument:
    """Write ``lp`` as fixed-format MPS with hashed 8-character names."""
    taken = {objective_name}
    rmap = short_names(lp.row_names, "R", taken)
    cmap = short_names(lp.col_names, "C", taken)
    A = lp.matrix().tocsc()
    out = [f"NAME          {lp.name[:8].upper() or 'LP'}", "ROWS", f" N  {objective_name}"]
    for name, sense in zip(lp.row_names, lp.row_sense):
        out.append(f" {_MPS_SENSE[sense]}  {rmap[name]}")
    out.append("COLUMNS")
    for j, name in enumerate(lp.col_names):
        entries = []
        if lp.col_cost[j] != 0.0:
            entries.append((objective_name, lp.col_cost[j]))
        s, e = A.indptr[j], A.indptr[j + 1]
        for i, v in zip(A.indices[s:e], A.data[s:e]):
            entries.append((rmap[lp.row_names[i]], float(v)))
        if not entries:
            # keep the column visible to readers
            entries.append((objective_name, 0.0))
        for k in range(0, len(entries), 2):
            pair = entries[k:k + 2]
            if len(pair) == 2:
                out.append(_line("", cmap[name], pair[0][0], _fmt(pair[0][1]), pair[1][0], _fmt(pair[1][1])))
            else:
                out.append(_line("", cmap[name], pair[0][0], _fmt(pair[0][1])))
    out.append("RHS")
    rhs_entries = [(rmap[n], v) for n, v in zip(lp.row_names, lp.row_rhs) if v != 0.0]
    if lp.objective_offset:
        rhs_entries.append((objective_name, -lp.objective_offset))
    for k in range(0, len(rhs_entries), 2):
        pair = rhs_entries[k:k + 2]
        if len(pair) == 2:
            out.append(_line("", "RHS", pair[0][0], _fmt(pair[0][1]), pair[1][0], _fmt(pair[1][1])))
        else:
            out.append(_line("", "RHS", pair[0][0], _fmt(pair[0][1])))
    out.append("BOUNDS")
    for j, name in enumerate(lp.col_names):
        lo, hi = lp.col_lb[j], lp.col_ub[j]
        c = cmap[name]
        if lo == hi:
            out.append(_line("FX", "BND", c, _fmt(lo)))
            continue
        if lo == -math.inf and hi == math.inf:
            out.append(_line("FR", "BND", c))
            continue
        if lo == -math.inf:
            out.append(_line("MI", "BND", c))
        elif lo != 0.0:
            out.append(_line("LO", "BND", c, _fmt(lo)))
        if hi != math.inf:
            out.append(_line("UP", "BND", c, _fmt(hi)))
    out.append("ENDATA")
    names = {objective_name: "__objective__"}
    names.update({v: k for k, v in rmap.items()})
    names.update({v: k for k, v in cmap.items()})
    return MpsDocument("\n".join(out) + "\n", names)


def read_mps(text: str, names: Mapping[str, str] | None = None) -> LinearProgram:
    """Parse fixed or free MPS (whitespace separated, no blanks in names).

    ``names`` optionally maps short identifiers back to long names.
    """
    names = dict(names or {})
    rename = lambda s: names.get(s, s)  # noqa: E731
    lp = LinearProgram()
    section = None
    objective = None
    row_sense: dict[str, str] = {}
    row_order: list[str] = []
    col_entries: dict[str, dict[str, float]] = {}
    col_order: list[str] = []
    cost: dict[str, float] = {}
    rhs: dict[str, float] = {}
    lb: dict[str, float] = {}
    ub: dict[str, float] = {}
    offset = 0.0
    for raw in text.splitlines():
        if not raw.strip() or raw.startswith("*"):
            continue
        if not raw[0].isspace():
            head = raw.split()
            section = head[0].upper()
            if section == "NAME" and len(head) > 1:
                lp.name = head[1]
            continue
        tok = raw.split()
        if section == "ROWS":
            sense, rname = tok[0].upper(), tok[1]
            if sense == "N":
                if objective is None:
                    objective = rname
                continue
            row_sense[rname] = _MPS_SENSE_INV[sense]
            row_order.append(rname)
        elif section == "COLUMNS":
            if "MARKER" in tok[1:2] or (len(tok) > 2 and "'MARKER'" in tok):
                raise LpError("integer markers are not supported")
            cname = tok[0]
            if cname not in col_entries:
                col_entries[cname] = {}
                col_order.append(cname)
            for k in range(1, len(tok) - 1, 2):
                rname, val = tok[k], float(tok[k + 1])
                if rname == objective:
                    cost[cname] = cost.get(cname, 0.0) + val
                elif rname in row_sense:
                    col_entries[cname][rname] = col_entries[cname].get(rname, 0.0) + val
        elif section == "RHS":
            body = tok[1:] if len(tok) % 2 == 1 else tok
            for k in range(0, len(body) - 1, 2):
                rname, val = body[k], float(body[k + 1])
                if rname == objective:
                    offset = -val
                else:
                    rhs[rname] = val
        elif section == "BOUNDS":
            # kind, bound-set name, column[, value]
            kind, cname = tok[0].upper(), tok[2]
            val = float(tok[3]) if len(tok) >= 4 else None
            if kind == "UP":
                ub[cname] = val
                if val < 0 and cname not in lb:
                    lb[cname] = -math.inf
            elif kind == "LO":
                lb[cname] = val
            elif kind == "FX":
                lb[cname] = ub[cname] = val
            elif kind == "FR":
                lb[cname], ub[cname] = -math.inf, math.inf
            elif kind == "MI":
                lb[cname] = -math.inf
            elif kind == "PL":
                ub[cname] = math.inf
            else:
                raise LpError(f"unsupported bound type {kind}")
        elif section == "RANGES":
            raise LpError("RANGES are not supported")
    lp.objective_offset = offset
    for c in col_order:
        lp.add_column(rename(c), lb.get(c, 0.0), ub.get(c, math.inf), cost.get(c, 0.0))
    by_row: dict[str, dict[int, float]] = {r: {} for r in row_order}
    for j, c in enumerate(col_order):
        for r, v in col_entries[c].items():
            by_row[r][j] = v
    for r in row_order:
        lp.add_row(rename(r), by_row[r], row_sense[r], rhs.get(r, 0.0))
    return lp
