"""Command-line front end.

Every command writes below ``<out>/<scenario>/<command>/`` and exits with
0 on success, 2 on a validation failure, 3 on an infeasible model and 4 on
an input/output or parse error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import datetime as dt
import io
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .analytics import (cost_avoided_csv, cost_avoided_table, load_duration, merit_order_svg,
                        step_curves, utilization_csv)
from .build import build_window_lp
from .dataset import DatasetError, bundled, load_with_hash
from .lp import export_mps
from .model import Model, ModelError, retire_and_seed_stock, validate
from .pathway import PathwayInfeasible, PathwayResult, run_pathway, typical_periods_for
from .simplex import compare_external, read_solution_csv, solve
from .timeagg import aggregate

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("pathforge")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclasses.dataclass
class RunManifest:
    """Provenance of one command run; only the timestamps vary between reruns."""

    command: str
    dataset: str
    scenario: str
    config_hash: str
    tool_version: str
    started: str
    finished: str = ""
    seed: int | None = None
    threads: int = 1
    overrides: dict = dataclasses.field(default_factory=dict)
    outputs: list[str] = dataclasses.field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=1, sort_keys=True) + "\n"


def _now() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")


def threads_from_env() -> int:
    """Worker cap from PATHFORGE_THREADS; the solver itself is single-threaded."""
    raw = os.environ.get("PATHFORGE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise CliError(EXIT_IO, f"PATHFORGE_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise CliError(EXIT_IO, f"PATHFORGE_THREADS must be positive, got {n}")
    return n


def _dataset_path(arg: str | None) -> Path:
    if arg is None:
        return bundled("desk")
    p = Path(arg)
    if not p.suffix and not p.exists() and bundled(arg).exists():
        return bundled(arg)      # bundled dataset by name
    return p


def _load(args) -> tuple[Model, str, dict, Path]:
    path = _dataset_path(args.dataset)
    try:
        model, digest, doc = load_with_hash(path, args.scenario)
    except DatasetError as exc:
        raise CliError(EXIT_IO, str(exc)) from exc
    except ModelError as exc:
        raise CliError(EXIT_INVALID, str(exc)) from exc
    if args.seed is not None:
        model = dataclasses.replace(model, scenario=dataclasses.replace(model.scenario,
                                                                        seed=args.seed))
    return model, digest, doc, path


def _outdir(args, scenario: str, command: str) -> Path:
    d = Path(args.out) / scenario / command
    try:
        d.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot create {d}: {exc}") from exc
    return d


def _write(directory: Path, name: str, text: str, outputs: list[str]) -> Path:
    path = directory / name
    try:
        path.write_text(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from exc
    outputs.append(name)
    return path


def _manifest(args, command: str, path: Path, model: Model, digest: str, doc: dict,
              started: str) -> RunManifest:
    return RunManifest(command=command, dataset=str(path), scenario=model.scenario.name,
                       config_hash=digest, tool_version=__version__, started=started,
                       seed=model.scenario.seed, threads=threads_from_env(),
                       overrides=doc["scenario"].get("overrides", {}))


def _finish(directory: Path, manifest: RunManifest) -> None:
    manifest.finished = _now()
    manifest.outputs = sorted(manifest.outputs)
    _write(directory, "manifest.json", manifest.to_json(), [])


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    started = _now()
    model, digest, doc, path = _load(args)
    report = validate(model)
    out = _outdir(args, model.scenario.name, "validate")
    man = _manifest(args, "validate", path, model, digest, doc, started)
    _write(out, "report.json", json.dumps({"dataset": str(path), "problems": report},
                                          indent=1) + "\n", man.outputs)
    _finish(out, man)
    if report:
        for line in report:
            print(line)
        print(f"{len(report)} problem(s) in {path}")
        return EXIT_INVALID
    print(f"{path}: ok ({len(model.products)} products, {len(model.processes)} processes)")
    return EXIT_OK


def typical_periods_csv(tps) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    ids = tps.series_ids
    w.writerow(["period", "step", "weight_periods", "medoid_period"] + ids)
    for k, s in tps.steps():
        w.writerow([k, s, int(tps.weights[k]), int(tps.medoids[k])]
                   + [repr(float(tps.values[i][k, s])) for i in ids])
    return buf.getvalue()


def cmd_aggregate(args) -> int:
    started = _now()
    model, digest, doc, path = _load(args)
    sc = model.scenario
    n = args.periods if args.periods is not None else sc.typical_periods
    k = args.steps if args.steps is not None else sc.hours_per_typical_period
    if not model.series:
        raise CliError(EXIT_INVALID, f"{path}: dataset has no hourly series to aggregate")
    try:
        tps = aggregate(model.series, n, k, seed=sc.seed, restarts=args.restarts)
    except ValueError as exc:
        raise CliError(EXIT_INVALID, str(exc)) from exc
    out = _outdir(args, sc.name, "aggregate")
    man = _manifest(args, "aggregate", path, model, digest, doc, started)
    _write(out, "typical_periods.json", tps.to_json() + "\n", man.outputs)
    _write(out, "typical_periods.csv", typical_periods_csv(tps), man.outputs)
    _finish(out, man)
    print(f"{n} typical periods x {k} steps written to {out}")
    return EXIT_OK


def cmd_pathway(args) -> int:
    started = _now()
    model, digest, doc, path = _load(args)
    problems = validate(model)
    if problems:
        for line in problems:
            print(line, file=sys.stderr)
        raise CliError(EXIT_INVALID, f"{path}: {len(problems)} validation problem(s)")
    out = _outdir(args, model.scenario.name, "pathway")
    man = _manifest(args, "pathway", path, model, digest, doc, started)

    def dump(year, lp):
        log.info("window %d: %d rows, %d columns", year, lp.n_rows, lp.n_cols)
        if args.dump_mps:
            doc_ = export_mps(lp)
            _write(out, f"window_{year}.mps", doc_.text, man.outputs)
            _write(out, f"window_{year}.names.json", doc_.name_map_json() + "\n", man.outputs)

    try:
        result = run_pathway(model, on_window=dump)
    except PathwayInfeasible as exc:
        _write(out, "certificate.json", json.dumps(exc.to_dict(), indent=1, sort_keys=True) + "\n",
               man.outputs)
        _finish(out, man)
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    _write(out, "result.json", result.to_json() + "\n", man.outputs)
    _write(out, "capacities.csv", result.capacities_csv(), man.outputs)
    _write(out, "operation.csv", result.operation_csv(), man.outputs)
    _write(out, "emissions.csv", result.emissions_csv(), man.outputs)
    _write(out, "prices.csv", result.prices_csv(), man.outputs)
    _finish(out, man)
    for y in sorted(result.years):
        r = result.years[y]
        print(f"{y}: CO2 price {r.co2_price:.4g} kEUR/t, net emissions {r.net_emissions:.4g} Mt "
              f"(cap {r.cap:.4g}), residual {r.residual:.4g} Mt")
    return EXIT_OK


def _step_arg(text: str) -> tuple[int, int]:
    try:
        k, s = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected PERIOD,STEP") from None
    return k, s


def cmd_analyze(args) -> int:
    started = _now()
    result_path = Path(args.result) if args.result else None
    if result_path is None:
        scen = args.scenario or "base"
        result_path = Path(args.out) / scen / "pathway" / "result.json"
    try:
        result = PathwayResult.from_json(result_path.read_text())
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read result {result_path}: {exc}") from exc
    except (ValueError, KeyError) as exc:
        raise CliError(EXIT_IO, f"{result_path}: malformed result ({exc})") from exc
    if args.dataset is None and args.scenario is None:
        # the model the result came from
        mpath = result_path.parent / "manifest.json"
        try:
            man_in = json.loads(mpath.read_text())
        except (OSError, ValueError) as exc:
            raise CliError(EXIT_IO, f"no --dataset given and cannot read {mpath}: {exc}") from exc
        args.dataset, args.scenario = man_in["dataset"], man_in["scenario"]
    model, digest, doc, path = _load(args)
    years = sorted(result.years) if args.year is None else [args.year]
    for y in years:
        if y not in result.years:
            raise CliError(EXIT_INVALID, f"year {y} not in result (solved: {sorted(result.years)})")
    if args.step is not None:
        k, s = args.step
        if not (0 <= k < result.tps.n_periods and 0 <= s < result.tps.steps_per_period):
            raise CliError(EXIT_INVALID, f"typical step {k},{s} out of range")
    out = _outdir(args, result.scenario, "analyze")
    man = _manifest(args, "analyze", path, model, digest, doc, started)
    for y in years:
        rec = result.year(y)
        _write(out, f"cost_avoided_{y}.csv",
               cost_avoided_csv(cost_avoided_table(result, model, y), rec.co2_price), man.outputs)
        curves = step_curves(result, model, y)
        for (k, s), curve in sorted(curves.items()):
            if args.step is not None and (k, s) != args.step:
                continue
            _write(out, f"merit_order_{y}_{k}_{s}.csv", curve.to_csv(), man.outputs)
            _write(out, f"merit_order_{y}_{k}_{s}.svg", merit_order_svg(curve), man.outputs)
        _write(out, f"load_duration_{y}.csv", load_duration(result, y, model).to_csv(),
               man.outputs)
        _write(out, f"utilization_{y}.csv", utilization_csv(result, y), man.outputs)
    _finish(out, man)
    print(f"analytics for {', '.join(map(str, years))} written to {out}")
    return EXIT_OK


def cmd_export_mps(args) -> int:
    started = _now()
    model, digest, doc, path = _load(args)
    sc = model.scenario
    years = list(sc.investment_years)
    year = args.year if args.year is not None else years[0]
    if year not in years:
        raise CliError(EXIT_INVALID, f"year {year} is not an investment year ({years})")
    i = years.index(year)
    window = years[i:i + sc.foresight_periods]
    # initial stock aged to the window start; no investments of earlier windows
    stock = retire_and_seed_stock(None, model.demands, model.processes, years[0], sc.step,
                                  model.initial_stock).retire(year, model.lifetimes)
    lp = build_window_lp(model, stock, window, typical_periods_for(model))
    out = _outdir(args, sc.name, "export-mps")
    man = _manifest(args, "export-mps", path, model, digest, doc, started)
    mps = export_mps(lp)
    _write(out, f"window_{year}.mps", mps.text, man.outputs)
    _write(out, f"window_{year}.names.json", mps.name_map_json() + "\n", man.outputs)
    if args.solution:
        try:
            values = read_solution_csv(args.solution)
        except (OSError, ValueError) as exc:
            raise CliError(EXIT_IO, f"cannot read solution {args.solution}: {exc}") from exc
        names = {**mps.names, **{v: v for v in mps.names.values()}}
        values = {names.get(k, k): v for k, v in values.items()}
        check = compare_external(lp, values, solve(lp))
        _write(out, f"check_{year}.json", json.dumps(check, indent=1, sort_keys=True) + "\n",
               man.outputs)
        print(json.dumps(check, indent=1, sort_keys=True))
    _finish(out, man)
    print(f"window {window[0]}-{window[-1]}: {lp.n_rows} rows, {lp.n_cols} columns -> {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, default) -> None:
    p.add_argument("--dataset", default=default,
                   help="dataset JSON, or the name of a bundled dataset (desk, toy)")
    p.add_argument("--scenario", default=default, help="named scenario of the dataset")
    p.add_argument("--out", default=default, help="output root (default: out)")
    p.add_argument("--seed", type=int, default=default, help="aggregation seed")
    p.add_argument("--dump-mps", action="store_true", default=default,
                   help="write every window LP as MPS (pathway)")
    p.add_argument("-v", "--verbose", action="store_true", default=default)


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with the parse-error code rather than argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(EXIT_IO, message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pathforge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    _common(parser, None)
    parser.set_defaults(out="out", dump_mps=False, verbose=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def verb(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        _common(p, argparse.SUPPRESS)    # global flags may also follow the verb
        p.set_defaults(func=fn)
        return p

    verb("validate", cmd_validate, "check a dataset for consistency")
    p = verb("aggregate", cmd_aggregate, "aggregate hourly series into typical periods")
    p.add_argument("--periods", "-n", type=int, help="typical periods (default 6)")
    p.add_argument("--steps", "-k", type=int, help="hours per typical period (default 6)")
    p.add_argument("--restarts", type=int, default=0, help="extra seeded PAM restarts")
    verb("pathway", cmd_pathway, "solve the transition pathway")
    p = verb("analyze", cmd_analyze, "Cost-Avoided, merit-order and load-duration tables")
    p.add_argument("--result", help="result.json of a pathway run")
    p.add_argument("--year", type=int, help="year to analyse (default: all)")
    p.add_argument("--step", type=_step_arg, help="one typical step PERIOD,STEP")
    p = verb("export-mps", cmd_export_mps, "write one window LP as MPS")
    p.add_argument("--year", type=int, help="first year of the window")
    p.add_argument("--solution", help="external solution CSV (name,value) to check")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        threads_from_env()
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
