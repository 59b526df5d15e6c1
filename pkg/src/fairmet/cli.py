"""fairmet command line: ingestion, gap analysis, filling, QC, benchmarks,
catalog import/stats and the REST service.

Exit codes: 0 on success, 1 on a runtime error (bad data, missing series),
2 on a usage error.  All randomness flows from --seed; primary outputs go to
files and repeat byte-for-byte under the same seed, diagnostics go to
stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:         # Python 3.10
    import tomli as tomllib

from . import bench as bench_mod
from . import interp
from .catalog.store import CatalogStore
from .debias import debias_model, fit_debias
from .errors import FairmetError
from .features import (ALL, TEMPORAL, TEMPORAL_NEIGHBORS,
                       TEMPORAL_REANALYSIS, build_features)
from .filling import FillContext, fill_gaps, provenance_manifest
from .qc import QcConfig, default_qc_config, run_qc
from .regressors import (BASELINE_DEBIAS, BASELINE_LINEAR_INTERP, GBDT, OLS,
                         RANDOM_FOREST, ForestParams, GbdtParams, OlsParams,
                         fit, linear_baseline_model)
from .timeseries import (ObservationFormat, TimeSeries, detect_gaps,
                         parse_observations, profile_gaps,
                         serialize_observations)

INTERP_METHODS = {"nearest": interp.NEAREST, "linear": interp.LINEAR,
                  "spline": interp.SPLINE_CUBIC, "pchip": interp.PCHIP,
                  "akima": interp.AKIMA}
MODEL_METHODS = {"ols": OLS, "rf": RANDOM_FOREST, "gbdt": GBDT,
                 "debias": BASELINE_DEBIAS}

GRID_MODEL_NAMES = {
    "ols": OLS, "linear_regression": OLS,
    "rf": RANDOM_FOREST, "random_forest": RANDOM_FOREST,
    "gbdt": GBDT, "lightgbm": GBDT,
    "baseline_linear_interp": BASELINE_LINEAR_INTERP,
    "linear_interp": BASELINE_LINEAR_INTERP,
    "baseline_debias": BASELINE_DEBIAS, "debias": BASELINE_DEBIAS,
}


def _parse_step(text: str) -> int:
    text = text.strip().lower()
    if text.endswith("s"):
        text = text[:-1]
    step = int(text)
    return step


def _read_series(path: str, step: int, tz: str) -> list[TimeSeries]:
    data = Path(path).read_bytes()
    return parse_observations(data, ObservationFormat(step_seconds=step, tz=tz))


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# Subcommands

def cmd_ingest(args) -> int:
    series = _read_series(args.infile, args.step, args.tz)
    _write(args.out, serialize_observations(series))
    print(f"ingested {len(series)} series", file=sys.stderr)
    return 0


def _profile_text(series: TimeSeries) -> str:
    gaps = detect_gaps(series)
    profile = profile_gaps(series)
    lines = [f"series {series.station_id}/{series.variable} "
             f"len={len(series)} missing={series.n_missing} "
             f"({profile.total_missing_fraction:.1%})"]
    for g in gaps:
        lines.append(f"  gap start_index={g.start_index} length={g.length} "
                     f"{g.start_time.isoformat()} .. {g.end_time.isoformat()}")
    lines.append("  duration histogram: " + ", ".join(
        f"{k}: {v}" for k, v in profile.duration_histogram.items()))
    hour_counts = ", ".join(f"{h:02d}h: {c}"
                            for h, c in enumerate(profile.timing_by_hour) if c)
    lines.append(f"  gap starts by local hour: {hour_counts or '(none)'}")
    lines.append(f"  recurrence score: {profile.recurrence_score:.3f}")
    return "\n".join(lines) + "\n"


def cmd_gaps(args) -> int:
    series = _read_series(args.infile, args.step, args.tz)
    report = "".join(_profile_text(s) for s in series)
    if args.report:
        _write(args.report, report)
    else:
        sys.stdout.write(report)
    return 0


def _interp_fill(series: TimeSeries, method: str) -> TimeSeries:
    observed = np.flatnonzero(~series.missing_mask)
    missing = np.flatnonzero(series.missing_mask)
    if missing.size == 0 or observed.size < 2:
        return series
    knots = interp.Knots1D(observed.astype(float), series.values[observed])
    try:
        filled = interp.interp1d(knots, method, missing.astype(float))
    except interp.TooFewKnots as exc:
        print(f"warning: {series.station_id}/{series.variable}: {exc}",
              file=sys.stderr)
        return series
    values = series.values.copy()
    values[missing] = filled           # NaN outside the knot span stays NaN
    return series.with_values(values)


def _rbf_fill(series: TimeSeries, seed: int, window: int = 24) -> TimeSeries:
    """Per gap, fit an RBF through up to ``window`` observed knots on each
    side (time embedded on the x axis of a 2-D plane)."""
    values = series.values.copy()
    observed = np.flatnonzero(~series.missing_mask)
    kernel = interp.RbfKernel(interp.RBF_THIN_PLATE)
    for gap in detect_gaps(series):
        left = observed[observed < gap.start_index][-window:]
        right = observed[observed >= gap.start_index + gap.length][:window]
        knots = np.concatenate([left, right])
        if knots.size < 3:
            continue
        pts = np.column_stack([knots.astype(float), np.zeros(knots.size)])
        data = interp.ScatterND(pts, series.values[knots])
        queries = np.column_stack([
            np.arange(gap.start_index, gap.start_index + gap.length, dtype=float),
            np.zeros(gap.length)])
        values[gap.start_index:gap.start_index + gap.length] = \
            interp.interp_rbf(data, kernel, queries)
    return series.with_values(values)


def _model_fill_series(series, method, neighbors, reanalysis, seed):
    if method == BASELINE_DEBIAS:
        if reanalysis is None:
            raise FairmetError("--method debias requires --reanalysis")
        model = debias_model(fit_debias(series, reanalysis), seed)
        return fill_gaps(series, model,
                         FillContext(reanalysis=reanalysis))

    if reanalysis is not None and neighbors:
        feature_set = ALL
    elif neighbors:
        feature_set = TEMPORAL_NEIGHBORS
    elif reanalysis is not None:
        feature_set = TEMPORAL_REANALYSIS
    else:
        feature_set = TEMPORAL
    observed = [int(i) for i in np.flatnonzero(~series.missing_mask)]
    chain = []
    fallback_sets = [feature_set]
    if feature_set == ALL and reanalysis is not None:
        fallback_sets.append(TEMPORAL_REANALYSIS)
    if feature_set != TEMPORAL:
        fallback_sets.append(TEMPORAL)
    for fs in fallback_sets:
        matrix = build_features(series, neighbors, reanalysis, fs, observed)
        chain.append(fit(method, matrix, seed=seed, feature_set=fs))
    return fill_gaps(series, chain,
                     FillContext(neighbors=tuple(neighbors),
                                 reanalysis=reanalysis))


def cmd_fill(args) -> int:
    series_list = _read_series(args.infile, args.step, args.tz)
    neighbor_series: list[TimeSeries] = []
    for path in args.neighbors or []:
        neighbor_series.extend(_read_series(path, args.step, args.tz))
    reanalysis_series: list[TimeSeries] = []
    if args.reanalysis:
        reanalysis_series = _read_series(args.reanalysis, args.step, args.tz)

    method = args.method.lower()
    filled_all = []
    provenance_lines = []
    for series in series_list:
        if method in INTERP_METHODS:
            filled = _interp_fill(series, INTERP_METHODS[method])
        elif method == "rbf":
            filled = _rbf_fill(series, args.seed)
        elif method in MODEL_METHODS:
            nbs = [n for n in neighbor_series
                   if n.variable == series.variable
                   and n.station_id != series.station_id]
            rea = next((r for r in reanalysis_series
                        if r.variable == series.variable), None)
            result = _model_fill_series(series, MODEL_METHODS[method], nbs,
                                        rea, args.seed)
            filled = result.series
            provenance_lines.append(
                f"# {series.station_id}/{series.variable}\n"
                + provenance_manifest(result))
        else:
            print(f"unknown fill method {args.method!r}", file=sys.stderr)
            return 2
        filled_all.append(filled)
        still = int(np.isnan(filled.values).sum())
        if still:
            print(f"note: {series.station_id}/{series.variable}: "
                  f"{still} slots not fillable by {method}", file=sys.stderr)

    _write(args.out, serialize_observations(filled_all))
    if args.provenance and provenance_lines:
        _write(args.provenance, "".join(provenance_lines))
    return 0


def _load_qc_config(path: str | None, series: TimeSeries) -> QcConfig:
    """Key = value config; a `TA.` (variable code) prefix scopes a key to
    series of that variable, bare keys apply to every series."""
    config = default_qc_config(series.variable)
    if not path:
        return config
    overrides = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FairmetError(f"{path}:{lineno}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        if "." in key:
            scope, key = key.split(".", 1)
            if scope != series.variable.code:
                continue
        if key == "enabled":
            overrides[key] = tuple(v.strip() for v in value.split(","))
        elif key in ("persistence_k", "shift_max_lag", "climatology_min_days"):
            overrides[key] = int(value)
        else:
            overrides[key] = float(value)
    from dataclasses import replace
    return replace(config, **overrides)


def cmd_qc(args) -> int:
    series_list = _read_series(args.infile, args.step, args.tz)
    neighbor_series: list[TimeSeries] = []
    for path in args.neighbors or []:
        neighbor_series.extend(_read_series(path, args.step, args.tz))

    out_lines = ["timestamp,station_id,variable,value,flag"]
    report_chunks = []
    row_lines = ["station_id,variable,check,severity,index"]
    for series in series_list:
        config = _load_qc_config(args.config, series)
        nbs = [n for n in neighbor_series if n.variable == series.variable
               and n.station_id != series.station_id]
        flags, report = run_qc(series, nbs, config)
        for i, (value, flag) in enumerate(zip(series.values, flags)):
            ts = series.time_at(i).strftime("%Y-%m-%dT%H:%M:%SZ")
            text = "" if np.isnan(value) else repr(float(value))
            out_lines.append(f"{ts},{series.station_id},{series.variable},"
                             f"{text},{flag.name}")
        chunk = [f"series {series.station_id}/{series.variable}"]
        for check, counts in report.counts.items():
            flagged = counts["SUSPECT"] + counts["FAIL"]
            severity = "FAIL" if counts["FAIL"] else "SUSPECT"
            if flagged:
                chunk.append(f"  {check}: {flagged} flagged "
                             f"(indices {list(report.flagged[check])[:12]})")
            for index in report.flagged[check]:
                row_lines.append(f"{series.station_id},{series.variable},"
                                 f"{check},{severity},{index}")
        for station, lag in report.shift_lags.items():
            chunk.append(f"  shift vs {station}: lag {lag:+d} slots")
            row_lines.append(f"{series.station_id},{series.variable},"
                             f"shift:{station},LAG,{lag}")
        for station, reason in report.skipped_neighbors:
            chunk.append(f"  neighbor {station} skipped: {reason}")
        report_chunks.append("\n".join(chunk) + "\n")

    _write(args.out, "\n".join(out_lines) + "\n")
    report_text = "".join(report_chunks)
    if args.report:
        _write(args.report, report_text)
    else:
        sys.stderr.write(report_text)
    if args.report_rows:
        _write(args.report_rows, "\n".join(row_lines) + "\n")
    return 0


def _grid_from_toml(path: str, seed: int):
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    grid_spec = doc.get("grid", {})
    data_spec = doc.get("data", {})

    if data_spec.get("synthetic"):
        from .synth import make_station_network
        context = make_station_network(
            n_sites=int(data_spec.get("n_sites", 3)),
            n_slots=int(data_spec.get("n_slots", 2880)),
            seed=int(data_spec.get("seed", seed)),
            variable=grid_spec.get("variables", ["TA"])[0])
    else:
        step = int(data_spec.get("step_seconds", 3600))
        tz = data_spec.get("tz", "UTC")
        series = {}
        for s in _read_series(data_spec["observations"], step, tz):
            series[(s.station_id, str(s.variable))] = s
        reanalysis = {}
        if data_spec.get("reanalysis"):
            rea_series = _read_series(data_spec["reanalysis"], step, tz)
            for (site, var) in series:
                # a series named REANALYSIS:<site> serves that site alone,
                # otherwise the first matching-variable series serves all
                specific = next((r for r in rea_series
                                 if str(r.variable) == var
                                 and r.station_id == f"REANALYSIS:{site}"), None)
                generic = next((r for r in rea_series
                                if str(r.variable) == var), None)
                if specific or generic:
                    reanalysis[(site, var)] = specific or generic
        context = bench_mod.DataContext(series=series, reanalysis=reanalysis)

    sites = tuple(grid_spec.get("sites", ())) or tuple(sorted(
        {site for site, _ in context.series}))
    models = tuple(GRID_MODEL_NAMES[m.lower()] for m in grid_spec["models"])
    grid = bench_mod.BenchGrid(
        variables=tuple(grid_spec.get("variables", ("TA",))),
        feature_sets=tuple(f.upper() for f in grid_spec.get("feature_sets", ("ALL",))),
        models=models,
        gap_sizes=tuple(int(g) for g in grid_spec.get("gap_sizes",
                                                      bench_mod.DEFAULT_GAP_SIZES)),
        sites=sites)

    params = {}
    for name, table in doc.get("params", {}).items():
        kind = GRID_MODEL_NAMES[name.lower()]
        cls = {OLS: OlsParams, RANDOM_FOREST: ForestParams,
               GBDT: GbdtParams}[kind]
        params[kind] = cls(**table)
    return grid, context, params


def cmd_bench(args) -> int:
    grid, context, params = _grid_from_toml(args.grid, args.seed)
    rows = bench_mod.run_benchmark(grid, context, seed=args.seed,
                                   params=params or None)
    _write(args.out, bench_mod.results_to_csv(rows,
                                              include_runtime=args.timings))
    if args.aggregate:
        table = bench_mod.aggregate(rows, ("model", "gap_size"),
                                    bench_mod.MEAN)
        sys.stderr.write(bench_mod.aggregate_to_text(table))
    print(f"wrote {len(rows)} result rows to {args.out}", file=sys.stderr)
    return 0


def cmd_catalog_import(args) -> int:
    store = CatalogStore(args.data_dir)
    imported, errors = store.import_inventory(Path(args.infile).read_bytes())
    print(f"imported {imported} networks", file=sys.stderr)
    for lineno, reason in errors:
        print(f"  line {lineno}: skipped: {reason}", file=sys.stderr)
    return 0 if not errors else 1


def cmd_catalog_stats(args) -> int:
    store = CatalogStore(args.data_dir)
    field = {"country": "COUNTRY", "environment": "LOCAL_ENVIRONMENT",
             "seasonality": "SEASONALITY"}[args.group_by]
    counts = store.stats(field)
    width = max((len(k) for k in counts), default=1)
    for key, count in counts.items():
        print(f"{key.ljust(width)}  {count}")
    print(f"{'TOTAL'.ljust(width)}  {sum(counts.values())}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .catalog.service import create_app
    store = CatalogStore(args.data_dir)
    if args.fixture:
        from .catalog import fixture
        if not store.networks:
            fixture.load_fixture(store)
    app = create_app(store)
    if args.portal:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=args.portal, html=True),
                  name="portal")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairmet",
        description="Micrometeorological gap analysis, gap filling and "
                    "FAIR metadata catalog tools")
    sub = parser.add_subparsers(dest="command", required=True)

    def io_args(p, out_required=True):
        p.add_argument("--in", dest="infile", required=True,
                       help="long-format observation CSV")
        p.add_argument("--step", type=_parse_step, default=3600,
                       help="slot step, e.g. 3600s (default hourly)")
        p.add_argument("--tz", default="UTC",
                       help="IANA timezone of the stations (default UTC)")
        if out_required:
            p.add_argument("--out", required=True, help="output file")

    p = sub.add_parser("ingest", help="normalize a CSV to canonical form")
    io_args(p)

    p = sub.add_parser("gaps", help="detect and profile gaps")
    io_args(p, out_required=False)
    p.add_argument("--report", help="write the report here instead of stdout")

    p = sub.add_parser("fill", help="fill gaps with an interpolation or model")
    io_args(p)
    p.add_argument("--method", required=True,
                   choices=sorted(list(INTERP_METHODS) + ["rbf"]
                                  + list(MODEL_METHODS)))
    p.add_argument("--neighbors", action="append",
                   help="CSV with neighbor-station series (repeatable)")
    p.add_argument("--reanalysis", help="CSV with reanalysis series")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--provenance", help="write per-slot fill provenance here")

    p = sub.add_parser("qc", help="run the seven-step quality control")
    io_args(p)
    p.add_argument("--neighbors", action="append",
                   help="CSV with neighbor-station series (repeatable)")
    p.add_argument("--config", help="key = value QC config file")
    p.add_argument("--report", help="write the QC report here")
    p.add_argument("--report-rows", dest="report_rows",
                   help="write the report as machine-readable CSV rows here")

    p = sub.add_parser("bench", help="run a benchmark grid")
    p.add_argument("--grid", required=True, help="grid TOML file")
    p.add_argument("--out", required=True, help="results CSV")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--timings", action="store_true",
                   help="include wall-clock runtime_ms in the CSV "
                        "(breaks byte-identical reruns)")
    p.add_argument("--aggregate", action="store_true",
                   help="print a model x gap_size summary to stderr")

    p = sub.add_parser("catalog-import", help="import an inventory CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--data-dir", required=True)

    p = sub.add_parser("catalog-stats", help="network distribution counts")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--group-by", default="country",
                   choices=["country", "environment", "seasonality"])

    p = sub.add_parser("serve", help="serve the catalog REST API")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--fixture", action="store_true",
                   help="load the 23-network demo fixture into an empty store")
    p.add_argument("--portal",
                   help="also serve the web portal (path to frontend/)")

    return parser


HANDLERS = {
    "ingest": cmd_ingest, "gaps": cmd_gaps, "fill": cmd_fill, "qc": cmd_qc,
    "bench": cmd_bench, "catalog-import": cmd_catalog_import,
    "catalog-stats": cmd_catalog_stats, "serve": cmd_serve,
}


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return HANDLERS[args.command](args)
    except FairmetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
