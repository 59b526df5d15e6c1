"""Acceptance gate: one test per criterion, each printing a pass line with
its runtime (run with `pytest tests/test_acceptance.py -v -s`).  Tolerances
are pinned here and never loosened at runtime.
"""

import math
import random
import subprocess
import sys
import time
from datetime import datetime, timezone

import numpy as np
import pytest
from scipy.stats import spearmanr

from fairmet.bench import (MEAN, BenchGrid, aggregate, run_benchmark, score)
from fairmet.catalog import fixture
from fairmet.catalog.store import CatalogStore
from fairmet.debias import debias_model, fit_debias
from fairmet.features import ALL, TEMPORAL
from fairmet.filling import FillContext, fill_gaps
from fairmet.interp import (AKIMA, LINEAR, NEAREST, PCHIP, RBF_THIN_PLATE,
                            SPLINE_CUBIC, Knots1D, RbfKernel, ScatterND,
                            interp1d, interp_linear_2d, interp_rbf)
from fairmet.masking import apply_mask, make_coverage_masks, plan_for_series
from fairmet.qc import FaultSpec, QcConfig, default_qc_config, inject_faults, run_qc
from fairmet.regressors import (BASELINE_LINEAR_INTERP, GBDT, OLS,
                                GbdtParams, OlsParams, fit)
from fairmet.synth import make_station_network
from fairmet.timeseries import TimeSeries, VariableKind
from tests.test_interp import natural_cubic_oracle
from tests.test_regressors import make_matrix
from tests.test_timeseries import make_series


def _report(name: str, started: float, budget: float) -> None:
    elapsed = time.perf_counter() - started
    assert elapsed < budget, f"{name} took {elapsed:.1f}s, budget {budget}s"
    print(f"\nACCEPTANCE {name}: PASS ({elapsed:.2f}s, budget {budget:.0f}s)")


def test_gap_sampler_coverage():
    started = time.perf_counter()
    rng = random.Random(2024)
    for trial in range(50):
        gap_len = rng.choice([1, 2, 3, 4, 6, 8, 12, 24, 36, 48])
        series_len = rng.randint(gap_len * 5, gap_len * 5 + 3000)
        plan = make_coverage_masks(series_len, gap_len, 0.2, seed=trial)
        seen = set()
        for fold in plan.folds:
            fold_set = set(fold)
            assert not (fold_set & seen), "folds are not disjoint"
            seen |= fold_set
            assert len(fold) <= 0.2 * series_len, \
                f"fold exceeds 20% ({len(fold)}/{series_len})"
        assert seen == set(range(series_len)), "union is not 100% coverage"
    _report("gap-sampler coverage", started, budget=1.0)


def test_interpolation_exactness():
    started = time.perf_counter()
    rng = random.Random(7)
    for trial in range(100):
        n = rng.randint(6, 14)
        x = np.cumsum([rng.uniform(0.3, 3.0) for _ in range(n)])
        y = np.array([rng.uniform(-20, 20) for _ in range(n)])
        knots = Knots1D(x, y)
        for method in (NEAREST, LINEAR, SPLINE_CUBIC, PCHIP, AKIMA):
            got = interp1d(knots, method, x)
            rel = np.abs(got - y) / np.maximum(1.0, np.abs(y))
            assert rel.max() < 1e-6, f"{method} trial {trial}"
        pts = np.array([[rng.uniform(0, 10), rng.uniform(0, 10)]
                        for _ in range(n)])
        if len({tuple(p) for p in pts}) == n:
            vals = np.array([rng.uniform(-5, 5) for _ in range(n)])
            got = interp_rbf(ScatterND(pts, vals),
                             RbfKernel(RBF_THIN_PLATE, smoothing=0.0), pts)
            rel = np.abs(got - vals) / np.maximum(1.0, np.abs(vals))
            assert rel.max() < 1e-6, f"RBF trial {trial}"

    # natural cubic spline against an independent tridiagonal solve
    for trial in range(20):
        n = rng.randint(6, 12)
        x = np.cumsum([rng.uniform(0.5, 2.0) for _ in range(n)])
        y = np.array([rng.uniform(-5, 5) for _ in range(n)])
        q = np.array([rng.uniform(x[0], x[-1]) for _ in range(50)])
        got = interp1d(Knots1D(x, y), SPLINE_CUBIC, q)
        want = natural_cubic_oracle(x, y, q)
        scale = max(1.0, float(np.abs(want).max()))
        assert np.abs(got - want).max() / scale < 1e-9

    # piecewise-linear 2-D reproduces a random plane inside the hull
    for trial in range(10):
        a, b, c = (rng.uniform(-3, 3) for _ in range(3))
        pts = np.array([[rng.uniform(0, 5), rng.uniform(0, 5)]
                        for _ in range(15)])
        vals = a * pts[:, 0] + b * pts[:, 1] + c
        queries = 0.75 * pts + 0.25 * pts.mean(axis=0)
        got = interp_linear_2d(ScatterND(pts, vals), queries)
        want = a * queries[:, 0] + b * queries[:, 1] + c
        assert np.abs(got - want).max() < 1e-9
    _report("interpolation exactness", started, budget=5.0)


def test_metric_identities():
    started = time.perf_counter()
    m = score([1.0, 2.0], [1.0, 4.0])
    assert m.mae == 1.0
    assert m.rmse == math.sqrt(2.0)
    assert m.nrmse == math.sqrt(2.0)
    assert m.r2 == -7.0

    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(2, 30))
        truth = rng.normal(size=n)
        if np.ptp(truth) == 0:
            continue
        pred = truth if rng.random() < 0.3 else rng.normal(size=n)
        m = score(truth, pred)
        assert m.rmse >= m.mae
        # r2 == 1 exactly when rmse == 0 (truth has spread here)
        assert (m.r2 == 1.0) == (m.rmse == 0.0)
    _report("metric identities", started, budget=1.0)


def test_debias_exact_recovery():
    started = time.perf_counter()
    base = 12.0 + 8.0 * np.sin(2 * np.pi * np.arange(1200) / 24.0) \
        + np.cos(np.arange(1200) / 100.0) * 3.0
    obs = make_series(list(base))
    for c in (-3.75, 0.5, 2.0, 11.0):
        rea = obs.with_values(obs.values + c)
        plan = plan_for_series(obs, gap_len=4, seed=17)
        for fold in range(plan.n_folds):
            train, truth = apply_mask(obs, plan, fold)
            model = debias_model(fit_debias(train, rea))
            result = fill_gaps(train, model, FillContext(reanalysis=rea))
            for i, want in truth:
                assert abs(result.series.values[i] - want) < 1e-9
    _report("debias exact recovery", started, budget=5.0)


def _mean_rmse_by(rows, model, gaps):
    table = aggregate([r for r in rows if r.model == model],
                      ("gap_size",), MEAN)
    by_gap = {entry["gap_size"]: entry["rmse"] for entry in table}
    return [by_gap[g] for g in gaps]


@pytest.mark.slow
def test_benchmark_trends():
    started = time.perf_counter()
    gaps = (1, 4, 36, 288)
    seeds = (1, 2, 3, 4, 5)
    baseline_curves = {}
    gbdt_curves = {}
    for seed in seeds:
        context = make_station_network(n_sites=3, n_slots=2880, seed=seed)
        grid = BenchGrid(("TA",), (ALL,), (GBDT, BASELINE_LINEAR_INTERP),
                         gaps, ("site00",))
        rows = run_benchmark(grid, context, seed=seed)
        baseline_curves[seed] = _mean_rmse_by(rows, BASELINE_LINEAR_INTERP, gaps)
        gbdt_curves[seed] = _mean_rmse_by(rows, GBDT, gaps)

    # (a) the linear baseline degrades monotonically with gap size, per seed
    for seed in seeds:
        curve = baseline_curves[seed]
        assert all(curve[i] <= curve[i + 1] + 1e-12 for i in range(3)), \
            f"baseline rmse not non-decreasing for seed {seed}: {curve}"

    # (a) GBDT degrades as a trend across seeds (Spearman over all pairs)
    pairs = [(g, gbdt_curves[seed][i]) for seed in seeds
             for i, g in enumerate(gaps)]
    rho, _ = spearmanr([p[0] for p in pairs], [p[1] for p in pairs])
    assert rho > 0, f"Spearman rho(gap, rmse) = {rho}"

    # (b) GBDT with ALL features beats the baseline at long gaps
    for gap_index, gap in ((2, 36), (3, 288)):
        wins = sum(1 for seed in seeds
                   if gbdt_curves[seed][gap_index]
                   < baseline_curves[seed][gap_index])
        assert wins >= 4, f"GBDT wins at gap {gap} in only {wins}/5 seeds"
    _report("benchmark trends", started, budget=600.0)


def test_gbdt_monotone_loss_and_ols_oracle():
    started = time.perf_counter()
    rng = np.random.default_rng(11)
    for trial in range(20):
        n = int(rng.integers(30, 150))
        p = int(rng.integers(1, 6))
        X = rng.normal(size=(n, p))
        y = rng.normal(size=n) + X[:, 0]
        model = fit(GBDT, make_matrix(X, y), params=GbdtParams(rounds=40),
                    seed=trial)
        losses = model.payload.training_rmse
        assert all(losses[i + 1] <= losses[i] + 1e-12
                   for i in range(len(losses) - 1))

    for trial in range(10):
        n, p = 60, int(rng.integers(1, 8))
        X = rng.normal(size=(n, p))
        y = rng.normal(size=n)
        ridge = 1e-8
        model = fit(OLS, make_matrix(X, y), params=OlsParams(ridge=ridge))
        A = np.hstack([X, np.ones((n, 1))])
        oracle = np.linalg.solve(A.T @ A + ridge * np.eye(p + 1), A.T @ y)
        assert np.abs(model.payload.weights - oracle).max() < 1e-8
    _report("GBDT monotone loss + OLS oracle", started, budget=30.0)


def test_qc_recall_on_injected_faults():
    started = time.perf_counter()
    config = default_qc_config(VariableKind.parse("TA"))
    rng = np.random.default_rng(21)
    n = 24 * 120
    hours = np.arange(n) % 24
    ar = np.zeros(n)
    eps = rng.normal(size=n) * 0.3
    for t in range(1, n):
        ar[t] = 0.6 * ar[t - 1] + eps[t]
    clean = make_series(list(12.0 + 6.0 * np.sin(2 * np.pi * hours / 24.0) + ar))

    corrupted, faults = inject_faults(
        clean, FaultSpec(spikes=50,
                         spike_magnitude=5 * config.spike_threshold), seed=5)
    _, report = run_qc(corrupted, [], config)
    spike_hits = set(report.flagged["spike"])
    recall = sum(1 for f in faults if f.index in spike_hits) / len(faults)
    assert recall >= 0.9, f"spike recall {recall}"

    corrupted, faults = inject_faults(
        clean, FaultSpec(flatlines=10,
                         flatline_length=2 * config.persistence_k), seed=6)
    _, report = run_qc(corrupted, [], config)
    hits = set(report.flagged["persistence"])
    for f in faults:
        run_slots = set(range(f.index, f.index + f.length))
        assert run_slots & hits, f"flatline at {f.index} missed"

    delayed = clean.with_values(np.roll(clean.values, 2))
    _, report = run_qc(clean, [delayed], config)
    assert report.shift_lags["st1"] == 2, "shift of +2 slots not detected"
    _report("QC recall on injected faults", started, budget=10.0)


def test_catalog_fixture_reproduction(tmp_path):
    started = time.perf_counter()
    store = CatalogStore(tmp_path / "portal")
    imported, errors = store.import_inventory(fixture.inventory_csv())
    assert imported == 23 and errors == []

    by_country = store.stats("COUNTRY")
    assert by_country["Serbia"] == 5
    assert by_country["Estonia"] == 3
    assert by_country["Portugal"] == 2
    assert sorted(n for n in by_country.values())[:13] == [1] * 13
    assert store.stats("LOCAL_ENVIRONMENT") == \
        {"URBAN": 12, "RURAL": 7, "URBAN_AND_RURAL": 4}
    assert store.stats("SEASONALITY") == {"YEAR_ROUND": 17, "SUMMER": 6}

    for site in fixture.sites():
        store.upsert(site)
    for sensor in fixture.sensors():
        store.upsert(sensor)
    net, detail = store.get_network_detail("nsunet")
    assert len(detail) == 12

    log_bytes = store.log_path.read_bytes()
    reloaded = CatalogStore(tmp_path / "portal")
    assert reloaded.networks == store.networks
    assert reloaded.sites == store.sites
    assert reloaded.sensors == store.sensors
    assert reloaded.log_path.read_bytes() == log_bytes
    _report("catalog fixture reproduction", started, budget=5.0)


@pytest.mark.slow
def test_cli_determinism(tmp_path):
    started = time.perf_counter()
    obs = tmp_path / "obs.csv"
    rng = np.random.default_rng(9)
    lines = ["timestamp,station_id,variable,value"]
    t0 = datetime(2021, 6, 1, tzinfo=timezone.utc)
    values = 10 + 5 * np.sin(np.arange(400) / 9.0) + rng.normal(size=400) * 0.4
    holes = set(rng.choice(400, size=30, replace=False).tolist())
    from datetime import timedelta
    for i, v in enumerate(values):
        ts = (t0 + timedelta(hours=i)).strftime("%Y-%m-%dT%H:%M:%SZ")
        text = "" if i in holes else repr(float(v))
        lines.append(f"{ts},st1,TA,{text}")
    obs.write_text("\n".join(lines) + "\n")

    grid = tmp_path / "grid.toml"
    grid.write_text(
        '[grid]\nvariables = ["TA"]\nfeature_sets = ["ALL"]\n'
        'models = ["gbdt", "baseline_linear_interp"]\ngap_sizes = [1, 4]\n\n'
        "[data]\nsynthetic = true\nn_sites = 2\nn_slots = 600\nseed = 3\n\n"
        "[params.gbdt]\nrounds = 25\n")

    def cli(*args):
        proc = subprocess.run([sys.executable, "-m", "fairmet.cli", *args],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        return proc

    fill_outputs = []
    for attempt in (1, 2):
        out = tmp_path / f"filled{attempt}.csv"
        cli("fill", "--in", str(obs), "--method", "gbdt",
            "--out", str(out), "--seed", "11")
        fill_outputs.append(out.read_bytes())
    assert fill_outputs[0] == fill_outputs[1], "fill is not byte-identical"

    bench_outputs = []
    for attempt in (1, 2):
        out = tmp_path / f"results{attempt}.csv"
        cli("bench", "--grid", str(grid), "--out", str(out), "--seed", "11")
        bench_outputs.append(out.read_bytes())
    assert bench_outputs[0] == bench_outputs[1], "bench is not byte-identical"
    _report("CLI determinism (bench + fill)", started, budget=120.0)
