"""Synthetic station networks for benchmarking and demos.

Each station series is built from four documented parts:

* a seasonal sinusoid over day-of-year (shared across the network),
* a diurnal sinusoid over hour-of-day with per-station amplitude and phase,
* a shared AR(1) "weather" process plus an independent per-station AR(1)
  noise term,
* a constant cross-station offset.

The paired pseudo-reanalysis series is the smooth + shared part of the same
signal with a constant station-specific bias and no local noise, which makes
it an informative but imperfect predictor, like a coarse gridded product.
All draws come from SplitMix64, so a (seed, layout) pair always produces the
same network.
"""

from __future__ import annotations

import math
from datetime import datetime, timezone

import numpy as np

from .bench import DataContext
from .rng import SplitMix64, mix_seed
from .timeseries import TimeSeries, VariableKind


def _gaussian(rng: SplitMix64) -> float:
    # Box-Muller; one value per draw keeps replay simple
    u1 = max(rng.next_float(), 1e-12)
    u2 = rng.next_float()
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def _ar1(rng: SplitMix64, n: int, rho: float, sigma: float) -> np.ndarray:
    out = np.empty(n)
    x = 0.0
    scale = sigma * math.sqrt(1.0 - rho * rho)
    for t in range(n):
        x = rho * x + scale * _gaussian(rng)
        out[t] = x
    return out


def make_station_network(n_sites: int = 3, n_slots: int = 2880,
                         seed: int = 1, start: str = "2021-03-01T00:00:00",
                         step_seconds: int = 3600,
                         variable: str = "TA") -> DataContext:
    """Build a small synthetic network with observations and reanalysis."""
    start_dt = datetime.fromisoformat(start).replace(tzinfo=timezone.utc)
    var = VariableKind.parse(variable)
    hours = np.arange(n_slots) * (step_seconds / 3600.0)
    start_doy = start_dt.timetuple().tm_yday - 1
    doy = start_doy + hours / 24.0

    seasonal = 8.0 * np.sin(2.0 * math.pi * doy / 365.25 - 0.5)
    shared = _ar1(SplitMix64(mix_seed(seed, "shared")), n_slots,
                  rho=0.95, sigma=2.0)

    series: dict = {}
    reanalysis: dict = {}
    for k in range(n_sites):
        site = f"site{k:02d}"
        rng = SplitMix64(mix_seed(seed, f"site:{k}"))
        offset = 3.0 * (rng.next_float() - 0.5) * 2.0
        diurnal_amp = 4.0 + 1.5 * rng.next_float()
        phase = 0.4 * (rng.next_float() - 0.5)
        diurnal = diurnal_amp * np.sin(2.0 * math.pi * hours / 24.0
                                       - math.pi / 2.0 + phase)
        local_noise = _ar1(rng, n_slots, rho=0.6, sigma=0.5)

        smooth = 12.0 + offset + seasonal + diurnal
        values = smooth + shared + local_noise
        series[(site, variable)] = TimeSeries(
            station_id=site, variable=var, start=start_dt,
            step_seconds=step_seconds, values=values, tz="UTC")

        rea_bias = -1.5 + 0.8 * k
        reanalysis[(site, variable)] = TimeSeries(
            station_id=f"REANALYSIS:grid-{k:02d}", variable=var,
            start=start_dt, step_seconds=step_seconds,
            values=smooth + shared + rea_bias, tz="UTC")

    return DataContext(series=series, reanalysis=reanalysis)
