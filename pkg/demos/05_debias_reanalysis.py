"""Debiasing a reanalysis series against station observations.

The bias table holds mean(observation - reanalysis) per local hour of day
and season; a fill adds the looked-up bias back onto the reanalysis value.
Here the pseudo-reanalysis runs 2 degrees warm with an extra diurnal error,
and the hourly cells soak both up.
"""

import numpy as np

from fairmet import fit_debias
from fairmet.debias import SEASONS
from datetime import datetime, timezone

from fairmet import TimeSeries, VariableKind


def make_series(values, start="2021-03-01T00:00:00"):
    return TimeSeries("st1", VariableKind("TA"),
                      datetime.fromisoformat(start).replace(tzinfo=timezone.utc),
                      3600, np.array(values), tz="UTC")

n = 24 * 120
hours = np.arange(n) % 24
obs_values = 15 + 7 * np.sin(2 * np.pi * hours / 24)
obs = make_series(list(obs_values))

# reanalysis: warm by 2 degrees, plus an hour-dependent distortion
rea = obs.with_values(obs_values + 2.0 + 0.8 * np.cos(2 * np.pi * hours / 24))

table = fit_debias(obs, rea, min_samples=10)
print("bias table, rows = local hour, columns = season "
      f"({', '.join(SEASONS)}); '--' = falls back\n")
for hour in range(0, 24, 3):
    cells = []
    for season in range(4):
        if table.sample_count[hour, season] >= table.min_samples:
            cells.append(f"{table.bias[hour, season]:6.2f}")
        else:
            cells.append("   -- ")
    print(f"  {hour:02d}h  " + "  ".join(cells))
print(f"\nglobal fallback: {table.global_fallback:.2f}")
print(f"fill example: rea {rea.values[7]:.2f} + bias "
      f"{table.lookup_at(obs.time_at(7), obs.tz):.2f} "
      f"= {rea.values[7] + table.lookup_at(obs.time_at(7), obs.tz):.2f} "
      f"(obs {obs.values[7]:.2f})")
