"""Parse a station file, find the gaps, and profile them.

Run from the repo root:  python3 demos/01_gap_profiles.py
"""

from pathlib import Path

from fairmet import ObservationFormat, detect_gaps, parse_observations, profile_gaps

data = Path(__file__).resolve().parent.parent / "data" / "sample_observations.csv"
series_list = parse_observations(data.read_bytes(),
                                 ObservationFormat(step_seconds=3600))

for series in series_list:
    gaps = detect_gaps(series)
    profile = profile_gaps(series)
    print(f"{series.station_id}/{series.variable}: {len(series)} slots, "
          f"{series.n_missing} missing ({profile.total_missing_fraction:.1%})")
    for gap in gaps:
        print(f"  gap of {gap.length} slot(s) starting "
              f"{gap.start_time:%Y-%m-%d %H:%M} (index {gap.start_index})")
    print(f"  duration histogram: {profile.duration_histogram}")
    print(f"  recurrence score:   {profile.recurrence_score:.2f}")
    print()
