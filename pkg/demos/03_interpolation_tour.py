"""The standard interpolation set on one wiggly signal.

Hides 20% of a noisy diurnal curve in 6-slot gaps and scores each 1-D
method plus the RBF interpolator on the hidden values.  Nearest is crude,
linear struggles on peaks, the spline family tracks curvature, pchip and
akima stay steady near the flanks.
"""

import numpy as np

from fairmet import (Knots1D, RbfKernel, ScatterND, interp1d, interp_rbf,
                     make_coverage_masks, score)
from fairmet.interp import (AKIMA, LINEAR, NEAREST, PCHIP, RBF_THIN_PLATE,
                            SPLINE_CUBIC)

rng = np.random.default_rng(7)
n = 480
t = np.arange(n, dtype=float)
signal = 12 + 6 * np.sin(2 * np.pi * t / 24) + 2 * np.sin(2 * np.pi * t / 7.3) \
    + rng.normal(size=n) * 0.2

plan = make_coverage_masks(n, gap_len=6, max_missing_frac=0.2, seed=3)
hidden = np.array(plan.folds[0])
observed = np.setdiff1d(t.astype(int), hidden)

knots = Knots1D(observed.astype(float), signal[observed])
print(f"hiding {hidden.size} of {n} slots in 6-slot gaps\n")
print(f"{'method':<14} {'rmse':>7} {'mae':>7}")
for method in (NEAREST, LINEAR, SPLINE_CUBIC, PCHIP, AKIMA):
    pred = interp1d(knots, method, hidden.astype(float))
    m = score(signal[hidden], pred)
    print(f"{method:<14} {m.rmse:>7.3f} {m.mae:>7.3f}")

# RBF treats time as one axis of a 2-D plane (the second axis is unused
# here; with several stations it would carry location)
pts = np.column_stack([observed.astype(float), np.zeros(observed.size)])
queries = np.column_stack([hidden.astype(float), np.zeros(hidden.size)])
pred = interp_rbf(ScatterND(pts, signal[observed]),
                  RbfKernel(RBF_THIN_PLATE), queries)
m = score(signal[hidden], pred)
print(f"{'RBF thin-plate':<14} {m.rmse:>7.3f} {m.mae:>7.3f}")
