import math
import random

import numpy as np
import pytest

from fairmet.interp import (AKIMA, LINEAR, NEAREST, PCHIP, RBF_GAUSSIAN,
                            RBF_LINEAR, RBF_THIN_PLATE, SPLINE_CUBIC,
                            DegenerateGeometry, DimensionMismatch, EmptyData,
                            Knots1D, NonIncreasingX, RbfKernel, ScatterND,
                            SingularSystem, TooFewKnots, TooManyPoints,
                            UnsupportedSplineDegree, interp1d,
                            interp_linear_2d, interp_nearest_nd, interp_rbf)


# ---------------------------------------------------------------------------
# Oracles

def natural_cubic_oracle(x, y, queries):
    """Independent natural cubic spline: Thomas-algorithm solve for the
    second derivatives (zero at the ends), then piecewise evaluation."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    n = len(x)
    h = np.diff(x)
    # tridiagonal system for interior second derivatives
    sub = np.zeros(n - 2)
    diag = np.zeros(n - 2)
    sup = np.zeros(n - 2)
    rhs = np.zeros(n - 2)
    for k in range(1, n - 1):
        sub[k - 1] = h[k - 1] / 6.0
        diag[k - 1] = (h[k - 1] + h[k]) / 3.0
        sup[k - 1] = h[k] / 6.0
        rhs[k - 1] = (y[k + 1] - y[k]) / h[k] - (y[k] - y[k - 1]) / h[k - 1]
    # Thomas forward sweep
    for k in range(1, n - 2):
        w = sub[k] / diag[k - 1]
        diag[k] -= w * sup[k - 1]
        rhs[k] -= w * rhs[k - 1]
    m_int = np.zeros(n - 2)
    if n > 2:
        m_int[-1] = rhs[-1] / diag[-1]
        for k in range(n - 4, -1, -1):
            m_int[k] = (rhs[k] - sup[k] * m_int[k + 1]) / diag[k]
    m = np.concatenate(([0.0], m_int, [0.0]))

    out = []
    for q in queries:
        i = min(max(np.searchsorted(x, q) - 1, 0), n - 2)
        hi = h[i]
        a = (x[i + 1] - q) / hi
        b = (q - x[i]) / hi
        val = (a * y[i] + b * y[i + 1]
               + ((a ** 3 - a) * m[i] + (b ** 3 - b) * m[i + 1]) * hi * hi / 6.0)
        out.append(val)
    return np.array(out)


def brute_force_nearest(points, values, query):
    best, best_d = 0, float("inf")
    for i, p in enumerate(points):
        d = sum((a - b) ** 2 for a, b in zip(p, query))
        if d < best_d:
            best, best_d = i, d
    return values[best]


# ---------------------------------------------------------------------------
# 1-D methods

class TestInterp1d:
    def test_linear_midpoint(self):
        knots = Knots1D(np.array([0.0, 2.0]), np.array([0.0, 2.0]))
        assert interp1d(knots, LINEAR, [1.0])[0] == pytest.approx(1.0)

    def test_nearest_tie_goes_left(self):
        knots = Knots1D(np.array([0.0, 2.0]), np.array([10.0, 20.0]))
        assert interp1d(knots, NEAREST, [1.0])[0] == 10.0
        assert interp1d(knots, NEAREST, [1.0 + 1e-9])[0] == 20.0

    def test_spline_matches_tridiagonal_oracle(self):
        rng = random.Random(17)
        for _ in range(20):
            n = rng.randint(6, 12)
            x = np.sort(np.array([rng.uniform(0, 50) for _ in range(n)]))
            while np.any(np.diff(x) < 1e-3):
                x = np.sort(np.array([rng.uniform(0, 50) for _ in range(n)]))
            y = np.array([rng.uniform(-5, 5) for _ in range(n)])
            q = np.array([rng.uniform(x[0], x[-1]) for _ in range(50)])
            got = interp1d(Knots1D(x, y), SPLINE_CUBIC, q)
            want = natural_cubic_oracle(x, y, q)
            scale = max(1.0, np.abs(want).max())
            assert np.abs(got - want).max() / scale < 1e-9

    def test_pchip_monotone_and_bounded(self):
        x = np.array([0.0, 1.0, 3.0, 4.0, 7.0, 9.0])
        y = np.array([0.0, 0.5, 0.7, 2.0, 2.1, 5.0])
        q = np.linspace(0, 9, 2000)
        v = interp1d(Knots1D(x, y), PCHIP, q)
        assert v.min() >= y.min() - 1e-12
        assert v.max() <= y.max() + 1e-12
        assert np.all(np.diff(v) >= -1e-12)

    def test_exactness_at_knots_all_methods(self):
        rng = random.Random(23)
        x = np.sort(np.array([rng.uniform(0, 100) for _ in range(9)]))
        y = np.array([rng.uniform(-10, 10) for _ in range(9)])
        knots = Knots1D(x, y)
        for method in (NEAREST, LINEAR, SPLINE_CUBIC, PCHIP, AKIMA):
            got = interp1d(knots, method, x)
            np.testing.assert_allclose(got, y, rtol=1e-12, atol=1e-12)

    def test_undefined_outside_range(self):
        knots = Knots1D(np.array([0.0, 1.0, 2.0, 3.0]), np.arange(4.0))
        out = interp1d(knots, LINEAR, [-0.5, 1.5, 3.5])
        assert math.isnan(out[0]) and math.isnan(out[2])
        assert out[1] == pytest.approx(1.5)

    def test_extrapolation_modes(self):
        x = np.array([0.0, 1.0, 2.0, 3.0])
        y = np.array([0.0, 1.0, 4.0, 9.0])
        knots = Knots1D(x, y)
        near = interp1d(knots, NEAREST, [-2.0, 5.0], extrapolate=True)
        assert list(near) == [0.0, 9.0]
        lin = interp1d(knots, LINEAR, [-1.0, 4.0], extrapolate=True)
        assert lin[0] == pytest.approx(-1.0)   # slope of first segment
        assert lin[1] == pytest.approx(14.0)   # slope of last segment (5)
        spl = interp1d(knots, SPLINE_CUBIC, [4.0], extrapolate=True)
        assert spl[0] == pytest.approx(14.0)   # linear extension, not cubic

    def test_c1_continuity_spline_akima(self):
        rng = random.Random(31)
        x = np.cumsum(np.array([rng.uniform(0.5, 2.0) for _ in range(8)]))
        y = np.array([rng.uniform(-3, 3) for _ in range(8)])
        knots = Knots1D(x, y)
        h = 1e-6
        for method in (SPLINE_CUBIC, AKIMA):
            for xi in x[1:-1]:
                q = np.array([xi - 2 * h, xi - h, xi, xi + h, xi + 2 * h])
                f = interp1d(knots, method, q)
                # second-order one-sided differences on each flank
                left = (3 * f[2] - 4 * f[1] + f[0]) / (2 * h)
                right = (-3 * f[2] + 4 * f[3] - f[4]) / (2 * h)
                assert abs(left - right) < 1e-6

    def test_too_few_knots(self):
        small = Knots1D(np.array([0.0, 1.0, 2.0, 3.0]), np.arange(4.0))
        with pytest.raises(TooFewKnots):
            interp1d(small, AKIMA, [0.5])
        tiny = Knots1D(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
        with pytest.raises(TooFewKnots):
            interp1d(tiny, SPLINE_CUBIC, [0.5])

    def test_non_increasing_x(self):
        with pytest.raises(NonIncreasingX):
            Knots1D(np.array([0.0, 1.0, 1.0]), np.zeros(3))

    def test_spline_degree_reserved(self):
        knots = Knots1D(np.arange(5.0), np.arange(5.0))
        with pytest.raises(UnsupportedSplineDegree):
            interp1d(knots, SPLINE_CUBIC, [1.0], degree=2)


# ---------------------------------------------------------------------------
# Scattered data

class TestNearestND:
    def test_single_point(self):
        data = ScatterND(np.array([[1.0, 2.0]]), np.array([42.0]))
        out = interp_nearest_nd(data, [[0.0, 0.0], [5.0, 5.0]])
        assert list(out) == [42.0, 42.0]

    def test_query_on_data_point(self):
        data = ScatterND(np.array([[0.0, 0.0], [1.0, 1.0]]),
                         np.array([1.0, 2.0]))
        assert interp_nearest_nd(data, [[1.0, 1.0]])[0] == 2.0

    def test_matches_exhaustive_scan(self):
        rng = random.Random(5)
        pts = [[rng.uniform(0, 10), rng.uniform(0, 10)] for _ in range(20)]
        vals = [rng.uniform(-1, 1) for _ in range(20)]
        data = ScatterND(np.array(pts), np.array(vals))
        queries = [[rng.uniform(0, 10), rng.uniform(0, 10)]
                   for _ in range(100)]
        got = interp_nearest_nd(data, queries)
        for q, g in zip(queries, got):
            assert g == brute_force_nearest(pts, vals, q)

    def test_empty_and_dim_mismatch(self):
        with pytest.raises(EmptyData):
            ScatterND(np.zeros((0, 2)), np.zeros(0))
        data = ScatterND(np.array([[0.0, 0.0]]), np.array([1.0]))
        with pytest.raises(DimensionMismatch):
            interp_nearest_nd(data, [[0.0, 0.0, 0.0]])


class TestLinear2D:
    def test_centroid_is_mean(self):
        data = ScatterND(np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 3.0]]),
                         np.array([3.0, 6.0, 9.0]))
        out = interp_linear_2d(data, [[1.0, 1.0]])
        assert out[0] == pytest.approx(6.0)

    def test_outside_hull_undefined(self):
        data = ScatterND(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
                         np.array([0.0, 1.0, 2.0]))
        assert math.isnan(interp_linear_2d(data, [[5.0, 5.0]])[0])

    def test_reproduces_plane(self):
        rng = random.Random(12)
        pts = np.array([[rng.uniform(0, 4), rng.uniform(0, 4)]
                        for _ in range(15)])
        vals = 2.0 * pts[:, 0] + 3.0 * pts[:, 1] + 1.0
        data = ScatterND(pts, vals)
        # interior queries: jitter toward the centroid to stay in the hull
        centroid = pts.mean(axis=0)
        queries = 0.7 * pts + 0.3 * centroid
        got = interp_linear_2d(data, queries)
        want = 2.0 * queries[:, 0] + 3.0 * queries[:, 1] + 1.0
        np.testing.assert_allclose(got, want, rtol=1e-9, atol=1e-9)

    def test_collinear_rejected(self):
        pts = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        with pytest.raises(DegenerateGeometry):
            interp_linear_2d(ScatterND(pts, np.zeros(4)), [[1.0, 1.0]])

    def test_within_vertex_envelope(self):
        rng = random.Random(2)
        pts = np.array([[rng.uniform(0, 1), rng.uniform(0, 1)]
                        for _ in range(12)])
        vals = np.array([rng.uniform(-5, 5) for _ in range(12)])
        data = ScatterND(pts, vals)
        queries = np.array([[rng.uniform(0, 1), rng.uniform(0, 1)]
                            for _ in range(200)])
        got = interp_linear_2d(data, queries)
        inside = ~np.isnan(got)
        assert np.all(got[inside] >= vals.min() - 1e-12)
        assert np.all(got[inside] <= vals.max() + 1e-12)


class TestRbf:
    def test_reproduces_data_points(self):
        rng = random.Random(9)
        pts = np.array([[rng.uniform(0, 5), rng.uniform(0, 5)]
                        for _ in range(12)])
        vals = np.array([rng.uniform(-2, 2) for _ in range(12)])
        data = ScatterND(pts, vals)
        for kernel in (RbfKernel(RBF_THIN_PLATE), RbfKernel(RBF_LINEAR),
                       RbfKernel(RBF_GAUSSIAN, shape=0.5)):
            got = interp_rbf(data, kernel, pts)
            np.testing.assert_allclose(got, vals, rtol=1e-6, atol=1e-6)

    def test_three_point_hand_oracle(self):
        # linear kernel, colocated queries: solve the 3x3 system by hand
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 2.0]])
        c = 4.5
        vals = np.array([c, c, c])
        d01 = 1.0
        d02 = 2.0
        d12 = math.hypot(1.0, 2.0)
        K = [[0.0, d01, d02], [d01, 0.0, d12], [d02, d12, 0.0]]
        # Gaussian elimination by hand (3x3)
        import copy
        A = copy.deepcopy(K)
        b = [c, c, c]
        # pivot row 1 (A[0][0] is 0, swap with row 2)
        A[0], A[1] = A[1], A[0]
        b[0], b[1] = b[1], b[0]
        for i in range(3):
            piv = A[i][i]
            if piv == 0:
                for j in range(i + 1, 3):
                    if A[j][i] != 0:
                        A[i], A[j] = A[j], A[i]
                        b[i], b[j] = b[j], b[i]
                        break
                piv = A[i][i]
            for j in range(i + 1, 3):
                f = A[j][i] / piv
                A[j] = [aj - f * ai for aj, ai in zip(A[j], A[i])]
                b[j] -= f * b[i]
        w = [0.0, 0.0, 0.0]
        for i in (2, 1, 0):
            w[i] = (b[i] - sum(A[i][j] * w[j] for j in range(i + 1, 3))) / A[i][i]

        data = ScatterND(pts, vals)
        got = interp_rbf(data, RbfKernel(RBF_LINEAR), pts)
        want = [sum(wj * K[i][j] for j, wj in enumerate(w)) for i in range(3)]
        np.testing.assert_allclose(got, want, atol=1e-6)
        np.testing.assert_allclose(got, vals, atol=1e-6)

    def test_gaussian_matches_normal_equations(self):
        rng = random.Random(21)
        pts = np.array([[rng.uniform(0, 9), 0.0] for _ in range(10)])
        vals = np.array([rng.uniform(-1, 1) for _ in range(10)])
        kernel = RbfKernel(RBF_GAUSSIAN, shape=0.8)
        data = ScatterND(pts, vals)
        queries = np.array([[rng.uniform(0, 9), 0.0] for _ in range(30)])
        got = interp_rbf(data, kernel, queries)
        # independent route: least-squares solve of the same system
        d = np.sqrt(((pts[:, None] - pts[None, :]) ** 2).sum(-1))
        K = np.exp(-((0.8 * d) ** 2))
        w, *_ = np.linalg.lstsq(K.T @ K, K.T @ vals, rcond=None)
        dq = np.sqrt(((queries[:, None] - pts[None, :]) ** 2).sum(-1))
        want = np.exp(-((0.8 * dq) ** 2)) @ w
        np.testing.assert_allclose(got, want, rtol=1e-5, atol=1e-6)

    def test_overshoot_is_permitted_behavior(self):
        # step-like data: the smooth interpolant exceeds the data envelope
        x = np.array([0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0])
        pts = np.column_stack([x, np.zeros_like(x)])
        vals = np.where(x < 3.5, 0.0, 1.0)
        data = ScatterND(pts, vals)
        q = np.column_stack([np.linspace(0, 7, 400), np.zeros(400)])
        got = interp_rbf(data, RbfKernel(RBF_THIN_PLATE), q)
        assert got.max() > 1.0 + 1e-6 or got.min() < -1e-6

    def test_smoothing_relaxes_interpolation(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
        vals = np.array([0.0, 1.0, 0.0, 1.0])
        smooth = interp_rbf(ScatterND(pts, vals),
                            RbfKernel(RBF_LINEAR, smoothing=1.0), pts)
        assert np.abs(smooth - vals).max() > 1e-3

    def test_too_many_points(self):
        pts = np.column_stack([np.arange(2001.0), np.zeros(2001)])
        data = ScatterND(pts, np.zeros(2001))
        with pytest.raises(TooManyPoints):
            interp_rbf(data, RbfKernel(RBF_LINEAR), [[0.0, 0.0]])

    def test_singular_system(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        data = ScatterND(pts, np.array([1.0, 2.0, 3.0]))
        with pytest.raises(SingularSystem):
            interp_rbf(data, RbfKernel(RBF_GAUSSIAN, shape=1e-12),
                       [[0.5, 0.5]])

    def test_kernel_validation(self):
        with pytest.raises(ValueError):
            RbfKernel(RBF_GAUSSIAN)          # missing shape
        with pytest.raises(ValueError):
            RbfKernel(RBF_THIN_PLATE, shape=1.0)

    def test_random_exactness_acceptance_style(self):
        rng = random.Random(40)
        for _ in range(20):
            n = rng.randint(5, 15)
            pts = np.array([[rng.uniform(0, 10), rng.uniform(0, 10)]
                            for _ in range(n)])
            if len({tuple(p) for p in pts}) != n:
                continue
            vals = np.array([rng.uniform(-3, 3) for _ in range(n)])
            got = interp_rbf(ScatterND(pts, vals), RbfKernel(RBF_THIN_PLATE), pts)
            np.testing.assert_allclose(got, vals, rtol=1e-6, atol=1e-6)
