"""The standard interpolation function set: five 1-D methods (nearest,
linear, natural cubic spline, pchip, akima) and three scattered-data methods
(nearest-ND, piecewise-linear over a 2-D triangulation, and radial basis
functions with a dense solve).

Queries outside the data support evaluate to UNDEFINED, encoded as NaN,
unless extrapolation is requested.  The spline family is delegated to
scipy's interpolators (natural cubic, Fritsch-Carlson pchip, Akima), which
match this module's contracts; nearest, linear and the RBF solve are local
code so tie-breaking and the system solved stay exactly as documented.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import (Akima1DInterpolator, CubicSpline,
                               LinearNDInterpolator, PchipInterpolator)
from scipy.spatial import QhullError

from .errors import FairmetError

UNDEFINED = float("nan")

NEAREST = "NEAREST"
LINEAR = "LINEAR"
SPLINE_CUBIC = "SPLINE_CUBIC"
PCHIP = "PCHIP"
AKIMA = "AKIMA"

INTERP1D_METHODS = (NEAREST, LINEAR, SPLINE_CUBIC, PCHIP, AKIMA)

_MIN_KNOTS = {NEAREST: 2, LINEAR: 2, PCHIP: 2, SPLINE_CUBIC: 4, AKIMA: 5}


class TooFewKnots(FairmetError):
    pass


class NonIncreasingX(FairmetError):
    pass


class EmptyData(FairmetError):
    pass


class DimensionMismatch(FairmetError):
    pass


class DegenerateGeometry(FairmetError):
    pass


class SingularSystem(FairmetError):
    pass


class TooManyPoints(FairmetError):
    pass


class UnsupportedSplineDegree(FairmetError):
    """Only cubic splines are provided; the degree parameter is reserved."""


@dataclass(frozen=True)
class Knots1D:
    """Strictly increasing abscissae (slot units) with one value each."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if x.ndim != 1 or y.ndim != 1 or x.size != y.size:
            raise ValueError("x and y must be 1-D and the same length")
        if x.size < 2:
            raise TooFewKnots(f"need at least 2 knots, got {x.size}")
        if np.any(np.diff(x) <= 0):
            raise NonIncreasingX("knot abscissae must be strictly increasing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


def interp1d(knots: Knots1D, method: str, queries, extrapolate: bool = False,
             degree: int = 3) -> np.ndarray:
    """Evaluate a 1-D interpolant at the query points.

    Outside [x_min, x_max] the result is UNDEFINED (NaN) unless
    ``extrapolate``: then NEAREST extends the end values as constants and
    every other method extends the end segment linearly.  NEAREST breaks
    exact midpoint ties toward the left knot.
    """
    if method not in _MIN_KNOTS:
        raise ValueError(f"unknown method {method!r}")
    if method == SPLINE_CUBIC and degree != 3:
        raise UnsupportedSplineDegree(f"spline degree {degree} is not supported")
    x, y = knots.x, knots.y
    if x.size < _MIN_KNOTS[method]:
        raise TooFewKnots(
            f"{method} needs >= {_MIN_KNOTS[method]} knots, got {x.size}")

    q = np.atleast_1d(np.asarray(queries, dtype=np.float64))
    out = np.full(q.shape, np.nan)
    inside = (q >= x[0]) & (q <= x[-1])

    if np.any(inside):
        qi = q[inside]
        if method == NEAREST:
            mids = (x[:-1] + x[1:]) / 2.0
            out[inside] = y[np.searchsorted(mids, qi, side="left")]
        elif method == LINEAR:
            out[inside] = np.interp(qi, x, y)
        elif method == SPLINE_CUBIC:
            out[inside] = CubicSpline(x, y, bc_type="natural")(qi)
        elif method == PCHIP:
            out[inside] = PchipInterpolator(x, y)(qi)
        else:
            out[inside] = Akima1DInterpolator(x, y)(qi)

    if extrapolate and np.any(~inside):
        left = q < x[0]
        right = q > x[-1]
        if method == NEAREST:
            out[left] = y[0]
            out[right] = y[-1]
        else:
            out[left] = y[0] + (q[left] - x[0]) * (y[1] - y[0]) / (x[1] - x[0])
            out[right] = y[-1] + (q[right] - x[-1]) * (y[-1] - y[-2]) / (x[-1] - x[-2])
    return out


# ---------------------------------------------------------------------------
# Scattered data

@dataclass(frozen=True)
class ScatterND:
    """Scattered sample points (n, d) with one value per point, d >= 2."""

    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        vals = np.asarray(self.values, dtype=np.float64)
        if pts.ndim != 2:
            raise DimensionMismatch("points must be an (n, d) array")
        if pts.shape[0] == 0:
            raise EmptyData("need at least one data point")
        if pts.shape[1] < 2:
            raise DimensionMismatch(f"need d >= 2 coordinates, got {pts.shape[1]}")
        if vals.shape != (pts.shape[0],):
            raise ValueError("values must align with points")
        if len({tuple(p) for p in pts}) != pts.shape[0]:
            raise ValueError("duplicate data points")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])


def _check_queries(data: ScatterND, queries) -> np.ndarray:
    q = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    if q.shape[1] != data.dim:
        raise DimensionMismatch(
            f"queries have {q.shape[1]} coordinates, data has {data.dim}")
    return q


def interp_nearest_nd(data: ScatterND, queries) -> np.ndarray:
    """Value of the Euclidean-nearest data point; distance ties go to the
    lowest insertion index."""
    q = _check_queries(data, queries)
    d2 = ((q[:, None, :] - data.points[None, :, :]) ** 2).sum(axis=2)
    return data.values[np.argmin(d2, axis=1)]


def interp_linear_2d(data: ScatterND, queries) -> np.ndarray:
    """Piecewise-linear interpolation over the Delaunay triangulation of 2-D
    points (barycentric weights inside each triangle).  Queries outside the
    convex hull are UNDEFINED."""
    if data.dim != 2:
        raise DimensionMismatch("linear scattered interpolation is 2-D only")
    if data.points.shape[0] < 3:
        raise DegenerateGeometry("need at least 3 points")
    try:
        interpolant = LinearNDInterpolator(data.points, data.values)
    except QhullError as exc:
        raise DegenerateGeometry(f"degenerate point set: {exc}") from None
    return np.asarray(interpolant(_check_queries(data, queries)), dtype=np.float64)


# ---------------------------------------------------------------------------
# Radial basis functions

RBF_LINEAR = "LINEAR"
RBF_CUBIC = "CUBIC"
RBF_THIN_PLATE = "THIN_PLATE"
RBF_GAUSSIAN = "GAUSSIAN"
RBF_MULTIQUADRIC = "MULTIQUADRIC"
RBF_INVERSE_MULTIQUADRIC = "INVERSE_MULTIQUADRIC"

_SCALE_FREE = (RBF_LINEAR, RBF_CUBIC, RBF_THIN_PLATE)
_SCALE_DEPENDENT = (RBF_GAUSSIAN, RBF_MULTIQUADRIC, RBF_INVERSE_MULTIQUADRIC)

MAX_RBF_POINTS = 2000


@dataclass(frozen=True)
class RbfKernel:
    """Kernel choice plus shape parameter (scale-dependent kernels only) and
    a diagonal smoothing term."""

    kind: str = RBF_THIN_PLATE
    shape: float | None = None
    smoothing: float = 0.0

    def __post_init__(self):
        if self.kind not in _SCALE_FREE + _SCALE_DEPENDENT:
            raise ValueError(f"unknown RBF kernel {self.kind!r}")
        if self.kind in _SCALE_DEPENDENT:
            if self.shape is None or self.shape <= 0:
                raise ValueError(f"{self.kind} kernel needs shape > 0")
        elif self.shape is not None:
            raise ValueError(f"{self.kind} kernel takes no shape parameter")
        if self.smoothing < 0:
            raise ValueError("smoothing must be >= 0")

    def __call__(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=np.float64)
        if self.kind == RBF_LINEAR:
            return r
        if self.kind == RBF_CUBIC:
            return r ** 3
        if self.kind == RBF_THIN_PLATE:
            with np.errstate(divide="ignore", invalid="ignore"):
                out = r * r * np.log(r)
            return np.where(r > 0, out, 0.0)
        e = self.shape
        if self.kind == RBF_GAUSSIAN:
            return np.exp(-((e * r) ** 2))
        if self.kind == RBF_MULTIQUADRIC:
            return np.sqrt(1.0 + (e * r) ** 2)
        return 1.0 / np.sqrt(1.0 + (e * r) ** 2)


def _pairwise_dist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d2 = ((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=2)
    return np.sqrt(np.maximum(d2, 0.0))


def interp_rbf(data: ScatterND, kernel: RbfKernel, queries) -> np.ndarray:
    """Radial basis interpolation: solve (K + smoothing*I) w = y densely and
    predict sum_i w_i * phi(|q - p_i|).  With zero smoothing the data values
    are reproduced at the data points.  Dense solve only, hence the point
    cap; the kernel matrix must be nonsingular."""
    n = data.points.shape[0]
    if n > MAX_RBF_POINTS:
        raise TooManyPoints(f"{n} points exceeds the dense-solve cap {MAX_RBF_POINTS}")
    K = kernel(_pairwise_dist(data.points, data.points))
    if kernel.smoothing:
        K = K + kernel.smoothing * np.eye(n)
    try:
        w = np.linalg.solve(K, data.values)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"RBF system is singular: {exc}") from None
    if not np.all(np.isfinite(w)):
        raise SingularSystem("RBF system produced non-finite weights")
    q = _check_queries(data, queries)
    return kernel(_pairwise_dist(q, data.points)) @ w
