"""Complex-valued quadrature on intervals and rectangles.

The workhorse is adaptive bisection over fixed 15-point Gauss-Legendre
panels. On each panel the integral is also evaluated with the 7-point
rule; the difference of the two estimates serves as the panel error.
Panels are refined (worst first) until the summed error estimate drops
below ``max(rel_tol * |result|, abs_tol)``. Oscillatory Bessel kernels at
large k*r are handled simply by the bisection depth.

All routines are pure functions of their arguments and keep no mutable
module state, so they are safe to call from any number of threads. Panel
sums are always accumulated in interval order, which makes results
bit-identical between runs regardless of how callers parallelise.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["QuadratureSpec", "QuadratureError", "integrate_complex",
           "integrate_complex_2d", "DEFAULT_QUADRATURE"]

_GL7_NODES, _GL7_WEIGHTS = np.polynomial.legendre.leggauss(7)
_GL15_NODES, _GL15_WEIGHTS = np.polynomial.legendre.leggauss(15)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and refinement limits for the adaptive integrator.

    scheme: "adaptive" (panel bisection) or "fixed" (single 15-point panel).
    rel_tol: relative tolerance on the summed error estimate.
    abs_tol: absolute floor, protects integrals whose value is near zero.
        Must stay above the rounding noise of the integrand (an abs_tol far
        below ~1e-15 times the integrand scale is unreachable in double
        precision and ends in a convergence failure).
    max_depth: maximum bisection depth of any panel.
    max_panels: hard panel budget; refinement beyond it is reported as a
        convergence failure rather than pursued.
    """

    scheme: str = "adaptive"
    rel_tol: float = 1e-9
    abs_tol: float = 1e-14
    max_depth: int = 30
    max_panels: int = 4096

    def __post_init__(self):
        if self.scheme not in ("adaptive", "fixed"):
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if not (self.rel_tol > 0.0):
            raise ValueError("rel_tol must be > 0")
        if self.abs_tol < 0.0:
            raise ValueError("abs_tol must be >= 0")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.max_panels < 2:
            raise ValueError("max_panels must be >= 2")

    def tolerance(self, magnitude: float) -> float:
        return max(self.rel_tol * magnitude, self.abs_tol)


DEFAULT_QUADRATURE = QuadratureSpec()


class QuadratureError(RuntimeError):
    """Tolerance not reached; carries the best estimate obtained so far."""

    def __init__(self, message, estimate, error_estimate):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


def _eval_vectorized(f, x):
    vals = np.asarray(f(x), dtype=complex)
    if vals.shape != x.shape:
        vals = np.broadcast_to(vals, x.shape)
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand returned a non-finite value")
    return vals


def _panel(f, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    v15 = half * np.sum(_GL15_WEIGHTS * _eval_vectorized(f, mid + half * _GL15_NODES))
    v7 = half * np.sum(_GL7_WEIGHTS * _eval_vectorized(f, mid + half * _GL7_NODES))
    return v15, abs(v15 - v7)


def integrate_complex(f, lo, hi, spec=DEFAULT_QUADRATURE):
    """Integrate a complex-valued function of one real variable on [lo, hi].

    ``f`` is called with ndarray arguments (the panel nodes) and must
    broadcast; scalar-returning integrands are accepted. Returns
    ``(value, error_estimate)``; raises QuadratureError when the tolerance
    cannot be met within ``spec.max_depth`` bisections.
    """
    if hi < lo:
        raise ValueError("integration bounds must satisfy lo <= hi")
    if hi == lo:
        return 0.0 + 0.0j, 0.0

    value, err = _panel(f, lo, hi)
    if spec.scheme == "fixed":
        if err <= spec.tolerance(abs(value)):
            return value, err
        raise QuadratureError("fixed-order panel outside tolerance", value, err)

    # (lo, hi, depth, value, err), kept sorted by lo
    panels = [(lo, hi, 0, value, err)]
    while True:
        total = 0.0 + 0.0j
        total_err = 0.0
        for p in panels:
            total += p[3]
            total_err += p[4]
        if total_err <= spec.tolerance(abs(total)):
            return total, total_err
        worst = max(range(len(panels)), key=lambda i: (panels[i][4], -panels[i][0]))
        plo, phi, depth, _, _ = panels[worst]
        if depth >= spec.max_depth:
            raise QuadratureError(
                f"tolerance not reached at max_depth={spec.max_depth}",
                total, total_err)
        if len(panels) >= spec.max_panels:
            raise QuadratureError(
                f"tolerance not reached within max_panels={spec.max_panels}",
                total, total_err)
        mid = 0.5 * (plo + phi)
        left = _panel(f, plo, mid)
        right = _panel(f, mid, phi)
        panels[worst:worst + 1] = [
            (plo, mid, depth + 1, left[0], left[1]),
            (mid, phi, depth + 1, right[0], right[1]),
        ]


def _eval_grid(f, x_nodes, y_nodes):
    gx, gy = np.meshgrid(x_nodes, y_nodes, indexing="ij")
    vals = np.asarray(f(gx, gy), dtype=complex)
    if vals.shape != gx.shape:
        vals = np.broadcast_to(vals, gx.shape)
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand returned a non-finite value")
    return vals


def _rect(f, xlo, xhi, ylo, yhi):
    hx, hy = 0.5 * (xhi - xlo), 0.5 * (yhi - ylo)
    mx, my = 0.5 * (xhi + xlo), 0.5 * (yhi + ylo)
    x15, x7 = mx + hx * _GL15_NODES, mx + hx * _GL7_NODES
    y15, y7 = my + hy * _GL15_NODES, my + hy * _GL7_NODES
    jac = hx * hy
    v1515 = jac * _GL15_WEIGHTS @ _eval_grid(f, x15, y15) @ _GL15_WEIGHTS
    v715 = jac * _GL7_WEIGHTS @ _eval_grid(f, x7, y15) @ _GL15_WEIGHTS
    v157 = jac * _GL15_WEIGHTS @ _eval_grid(f, x15, y7) @ _GL7_WEIGHTS
    err_x = abs(v1515 - v715)
    err_y = abs(v1515 - v157)
    return v1515, err_x, err_y


def integrate_complex_2d(f, x_interval, y_interval, spec=DEFAULT_QUADRATURE):
    """Integrate a complex function of two reals over a rectangle.

    ``f`` is called with two broadcast-compatible ndarrays. Rectangles are
    bisected along the axis whose embedded 7/15-point difference is larger.
    Returns ``(value, error_estimate)``.
    """
    xlo, xhi = x_interval
    ylo, yhi = y_interval
    if xhi < xlo or yhi < ylo:
        raise ValueError("rectangle must be well ordered")
    if xhi == xlo or yhi == ylo:
        return 0.0 + 0.0j, 0.0

    value, err_x, err_y = _rect(f, xlo, xhi, ylo, yhi)
    if spec.scheme == "fixed":
        err = err_x + err_y
        if err <= spec.tolerance(abs(value)):
            return value, err
        raise QuadratureError("fixed-order rectangle outside tolerance", value, err)

    rects = [(xlo, xhi, ylo, yhi, 0, value, err_x, err_y)]
    while True:
        total = 0.0 + 0.0j
        total_err = 0.0
        for r in rects:
            total += r[5]
            total_err += r[6] + r[7]
        if total_err <= spec.tolerance(abs(total)):
            return total, total_err
        worst = max(range(len(rects)),
                    key=lambda i: (rects[i][6] + rects[i][7],
                                   -rects[i][0], -rects[i][2]))
        rxlo, rxhi, rylo, ryhi, depth, _, rex, rey = rects[worst]
        if depth >= spec.max_depth:
            raise QuadratureError(
                f"tolerance not reached at max_depth={spec.max_depth}",
                total, total_err)
        if len(rects) >= spec.max_panels:
            raise QuadratureError(
                f"tolerance not reached within max_panels={spec.max_panels}",
                total, total_err)
        if rex >= rey:
            mid = 0.5 * (rxlo + rxhi)
            children = [(rxlo, mid, rylo, ryhi), (mid, rxhi, rylo, ryhi)]
        else:
            mid = 0.5 * (rylo + ryhi)
            children = [(rxlo, rxhi, rylo, mid), (rxlo, rxhi, mid, ryhi)]
        new = []
        for cxlo, cxhi, cylo, cyhi in children:
            v, ex, ey = _rect(f, cxlo, cxhi, cylo, cyhi)
            new.append((cxlo, cxhi, cylo, cyhi, depth + 1, v, ex, ey))
        rects[worst:worst + 1] = new
