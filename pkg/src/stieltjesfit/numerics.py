"""Shared numerical machinery: NNLS, minimum-norm least squares, bracketed
root finding, and local-minima scanning."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .errors import BracketError, ConvergenceError, DomainError

_EPS = np.finfo(np.float64).eps


def nnls(a, b, maxiter=None):
    """Solve min |Ax - b|_2 subject to x >= 0 (Lawson-Hanson active set).

    The result is exactly nonnegative.  Raises ConvergenceError carrying the
    best feasible iterate and its KKT violation if the outer-iteration cap
    (3 * n_cols by default) is exceeded.
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 1 or a.shape[0] != b.shape[0]:
        raise DomainError("need a 2-d matrix and matching 1-d rhs")
    m, k = a.shape
    if maxiter is None:
        maxiter = 3 * k
    scale = max(1.0, float(np.max(np.abs(a.T @ b), initial=0.0)))
    dual_tol = 100.0 * _EPS * max(m, k) * scale
    x, kkt, _, converged = kernels.lawson_hanson(a, b, maxiter, dual_tol)
    if not converged:
        raise ConvergenceError(
            f"nnls hit the iteration cap ({maxiter}); KKT violation {kkt:.3e}",
            best=x, violation=float(kkt))
    return x


def min_norm_lsq(a, b):
    """Minimum-norm least-squares solution (pseudo-inverse solution).

    Singular values below 1e-12 of the largest are treated as zero.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size == 0 or not np.any(a):
        return np.zeros(a.shape[1] if a.ndim == 2 else 0)
    x, _, _, _ = np.linalg.lstsq(a, b, rcond=1e-12)
    return x


def brent_root(f, a, b, tol=1e-14):
    """Bracketed root of a continuous scalar function (Brent's method)."""
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise BracketError(f"no sign change on [{a}, {b}]: f(a)={fa:.3e}, f(b)={fb:.3e}")
    return brentq(f, a, b, xtol=tol, rtol=max(tol, 4.0 * _EPS))


@dataclass(frozen=True)
class ScanResult:
    """Grid scan of a scalar function with refined local minima."""

    grid: np.ndarray
    values: np.ndarray
    minima: tuple  # ((location, value), ...) in increasing location order

    @property
    def min_value(self):
        vals = [v for _, v in self.minima]
        vals.append(float(np.min(self.values)))
        return min(vals)


def scan_grid(lo, hi, gridsize):
    """Scan grid: linear spacing below 1, logarithmic above."""
    if hi <= 1.0 or lo >= 1.0:
        if lo > 0.0 and lo >= 1.0:
            return np.geomspace(lo, hi, gridsize)
        return np.linspace(lo, hi, gridsize)
    n_lin = gridsize // 2
    lin = np.linspace(lo, 1.0, n_lin, endpoint=False)
    log = np.geomspace(1.0, hi, gridsize - n_lin)
    return np.concatenate([lin, log])


def golden_minimize(f, a, b, rel_tol=1e-12):
    """Golden-section minimum of a unimodal function on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > rel_tol * (abs(a) + abs(b) + 1e-300):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    t = 0.5 * (a + b)
    return t, f(t)


def scan_local_minima(f, lo, hi, gridsize=2000):
    """Find the local minima of ``f`` on [lo, hi].

    Evaluates on a grid (linear near 0, logarithmic beyond 1), detects the
    pattern v[i-1] > v[i] < v[i+1], and refines each hit by golden section to
    relative tolerance 1e-12.  The left endpoint is reported as a minimum when
    the scan starts uphill.
    """
    if not lo < hi:
        raise DomainError("need lo < hi")
    if gridsize < 3:
        raise DomainError("need gridsize >= 3")
    grid = scan_grid(lo, hi, gridsize)
    values = np.array([f(t) for t in grid], dtype=np.float64)
    minima = []
    if values[0] < values[1]:
        minima.append((float(grid[0]), float(values[0])))
    interior = np.flatnonzero(
        (values[1:-1] < values[:-2]) & (values[1:-1] < values[2:])) + 1
    for i in interior:
        t, v = golden_minimize(f, float(grid[i - 1]), float(grid[i + 1]))
        minima.append((float(t), float(v)))
    return ScanResult(grid, values, tuple(minima))
