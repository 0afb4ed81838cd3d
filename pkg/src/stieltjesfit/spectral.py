"""Explicit spectral form of an interpolant chain.

One Moebius step turns a rational g of degree m into a rational f of degree
m + 1.  The new poles are the roots of phi(x) = x*g(x) + x - t_mass, one in
each gap between consecutive poles of g (and one below the first, one above
the last); the new weights are residues of f at those roots.  Folding the
chain terminal through all steps in reverse consumption order therefore
rebuilds the interpolant as an explicit gamma - sigma0/z + sum s_j/(t_j - z).
"""

import warnings

import numpy as np

from . import kernels
from .core import RationalStieltjes
from .errors import ConvergenceError, DomainError, InterlacingError

# Poles closer than this (relatively) are merged before lifting.
_MERGE_TOL = 1e-12
# Weights this far (relatively) below the largest may be dropped when they
# come out nonpositive from cancellation.
_DROP_TOL = 1e-14


def _merge_close_poles(f):
    if len(f.poles) < 2:
        return f
    t = f.pole_t
    s = f.pole_s
    if np.all(np.diff(t) >= _MERGE_TOL * t[1:]):
        return f
    merged = [[t[0], s[0]]]
    for tj, sj in zip(t[1:], s[1:]):
        if tj - merged[-1][0] < _MERGE_TOL * tj:
            tot = merged[-1][1] + sj
            merged[-1][0] = (merged[-1][0] * merged[-1][1] + tj * sj) / tot
            merged[-1][1] = tot
        else:
            merged.append([tj, sj])
    warnings.warn(
        f"merged {len(f.poles) - len(merged)} nearly coincident pole(s) before lifting",
        RuntimeWarning, stacklevel=3)
    return RationalStieltjes(f.gamma, f.sigma0, tuple((t, s) for t, s in merged))


def step_lift(g, step):
    """Lift a rational g through one Moebius step.

    The result has gamma = gamma_inf*gamma_g/(gamma_g + 1) and
    sigma0 = sigma0_g*s_decay/(sigma0_g + t_mass); its poles strictly
    interlace the poles of g from below.  Bracket failures raise
    ConvergenceError; an interlacing violation raises InterlacingError.
    """
    g = _merge_close_poles(g)
    gamma_f, nu0, tau, nu, ok = kernels.lift_rational(
        g.gamma, g.sigma0, g.pole_t, g.pole_s,
        step.t_mass, step.s_mass, step.gamma_inf, step.s_decay)
    if not ok:
        raise ConvergenceError(
            "lost the sign change while bracketing a lifted pole "
            f"(degree {len(g.poles)}, t_mass={step.t_mass:.6g})")
    t_old = g.pole_t
    bounds_lo = np.concatenate([[0.0], t_old])
    if not np.all(tau > bounds_lo) or not np.all(tau[:-1] < t_old):
        raise InterlacingError(
            f"lifted poles {tau} do not interlace the previous level {t_old}")
    if np.any(nu <= 0.0):
        bad = np.flatnonzero(nu <= 0.0)
        if np.all(np.abs(nu[bad]) <= _DROP_TOL * np.max(nu, initial=0.0)):
            keep = nu > 0.0
            warnings.warn(
                f"dropped {bad.size} lifted pole(s) with negligible weight",
                RuntimeWarning, stacklevel=2)
            tau, nu = tau[keep], nu[keep]
        else:
            raise DomainError(f"nonpositive lifted weights at poles {tau[bad]}")
    return RationalStieltjes(gamma_f, nu0, tuple(zip(tau, nu)))


def extract(c):
    """Spectral form of a chain: fold the terminal through the steps in
    reverse consumption order.  The degree equals the number of steps (plus
    whatever the terminal carries)."""
    f = RationalStieltjes(c.terminal_gamma, c.terminal_sigma0)
    for step in reversed(c.steps):
        f = step_lift(f, step)
    return f
