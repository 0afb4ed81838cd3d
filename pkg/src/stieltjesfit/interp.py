"""Recursive one-point interpolation in the Stieltjes class.

Each consumed sample (z1, w1) with Im(w1) > 0 and Im(z1*w1) > 0 fixes a
Moebius step: the functions through that sample are exactly

    f(z) = (g(z) * (gamma_inf*z - s_decay) - s_mass) / (z*g(z) + z - t_mass)

with g ranging over the whole class.  The four step parameters describe the
two extremal interpolants through the sample: the single point mass
s_mass/(t_mass - z), and the decaying gamma_inf - s_decay/z.  Inverting the
step maps the remaining samples into constraints on g, so interpolation
recurses until the data is exhausted (terminal g = 0) or pinned down early.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import RationalStieltjes, SampleSet, feasibility
from .errors import (ChainInfeasibleError, DegenerateSampleError, DomainError,
                     InfeasibleDataError, StieltjesFitError)
from .numerics import nnls

# Relative floor below which Im(w) or Im(z*w) counts as degenerate.
_DEG_TOL = 1e-13
# Relative threshold for the vanishing denominator that forces an early exit.
_EXIT_TOL = 1e-13
# Cancellation floor: transformed numerators this far below their terms are
# rounding residue of the zero function, so the recursion has bottomed out.
# Same budget as the pinned test below: terminating here perturbs chain
# values by at most ~1e-8 relative.
_ZERO_TOL = 5e-9
# Residual floor for the collective pinned test: when every remaining value
# fits a - b/z this closely, recursing further only amplifies rounding noise.
# Kept at half the chain's 1e-8 node-reproduction budget.
_PIN_TOL = 5e-9


@dataclass(frozen=True)
class StepParams:
    """Parameters of one interpolation step, recomputable from (node, value):

    t_mass    = Im(z1*w1)/Im(w1)        location of the point-mass extremal
    s_mass    = |w1|^2 Im(z1)/Im(w1)    its weight
    gamma_inf = Im(z1*w1)/Im(z1)        constant part of the decaying extremal
    s_decay   = |z1|^2 Im(w1)/Im(z1)    weight of its 1/z term
    """

    t_mass: float
    s_mass: float
    gamma_inf: float
    s_decay: float
    node: complex
    value: complex

    def as_row(self):
        return (self.t_mass, self.s_mass, self.gamma_inf, self.s_decay)


@dataclass(frozen=True)
class EarlyExit:
    """The recursion is pinned: the interpolant is gamma - sigma0/z."""

    terminal: RationalStieltjes
    index: int  # offset (within the reduced set) of the pinning sample


@dataclass(frozen=True)
class InterpolantChain:
    """A sequence of Moebius steps wrapped around a closed-form terminal.

    The terminal is always of the shape gamma - sigma0/z; the plain recursion
    ends with the zero function (gamma = sigma0 = 0) so the interpolant decays
    at infinity.
    """

    steps: tuple
    terminal_gamma: float
    terminal_sigma0: float
    terminal_kind: str  # zero | constant | decay | early-exit
    source: SampleSet = None
    reprojections: int = 0

    def steps_array(self):
        if not self.steps:
            return np.zeros((0, 4), dtype=np.float64)
        return np.array([st.as_row() for st in self.steps], dtype=np.float64)

    def __len__(self):
        return len(self.steps)


def step_params(z1, w1):
    """Step parameters for one sample; requires the strict one-point
    conditions Im(w1) > 0 and Im(z1*w1) > 0.

    When either fails (within a relative floor) the sample admits only a
    closed-form interpolant and DegenerateSampleError carries it: a constant
    for Im(w1) = 0, a pure -sigma/z for Im(z1*w1) = 0.
    """
    z1 = complex(z1)
    w1 = complex(w1)
    if z1.imag <= 0.0:
        raise DomainError("node must lie in the open upper half-plane")
    zw = z1 * w1
    if w1.imag <= _DEG_TOL * abs(w1):
        raise DegenerateSampleError("constant", gamma=max(w1.real, 0.0))
    if zw.imag <= _DEG_TOL * abs(zw):
        raise DegenerateSampleError("decay", sigma0=max(-zw.real, 0.0))
    return StepParams(
        t_mass=zw.imag / w1.imag,
        s_mass=(abs(w1) ** 2) * z1.imag / w1.imag,
        gamma_inf=zw.imag / z1.imag,
        s_decay=(abs(z1) ** 2) * w1.imag / z1.imag,
        node=z1,
        value=w1,
    )


def reduce(s):
    """Consume the first sample: return (step, transformed remainder).

    The remaining values are mapped through the inverse Moebius step,
    g(z_j) = ((t_mass - z_j) w_j - s_mass) / (z_j w_j + s_decay - gamma_inf z_j).
    A vanishing denominator means the data pins the interpolant to the
    decaying extremal; that is returned as EarlyExit instead.
    """
    step = step_params(s.z[0], s.w[0])
    if len(s) == 1:
        return step, None
    z = s.z[1:]
    w = s.w[1:]
    lower = w * z + (step.s_decay - step.gamma_inf * z)
    scale = np.abs(w * z) + np.abs(step.s_decay - step.gamma_inf * z)
    hits = np.flatnonzero(np.abs(lower) <= _EXIT_TOL * scale)
    if hits.size:
        return EarlyExit(
            RationalStieltjes(gamma=step.gamma_inf, sigma0=step.s_decay),
            index=int(hits[0]),
        )
    upper = (step.t_mass - z) * w - step.s_mass
    if np.all(np.abs(upper) <= _ZERO_TOL * (np.abs((step.t_mass - z) * w) + step.s_mass)):
        # every transformed value is cancellation residue: g is the zero
        # function and the data was exactly rational of this depth
        return step, None
    g = upper / lower
    return step, SampleSet.from_arrays(z, g)


def _pinned_decay(s):
    """Best nonnegative fit of the remaining values by a - b/z.

    Returns (a, b) when the fit matches every value to a rounding-level
    relative residual, else None.  Once the data sits this close to the
    decaying extremal family, another reduction step would divide by near
    cancellation and shred the remaining information.
    """
    cols = np.column_stack([np.ones_like(s.z), -1.0 / s.z])
    mat = np.vstack([cols.real, cols.imag])
    coef = nnls(mat, np.concatenate([s.w.real, s.w.imag]))
    resid = np.abs(cols @ coef - s.w)
    tol = _PIN_TOL * (np.abs(s.w) + coef[0] + coef[1] / np.abs(s.z))
    if np.all(resid <= tol):
        return float(coef[0]), float(coef[1])
    return None


def interpolate(s, tol=1e-10, reproject=None):
    """Build an interpolant chain through all samples.

    The input must pass the feasibility test at relative tolerance ``tol``.
    Round-off can push the transformed data of later levels outside the cone;
    when ``reproject`` (SampleSet -> new value array) is given the offending
    level is replaced by its projection and the recursion resumes, otherwise
    ChainInfeasibleError carries the partial chain and the bad level.
    """
    report = feasibility(s, tol)
    if not report.feasible:
        raise InfeasibleDataError(report)
    steps = []
    current = s
    reprojections = 0
    terminal_gamma = 0.0
    terminal_sigma0 = 0.0
    kind = "zero"
    if len(current) >= 2:
        pinned = _pinned_decay(current)
        if pinned is not None:
            current = None
            terminal_gamma, terminal_sigma0 = pinned
            kind = "pinned"
    while current is not None:
        try:
            result = reduce(current)
        except DegenerateSampleError as deg:
            terminal_gamma = deg.gamma
            terminal_sigma0 = deg.sigma0
            kind = deg.kind
            break
        if isinstance(result, EarlyExit):
            terminal_gamma = result.terminal.gamma
            terminal_sigma0 = result.terminal.sigma0
            kind = "early-exit"
            break
        step, rest = result
        steps.append(step)
        if rest is None:
            break
        if len(rest) >= 2:
            pinned = _pinned_decay(rest)
            if pinned is not None:
                terminal_gamma, terminal_sigma0 = pinned
                kind = "pinned"
                break
        rep = feasibility(rest, tol)
        if not rep.feasible:
            if reproject is None:
                raise ChainInfeasibleError(steps, rest, rep)
            rest = rest.replace_values(np.asarray(reproject(rest), dtype=np.complex128))
            reprojections += 1
        current = rest
    return InterpolantChain(
        steps=tuple(steps),
        terminal_gamma=terminal_gamma,
        terminal_sigma0=terminal_sigma0,
        terminal_kind=kind,
        source=s,
        reprojections=reprojections,
    )


def eval_chain(c, z):
    """Evaluate the chain at ``z`` (scalar or array).

    Conjugate symmetry holds because every step parameter is real.  A
    non-finite result means the chain is corrupted (denominators cannot
    vanish off the closed positive axis for genuine chains).
    """
    zs = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    vals = kernels.eval_chain_grid(
        c.steps_array(), c.terminal_gamma, c.terminal_sigma0, zs.ravel())
    if not np.all(np.isfinite(vals)):
        raise StieltjesFitError("chain evaluation produced non-finite values")
    vals = vals.reshape(zs.shape)
    if np.isscalar(z) or np.ndim(z) == 0:
        return complex(vals[0])
    return vals
