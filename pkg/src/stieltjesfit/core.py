"""Domain types, rational evaluation, Pick matrices, and feasibility.

The central objects are sample sets (z_j, w_j) with nodes in the open upper
half-plane and rational functions of the form

    f(z) = gamma - sigma0/z + sum_j sigma_j / (t_j - z),

with gamma, sigma0 >= 0, sigma_j > 0 and 0 < t_1 < ... < t_N.  Such f map the
upper half-plane into itself, are positive on the negative real axis, and
satisfy f(conj z) = conj f(z).
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, DuplicateNodeError, PoleHitError


@dataclass(frozen=True)
class ComplexSample:
    """One measurement: value of an unknown Stieltjes function at ``node``."""

    node: complex
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "node", complex(self.node))
        object.__setattr__(self, "value", complex(self.value))
        if not np.isfinite([self.node.real, self.node.imag,
                            self.value.real, self.value.imag]).all():
            raise DomainError("sample entries must be finite")
        if self.node.imag <= 0.0:
            raise DomainError(f"node {self.node} must lie in the open upper half-plane")


class SampleSet:
    """Ordered collection of samples with pairwise distinct nodes."""

    def __init__(self, samples):
        samples = tuple(
            s if isinstance(s, ComplexSample) else ComplexSample(complex(s[0]), complex(s[1]))
            for s in samples
        )
        if len(samples) == 0:
            raise DomainError("need at least one sample")
        z = np.array([s.node for s in samples], dtype=np.complex128)
        for j in range(len(z)):
            hits = np.flatnonzero(z[: j] == z[j])
            if hits.size:
                raise DuplicateNodeError((int(hits[0]), j))
        self.samples = samples
        self.z = z
        self.w = np.array([s.value for s in samples], dtype=np.complex128)
        self.z.setflags(write=False)
        self.w.setflags(write=False)

    @classmethod
    def from_arrays(cls, z, w):
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
        if z.shape != w.shape:
            raise DomainError("node and value arrays must have equal length")
        return cls([ComplexSample(complex(a), complex(b)) for a, b in zip(z, w)])

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, idx):
        return self.samples[idx]

    def __repr__(self):
        return f"SampleSet(n={len(self)})"

    def replace_values(self, w):
        """Same nodes, new values."""
        return SampleSet.from_arrays(self.z, w)

    def tail(self):
        """Samples 2..n as a new set (used by the recursive interpolation)."""
        return SampleSet(self.samples[1:])


@dataclass(frozen=True)
class RationalStieltjes:
    """Explicit spectral form gamma - sigma0/z + sum sigma_j/(t_j - z)."""

    gamma: float = 0.0
    sigma0: float = 0.0
    poles: tuple = ()

    def __post_init__(self):
        if self.gamma < 0.0 or self.sigma0 < 0.0:
            raise DomainError("gamma and sigma0 must be nonnegative")
        poles = tuple((float(t), float(s)) for t, s in self.poles)
        object.__setattr__(self, "poles", poles)
        last = 0.0
        for t, s in poles:
            if t <= last:
                raise DomainError("pole locations must be strictly increasing and positive")
            if s <= 0.0:
                raise DomainError("pole weights must be positive")
            last = t

    @property
    def pole_t(self):
        return np.array([t for t, _ in self.poles], dtype=np.float64)

    @property
    def pole_s(self):
        return np.array([s for _, s in self.poles], dtype=np.float64)

    @property
    def degree(self):
        """Number of point masses including the one at zero."""
        return len(self.poles) + (1 if self.sigma0 > 0.0 else 0)

    def __call__(self, z):
        return eval_rational(self, z)


def eval_rational(f, z):
    """Evaluate a RationalStieltjes at ``z`` (scalar or array).

    Raises PoleHitError when z coincides with a pole (t_j, or 0 when
    sigma0 > 0).  Real evaluation points off [0, inf) are fine; points inside
    the spectral support are allowed for plotting as long as they miss the
    poles.
    """
    zs = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if f.sigma0 > 0.0 and np.any(zs == 0.0):
        raise PoleHitError(0.0)
    for t, _ in f.poles:
        if np.any(zs == t):
            raise PoleHitError(t)
    vals = kernels.eval_rational_grid(f.gamma, f.sigma0, f.pole_t, f.pole_s, zs.ravel())
    vals = vals.reshape(zs.shape)
    if np.isscalar(z) or np.ndim(z) == 0:
        return complex(vals[0])
    return vals


@dataclass(frozen=True)
class PickPair:
    """The two Hermitian matrices whose nonnegativity characterises the cone."""

    N: np.ndarray
    P: np.ndarray


@dataclass(frozen=True)
class FeasibilityReport:
    lambda_min_N: float
    lambda_min_P: float
    feasible: bool
    tol: float
    scale_N: float = 1.0
    scale_P: float = 1.0

    def __str__(self):
        verdict = "feasible" if self.feasible else "infeasible"
        return (f"{verdict} (min eig N = {self.lambda_min_N:.3e}, "
                f"min eig P = {self.lambda_min_P:.3e}, tol = {self.tol:.1e})")


def pick_matrices(s):
    """Build the pair N_jk = (w_j - conj w_k)/(z_j - conj z_k) and its
    z*w analogue.

    Only the upper triangle is computed; the lower is its mirror, so the
    result is Hermitian to the bit.  Diagonals are assembled as explicitly
    real ratios of imaginary parts.
    """
    z, w = s.z, s.w
    dz = z[:, None] - np.conj(z)[None, :]
    n_full = (w[:, None] - np.conj(w)[None, :]) / dz
    zw = z * w
    p_full = (zw[:, None] - np.conj(zw)[None, :]) / dz

    def hermitize(m, diag):
        upper = np.triu(m, 1)
        return upper + upper.conj().T + np.diag(diag.astype(np.complex128))

    n_mat = hermitize(n_full, w.imag / z.imag)
    p_mat = hermitize(p_full, zw.imag / z.imag)
    n_mat.setflags(write=False)
    p_mat.setflags(write=False)
    return PickPair(n_mat, p_mat)


def _entry_scale(m):
    return max(1.0, float(np.max(np.abs(m))))


def feasibility(s, tol=1e-10):
    """Check whether the samples are values of some Stieltjes function.

    The verdict is relative: each minimal eigenvalue must be at least
    -tol * max(1, largest entry modulus) of its matrix.  Exactly feasible
    data routinely produces eigenvalues at rounding level below zero because
    the eigenvalues of these matrices decay exponentially.
    """
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    pair = pick_matrices(s)
    lam_n = float(np.linalg.eigvalsh(pair.N)[0])
    lam_p = float(np.linalg.eigvalsh(pair.P)[0])
    scale_n = _entry_scale(pair.N)
    scale_p = _entry_scale(pair.P)
    ok = (lam_n >= -tol * scale_n) and (lam_p >= -tol * scale_p)
    return FeasibilityReport(lam_n, lam_p, ok, tol, scale_n, scale_p)
