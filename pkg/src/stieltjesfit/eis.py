"""Electrochemical impedance front end.

Impedance spectra of resistor-capacitor (Voigt) circuits are exactly the
rational Stieltjes functions evaluated along the negative imaginary axis,
Z(omega) = f(-i omega).  This module supplies the standard fractional test
models (CPE, ZARC, Havriliak-Negami and its double), synthetic noisy
datasets, the conversion between datasets and upper-half-plane samples, and
the bijection between rational fits and Voigt circuits.

Convention: a dataset row (f_j, Z_j) becomes the sample z_j = 2*pi*f_j * i
with value conj(Z_j); sign conventions differ across the EIS literature, so
this mapping is fixed here once and used everywhere.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .core import RationalStieltjes, SampleSet
from .errors import DomainError

MODEL_KINDS = ("cpe", "zarc", "hn", "dhn")

# Double Havriliak-Negami demo cell: two relaxation scales four decades apart.
DHN_DEMO_PARAMS = {
    "r_inf": 20.0, "r0": 50.0, "phi": 0.5, "psi": 0.8, "tau1": 20.0, "tau2": 0.001,
}


@dataclass(frozen=True)
class EisDataset:
    frequencies: np.ndarray  # Hz, strictly increasing
    impedances: np.ndarray   # complex ohms
    noise_level: float = 0.0
    seed: int = 0

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=np.float64)
        z = np.asarray(self.impedances, dtype=np.complex128)
        if f.ndim != 1 or f.shape != z.shape:
            raise DomainError("frequencies and impedances must be matching 1-d arrays")
        if np.any(f <= 0.0) or np.any(np.diff(f) <= 0.0):
            raise DomainError("frequencies must be positive and strictly increasing")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "impedances", z)

    def __len__(self):
        return len(self.frequencies)


@dataclass(frozen=True)
class VoigtCircuit:
    """Series resistor, optional series capacitor, and RC pairs."""

    r_inf: float
    series_c: float = None
    elements: tuple = ()  # ((R_ohm, C_farad), ...)

    def __post_init__(self):
        if self.r_inf < 0.0:
            raise DomainError("r_inf must be nonnegative")
        if self.series_c is not None and self.series_c <= 0.0:
            raise DomainError("series capacitance must be positive")
        for r, c in self.elements:
            if r <= 0.0 or c <= 0.0:
                raise DomainError("element resistances and capacitances must be positive")

    def impedance(self, omega):
        """Circuit impedance at angular frequency omega (rad/s)."""
        omega = np.asarray(omega, dtype=np.float64)
        z = np.full(omega.shape, self.r_inf, dtype=np.complex128)
        if self.series_c is not None:
            z = z + 1.0 / (1j * omega * self.series_c)
        for r, c in self.elements:
            z = z + r / (1.0 + 1j * omega * r * c)
        return z if z.ndim else complex(z)


def _check_range(name, value, lo=None, positive=False):
    if positive and value <= 0.0:
        raise DomainError(f"{name} must be positive, got {value}")
    if lo is not None and not lo[0] <= value <= lo[1]:
        raise DomainError(f"{name} must lie in [{lo[0]}, {lo[1]}], got {value}")


def model_eval(kind, params, omega):
    """Impedance of a reference model at angular frequency omega (rad/s).

    Fractional powers of (i tau omega) use the principal branch.
    """
    kind = kind.lower()
    omega = np.asarray(omega, dtype=np.float64)
    if np.any(omega <= 0.0):
        raise DomainError("omega must be positive")
    p = dict(params)
    if kind == "cpe":
        _check_range("r", p["r"], positive=True)
        _check_range("tau", p["tau"], positive=True)
        _check_range("phi", p["phi"], lo=(0.0, 1.0))
        z = p["r"] / (1j * p["tau"] * omega) ** p["phi"]
    elif kind == "zarc":
        _check_range("r", p["r"], positive=True)
        _check_range("tau", p["tau"], positive=True)
        _check_range("phi", p["phi"], lo=(0.0, 1.0))
        z = p["r"] / (1.0 + (1j * p["tau"] * omega) ** p["phi"])
    elif kind == "hn":
        _check_range("r", p["r"], positive=True)
        _check_range("tau", p["tau"], positive=True)
        _check_range("phi", p["phi"], lo=(0.0, 1.0))
        _check_range("psi", p["psi"], lo=(0.0, 1.0))
        z = p["r"] / (1.0 + (1j * p["tau"] * omega) ** p["phi"]) ** p["psi"]
    elif kind == "dhn":
        _check_range("r_inf", p["r_inf"], positive=True)
        _check_range("r0", p["r0"], positive=True)
        _check_range("phi", p["phi"], lo=(0.0, 1.0))
        _check_range("psi", p["psi"], lo=(0.0, 1.0))
        _check_range("tau1", p["tau1"], positive=True)
        _check_range("tau2", p["tau2"], positive=True)
        z = (p["r_inf"]
             + p["r0"] / (1.0 + (1j * p["tau1"] * omega) ** p["phi"]) ** p["psi"]
             + p["r0"] / (1.0 + (1j * p["tau2"] * omega) ** p["phi"]) ** p["psi"])
    else:
        raise DomainError(f"unknown model kind {kind!r}; choose from {MODEL_KINDS}")
    return z if z.ndim else complex(z)


def synth_dataset(kind, params, fmin, fmax, n, noise=0.0, seed=0):
    """Synthetic dataset: n log-equispaced frequencies in [fmin, fmax] Hz.

    Each exact value is polluted multiplicatively with complex Gaussian noise
    of the given relative RMS modulus: Z * (1 + noise*(g1 + i*g2)/sqrt(2)).
    The draw order (one (g1, g2) pair per frequency, lowest first) is part of
    the reproducibility contract.
    """
    if not fmin < fmax:
        raise DomainError("need fmin < fmax")
    if n < 2:
        raise DomainError("need n >= 2")
    if noise < 0.0:
        raise DomainError("noise must be nonnegative")
    freqs = np.geomspace(fmin, fmax, n)
    z = model_eval(kind, params, 2.0 * np.pi * freqs)
    if noise > 0.0:
        g = np.random.default_rng(seed).standard_normal((n, 2))
        z = z * (1.0 + noise * (g[:, 0] + 1j * g[:, 1]) / np.sqrt(2.0))
    return EisDataset(freqs, z, noise_level=noise, seed=seed)


def to_samples(d):
    """Dataset as upper-half-plane samples: z = i*omega, w = conj(Z)."""
    omega = 2.0 * np.pi * d.frequencies
    return SampleSet.from_arrays(1j * omega, np.conj(d.impedances))


def from_samples(s, values=None):
    """Inverse of to_samples: impedances from samples (or explicit values)."""
    w = s.w if values is None else np.asarray(values, dtype=np.complex128)
    freqs = s.z.imag / (2.0 * np.pi)
    return EisDataset(freqs, np.conj(w))


def to_voigt(f):
    """Voigt circuit of a rational fit.

    gamma is the series resistance; a mass sigma0 at zero is a series
    capacitor 1/sigma0; each pole (t, s) is an RC pair with R = s/t, C = 1/s
    (so that s/(t + i*omega) = R/(1 + i*omega*R*C)).
    """
    series_c = 1.0 / f.sigma0 if f.sigma0 > 0.0 else None
    elements = tuple((s / t, 1.0 / s) for t, s in f.poles)
    return VoigtCircuit(f.gamma, series_c, elements)


def from_voigt(c):
    """Rational Stieltjes function of a Voigt circuit (inverse of to_voigt)."""
    sigma0 = 1.0 / c.series_c if c.series_c is not None else 0.0
    poles = sorted((1.0 / (r * cap), 1.0 / cap) for r, cap in c.elements)
    return RationalStieltjes(c.r_inf, sigma0, tuple(poles))


CSV_HEADER = ("freq_hz", "re_z", "im_z")


def write_csv(d, path):
    """Write a dataset in the freq_hz,re_z,im_z schema."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(CSV_HEADER)
        for f, z in zip(d.frequencies, d.impedances):
            out.writerow([repr(float(f)), repr(float(z.real)), repr(float(z.imag))])


def read_csv(path):
    """Read a freq_hz,re_z,im_z dataset; parse errors name the row."""
    freqs = []
    vals = []
    with open(path, newline="", encoding="utf-8") as fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if header is None or [h.strip().lower() for h in header] != list(CSV_HEADER):
            raise DomainError(f"{path}: expected header {','.join(CSV_HEADER)}")
        for i, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise DomainError(f"{path}: row {i}: expected 3 fields, got {len(row)}")
            try:
                f, re, im = (float(v) for v in row)
            except ValueError as exc:
                raise DomainError(f"{path}: row {i}: {exc}") from None
            freqs.append(f)
            vals.append(re + 1j * im)
    if not freqs:
        raise DomainError(f"{path}: no data rows")
    return EisDataset(np.array(freqs), np.array(vals))
