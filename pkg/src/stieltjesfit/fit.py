"""Least-squares projection onto the interpolation cone with a certificate.

Pipeline: project the data onto the nonnegative span of an ad-hoc basis of
spectral measures (NNLS), scan the Caprini function

    C(t) = Re sum_j (p_j - w_j) / (t - conj z_j)

whose nonnegativity on [0, inf) certifies optimality, enlarge the basis with
the scan's local minima, and finally shift the data by the smallest
correction that makes the certificate exact ("alternative data").  The
projected values are then interpolated and their spectral form extracted.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import RationalStieltjes, SampleSet, feasibility
from .errors import DomainError
from .interp import InterpolantChain, eval_chain, interpolate
from .numerics import ScanResult, min_norm_lsq, nnls, scan_grid
from .spectral import extract

_TRIVIAL_TOL = 1e-14  # residuals below this (relative) certify immediately
_TAU_DEDUP = 1e-12    # relative spacing below which candidate taus coincide


@dataclass(frozen=True)
class PointMass:
    """Unit point mass at tau >= 0; contributes 1/(tau - z)."""

    tau: float


@dataclass(frozen=True)
class UniformDensity:
    """Lebesgue density on [s1, s2]; contributes log((s2 - z)/(s1 - z))."""

    s1: float
    s2: float


@dataclass(frozen=True)
class AdHocBasis:
    includes_constant: bool
    elements: tuple
    taus: tuple       # generating tau list (sorted)
    dropped: int = 0  # non-positive tau candidates that were discarded


@dataclass(frozen=True)
class CapriniCertificate:
    residuals: np.ndarray
    scan: ScanResult
    T: float
    gamma_positive: bool
    sum_residual_real: float
    min_value: float
    certified: bool
    support: tuple = ()
    support_values: tuple = ()
    tol: float = 1e-9
    scale: float = 1.0
    trivial: bool = False


@dataclass(frozen=True)
class FitOptions:
    max_augment: int = 3        # basis-augmentation rounds
    max_datafix: int = 3        # alternative-data solves (first one included)
    tol_cert: float = 1e-9      # certificate tolerance, relative to max |w|
    gridsize: int = 2000        # Caprini scan grid
    feasibility_tol: float = 1e-10
    extract_spectral: bool = True


@dataclass(frozen=True)
class FitResult:
    samples: SampleSet
    projected: np.ndarray          # p*, the cone projection of the data
    coefficients: np.ndarray       # nonnegative weights over the final basis
    basis: AdHocBasis
    alternative_data: np.ndarray   # w-tilde = w + correction
    correction: np.ndarray         # dw
    interpolant: InterpolantChain
    rational: RationalStieltjes
    certificate: CapriniCertificate
    rho: float
    objective: float               # |p* - w|^2
    node_values: np.ndarray        # interpolant evaluated back at the nodes
    feasible_input: bool = False
    augment_rounds: int = 0
    datafix_rounds: int = 0


def build_adhoc_basis(s, extra_taus=()):
    """Ad-hoc basis generated by the nodes (plus extra taus).

    The tau list collects positive real parts and imaginary parts of the
    nodes; point masses sit at each tau and uniform densities span every pair
    of endpoints drawn from the taus and the midpoints of adjacent taus.  The
    constant element is always included.
    """
    cand = list(np.asarray(s.z).real) + list(np.asarray(s.z).imag) + [float(t) for t in extra_taus]
    dropped = sum(1 for t in cand if t <= 0.0)
    taus = _dedup_sorted([t for t in cand if t > 0.0])
    elements = _construction(taus)
    return AdHocBasis(True, elements, tuple(taus), dropped)


def _dedup_sorted(vals):
    out = []
    for t in sorted(vals):
        if not out or t - out[-1] > _TAU_DEDUP * t:
            out.append(t)
    return out


def _construction(taus):
    pts = list(taus)
    for lo, hi in zip(taus[:-1], taus[1:]):
        pts.append(0.5 * (lo + hi))
    pts = _dedup_sorted(pts)
    elements = [PointMass(t) for t in taus]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            elements.append(UniformDensity(pts[i], pts[j]))
    return tuple(elements)


def _augment_basis(basis, new_taus):
    # Scan minima may land at tau = 0 (the -sigma0/z element); unlike the
    # seed construction, augmentation keeps it.
    taus = _dedup_sorted(list(basis.taus) + [t for t in new_taus if t >= 0.0])
    elements = list(basis.elements)
    seen = set(elements)
    for el in _construction(taus):
        if el not in seen:
            elements.append(el)
            seen.add(el)
    masses = sorted((e for e in elements if isinstance(e, PointMass)), key=lambda e: e.tau)
    dens = sorted((e for e in elements if isinstance(e, UniformDensity)),
                  key=lambda e: (e.s1, e.s2))
    return AdHocBasis(basis.includes_constant, tuple(masses + dens), tuple(taus),
                      basis.dropped)


def basis_matrix(b, nodes):
    """Columns of basis-function values at the nodes, constant column first."""
    z = np.asarray(nodes, dtype=np.complex128)
    cols = []
    if b.includes_constant:
        cols.append(np.ones_like(z))
    for el in b.elements:
        if isinstance(el, PointMass):
            cols.append(1.0 / (el.tau - z))
        else:
            # principal branch: both endpoints sit on the same side of the cut
            cols.append(np.log((el.s2 - z) / (el.s1 - z)))
    return np.column_stack(cols)


def project(s, basis):
    """Nonnegative least-squares projection onto the basis cone.

    Real and imaginary parts are stacked so that the complex sum of squared
    moduli is minimised exactly.  Returns (coefficients, projected values).
    """
    mat = basis_matrix(basis, s.z)
    a = np.vstack([mat.real, mat.imag])
    rhs = np.concatenate([s.w.real, s.w.imag])
    x = nnls(a, rhs)
    return x, mat @ x


def caprini(s, p, support=(), gamma_positive=False, tol_cert=1e-9, gridsize=2000):
    """Scan the Caprini function of the residuals p - w over [0, T].

    T is chosen so that C is strictly monotone beyond it, hence every local
    minimum lies inside the scanned window.  The certificate holds when the
    scan never dips below -tol*scale, C vanishes (to the same tolerance) at
    every support point, and, when the fit carries a positive constant term,
    the residuals sum to zero in the real part.
    """
    p = np.asarray(p, dtype=np.complex128)
    if p.shape != s.w.shape:
        raise DomainError("projected values must match the sample count")
    delta = p - s.w
    zbar = np.conj(s.z)
    scale = max(float(np.max(np.abs(s.w))), 1e-300)
    sum_resid = float(np.sum(delta).real)

    if np.max(np.abs(delta), initial=0.0) <= _TRIVIAL_TOL * scale:
        empty = ScanResult(np.zeros(0), np.zeros(0), ())
        return CapriniCertificate(
            residuals=delta, scan=empty, T=0.0, gamma_positive=gamma_positive,
            sum_residual_real=sum_resid, min_value=0.0, certified=True,
            support=tuple(support), support_values=(0.0,) * len(tuple(support)),
            tol=tol_cert, scale=scale, trivial=True)

    zmax = float(np.max(np.abs(s.z)))
    num = 2.0 * float(np.sum(np.abs(delta) * np.abs(s.z)))
    den = abs(float(np.sum(delta * zbar).real))
    if den <= 1e-14 * num:
        big_t = 1e3 * zmax
    else:
        big_t = (num / den + 1.0) * zmax

    grid = scan_grid(0.0, big_t, gridsize)
    values = kernels.caprini_values(delta, zbar, grid)
    minima = []
    if values[0] < values[1]:
        minima.append((float(grid[0]), float(values[0])))
    interior = np.flatnonzero(
        (values[1:-1] < values[:-2]) & (values[1:-1] < values[2:])) + 1
    for i in interior:
        t, v = kernels.caprini_golden(delta, zbar, float(grid[i - 1]),
                                      float(grid[i + 1]), 1e-12)
        minima.append((float(t), float(v)))
    scan = ScanResult(grid, values, tuple(minima))

    support = tuple(float(t) for t in support)
    support_values = tuple(
        float(kernels.caprini_values(delta, zbar, np.array([t]))[0]) for t in support)
    min_value = scan.min_value
    certified = min_value >= -tol_cert * scale
    certified = certified and all(abs(v) <= tol_cert * scale for v in support_values)
    if gamma_positive:
        certified = certified and abs(sum_resid) <= tol_cert * scale
    return CapriniCertificate(
        residuals=delta, scan=scan, T=float(big_t), gamma_positive=gamma_positive,
        sum_residual_real=sum_resid, min_value=float(min_value), certified=certified,
        support=support, support_values=support_values,
        tol=tol_cert, scale=scale)


def _fix_support(cert):
    """Constraint points for the alternative-data solve."""
    interior = tuple(t for t, _ in cert.scan.minima if t > 0.0)
    c0 = float(cert.scan.values[0]) if cert.scan.values.size else 0.0
    return interior, (c0 < 0.0), c0


def alternative_data(s, p, cert):
    """Smallest data shift dw making the projection exactly optimal.

    At every local minimum t_k of C the shifted Caprini function must vanish
    with zero slope; when C(0) < 0 the origin joins the support; when the fit
    carries a positive constant the real residual sum is zeroed.  The
    under-determined real system is solved in the minimum-norm sense.
    """
    delta = np.asarray(cert.residuals, dtype=np.complex128)
    if cert.trivial:
        return np.zeros_like(delta)
    zbar = np.conj(s.z)
    interior, fix_origin, c0 = _fix_support(cert)
    rows = []
    rhs = []
    for tk in interior:
        ck = 1.0 / (tk - zbar)
        c_val = float(np.sum(delta * ck).real)
        rows.append(ck * ck)
        rhs.append(0.0)
        rows.append(ck)
        rhs.append(c_val)
    if fix_origin:
        rows.append(1.0 / zbar)
        rhs.append(-c0)
    if cert.gamma_positive:
        rows.append(np.ones_like(zbar))
        rhs.append(cert.sum_residual_real)
    if not rows:
        return np.zeros_like(delta)
    cmat = np.array(rows)
    a = np.hstack([cmat.real, -cmat.imag])
    sol = min_norm_lsq(a, np.array(rhs))
    n = len(s)
    return sol[:n] + 1j * sol[n:]


def _cone_reproject(opts):
    """Mid-recursion fallback: replace infeasible reduced data by its own
    cone projection (one quick augmentation round)."""

    def projector(reduced):
        basis = build_adhoc_basis(reduced)
        x, p = project(reduced, basis)
        cert = caprini(reduced, p, gamma_positive=x[0] > 0.0,
                       tol_cert=opts.tol_cert, gridsize=min(512, opts.gridsize))
        new = [t for t, _ in cert.scan.minima if not _known_tau(t, basis.taus)]
        if new:
            basis = _augment_basis(basis, new)
            x, p = project(reduced, basis)
        return p

    return projector


def _known_tau(t, taus):
    return any(abs(t - q) <= _TAU_DEDUP * max(t, q) for q in taus)


def fit(s, opts=FitOptions()):
    """Full reconstruction from noisy samples.

    Returns the cone projection with its certificate, the alternative data
    against which the certificate is exact, the interpolant chain through the
    projection, and (unless disabled) its explicit spectral form.  A fit that
    fails certification within the iteration budget is returned with
    certified=False rather than raised.
    """
    w = s.w
    feas = feasibility(s, opts.feasibility_tol)

    if feas.feasible:
        basis = build_adhoc_basis(s)
        p = w.copy()
        x = np.zeros(1 + len(basis.elements))
        cert = caprini(s, p, tol_cert=opts.tol_cert, gridsize=opts.gridsize)
        augment_rounds = datafix_rounds = 0
        w_cur = w.copy()
    else:
        basis = build_adhoc_basis(s)
        x, p = project(s, basis)
        objective = float(np.sum(np.abs(p - w) ** 2))
        cert = caprini(s, p, gamma_positive=x[0] > 0.0,
                       tol_cert=opts.tol_cert, gridsize=opts.gridsize)
        augment_rounds = 0
        while augment_rounds < opts.max_augment:
            new = [t for t, _ in cert.scan.minima if not _known_tau(t, basis.taus)]
            if not new:
                break
            basis = _augment_basis(basis, new)
            x, p = project(s, basis)
            augment_rounds += 1
            cert = caprini(s, p, gamma_positive=x[0] > 0.0,
                           tol_cert=opts.tol_cert, gridsize=opts.gridsize)
            new_objective = float(np.sum(np.abs(p - w) ** 2))
            gain = objective - new_objective
            objective = new_objective
            if gain < 1e-12 * max(objective, 1e-300):
                break

        w_cur = w.copy()
        datafix_rounds = 0
        cur = s
        while not cert.certified and datafix_rounds < opts.max_datafix:
            dw = alternative_data(cur, p, cert)
            w_cur = w_cur + dw
            cur = s.replace_values(w_cur)
            interior, fixed0, _ = _fix_support(cert)
            support = interior + ((0.0,) if fixed0 else ())
            datafix_rounds += 1
            cert = caprini(cur, p, support=support, gamma_positive=cert.gamma_positive,
                           tol_cert=opts.tol_cert, gridsize=opts.gridsize)

    chain = interpolate(SampleSet.from_arrays(s.z, p),
                        tol=opts.feasibility_tol,
                        reproject=_cone_reproject(opts))
    rational = extract(chain) if opts.extract_spectral else None
    node_values = eval_chain(chain, s.z)
    rho = float(np.sqrt(np.sum(np.abs(w - node_values) ** 2) / (2 * len(s) - 1)))
    return FitResult(
        samples=s,
        projected=p,
        coefficients=x,
        basis=basis,
        alternative_data=w_cur,
        correction=w_cur - w,
        interpolant=chain,
        rational=rational,
        certificate=cert,
        rho=rho,
        objective=float(np.sum(np.abs(p - w) ** 2)),
        node_values=node_values,
        feasible_input=feas.feasible,
        augment_rounds=augment_rounds,
        datafix_rounds=datafix_rounds,
    )
