"""Admissible-value disks for f(z) given consistent samples.

Appending a query pair (z, w) to consistent data keeps the Pick matrices
nonnegative iff w lies in a closed disk for each matrix; the actual value
set is the lens-shaped intersection of the two disks.  Centers and radii
come from the bordered-determinant expansion written as ratios of cofactor
quadratics, which stay well scaled even when the determinants underflow
(the eigenvalues of these matrices decay exponentially with n).
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .core import pick_matrices
from .errors import ConditioningError, DomainError

# Above this many nodes double precision cannot resolve the disks reliably.
_N_SAFE = 12


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float
    pinned: bool = False  # radius^2 clamped up to zero (boundary-pinned)


@dataclass(frozen=True)
class AdmissibleLens:
    disk_n: Disk
    disk_p: Disk
    boundary: np.ndarray  # closed polyline tracing the lens edge
    empty: bool = False


def _disk_from_quadratics(alpha, a, beta, extra, center_note):
    """Disk from the expansion -alpha|w|^2 + 2 Re(a w) + (linear) - beta >= 0."""
    if alpha <= 0.0:
        raise ConditioningError(
            f"nonpositive cofactor quadratic for the {center_note} disk; "
            "reduce the number of nodes or classify the data as boundary")
    center = np.conj(a) / alpha + extra / alpha
    r2 = abs(center) ** 2 - beta / alpha
    pinned = False
    if r2 < 0.0:
        if r2 >= -1e-12 * abs(center) ** 2:
            r2 = 0.0
            pinned = True
        else:
            raise ConditioningError(
                f"negative squared radius {r2:.3e} for the {center_note} disk; "
                "reduce the number of nodes or classify the data as boundary")
    return Disk(complex(center), float(np.sqrt(r2)), pinned)


def _quadratics(mat, xi, eta, tol):
    """(alpha, a, beta) as ratios to det(mat), or via the adjugate on the
    boundary where the matrix is numerically singular."""
    lam, vec = np.linalg.eigh(mat)
    scale = max(1.0, float(np.max(np.abs(mat))))
    if lam[0] < -tol * scale:
        raise ConditioningError(
            f"Pick matrix indefinite (min eigenvalue {lam[0]:.3e}); data infeasible")
    cxi = vec.conj().T @ np.conj(xi)
    ceta = vec.conj().T @ np.conj(eta)
    if lam[0] > tol * scale:
        # strictly inside the cone: cofactor ratios via the inverse
        alpha = float(np.sum(np.abs(cxi) ** 2 / lam))
        a = complex(np.sum(np.conj(cxi) * ceta / lam))
        beta = float(np.real(np.sum(np.abs(ceta) ** 2 / lam)))
        det_ratio = 1.0
    else:
        # boundary: use the adjugate, which stays finite when det -> 0
        mu = np.array([np.prod(np.delete(lam, i)) for i in range(lam.size)])
        alpha = float(np.real(np.sum(mu * np.abs(cxi) ** 2)))
        a = complex(np.sum(mu * np.conj(cxi) * ceta))
        beta = float(np.real(np.sum(mu * np.abs(ceta) ** 2)))
        det_ratio = float(np.prod(lam))
    return alpha, a, beta, det_ratio


def _check_query(s, z):
    z = complex(z)
    if z.imag <= 0.0:
        raise DomainError("query point must lie in the open upper half-plane")
    if len(s) > _N_SAFE:
        warnings.warn(
            f"{len(s)} nodes: disk bounds beyond {_N_SAFE} nodes are "
            "unreliable in double precision", RuntimeWarning, stacklevel=3)
    hit = np.flatnonzero(np.abs(s.z - z) <= 1e-14 * np.abs(s.z))
    return z, (int(hit[0]) if hit.size else None)


def disk_N(s, z, tol=1e-10):
    """Disk containing f(z) from the plain Pick matrix.

    A query at one of the nodes returns the forced value with radius zero.
    """
    z, hit = _check_query(s, z)
    if hit is not None:
        return Disk(complex(s.w[hit]), 0.0, pinned=True)
    xi = 1.0 / (z - np.conj(s.z))
    eta = np.conj(s.w) * xi
    alpha, a, beta, det_ratio = _quadratics(pick_matrices(s).N, xi, eta, tol)
    extra = 1j * det_ratio / (2.0 * z.imag)
    return _disk_from_quadratics(alpha, a, beta, extra, "N")


def disk_P(s, z, tol=1e-10):
    """Disk containing f(z) from the z*w Pick matrix."""
    z, hit = _check_query(s, z)
    if hit is not None:
        return Disk(complex(s.w[hit]), 0.0, pinned=True)
    xi = 1.0 / (z - np.conj(s.z))
    xi_p = z * xi
    eta_p = z * np.conj(s.w) * xi - np.conj(s.w)
    alpha, a, beta, det_ratio = _quadratics(pick_matrices(s).P, xi_p, eta_p, tol)
    extra = 1j * np.conj(z) * det_ratio / (2.0 * z.imag)
    return _disk_from_quadratics(alpha, a, beta, extra, "P")


def _arc(center, radius, a0, a1, via, npts):
    """Sample the arc from angle a0 to a1 passing through angle via."""
    twopi = 2.0 * np.pi
    span = (a1 - a0) % twopi
    mid = (via - a0) % twopi
    if mid > span:  # go the other way round
        a0, a1 = a1, a0
        span = twopi - span
    ang = a0 + span * np.linspace(0.0, 1.0, npts)
    return center + radius * np.exp(1j * ang)


def admissible_lens(s, z, npoints=128, tol=1e-10):
    """Boundary polyline of the intersection of the two value disks."""
    dn = disk_N(s, z, tol)
    dp = disk_P(s, z, tol)
    c1, r1 = dn.center, dn.radius
    c2, r2 = dp.center, dp.radius
    d = abs(c2 - c1)
    slack = 1e-9 * max(r1, r2, abs(c1), abs(c2))

    if r1 == 0.0 or r2 == 0.0:
        pt, other = (c1, dp) if r1 == 0.0 else (c2, dn)
        inside = abs(pt - other.center) <= other.radius + slack
        boundary = np.array([pt], dtype=np.complex128)
        return AdmissibleLens(dn, dp, boundary, empty=not inside)

    if d <= abs(r1 - r2) + slack:
        # one disk contains the other: the lens is the smaller circle
        small = dn if r1 <= r2 else dp
        ang = np.linspace(0.0, 2.0 * np.pi, npoints + 1)
        boundary = small.center + small.radius * np.exp(1j * ang)
        return AdmissibleLens(dn, dp, boundary)

    if d >= r1 + r2:
        if d <= r1 + r2 + slack:  # touching: a single point
            pt = c1 + (c2 - c1) * (r1 / d)
            return AdmissibleLens(dn, dp, np.array([pt], dtype=np.complex128))
        return AdmissibleLens(dn, dp, np.zeros(0, dtype=np.complex128), empty=True)

    # proper lens: two crossing points, one arc from each circle
    u = (c2 - c1) / d
    axial = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h = np.sqrt(max(r1 * r1 - axial * axial, 0.0))
    p_hi = c1 + u * (axial + 1j * h)
    p_lo = c1 + u * (axial - 1j * h)
    n1 = max(npoints // 2, 2)
    n2 = max(npoints - n1, 2)
    arc1 = _arc(c1, r1, np.angle(p_lo - c1), np.angle(p_hi - c1),
                np.angle(u), n1)
    arc2 = _arc(c2, r2, np.angle(p_hi - c2), np.angle(p_lo - c2),
                np.angle(-u), n2)
    return AdmissibleLens(dn, dp, np.concatenate([arc1, arc2]))
