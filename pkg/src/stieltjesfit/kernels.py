"""Hot numeric kernels.

Every function here is written in njit-compatible numpy and compiled with
numba when available.  Setting the environment variable
``STIELTJESFIT_NO_NUMBA=1`` (or running without numba installed) selects the
interpreted pure-numpy path instead; results agree to rounding either way.
``benchmarks/bench_kernels.py`` compares the two paths.
"""

import os

import numpy as np

_EPS = np.finfo(np.float64).eps

if os.environ.get("STIELTJESFIT_NO_NUMBA", "0") == "1":
    HAVE_NUMBA = False
else:
    try:
        from numba import njit as _numba_njit

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - exercised via env flag instead
        HAVE_NUMBA = False

MODE = "numba" if HAVE_NUMBA else "numpy"

if HAVE_NUMBA:
    def njit(func):
        return _numba_njit(cache=True)(func)
else:
    def njit(func):
        return func


@njit
def eval_rational_grid(gamma, sigma0, pole_t, pole_s, z):
    """Evaluate gamma - sigma0/z + sum_j s_j/(t_j - z) at each point of ``z``."""
    out = np.empty(z.shape[0], dtype=np.complex128)
    for i in range(z.shape[0]):
        acc = gamma + 0.0j
        if sigma0 != 0.0:
            acc -= sigma0 / z[i]
        for j in range(pole_t.shape[0]):
            acc += pole_s[j] / (pole_t[j] - z[i])
        out[i] = acc
    return out


@njit
def eval_chain_grid(steps, term_gamma, term_sigma0, z):
    """Fold the terminal through the Moebius steps, innermost step last.

    ``steps`` is (m, 4): rows hold (t_mass, s_mass, gamma_inf, s_decay).
    """
    out = np.empty(z.shape[0], dtype=np.complex128)
    for i in range(z.shape[0]):
        zz = z[i]
        g = term_gamma + 0.0j
        if term_sigma0 != 0.0:
            g -= term_sigma0 / zz
        for k in range(steps.shape[0] - 1, -1, -1):
            t_mass = steps[k, 0]
            s_mass = steps[k, 1]
            gamma_inf = steps[k, 2]
            s_decay = steps[k, 3]
            g = (g * (gamma_inf * zz - s_decay) - s_mass) / (zz * g + zz - t_mass)
        out[i] = g
    return out


@njit
def caprini_values(delta, zbar, ts):
    """C(t) = Re sum_j delta_j / (t - zbar_j) on the grid ``ts``."""
    out = np.empty(ts.shape[0], dtype=np.float64)
    for i in range(ts.shape[0]):
        acc = 0.0
        for j in range(delta.shape[0]):
            acc += (delta[j] / (ts[i] - zbar[j])).real
        out[i] = acc
    return out


@njit
def caprini_golden(delta, zbar, lo, hi, rel_tol):
    """Golden-section minimum of C(t) inside the bracket [lo, hi]."""
    invphi = 0.6180339887498949
    a = lo
    b = hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = 0.0
    fd = 0.0
    for j in range(delta.shape[0]):
        fc += (delta[j] / (c - zbar[j])).real
        fd += (delta[j] / (d - zbar[j])).real
    while (b - a) > rel_tol * (abs(a) + abs(b) + 1e-300):
        if fc < fd:
            b = d
            d = c
            fd = fc
            c = b - invphi * (b - a)
            fc = 0.0
            for j in range(delta.shape[0]):
                fc += (delta[j] / (c - zbar[j])).real
        else:
            a = c
            c = d
            fc = fd
            d = a + invphi * (b - a)
            fd = 0.0
            for j in range(delta.shape[0]):
                fd += (delta[j] / (d - zbar[j])).real
    t = 0.5 * (a + b)
    v = 0.0
    for j in range(delta.shape[0]):
        v += (delta[j] / (t - zbar[j])).real
    return t, v


@njit
def _phi_and_slope(x, gamma_g, sigma0_g, t, s, t_mass):
    # phi(x) = x*g(x) + x - t_mass written so that x = 0 is regular.
    val = (gamma_g + 1.0) * x - sigma0_g - t_mass
    slope = gamma_g + 1.0
    for j in range(t.shape[0]):
        d = t[j] - x
        val += x * s[j] / d
        slope += s[j] * t[j] / (d * d)
    return val, slope


@njit
def _phi_root(lo, hi, flo, fhi, gamma_g, sigma0_g, t, s, t_mass):
    # Safeguarded Newton: phi is strictly increasing on (lo, hi).
    a = lo
    b = hi
    fa = flo
    x = 0.5 * (a + b)
    for _ in range(200):
        val, slope = _phi_and_slope(x, gamma_g, sigma0_g, t, s, t_mass)
        if val == 0.0:
            return x
        if val < 0.0:
            a = x
            fa = val
        else:
            b = x
        step = val / slope
        xn = x - step
        if xn <= a or xn >= b:
            xn = 0.5 * (a + b)
        if abs(b - a) <= 4.0 * _EPS * (abs(a) + abs(b)):
            return 0.5 * (a + b)
        x = xn
    return 0.5 * (a + b)


@njit
def lift_rational(gamma_g, sigma0_g, t, s, t_mass, s_mass, gamma_inf, s_decay):
    """Push a rational Stieltjes function through one Moebius step.

    Returns (gamma_f, nu0, tau, nu, ok).  ``ok`` is False when a bracket
    failed to straddle a sign change, which signals numerical degeneracy.
    """
    n = t.shape[0]
    gamma_f = gamma_inf * gamma_g / (gamma_g + 1.0)
    nu0 = sigma0_g * s_decay / (sigma0_g + t_mass)
    tau = np.empty(n + 1, dtype=np.float64)
    nu = np.empty(n + 1, dtype=np.float64)
    ok = True

    # Upper end of the last bracket: phi > 0 beyond this point.
    ssum = sigma0_g
    for j in range(n):
        ssum += s[j]
    t_hi = (t_mass + 2.0 * ssum) / (gamma_g + 1.0)
    if n > 0 and 2.0 * t[n - 1] > t_hi:
        t_hi = 2.0 * t[n - 1]

    for k in range(n + 1):
        if k == 0:
            lo = 0.0
            flo = -sigma0_g - t_mass
        else:
            gap = (t[k] if k < n else t_hi) - t[k - 1]
            floor = 4.0 * _EPS * t[k - 1]
            shrink = max(1e-12 * gap, floor)
            lo = t[k - 1] + shrink
            flo, _ = _phi_and_slope(lo, gamma_g, sigma0_g, t, s, t_mass)
            while flo > 0.0 and shrink > floor:
                shrink = max(0.01 * shrink, floor)
                lo = t[k - 1] + shrink
                flo, _ = _phi_and_slope(lo, gamma_g, sigma0_g, t, s, t_mass)
        if k < n:
            gap = t[k] - lo
            floor = 4.0 * _EPS * t[k]
            shrink = max(1e-12 * gap, floor)
            hi = t[k] - shrink
            fhi, _ = _phi_and_slope(hi, gamma_g, sigma0_g, t, s, t_mass)
            while fhi < 0.0 and shrink > floor:
                shrink = max(0.01 * shrink, floor)
                hi = t[k] - shrink
                fhi, _ = _phi_and_slope(hi, gamma_g, sigma0_g, t, s, t_mass)
        else:
            hi = t_hi
            fhi, _ = _phi_and_slope(hi, gamma_g, sigma0_g, t, s, t_mass)
            while fhi < 0.0:
                hi *= 2.0
                fhi, _ = _phi_and_slope(hi, gamma_g, sigma0_g, t, s, t_mass)
        if flo == 0.0 or fhi == 0.0:
            root = lo if flo == 0.0 else hi
        elif flo > 0.0 or fhi < 0.0:
            ok = False
            tau[k] = 0.5 * (lo + hi)
            nu[k] = 0.0
            continue
        else:
            root = _phi_root(lo, hi, flo, fhi, gamma_g, sigma0_g, t, s, t_mass)
        _, slope = _phi_and_slope(root, gamma_g, sigma0_g, t, s, t_mass)
        # numerator of f at the new pole: g(x)*(gamma_inf*x - s_decay) - s_mass
        gval = gamma_g - sigma0_g / root
        for j in range(n):
            gval += s[j] / (t[j] - root)
        num = gval * (gamma_inf * root - s_decay) - s_mass
        tau[k] = root
        nu[k] = -num / slope
    return gamma_f, nu0, tau, nu, ok


@njit
def lawson_hanson(a, b, max_iter, dual_tol):
    """Active-set nonnegative least squares.

    Returns (x, kkt, n_iter, converged) where ``kkt`` is the largest dual
    violation max(0, max_{x_i = 0} w_i, max_{x_i > 0} |w_i|) at exit.
    """
    m, k = a.shape
    x = np.zeros(k, dtype=np.float64)
    passive = np.zeros(k, dtype=np.bool_)
    banned = np.zeros(k, dtype=np.bool_)
    resid = b.copy()
    w = np.dot(a.T, resid)
    n_iter = 0
    converged = False

    while n_iter < max_iter:
        # Pick the most positive dual among the zero-clamped columns.
        jbest = -1
        wbest = dual_tol
        for j in range(k):
            if not passive[j] and not banned[j] and w[j] > wbest:
                wbest = w[j]
                jbest = j
        if jbest < 0:
            converged = True
            break
        passive[jbest] = True
        n_iter += 1

        while True:
            p = 0
            for j in range(k):
                if passive[j]:
                    p += 1
            sub = np.empty((m, p), dtype=np.float64)
            cols = np.empty(p, dtype=np.int64)
            c = 0
            for j in range(k):
                if passive[j]:
                    for i in range(m):
                        sub[i, c] = a[i, j]
                    cols[c] = j
                    c += 1
            zsol = np.linalg.lstsq(sub, b)[0]
            if np.min(zsol) > 0.0:
                for j in range(k):
                    x[j] = 0.0
                for c in range(p):
                    x[cols[c]] = zsol[c]
                break
            # Step toward zsol until the first passive component hits zero.
            alpha = 1.0
            jdrop = -1
            for c in range(p):
                if zsol[c] <= 0.0:
                    j = cols[c]
                    d = x[j] - zsol[c]
                    if d > 0.0:
                        r = x[j] / d
                        if r < alpha:
                            alpha = r
                            jdrop = j
            for c in range(p):
                j = cols[c]
                x[j] = x[j] + alpha * (zsol[c] - x[j])
                if x[j] < 0.0:
                    x[j] = 0.0
            if jdrop < 0:
                # No blocking component found (degenerate solve); accept the
                # clamped step and leave the inner loop.
                break
            x[jdrop] = 0.0
            passive[jdrop] = False
            if alpha == 0.0 and jdrop == jbest:
                # The fresh column was rejected straight away: near-collinear
                # with the current passive set.  Ban it to avoid cycling.
                banned[jbest] = True
                break
            for c in range(p):
                j = cols[c]
                if passive[j] and x[j] <= 0.0:
                    x[j] = 0.0
                    passive[j] = False
        resid = b - np.dot(a, x)
        w = np.dot(a.T, resid)

    # Largest KKT violation at exit.
    kkt = 0.0
    for j in range(k):
        if x[j] > 0.0:
            if abs(w[j]) > kkt:
                kkt = abs(w[j])
        else:
            if w[j] > kkt:
                kkt = w[j]
    return x, kkt, n_iter, converged


def warmup():
    """Trigger compilation of every kernel on tiny inputs."""
    z = np.array([0.5 + 1.0j])
    eval_rational_grid(1.0, 0.5, np.array([1.0]), np.array([1.0]), z)
    eval_chain_grid(np.array([[1.0, 2.0, 1.0, 1.0]]), 0.0, 0.0, z)
    d = np.array([0.1 + 0.2j])
    zb = np.array([0.5 - 1.0j])
    caprini_values(d, zb, np.array([0.0, 1.0]))
    caprini_golden(d, zb, 0.1, 1.0, 1e-12)
    lift_rational(0.0, 1.0, np.array([1.0]), np.array([1.0]), 1.0, 2.0, 1.0, 1.0)
    lawson_hanson(np.eye(2), np.array([1.0, -1.0]), 6, 1e-12)
