"""Hot numeric kernels: stencil application, face-gradient forms, power sums.

Every kernel has a pure-numpy implementation (``*_np``). When numba imports
successfully and the environment variable ``NSCORE_NUMBA`` is not set to
``0``/``false``/``off``, 2-d and 3-d calls are routed to serial ``@njit``
kernels compiled at import time; other ranks always use the numpy path.
The numba kernels are deliberately serial (no prange) so results do not
depend on thread count. ``bench/bench_kernels.py`` times the two paths
against each other.

The discrete negative Laplacian is the 2N+1-point stencil
(2N*f_i - sum of neighbors)/h^2 with value 0 assumed outside the box.
The numba stencils subtract neighbors in the same order as the numpy
slicing code, so the two backends agree bit for bit on stencil output;
reductions differ only in summation grouping (last-ulp level).
"""

import os

import numpy as np


def _numba_requested() -> bool:
    flag = os.environ.get("NSCORE_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "off", "no"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _numba_requested()


def backend() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------

def neg_laplacian_np(u: np.ndarray, inv_h2: float) -> np.ndarray:
    out = (2.0 * u.ndim) * u
    for a in range(u.ndim):
        lo = [slice(None)] * u.ndim
        hi = [slice(None)] * u.ndim
        lo[a] = slice(None, -1)
        hi[a] = slice(1, None)
        out[tuple(lo)] -= u[tuple(hi)]
        out[tuple(hi)] -= u[tuple(lo)]
    out *= inv_h2
    return out


def helmholtz_apply_np(u: np.ndarray, inv_h2: float, mass: float) -> np.ndarray:
    out = neg_laplacian_np(u, inv_h2)
    out += mass * u
    return out


def face_grad_sum_np(f: np.ndarray, g: np.ndarray) -> float:
    total = 0.0
    for a in range(f.ndim):
        df = np.diff(f, axis=a)
        dg = np.diff(g, axis=a)
        total += float(np.sum(df * dg))
    return total


def dot_sum_np(f: np.ndarray, g: np.ndarray) -> float:
    return float(np.sum(f * g))


def sq_sum_np(f: np.ndarray) -> float:
    return float(np.sum(f * f))


def abs_power_sum_np(f: np.ndarray, p: float) -> float:
    if p == 4.0:
        f2 = f * f
        return float(np.sum(f2 * f2))
    return float(np.sum(np.abs(f) ** p))


def weighted_power_sum_np(f: np.ndarray, q: np.ndarray, p: float) -> float:
    if p == 4.0:
        f2 = f * f
        return float(np.sum(q * (f2 * f2)))
    return float(np.sum(q * np.abs(f) ** p))


def nonlinear_term_np(u: np.ndarray, q: np.ndarray, p: float) -> np.ndarray:
    if p == 4.0:
        return q * (u * u) * u
    return q * np.abs(u) ** (p - 2.0) * u


def exp_decay_max_rel_err_np(psi: np.ndarray, axes, inv_h2: float,
                             r_lo: float, r_hi: float, dim_minus_1: float) -> float:
    r2 = np.zeros(psi.shape)
    for a, x in enumerate(axes):
        sh = [1] * psi.ndim
        sh[a] = x.size
        r2 += (x * x).reshape(sh)
    r = np.sqrt(r2)
    lap = neg_laplacian_np(psi, inv_h2)
    target = dim_minus_1 / r * psi
    rel = np.abs(lap + psi - target) / target
    mask = (r >= r_lo) & (r <= r_hi)
    if not mask.any():
        return -1.0
    return float(rel[mask].max())


# ---------------------------------------------------------------------------
# numba kernels (2-d / 3-d specializations)
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:
    from numba import njit

    @njit(cache=True, nogil=True)
    def _lap2(u, inv_h2, mass, out):
        n0, n1 = u.shape
        for i in range(n0):
            for j in range(n1):
                acc = 4.0 * u[i, j]
                if i < n0 - 1:
                    acc -= u[i + 1, j]
                if i > 0:
                    acc -= u[i - 1, j]
                if j < n1 - 1:
                    acc -= u[i, j + 1]
                if j > 0:
                    acc -= u[i, j - 1]
                out[i, j] = acc * inv_h2 + mass * u[i, j]

    @njit(cache=True, nogil=True)
    def _lap3(u, inv_h2, mass, out):
        n0, n1, n2 = u.shape
        for i in range(n0):
            for j in range(n1):
                for k in range(n2):
                    acc = 6.0 * u[i, j, k]
                    if i < n0 - 1:
                        acc -= u[i + 1, j, k]
                    if i > 0:
                        acc -= u[i - 1, j, k]
                    if j < n1 - 1:
                        acc -= u[i, j + 1, k]
                    if j > 0:
                        acc -= u[i, j - 1, k]
                    if k < n2 - 1:
                        acc -= u[i, j, k + 1]
                    if k > 0:
                        acc -= u[i, j, k - 1]
                    out[i, j, k] = acc * inv_h2 + mass * u[i, j, k]

    @njit(cache=True, nogil=True)
    def _face_grad2(f, g):
        n0, n1 = f.shape
        total = 0.0
        for i in range(n0 - 1):
            for j in range(n1):
                total += (f[i + 1, j] - f[i, j]) * (g[i + 1, j] - g[i, j])
        for i in range(n0):
            for j in range(n1 - 1):
                total += (f[i, j + 1] - f[i, j]) * (g[i, j + 1] - g[i, j])
        return total

    @njit(cache=True, nogil=True)
    def _face_grad3(f, g):
        n0, n1, n2 = f.shape
        total = 0.0
        for i in range(n0 - 1):
            for j in range(n1):
                for k in range(n2):
                    total += (f[i + 1, j, k] - f[i, j, k]) * (g[i + 1, j, k] - g[i, j, k])
        for i in range(n0):
            for j in range(n1 - 1):
                for k in range(n2):
                    total += (f[i, j + 1, k] - f[i, j, k]) * (g[i, j + 1, k] - g[i, j, k])
        for i in range(n0):
            for j in range(n1):
                for k in range(n2 - 1):
                    total += (f[i, j, k + 1] - f[i, j, k]) * (g[i, j, k + 1] - g[i, j, k])
        return total

    @njit(cache=True, nogil=True)
    def _dot_flat(f, g):
        total = 0.0
        for i in range(f.size):
            total += f[i] * g[i]
        return total

    @njit(cache=True, nogil=True)
    def _sq_flat(f):
        total = 0.0
        for i in range(f.size):
            total += f[i] * f[i]
        return total

    @njit(cache=True, nogil=True)
    def _abs_pow_flat(f, p):
        total = 0.0
        if p == 4.0:
            for i in range(f.size):
                v = f[i] * f[i]
                total += v * v
        else:
            for i in range(f.size):
                total += abs(f[i]) ** p
        return total

    @njit(cache=True, nogil=True)
    def _weighted_pow_flat(f, q, p):
        total = 0.0
        if p == 4.0:
            for i in range(f.size):
                v = f[i] * f[i]
                total += q[i] * (v * v)
        else:
            for i in range(f.size):
                total += q[i] * abs(f[i]) ** p
        return total

    @njit(cache=True, nogil=True)
    def _nonlinear_flat(u, q, p, out):
        if p == 4.0:
            for i in range(u.size):
                out[i] = q[i] * (u[i] * u[i]) * u[i]
        else:
            pm2 = p - 2.0
            for i in range(u.size):
                out[i] = q[i] * abs(u[i]) ** pm2 * u[i]

    @njit(cache=True, nogil=True)
    def _exp_err2(psi, x0, x1, inv_h2, r_lo, r_hi):
        n0, n1 = psi.shape
        worst = -1.0
        for i in range(n0):
            xi2 = x0[i] * x0[i]
            for j in range(n1):
                r = np.sqrt(xi2 + x1[j] * x1[j])
                if r < r_lo or r > r_hi:
                    continue
                acc = 4.0 * psi[i, j]
                if i < n0 - 1:
                    acc -= psi[i + 1, j]
                if i > 0:
                    acc -= psi[i - 1, j]
                if j < n1 - 1:
                    acc -= psi[i, j + 1]
                if j > 0:
                    acc -= psi[i, j - 1]
                target = psi[i, j] / r
                err = abs(acc * inv_h2 + psi[i, j] - target) / target
                if err > worst:
                    worst = err
        return worst

    @njit(cache=True, nogil=True)
    def _exp_err3(psi, x0, x1, x2, inv_h2, r_lo, r_hi):
        n0, n1, n2 = psi.shape
        worst = -1.0
        for i in range(n0):
            xi2 = x0[i] * x0[i]
            for j in range(n1):
                xj2 = xi2 + x1[j] * x1[j]
                for k in range(n2):
                    r = np.sqrt(xj2 + x2[k] * x2[k])
                    if r < r_lo or r > r_hi:
                        continue
                    acc = 6.0 * psi[i, j, k]
                    if i < n0 - 1:
                        acc -= psi[i + 1, j, k]
                    if i > 0:
                        acc -= psi[i - 1, j, k]
                    if j < n1 - 1:
                        acc -= psi[i, j + 1, k]
                    if j > 0:
                        acc -= psi[i, j - 1, k]
                    if k < n2 - 1:
                        acc -= psi[i, j, k + 1]
                    if k > 0:
                        acc -= psi[i, j, k - 1]
                    target = 2.0 * psi[i, j, k] / r
                    err = abs(acc * inv_h2 + psi[i, j, k] - target) / target
                    if err > worst:
                        worst = err
        return worst


# ---------------------------------------------------------------------------
# dispatchers
# ---------------------------------------------------------------------------

def _flat(a: np.ndarray) -> np.ndarray:
    return a.reshape(-1)


def neg_laplacian(u: np.ndarray, inv_h2: float) -> np.ndarray:
    return helmholtz_apply(u, inv_h2, 0.0)


def helmholtz_apply(u: np.ndarray, inv_h2: float, mass: float) -> np.ndarray:
    """(-Laplacian + mass) applied with zero values assumed outside the box."""
    if NUMBA_ENABLED and u.ndim == 2:
        out = np.empty_like(u)
        _lap2(u, inv_h2, mass, out)
        return out
    if NUMBA_ENABLED and u.ndim == 3:
        out = np.empty_like(u)
        _lap3(u, inv_h2, mass, out)
        return out
    return helmholtz_apply_np(u, inv_h2, mass)


def face_grad_sum(f: np.ndarray, g: np.ndarray) -> float:
    """Sum over interior faces of the forward differences of f and g.

    Faces between a boundary cell and the outside are excluded, so for g
    vanishing on the outermost cell layer this is the exact quadratic form
    of the stencil."""
    if NUMBA_ENABLED and f.ndim == 2:
        return float(_face_grad2(f, g))
    if NUMBA_ENABLED and f.ndim == 3:
        return float(_face_grad3(f, g))
    return face_grad_sum_np(f, g)


def dot_sum(f: np.ndarray, g: np.ndarray) -> float:
    if NUMBA_ENABLED and f.ndim in (2, 3):
        return float(_dot_flat(_flat(f), _flat(g)))
    return dot_sum_np(f, g)


def sq_sum(f: np.ndarray) -> float:
    if NUMBA_ENABLED and f.ndim in (2, 3):
        return float(_sq_flat(_flat(f)))
    return sq_sum_np(f)


def abs_power_sum(f: np.ndarray, p: float) -> float:
    if NUMBA_ENABLED and f.ndim in (2, 3):
        return float(_abs_pow_flat(_flat(f), p))
    return abs_power_sum_np(f, p)


def weighted_power_sum(f: np.ndarray, q: np.ndarray, p: float) -> float:
    if NUMBA_ENABLED and f.ndim in (2, 3):
        return float(_weighted_pow_flat(_flat(f), _flat(q), p))
    return weighted_power_sum_np(f, q, p)


def nonlinear_term(u: np.ndarray, q: np.ndarray, p: float) -> np.ndarray:
    if NUMBA_ENABLED and u.ndim in (2, 3):
        out = np.empty_like(u)
        _nonlinear_flat(_flat(u), _flat(q), p, _flat(out))
        return out
    return nonlinear_term_np(u, q, p)


def exp_decay_max_rel_err(psi: np.ndarray, axes, inv_h2: float,
                          r_lo: float, r_hi: float) -> float:
    """Worst relative error of (-lap + 1) applied to samples of exp(-|x|)
    against (N-1)/|x| * exp(-|x|), over cells with r_lo <= |x| <= r_hi."""
    if NUMBA_ENABLED and psi.ndim == 2:
        return float(_exp_err2(psi, axes[0], axes[1], inv_h2, r_lo, r_hi))
    if NUMBA_ENABLED and psi.ndim == 3:
        return float(_exp_err3(psi, axes[0], axes[1], axes[2], inv_h2, r_lo, r_hi))
    return exp_decay_max_rel_err_np(psi, axes, inv_h2, r_lo, r_hi,
                                    float(psi.ndim - 1))


def warmup() -> None:
    """Trigger JIT compilation of all kernels on tiny arrays."""
    if not NUMBA_ENABLED:
        return
    for nd in (2, 3):
        a = np.linspace(0.5, 1.5, 6 ** nd).reshape((6,) * nd)
        q = np.ones_like(a)
        helmholtz_apply(a, 1.0, 1.0)
        face_grad_sum(a, a)
        dot_sum(a, a)
        sq_sum(a)
        abs_power_sum(a, 4.0)
        abs_power_sum(a, 3.5)
        weighted_power_sum(a, q, 4.0)
        weighted_power_sum(a, q, 3.5)
        nonlinear_term(a, q, 4.0)
        nonlinear_term(a, q, 3.5)
        ax = tuple(np.linspace(-1.0, 1.0, 6) for _ in range(nd))
        exp_decay_max_rel_err(a, ax, 1.0, 0.1, 0.9)
