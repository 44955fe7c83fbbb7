"""Hot numeric kernels with an optional numba JIT path.

Every kernel exists twice: a pure-numpy reference implementation
(`*_numpy`) and, when numba is importable and not disabled, a compiled
loop version. The public names (``pyramid_step``, ``inverse_pyramid_step``,
``dvar_naive``, ``dvar_fast``) are bound to whichever path is active.

Set ``SPECSLOPE_NO_NUMBA=1`` in the environment to force the numpy path;
``benchmarks/bench_kernels.py`` compares the two.

Numerical note: the JIT loops and the vectorized numpy code may differ in
summation order, so results can differ in the last ulp or two between
backends. Within one backend everything is deterministic.
"""

import os

import numpy as np


def numba_disabled_by_env() -> bool:
    flag = os.environ.get("SPECSLOPE_NO_NUMBA", "").strip().lower()
    return flag in ("1", "true", "yes", "on")


# ---------------------------------------------------------------------------
# pure numpy reference implementations


def pyramid_step_numpy(x, h, g):
    """One analysis step of the filter-and-decimate pyramid.

    Periodic (circular) indexing keeps the step exactly orthogonal for any
    even input length, including lengths shorter than the filter.
    """
    n = x.size
    idx = (2 * np.arange(n // 2)[:, None] + np.arange(h.size)[None, :]) % n
    window = x[idx]
    return window @ h, window @ g


def inverse_pyramid_step_numpy(approx, detail, h, g):
    """Adjoint of :func:`pyramid_step_numpy`; exact inverse by orthogonality."""
    half = approx.size
    n = 2 * half
    idx = (2 * np.arange(half)[:, None] + np.arange(h.size)[None, :]) % n
    out = np.zeros(n)
    np.add.at(out, idx, approx[:, None] * h[None, :] + detail[:, None] * g[None, :])
    return out


def dvar_naive_numpy(x):
    """Distance variance by explicit double centering; O(n^2) time and memory."""
    a = np.abs(x[:, None] - x[None, :])
    row_means = a.mean(axis=1)  # symmetric, so row means equal column means
    centered = a - row_means[:, None] - row_means[None, :] + row_means.mean()
    return max(float(np.mean(centered * centered)), 0.0)


def dvar_fast_numpy(x):
    """Distance variance in O(n log n) via sorting and prefix sums.

    After centering (the statistic is translation invariant, centering only
    improves conditioning) and sorting, all three terms of the expansion

        V^2 = S_aa/n^2 - 2 S_ab/n^3 + S_a^2/n^4

    reduce to prefix-sum accumulations over the order statistics, where
    S_aa = sum |x_i - x_j|^2, S_ab = sum_i (row sum)_i^2 and S_a is the
    grand sum of pairwise absolute differences.
    """
    n = x.size
    xs = np.sort(x - x.mean(), kind="mergesort")
    s1 = float(xs.sum())
    saa = 2.0 * n * float(xs @ xs) - 2.0 * s1 * s1
    prefix = np.cumsum(xs)
    k = np.arange(n, dtype=np.float64)
    rows = (2.0 * k + 2.0 - n) * xs + (s1 - 2.0 * prefix)
    sab = float(rows @ rows)
    grand = float(rows.sum())
    nn = float(n)
    return max(saa / nn**2 - 2.0 * sab / nn**3 + grand * grand / nn**4, 0.0)


# ---------------------------------------------------------------------------
# numba JIT path

USING_NUMBA = False

if not numba_disabled_by_env():
    try:
        from numba import njit

        USING_NUMBA = True
    except ImportError:
        USING_NUMBA = False

if USING_NUMBA:

    @njit(cache=True)
    def _pyramid_step_jit(x, h, g):
        n = x.size
        half = n // 2
        taps = h.size
        approx = np.empty(half)
        detail = np.empty(half)
        for k in range(half):
            sa = 0.0
            sd = 0.0
            base = 2 * k
            for m in range(taps):
                xv = x[(base + m) % n]
                sa += h[m] * xv
                sd += g[m] * xv
            approx[k] = sa
            detail[k] = sd
        return approx, detail

    @njit(cache=True)
    def _inverse_pyramid_step_jit(approx, detail, h, g):
        half = approx.size
        n = 2 * half
        taps = h.size
        out = np.zeros(n)
        for k in range(half):
            base = 2 * k
            av = approx[k]
            dv = detail[k]
            for m in range(taps):
                out[(base + m) % n] += av * h[m] + dv * g[m]
        return out

    @njit(cache=True)
    def _dvar_naive_jit(x):
        n = x.size
        rows = np.empty(n)
        for i in range(n):
            s = 0.0
            xi = x[i]
            for j in range(n):
                s += abs(xi - x[j])
            rows[i] = s
        grand = 0.0
        for i in range(n):
            grand += rows[i]
        grand_mean = grand / (n * n)
        total = 0.0
        for i in range(n):
            ri = rows[i] / n
            xi = x[i]
            for j in range(n):
                centered = abs(xi - x[j]) - ri - rows[j] / n + grand_mean
                total += centered * centered
        value = total / (n * n)
        return value if value > 0.0 else 0.0

    @njit(cache=True)
    def _dvar_fast_jit(x):
        n = x.size
        mu = 0.0
        for i in range(n):
            mu += x[i]
        mu /= n
        xs = np.sort(x - mu)
        s1 = 0.0
        s2 = 0.0
        for i in range(n):
            s1 += xs[i]
            s2 += xs[i] * xs[i]
        saa = 2.0 * n * s2 - 2.0 * s1 * s1
        prefix = 0.0
        sab = 0.0
        grand = 0.0
        for k in range(n):
            prefix += xs[k]
            row = (2.0 * k + 2.0 - n) * xs[k] + s1 - 2.0 * prefix
            sab += row * row
            grand += row
        nn = float(n)
        value = saa / nn**2 - 2.0 * sab / nn**3 + grand * grand / nn**4
        return value if value > 0.0 else 0.0

    pyramid_step = _pyramid_step_jit
    inverse_pyramid_step = _inverse_pyramid_step_jit
    dvar_naive = _dvar_naive_jit
    dvar_fast = _dvar_fast_jit
else:
    pyramid_step = pyramid_step_numpy
    inverse_pyramid_step = inverse_pyramid_step_numpy
    dvar_naive = dvar_naive_numpy
    dvar_fast = dvar_fast_numpy


def set_num_threads(n):
    """Best-effort thread-count control for the JIT layer.

    Current kernels are single-threaded, so this is a forward-compatibility
    knob; 0 leaves the default in place.
    """
    if USING_NUMBA and n > 0:
        import numba

        try:
            numba.set_num_threads(n)
        except ValueError:
            pass
