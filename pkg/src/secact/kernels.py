"""Hot numerical kernels with optional numba acceleration.

Every kernel exists in two flavours built from the same source: an
``@njit``-compiled one (default when numba is importable) and a pure
numpy/Python one. Set the environment variable ``SECACT_NO_NUMBA=1``
before import to force the pure path. ``python -m secact.benchmark``
times both flavours against each other.

The kernels own the inner loop of best-response learning: local RBF
covariance assembly, clamped Cholesky factorization, Schur-complement
conditional variances, and the per-sensor repercussion-utility delta.
"""

from __future__ import annotations

import math
import os
from types import SimpleNamespace

import numpy as np

LN_2PI = math.log(2.0 * math.pi)

_flag = os.environ.get("SECACT_NO_NUMBA", "").strip().lower()
NUMBA_DISABLED = _flag not in ("", "0", "false", "no")
try:
    import numba  # noqa: F401

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised via env-flag subprocess test
    NUMBA_AVAILABLE = False

NUMBA_ENABLED = NUMBA_AVAILABLE and not NUMBA_DISABLED


def _build(use_jit: bool) -> SimpleNamespace:
    """Build the kernel set, jit-compiled when `use_jit` is true."""
    if use_jit:
        from numba import njit

        compile_ = njit(cache=False, fastmath=False)
    else:

        def compile_(f):
            return f

    @compile_
    def chol_in_place(a, n):
        # Lower-triangular factor of a[:n, :n]; False on a nonpositive pivot.
        for j in range(n):
            s = a[j, j]
            for k in range(j):
                s -= a[j, k] * a[j, k]
            if s <= 0.0:
                return False
            d = math.sqrt(s)
            a[j, j] = d
            for i in range(j + 1, n):
                t = a[i, j]
                for k in range(j):
                    t -= a[i, k] * a[j, k]
                a[i, j] = t / d
        return True

    @compile_
    def chol_clamped_in_place(a, n, floor):
        # Never fails: pivots below `floor` are raised to it.
        for j in range(n):
            s = a[j, j]
            for k in range(j):
                s -= a[j, k] * a[j, k]
            if s < floor:
                s = floor
            d = math.sqrt(s)
            a[j, j] = d
            for i in range(j + 1, n):
                t = a[i, j]
                for k in range(j):
                    t -= a[i, k] * a[j, k]
                a[i, j] = t / d

    @compile_
    def fill_local_cov(a, xs, ys, ids, n, beta, inv_two_lam_sq, jitter):
        for r in range(n):
            xr = xs[ids[r]]
            yr = ys[ids[r]]
            a[r, r] = beta + jitter
            for c in range(r):
                dx = xr - xs[ids[c]]
                dy = yr - ys[ids[c]]
                v = beta * math.exp(-(dx * dx + dy * dy) * inv_two_lam_sq)
                a[r, c] = v
                a[c, r] = v

    @compile_
    def cond_var(xs, ys, ids, n, target, beta, inv_two_lam_sq, var_floor):
        """Conditional variance of sensor `target` given sensors ids[:n].

        Schur complement of the local RBF covariance. Factorization policy:
        plain Cholesky, one diagonal jitter of `var_floor` on failure, then
        pivot clamping at `var_floor`. The result is clamped below at
        `var_floor`.
        """
        if n == 0:
            return beta
        a = np.empty((n, n))
        fill_local_cov(a, xs, ys, ids, n, beta, inv_two_lam_sq, 0.0)
        if not chol_in_place(a, n):
            fill_local_cov(a, xs, ys, ids, n, beta, inv_two_lam_sq, var_floor)
            if not chol_in_place(a, n):
                fill_local_cov(a, xs, ys, ids, n, beta, inv_two_lam_sq, var_floor)
                chol_clamped_in_place(a, n, var_floor)
        xt = xs[target]
        yt = ys[target]
        y = np.empty(n)
        acc = 0.0
        for r in range(n):
            dx = xt - xs[ids[r]]
            dy = yt - ys[ids[r]]
            t = beta * math.exp(-(dx * dx + dy * dy) * inv_two_lam_sq)
            for k in range(r):
                t -= a[r, k] * y[k]
            yr = t / a[r, r]
            y[r] = yr
            acc += yr * yr
        v = beta - acc
        if v < var_floor:
            v = var_floor
        return v

    @compile_
    def entropy_of_var(var, ent_scale):
        return ent_scale * 0.5 * (1.0 + LN_2PI + math.log(var))

    @compile_
    def gather_active(indices, indptr, actions, j, override_id, override_val, out):
        # Active neighbors of j, with sensor `override_id` forced to
        # `override_val` (pass override_id=-1 for no override).
        n = 0
        for e in range(indptr[j], indptr[j + 1]):
            k = indices[e]
            a = actions[k]
            if k == override_id:
                a = override_val
            if a == 1:
                out[n] = k
                n += 1
        return n

    @compile_
    def br_delta(
        i, actions, xs, ys, indptr, indices, exp_sec, e_eff, beta, inv_two_lam_sq, var_floor, ent_scale
    ):
        """Expected repercussion utility of transmitting minus sleeping.

        Positive means transmitting is the strict best response for sensor i
        given everyone else's current action. Independent of actions[i].
        """
        deg_i = indptr[i + 1] - indptr[i]
        own = np.empty(deg_i, np.int64)
        n_own = gather_active(indices, indptr, actions, i, -1, 0, own)
        d_i = entropy_of_var(
            cond_var(xs, ys, own, n_own, i, beta, inv_two_lam_sq, var_floor), ent_scale
        )
        delta = 2.0 * (d_i * exp_sec[i] - e_eff[i])
        for e in range(indptr[i], indptr[i + 1]):
            j = indices[e]
            deg_j = indptr[j + 1] - indptr[j]
            buf = np.empty(deg_j, np.int64)
            n_plus = gather_active(indices, indptr, actions, j, i, 1, buf)
            v_plus = cond_var(xs, ys, buf, n_plus, j, beta, inv_two_lam_sq, var_floor)
            n_minus = gather_active(indices, indptr, actions, j, i, 0, buf)
            v_minus = cond_var(xs, ys, buf, n_minus, j, beta, inv_two_lam_sq, var_floor)
            if v_plus != v_minus:
                dd = entropy_of_var(v_plus, ent_scale) - entropy_of_var(v_minus, ent_scale)
                sign = 1.0 if actions[j] == 1 else -1.0
                delta += sign * exp_sec[j] * dd
        return delta

    @compile_
    def sweep_pass(
        actions,
        xs,
        ys,
        indptr,
        indices,
        exp_sec,
        e_eff,
        beta,
        inv_two_lam_sq,
        var_floor,
        ent_scale,
        tie_tol,
        flip_gains,
    ):
        """One sequential best-response pass in sensor-id order.

        Updates `actions` in place (later sensors see earlier flips). Ties
        within `tie_tol` resolve to sleep. Writes the potential gain of each
        accepted flip into `flip_gains` and returns (flips, messages), where
        every flip costs one broadcast plus one relay per neighbor.
        """
        m = actions.shape[0]
        n_flips = 0
        messages = 0
        for i in range(m):
            delta = br_delta(
                i, actions, xs, ys, indptr, indices, exp_sec, e_eff, beta, inv_two_lam_sq, var_floor, ent_scale
            )
            new = np.int8(1) if delta > tie_tol else np.int8(0)
            if new != actions[i]:
                actions[i] = new
                gain = delta if new == 1 else -delta
                flip_gains[n_flips] = gain
                n_flips += 1
                messages += 1 + (indptr[i + 1] - indptr[i])
        return n_flips, messages

    @compile_
    def expected_utilities(
        actions, xs, ys, indptr, indices, exp_sec, e_eff, beta, inv_two_lam_sq, var_floor, ent_scale, out
    ):
        # Per-sensor expected utility at the given profile; out has length m.
        m = actions.shape[0]
        for i in range(m):
            deg = indptr[i + 1] - indptr[i]
            buf = np.empty(deg, np.int64)
            n = gather_active(indices, indptr, actions, i, -1, 0, buf)
            d = entropy_of_var(
                cond_var(xs, ys, buf, n, i, beta, inv_two_lam_sq, var_floor), ent_scale
            )
            sign = 1.0 if actions[i] == 1 else -1.0
            out[i] = sign * (d * exp_sec[i] - e_eff[i])

    return SimpleNamespace(
        jitted=use_jit,
        chol_in_place=chol_in_place,
        chol_clamped_in_place=chol_clamped_in_place,
        cond_var=cond_var,
        entropy_of_var=entropy_of_var,
        br_delta=br_delta,
        sweep_pass=sweep_pass,
        expected_utilities=expected_utilities,
    )


_cache: dict[bool, SimpleNamespace] = {}


def get_kernels(use_jit: bool | None = None) -> SimpleNamespace:
    """Kernel set for the requested mode (default: the active one)."""
    if use_jit is None:
        use_jit = NUMBA_ENABLED
    if use_jit not in _cache:
        _cache[use_jit] = _build(use_jit)
    return _cache[use_jit]


active = get_kernels()
