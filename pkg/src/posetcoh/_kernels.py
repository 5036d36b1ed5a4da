"""Numeric inner loops, each with a numba and a pure-numpy implementation.

The numba path is used when numba imports and ``POSETCOH_DISABLE_NUMBA`` is
unset (or ``0``).  Both paths return identical results up to float rounding;
``tests/test_kernels.py`` pins that, and ``benchmarks/bench_kernels.py`` times
them against each other.
"""

import os

import numpy as np

_DISABLED = os.environ.get("POSETCOH_DISABLE_NUMBA", "0").lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("disabled by POSETCOH_DISABLE_NUMBA")
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# pure numpy


def _chain_deviation_np(values, chains):
    if len(chains) == 0:
        return np.zeros(0)
    lhs = values[chains[:, 0]] @ values[chains[:, 1]]
    return np.linalg.norm(lhs - values[chains[:, 2]], ord=2, axis=(1, 2))


def _general_deviation_np(values, simplices):
    # simplices rows: (s0f0, s0f1, s2f0, s2f1, s1f0, s1f1) pair indices
    if len(simplices) == 0:
        return np.zeros(0)

    def z(i0, i1):
        return np.conj(np.swapaxes(values[i0], 1, 2)) @ values[i1]

    lhs = z(simplices[:, 0], simplices[:, 1]) @ z(simplices[:, 2], simplices[:, 3])
    rhs = z(simplices[:, 4], simplices[:, 5])
    return np.linalg.norm(lhs - rhs, ord=2, axis=(1, 2))


def _path_product_np(values, upper, lower):
    d = values.shape[1]
    out = np.eye(d, dtype=np.complex128)
    for k in range(len(upper)):
        out = values[upper[k]].conj().T @ values[lower[k]] @ out
    return out


def _transitivity_violations_np(leq):
    # float32 goes through BLAS; path counts stay exact below 2**24
    m = leq.astype(np.float32)
    return int(np.count_nonzero((m @ m > 0.5) & ~leq))


# ---------------------------------------------------------------------------
# numba

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _mul(a, b, adjoint_a):
        d = a.shape[0]
        out = np.zeros((d, d), dtype=np.complex128)
        for i in range(d):
            for k in range(d):
                x = np.conj(a[k, i]) if adjoint_a else a[i, k]
                for j in range(d):
                    out[i, j] += x * b[k, j]
        return out

    @numba.njit(cache=True)
    def _op_norm(a):
        # largest singular value via the Hermitian square; LAPACK SVD per
        # tiny matrix costs more than the whole product
        return np.sqrt(max(np.linalg.eigvalsh(_mul(a, a, True))[-1], 0.0))

    @numba.njit(cache=True)
    def _chain_deviation_nb(values, chains):
        out = np.empty(chains.shape[0])
        for k in range(chains.shape[0]):
            diff = _mul(values[chains[k, 0]], values[chains[k, 1]], False) - values[chains[k, 2]]
            out[k] = _op_norm(diff)
        return out

    @numba.njit(cache=True)
    def _general_deviation_nb(values, simplices):
        out = np.empty(simplices.shape[0])
        for k in range(simplices.shape[0]):
            r = simplices[k]
            z0 = _mul(values[r[0]], values[r[1]], True)
            z2 = _mul(values[r[2]], values[r[3]], True)
            z1 = _mul(values[r[4]], values[r[5]], True)
            out[k] = _op_norm(_mul(z0, z2, False) - z1)
        return out

    @numba.njit(cache=True)
    def _path_product_nb(values, upper, lower):
        d = values.shape[1]
        out = np.eye(d, dtype=np.complex128)
        for k in range(upper.shape[0]):
            out = values[upper[k]].conj().T @ (values[lower[k]] @ out)
        return out

    @numba.njit(cache=True)
    def _transitivity_violations_nb(leq):
        n = leq.shape[0]
        bad = 0
        reach = np.empty(n, dtype=np.bool_)
        for i in range(n):
            if not leq[i, i]:
                bad += 1
            reach[:] = False
            for j in range(n):
                if leq[i, j]:
                    for k in range(n):
                        reach[k] |= leq[j, k]
            for k in range(n):
                if reach[k] and not leq[i, k]:
                    bad += 1
        return bad


def _as_values(values):
    return np.ascontiguousarray(values, dtype=np.complex128)


def _as_index(a, ncols=None):
    a = np.ascontiguousarray(a, dtype=np.int64)
    if ncols is not None and a.size == 0:
        a = a.reshape(0, ncols)
    return a


def chain_deviation(values, chains, use_numba=None):
    """Operator-norm residual of ``U[i] @ U[j] - U[k]`` for each chain row ``(i, j, k)``."""
    values, chains = _as_values(values), _as_index(chains, 3)
    if _pick(use_numba):
        return _chain_deviation_nb(values, chains)
    return _chain_deviation_np(values, chains)


def general_deviation(values, simplices, use_numba=None):
    """Residual of the cocycle identity on 2-simplices given as six pair indices.

    Each face ``(s; f0, f1)`` is evaluated as ``U[s,f0]^* U[s,f1]``; the row
    holds the pair indices of face 0, face 2 and face 1 in that order.
    """
    values, simplices = _as_values(values), _as_index(simplices, 6)
    if _pick(use_numba):
        return _general_deviation_nb(values, simplices)
    return _general_deviation_np(values, simplices)


def path_product(values, upper, lower, use_numba=None):
    """Ordered product ``z(b_n) ... z(b_1)`` with ``z(b_k) = U[upper_k]^* U[lower_k]``.

    ``upper``/``lower`` list the steps in traversal order (first step first).
    """
    values = _as_values(values)
    upper, lower = _as_index(upper), _as_index(lower)
    if _pick(use_numba):
        return _path_product_nb(values, upper, lower)
    return _path_product_np(values, upper, lower)


def transitivity_violations(leq, use_numba=None):
    """Number of missing reflexive entries plus pairs (i, k) with i<=j<=k for some j but not i<=k."""
    leq = np.ascontiguousarray(leq, dtype=np.bool_)
    if _pick(use_numba):
        return int(_transitivity_violations_nb(leq))
    return int(np.count_nonzero(~np.diag(leq))) + _transitivity_violations_np(leq)


def _pick(use_numba):
    if use_numba is None:
        return HAVE_NUMBA
    if use_numba and not HAVE_NUMBA:
        raise RuntimeError("numba path requested but numba is unavailable or disabled")
    return bool(use_numba)
