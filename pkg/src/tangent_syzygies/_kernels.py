"""Dense elimination kernels over a prime field.

Two interchangeable backends compute the reduced row-echelon form of an
``int64`` matrix modulo a prime ``p < 2**31``: a numba ``@njit`` loop and a
vectorised numpy fallback.  The numba path is used when numba imports and the
environment variable ``TANSYZ_DISABLE_NUMBA`` is unset (or ``"0"``).
"""

from __future__ import annotations

import os

import numpy as np

MAX_PRIME = 2**31

_disabled = os.environ.get("TANSYZ_DISABLE_NUMBA", "0") not in ("", "0")

try:  # pragma: no cover - import guard
    if _disabled:
        raise ImportError("numba disabled by TANSYZ_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False


def echelon_modp_numpy(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row-echelon form of ``a`` mod ``p`` using numpy row operations."""
    a = np.array(a, dtype=np.int64) % p
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows] = (a[rows] - (np.outer(col[rows], a[r]) % p)) % p
        pivots.append(c)
        r += 1
    return a, np.array(pivots, dtype=np.int64)


if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _powmod(b, e, p):  # pragma: no cover - compiled
        result = 1
        b = b % p
        while e > 0:
            if e & 1:
                result = result * b % p
            b = b * b % p
            e >>= 1
        return result

    @njit(cache=True, nogil=True)
    def _echelon_modp_jit(a, p):  # pragma: no cover - compiled
        m, n = a.shape
        pivots = np.empty(min(m, n), dtype=np.int64)
        r = 0
        for c in range(n):
            if r == m:
                break
            piv = -1
            for i in range(r, m):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(n):
                    t = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = t
            inv = _powmod(a[r, c], p - 2, p)
            for j in range(c, n):
                a[r, j] = a[r, j] * inv % p
            for i in range(m):
                if i != r and a[i, c] != 0:
                    f = a[i, c]
                    for j in range(c, n):
                        if a[r, j] != 0:
                            a[i, j] = (a[i, j] - f * a[r, j] % p + p) % p
            pivots[r] = c
            r += 1
        return pivots[:r]

    def echelon_modp_numba(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
        """Reduced row-echelon form of ``a`` mod ``p`` using the jitted loop."""
        a = np.array(a, dtype=np.int64) % p
        pivots = _echelon_modp_jit(a, np.int64(p))
        return a, pivots

    echelon_modp = echelon_modp_numba
    BACKEND = "numba"
else:
    echelon_modp_numba = None
    echelon_modp = echelon_modp_numpy
    BACKEND = "numpy"


def rank_modp_dense(a: np.ndarray, p: int) -> int:
    if p >= MAX_PRIME:
        raise ValueError(f"prime {p} too large for int64 kernels")
    _, pivots = echelon_modp(a, p)
    return int(len(pivots))
