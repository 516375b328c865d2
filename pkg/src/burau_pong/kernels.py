"""Dense Laurent-matrix products modulo a prime, for bulk word evaluation.

A 3x3 matrix over F_q[t, t^-1] is stored as an int64 array of shape
``(3, 3, width)`` plus the t-exponent of slot 0.  Reducing integer matrices
mod q is a ring homomorphism, so a product that is not the identity mod q is
not the identity over Z either; only identity hits need exact follow-up.

The numba kernel is used when numba imports and ``BURAU_PONG_NO_NUMBA`` is
unset or "0"; otherwise an equivalent numpy path runs.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["USE_NUMBA", "LaurentMatrix", "matmul_mod", "backend_name"]

# coefficients stay below 2^20 so sums of width * 3 products fit in int64
DEFAULT_MODULUS = 1_000_003


def _numba_requested() -> bool:
    return os.environ.get("BURAU_PONG_NO_NUMBA", "0") in ("", "0")


try:
    if not _numba_requested():
        raise ImportError("numba disabled by environment")
    from numba import njit

    @njit(cache=True)
    def _matmul_numba(A, B, q):
        wa = A.shape[2]
        wb = B.shape[2]
        C = np.zeros((3, 3, wa + wb - 1), dtype=np.int64)
        for i in range(3):
            for k in range(3):
                for x in range(wa):
                    a = A[i, k, x]
                    if a == 0:
                        continue
                    for j in range(3):
                        for y in range(wb):
                            C[i, j, x + y] += a * B[k, j, y]
        for i in range(3):
            for j in range(3):
                for z in range(wa + wb - 1):
                    C[i, j, z] %= q
        return C

    USE_NUMBA = True
except ImportError:  # pragma: no cover - depends on the environment
    _matmul_numba = None
    USE_NUMBA = False


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"


def _matmul_numpy(A, B, q):
    wa, wb = A.shape[2], B.shape[2]
    C = np.zeros((3, 3, wa + wb - 1), dtype=np.int64)
    for i in range(3):
        for k in range(3):
            a = A[i, k]
            if not a.any():
                continue
            for j in range(3):
                C[i, j] += np.convolve(a, B[k, j])
    return C % q


def _trim(C, off):
    nz = np.flatnonzero(C.reshape(9, -1).any(axis=0))
    if nz.size == 0:
        return C[:, :, :1], 0
    lo, hi = nz[0], nz[-1] + 1
    return C[:, :, lo:hi], off + int(lo)


def matmul_mod(A, oa, B, ob, q, use_numba: bool | None = None):
    """Product of two dense Laurent matrices mod q; returns (array, offset)."""
    numba_path = USE_NUMBA if use_numba is None else (use_numba and USE_NUMBA)
    C = _matmul_numba(A, B, q) if numba_path else _matmul_numpy(A, B, q)
    return _trim(C, oa + ob)


class LaurentMatrix:
    """A 3x3 Laurent matrix mod q in dense form."""

    __slots__ = ("arr", "off", "q")

    def __init__(self, arr, off: int, q: int):
        self.arr = arr
        self.off = off
        self.q = q

    @classmethod
    def from_mat(cls, M, q: int) -> "LaurentMatrix":
        """Convert a Mat with Laurent entries (integer or F_q coefficients)."""
        lo, hi = None, None
        for r in M:
            for x in r:
                if not x.is_laurent():
                    raise ValueError("dense form needs Laurent polynomial entries")
                for e in x.laurent_coeffs():
                    lo = e if lo is None else min(lo, e)
                    hi = e if hi is None else max(hi, e)
        if lo is None:
            lo = hi = 0
        arr = np.zeros((3, 3, hi - lo + 1), dtype=np.int64)
        for i, r in enumerate(M):
            for j, x in enumerate(r):
                for e, c in x.laurent_coeffs().items():
                    if getattr(c, "denominator", 1) != 1:
                        raise ValueError("dense form needs integer coefficients")
                    arr[i, j, e - lo] = int(c) % q
        arr, lo = _trim(arr, lo)
        return cls(arr, lo, q)

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        C, off = matmul_mod(self.arr, self.off, other.arr, other.off, self.q)
        return LaurentMatrix(C, off, self.q)

    def matmul(self, other: "LaurentMatrix", use_numba: bool | None = None) -> "LaurentMatrix":
        C, off = matmul_mod(self.arr, self.off, other.arr, other.off, self.q, use_numba)
        return LaurentMatrix(C, off, self.q)

    def is_identity(self) -> bool:
        if self.arr.shape[2] != 1 or self.off != 0:
            return False
        return bool((self.arr[:, :, 0] == np.eye(3, dtype=np.int64)).all())

    def degree_span(self) -> tuple:
        return self.off, self.off + self.arr.shape[2] - 1
