"""Integer-matrix kernels for monomial enumeration.

Two interchangeable backends: numba ``@njit`` loops and vectorised numpy.
``RETRACTLAB_JIT=0`` (or a missing numba) selects numpy.  Both return
identical arrays in identical order.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["BACKEND", "idempotent_matrices", "batch_idempotent", "use_backend"]


def _want_jit() -> bool:
    if njit is None:
        return False
    return os.environ.get("RETRACTLAB_JIT", "1").strip().lower() not in ("0", "false", "no", "off")


# -- numpy path ---------------------------------------------------------------

def _np_decode(codes: np.ndarray, r: int, base: int) -> np.ndarray:
    # code -> r*r digits in base `base`, row-major, most significant first
    powers = base ** np.arange(r * r - 1, -1, -1, dtype=np.int64)
    digits = (codes[:, None] // powers[None, :]) % base
    return digits.reshape(-1, r, r)


def _np_batch_idempotent(mats: np.ndarray) -> np.ndarray:
    if mats.shape[0] == 0:
        return np.zeros(0, dtype=np.bool_)
    sq = np.einsum("bij,bjk->bik", mats, mats)
    return np.all(sq == mats, axis=(1, 2))


def _np_idempotent_matrices(r: int, max_entry: int) -> np.ndarray:
    if r == 0:
        return np.zeros((1, 0, 0), dtype=np.int64)
    base = max_entry + 1
    total = base ** (r * r)
    out = []
    chunk = 1 << 18
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        mats = _np_decode(codes, r, base)
        out.append(mats[_np_batch_idempotent(mats)])
    return np.concatenate(out, axis=0)


# -- numba path ---------------------------------------------------------------

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is optional at runtime
    njit = None

if njit is not None:

    @njit(cache=True)
    def _nb_is_idem(m, r):
        for i in range(r):
            for k in range(r):
                s = 0
                for j in range(r):
                    s += m[i, j] * m[j, k]
                if s != m[i, k]:
                    return False
        return True

    @njit(cache=True)
    def _nb_enum(r, base):
        total = base ** (r * r)
        buf = np.empty((total, r, r), dtype=np.int64)
        m = np.empty((r, r), dtype=np.int64)
        count = 0
        for code in range(total):
            c = code
            for p in range(r * r - 1, -1, -1):
                m[p // r, p % r] = c % base
                c //= base
            if _nb_is_idem(m, r):
                buf[count] = m
                count += 1
        return buf[:count].copy()

    @njit(cache=True)
    def _nb_batch(mats):
        n = mats.shape[0]
        r = mats.shape[1]
        out = np.empty(n, dtype=np.bool_)
        for b in range(n):
            out[b] = _nb_is_idem(mats[b], r)
        return out


def _jit_idempotent_matrices(r: int, max_entry: int) -> np.ndarray:
    if r == 0:
        return np.zeros((1, 0, 0), dtype=np.int64)
    return _nb_enum(r, max_entry + 1)


def _jit_batch_idempotent(mats: np.ndarray) -> np.ndarray:
    if mats.shape[0] == 0:
        return np.zeros(0, dtype=np.bool_)
    if mats.shape[1] == 0:
        return np.ones(mats.shape[0], dtype=np.bool_)
    return _nb_batch(np.ascontiguousarray(mats, dtype=np.int64))


BACKEND = "numba" if _want_jit() else "numpy"


def _resolve(name: str | None) -> str:
    name = name or BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and njit is None:
        raise RuntimeError("numba is not installed")
    return name


def use_backend(name: str) -> None:
    """Switch backends at runtime ("numba" or "numpy")."""
    global BACKEND
    BACKEND = _resolve(name)


def idempotent_matrices(r: int, max_entry: int, backend: str | None = None) -> np.ndarray:
    """All r x r matrices with entries in [0, max_entry] satisfying E @ E == E.

    Ordered by their row-major digit code (base max_entry + 1).
    """
    if _resolve(backend) == "numba":
        return _jit_idempotent_matrices(r, max_entry)
    return _np_idempotent_matrices(r, max_entry)


def batch_idempotent(mats: np.ndarray, backend: str | None = None) -> np.ndarray:
    mats = np.asarray(mats, dtype=np.int64)
    if _resolve(backend) == "numba":
        return _jit_batch_idempotent(mats)
    return _np_batch_idempotent(mats)
