"""Backend dispatch for the search kernels.

Two interchangeable implementations exist: numba-compiled kernels (the
default when numba imports cleanly) and a pure NumPy/Python fallback.
The ``HYPERDIST_BACKEND`` environment variable ("numba" or "numpy")
picks the default at import time; ``set_backend`` switches at runtime,
which is how the benchmark and the test suite exercise both paths in
one process.  Both backends return identical values.
"""

from __future__ import annotations

import os

from . import numpy_impl

_IMPLS = {numpy_impl.NAME: numpy_impl}

try:
    from . import numba_impl

    _IMPLS[numba_impl.NAME] = numba_impl
except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
    numba_impl = None

_env = os.environ.get("HYPERDIST_BACKEND", "").strip().lower()
if _env and _env not in ("numba", "numpy"):
    raise ValueError(
        f"HYPERDIST_BACKEND must be 'numba' or 'numpy', got {_env!r}"
    )
if _env == "numba" and "numba" not in _IMPLS:
    raise ImportError("HYPERDIST_BACKEND=numba, but numba is not importable")

_active = _env or ("numba" if "numba" in _IMPLS else "numpy")


def available_backends():
    return sorted(_IMPLS)


def active_backend():
    return _active


def set_backend(name):
    """Switch the kernel implementation; returns the previous name."""
    global _active
    if name not in _IMPLS:
        raise ValueError(
            f"unknown backend {name!r}; available: {available_backends()}"
        )
    previous = _active
    _active = name
    return previous


def gap_by_order(vx, vy, px, py, kmax):
    return _IMPLS[_active].gap_by_order(vx, vy, px, py, kmax)


def fold_norm(gaps, p):
    return _IMPLS[_active].fold_norm(gaps, p)


def exhaustive_search(vx, vy, nx, ny, kmax, mode_k, p):
    return _IMPLS[_active].exhaustive_search(vx, vy, nx, ny, kmax, mode_k, p)


def bnb_search(vx, vy, nx, ny, kmax, mode_k, p, f0, g0, val0):
    return _IMPLS[_active].bnb_search(
        vx, vy, nx, ny, kmax, mode_k, p, f0, g0, val0
    )
