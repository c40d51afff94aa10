"""Kernel backend selection.

Every hot kernel in :mod:`kdiophantine.kernels` exists twice: a loop-based
version compiled with numba, and a vectorised pure-numpy version. The
numba path is the default; set ``KDIO_DISABLE_NUMBA=1`` in the environment
(or call :func:`set_backend`) to force the numpy path.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

try:
    import numba
    from numba import prange

    HAVE_NUMBA = True
    # the default priority probes TBB first and warns when it is too old
    if "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ:
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
except ImportError:  # pragma: no cover - numba is a hard dependency
    numba = None
    prange = range
    HAVE_NUMBA = False

ENV_FLAG = "KDIO_DISABLE_NUMBA"
BACKENDS = ("numba", "numpy")


def _env_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


_active = "numpy" if (_env_disabled() or not HAVE_NUMBA) else "numba"


def backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; choose from {BACKENDS}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not importable")
    _active = name


@contextmanager
def use_backend(name: str):
    previous = _active
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def set_workers(n: int) -> None:
    """Cap the numba thread pool; no-op for the numpy path."""
    if n < 1:
        raise ValueError("worker count must be >= 1")
    if HAVE_NUMBA:
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def njit(*args, **kwargs):
    """``numba.njit`` when numba is present, identity otherwise."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda f: f
