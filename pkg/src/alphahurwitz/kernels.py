"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it is importable, unless the
environment variable ``HURWITZ_PURE_PYTHON`` is set to a non-empty value other
than ``0``.  Inputs too large for 64-bit node arithmetic always fall back to
the exact pure-Python path.
"""
from __future__ import annotations

import os

from . import _pykernels

# keeps every intermediate of the int64 node arithmetic below 2**52
INT_LIMIT = 1 << 10
BOX_LIMIT = 1 << 6

_force_pure = os.environ.get("HURWITZ_PURE_PYTHON", "") not in ("", "0")

_c = None
if not _force_pure:
    try:
        from . import _ckernels as _c
    except ImportError:  # extension not built
        _c = None

BACKEND = "cython" if _c is not None else "python"


def _small(box, *vals) -> bool:
    X0, X1, QX, Y0, Y1, QY = box
    return (
        QX < BOX_LIMIT
        and QY < BOX_LIMIT
        and all(-INT_LIMIT < v < INT_LIMIT for v in vals)
    )


def expand_node(ap, br, bi, ac, box, backend=None):
    impl = _pick(backend)
    if impl is _c and not _small(box, ap, br, bi, ac):
        impl = _pykernels
    return impl.expand_node(ap, br, bi, ac, box)


def meets_box(a, br, bi, c, box, backend=None):
    impl = _pick(backend)
    if impl is _c and not _small(box, a, br, bi, c):
        impl = _pykernels
    return impl.meets_box(a, br, bi, c, box)


def grid_hash(circles, X, Y, D, keys, backend=None):
    return _pick(backend).grid_hash(circles, X, Y, D, keys)


def float_hash_dist(circles, zr, zi, keys, backend=None):
    return _pick(backend).float_hash_dist(circles, zr, zi, keys)


def _pick(backend):
    if backend is None:
        return _c if _c is not None else _pykernels
    if backend == "python":
        return _pykernels
    if backend == "cython":
        if _c is None:
            raise RuntimeError("compiled kernels are not available")
        return _c
    raise ValueError(f"unknown backend {backend!r}")


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _c is not None else [])
