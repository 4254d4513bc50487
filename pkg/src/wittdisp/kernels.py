"""Kernel backend selection.

The orbit-enumeration inner loop is served either by the compiled extension
``_core_cy`` (built at install time when Cython and a C compiler are
available) or by the pure-Python twin ``_core_py``.  Selection happens once
at import:

* ``WITTDISP_BACKEND=py``   force the pure-Python kernels,
* ``WITTDISP_BACKEND=cy``   require the compiled kernels (ImportError if
  missing),
* unset / ``auto``          compiled if available, else pure Python.

The compiled path packs matrix keys into 64-bit integers, so instances whose
key space overflows that are routed to the pure-Python kernels regardless.
"""

from __future__ import annotations

import os

from . import _core_py

_requested = os.environ.get("WITTDISP_BACKEND", "auto").lower()

if _requested == "py":
    _impl = _core_py
elif _requested == "cy":
    from . import _core_cy as _impl  # type: ignore[no-redef]
else:
    try:
        from . import _core_cy as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _core_py


_KEY_LIMIT = 1 << 62


def backend_name() -> str:
    return "compiled" if _impl.__name__.endswith("_core_cy") else "python"


def _fits_compiled(N: int, h: int) -> bool:
    return N ** (h * h) < _KEY_LIMIT and h * h <= 64


def get_impl(N: int, h: int):
    """The kernel module to use for an instance of the given shape."""
    if _impl is not _core_py and not _fits_compiled(N, h):
        return _core_py
    return _impl


def pack_key(m, N):
    return _core_py.pack_key(m, N)


def unpack_key(key, N, size):
    return _core_py.unpack_key(key, N, size)


def orbit_scan(seed_key, h, N, n_g, us_flat, vinvs_flat, mul, add):
    impl = get_impl(N, h)
    return impl.orbit_scan(seed_key, h, N, n_g, us_flat, vinvs_flat, mul, add)


def mat_mul_packed(a, b, h, N, mul, add):
    impl = get_impl(N, h)
    return impl.mat_mul_packed(a, b, h, N, mul, add)
