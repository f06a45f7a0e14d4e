"""Integer kernels with two interchangeable backends.

The numba backend is used when numba imports; set ``DUVAL_KERNELS=numpy``
to force the pure-numpy reference implementation.  All functions take and
return int64 / bool numpy arrays.
"""

from __future__ import annotations

import os

from . import _numpy

_choice = os.environ.get("DUVAL_KERNELS", "numba").strip().lower()
if _choice not in ("numba", "numpy"):
    raise ImportError(f"DUVAL_KERNELS must be 'numba' or 'numpy', not {_choice!r}")

_backend = _numpy
if _choice == "numba":
    try:
        from . import _numba as _backend  # noqa: F811
    except ImportError:  # numba missing: fall back silently
        _backend = _numpy

BACKEND = _backend.NAME

identity_index = _backend.identity_index
is_latin = _backend.is_latin
element_orders = _backend.element_orders
inverses = _backend.inverses
derived_subgroup = _backend.derived_subgroup
search_automorphisms = _backend.search_automorphisms
brute_force_automorphisms = _backend.brute_force_automorphisms


def backend(name: str):
    """Module implementing the kernels for ``name`` ('numba' or 'numpy')."""
    if name == "numpy":
        return _numpy
    if name == "numba":
        from . import _numba

        return _numba
    raise ValueError(f"unknown kernel backend {name!r}")


def warmup():
    if BACKEND == "numba":
        _backend.warmup()
