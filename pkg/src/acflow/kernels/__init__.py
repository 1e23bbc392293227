"""Backend selection for the hot numeric kernels.

Two interchangeable implementations ship with the package: a numba-compiled
one (``_numba_impl``) and a pure-numpy one (``_numpy_impl``).  The environment
variable ``ACFLOW_BACKEND`` picks between them:

* ``auto`` (default) - numba if it imports and compiles, numpy otherwise;
* ``numba``          - require numba, raise if unavailable;
* ``numpy``          - force the vectorized fallback.

Both backends implement the same functions with identical semantics; results
agree to floating-point roundoff (summation order differs).  The selected
backend name is exposed as ``BACKEND``.
"""

from __future__ import annotations

import os

_requested = os.environ.get("ACFLOW_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"ACFLOW_BACKEND must be 'auto', 'numba' or 'numpy', got {_requested!r}"
    )

if _requested == "numpy":
    from . import _numpy_impl as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _numba_impl as _impl  # noqa: F401

        BACKEND = "numba"
    except Exception as exc:  # pragma: no cover - depends on host toolchain
        if _requested == "numba":
            raise RuntimeError(f"numba backend requested but unavailable: {exc}")
        from . import _numpy_impl as _impl

        BACKEND = "numpy"

lap_periodic = _impl.lap_periodic
lap_polar = _impl.lap_polar
tridiag_solve_modes = _impl.tridiag_solve_modes


def backend_name() -> str:
    """Name of the kernel backend actually in use ('numba' or 'numpy')."""
    return BACKEND
