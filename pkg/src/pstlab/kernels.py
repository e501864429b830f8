"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise
the pure-Python module takes over.  Set ``PSTLAB_PURE_PYTHON=1`` to force
the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("PSTLAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _pykernels

tql_eigen = _impl.tql_eigen
transfer_amplitudes = _impl.transfer_amplitudes


def backends():
    """Available kernel modules keyed by name (used by tests and the benchmark)."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:  # pragma: no cover
        pass
    return out
