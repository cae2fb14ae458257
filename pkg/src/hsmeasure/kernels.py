"""Enumeration kernels with backend selection at import time.

The compiled Cython module is used when it was built; otherwise the
numpy twin in ``_pykernels`` is used.  Set ``HSMEASURE_PURE_PYTHON=1`` to
force the fallback.
"""
import os

from . import _pykernels

_FORCE_PY = os.environ.get("HSMEASURE_PURE_PYTHON", "").lower() not in ("", "0", "false")

try:
    from . import _ckernels  # noqa: F401

    HAS_CYTHON = True
except ImportError:
    HAS_CYTHON = False

try:
    if _FORCE_PY:
        raise ImportError("pure-python backend requested")
    from . import _ckernels as _impl
    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"


def get_backend(name=None):
    """Return the kernel module for ``name`` ('cython', 'python') or the active one."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


sign_moment = _impl.sign_moment
sign_tail_counts = _impl.sign_tail_counts
max_sign_norm = _impl.max_sign_norm
max_subset_modulus = _impl.max_subset_modulus
max_sign_l1 = _impl.max_sign_l1
