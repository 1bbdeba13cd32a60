"""Backend selection for the scan kernels.

The compiled extension is used when it imports; otherwise the numpy
implementation in ``_kernels`` is used.  Set ``REMOTESTATE_PURE_PYTHON=1``
to force the numpy backend.
"""
import os

from . import _kernels as python_backend

try:
    if os.environ.get("REMOTESTATE_PURE_PYTHON"):
        raise ImportError("compiled backend disabled by REMOTESTATE_PURE_PYTHON")
    from . import _ckernels as compiled_backend
except ImportError:
    compiled_backend = None

BACKEND = "cython" if compiled_backend is not None else "python"
_active = compiled_backend if compiled_backend is not None else python_backend


def get_backend(name=None):
    """Kernel module by name (``"cython"`` or ``"python"``); the active one by default."""
    if name is None:
        return _active
    if name == "python":
        return python_backend
    if name == "cython":
        if compiled_backend is None:
            raise ImportError("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
        return compiled_backend
    raise ValueError(f"unknown backend {name!r}")


def su2_first_columns(phi1, phi2):
    return _active.su2_first_columns(phi1, phi2)


def su4_first_columns(phis):
    return _active.su4_first_columns(phis)


def receiver_params_grid(psi, transfer):
    return _active.receiver_params_grid(psi, transfer)
