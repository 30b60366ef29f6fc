"""Pick the plant kernel: compiled if it was built, pure Python otherwise.

Set ``DETUMBLE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernel

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None

_KERNELS = {"python": _pykernel.Plant}
if _ckernel is not None:
    _KERNELS["cython"] = _ckernel.Plant

if os.environ.get("DETUMBLE_PURE_PYTHON", "").strip() not in ("", "0"):
    BACKEND = "python"
else:
    BACKEND = "cython" if _ckernel is not None else "python"


def available_backends():
    return tuple(_KERNELS)


def plant_class(backend=None):
    name = BACKEND if backend is None else backend
    try:
        return _KERNELS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} is not available (have {', '.join(_KERNELS)})") from None
