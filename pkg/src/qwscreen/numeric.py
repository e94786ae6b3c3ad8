"""Numeric kernel selection.

The compiled extension ``_numkern`` is used when it was built; otherwise the
pure-Python module with the same functions is loaded.  ``QWSCREEN_NUMERIC=pure``
forces the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType


def load_kernels(preferred: str | None = None) -> ModuleType:
    choice = (preferred or os.environ.get("QWSCREEN_NUMERIC") or "compiled").lower()
    if choice == "compiled":
        try:
            from . import _numkern

            return _numkern
        except ImportError:
            pass
    from . import _numkern_py

    return _numkern_py


KERNELS = load_kernels()
KERNEL_NAME = "compiled" if KERNELS.__name__.endswith("_numkern") else "pure"

qpoch = KERNELS.qpoch
theta = KERNELS.theta
product_form = KERNELS.product_form
horner = KERNELS.horner
