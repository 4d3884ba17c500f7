"""Backend selection for the batched box-bound kernel.

The compiled extension is used when it imports; otherwise the numpy
implementation takes over. ``HOMLAB_BACKEND=python`` forces the fallback.
"""

import os

from homlab import _kernel_py

python_box_bounds = _kernel_py.box_bounds

try:
    from homlab._kernel_c import box_bounds as compiled_box_bounds
except ImportError:  # extension not built
    compiled_box_bounds = None

if compiled_box_bounds is not None and os.environ.get("HOMLAB_BACKEND", "") != "python":
    BACKEND = "cython"
    box_bounds = compiled_box_bounds
else:
    BACKEND = "python"
    box_bounds = python_box_bounds

__all__ = ["BACKEND", "box_bounds", "compiled_box_bounds", "python_box_bounds"]
