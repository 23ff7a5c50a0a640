"""Backend selection for the fixpoint kernels.

The compiled extension is used when it was built; set ``IDLOGIC_PURE=1``
to force the pure-Python implementation.
"""
import os

from . import _kernel_py

if os.environ.get("IDLOGIC_PURE") == "1":
    _impl = _kernel_py
else:
    try:
        from . import _kernel as _impl
    except ImportError:
        _impl = _kernel_py

BACKEND = "python" if _impl is _kernel_py else "cython"

eval_bodies = _impl.eval_bodies
stable = _impl.stable
wf_pair = _impl.wf_pair
