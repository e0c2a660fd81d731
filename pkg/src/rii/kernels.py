"""Backend selection for the hot kernels.

The compiled extension ``rii._kernels`` is used when it imports cleanly;
otherwise the pure-Python twin in :mod:`rii._kernels_py` is used. Setting the
environment variable ``RII_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _kernels_py as python_backend

compiled_backend = None
if os.environ.get("RII_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled_backend  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled_backend = None

_impl = compiled_backend if compiled_backend is not None else python_backend

BACKEND = "compiled" if _impl is compiled_backend else "python"

mul_terms = _impl.mul_terms
mul_monomial = _impl.mul_monomial
const_moment_sum = _impl.const_moment_sum
motzkin_moment = _impl.motzkin_moment
gf_coefficients = _impl.gf_coefficients

__all__ = [
    "BACKEND",
    "compiled_backend",
    "python_backend",
    "mul_terms",
    "mul_monomial",
    "const_moment_sum",
    "motzkin_moment",
    "gf_coefficients",
]
