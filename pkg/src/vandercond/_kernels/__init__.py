"""Kernel backend selection.

The compiled MPFR kernel is preferred when its extension built; setting
VANDERCOND_PURE_PYTHON (to anything) forces the pure-Python reference
implementation.  Both expose the same ``jacobi_orthogonalize`` contract, and
``BACKEND`` names which one is active ("compiled" or "python").
"""

from __future__ import annotations

import os

if os.environ.get("VANDERCOND_PURE_PYTHON"):
    from .jacobi_py import BACKEND, jacobi_orthogonalize
else:
    try:
        from ._jacobi_mpfr import BACKEND, jacobi_orthogonalize
    except ImportError:
        from .jacobi_py import BACKEND, jacobi_orthogonalize

__all__ = ["BACKEND", "jacobi_orthogonalize"]
