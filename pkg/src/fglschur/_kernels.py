"""Kernel backend selection.

The compiled extension is used when it was built; setting the environment
variable ``FGLSCHUR_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

BACKEND = "python"

if os.environ.get("FGLSCHUR_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from fglschur._ckernels import add_terms, mul_terms, truncate_terms

        BACKEND = "cython"
    except ImportError:  # extension not built
        pass

if BACKEND == "python":
    from fglschur._pykernels import add_terms, mul_terms, truncate_terms

__all__ = ["BACKEND", "add_terms", "mul_terms", "truncate_terms"]
