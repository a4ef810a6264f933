"""Backend selection for the coordinate-descent Lasso kernel.

The compiled Cython extension is preferred; when it is unavailable (no
compiler at install time, or GAITRADAR_FORCE_PY=1 in the environment) the
pure-NumPy twin is used instead. Both expose the same cd_lasso_gram.
"""

import os

if os.environ.get("GAITRADAR_FORCE_PY"):
    from gaitradar.kernels._lasso_py import cd_lasso_gram

    USING_EXTENSION = False
else:
    try:
        from gaitradar.kernels._lasso_cy import cd_lasso_gram

        USING_EXTENSION = True
    except ImportError:  # pragma: no cover - depends on build environment
        from gaitradar.kernels._lasso_py import cd_lasso_gram

        USING_EXTENSION = False

__all__ = ["cd_lasso_gram", "USING_EXTENSION"]
