"""Build script for the compiled coordinate-descent kernel.

The extension is optional at runtime: gaitradar.kernels falls back to a
pure-NumPy implementation when the compiled module is missing (e.g. when
installing on a machine without a C compiler). Set GAITRADAR_NO_EXT=1 to
skip compilation entirely.
"""

import os

import numpy as np
from setuptools import Extension, setup

if os.environ.get("GAITRADAR_NO_EXT"):
    ext_modules = []
else:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "gaitradar.kernels._lasso_cy",
                ["src/gaitradar/kernels/_lasso_cy.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
