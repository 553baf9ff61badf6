"""Build script: compiles the optional C extension backend.

The package is fully functional without it (a pure-python/numpy twin is
selected at import time); set BECEXP_PURE_BUILD=1 to skip compilation
deliberately, e.g. to test the fallback path.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("BECEXP_PURE_BUILD") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "becexp._kernels",
                    ["src/becexp/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
