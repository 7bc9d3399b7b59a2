"""Build script: compiles the optional sparse-kernel extension.

The package works without the extension (a scipy-based fallback is selected
at import time); set ETHBATH_SKIP_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("ETHBATH_SKIP_EXT"):
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "ethbath._kernels._hermcoo",
                ["src/ethbath/_kernels/_hermcoo.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
