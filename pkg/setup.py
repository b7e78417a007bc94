"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a numpy fallback is
selected at import time); set GREYBOX_STABILITY_NO_EXT=1 to skip the build.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("GREYBOX_STABILITY_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "greybox_stability._kernels_cy",
                    ["src/greybox_stability/_kernels_cy.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level="3",
        )
    except ImportError:
        # No Cython / numpy at build time: ship pure Python only.
        ext_modules = []

setup(ext_modules=ext_modules)
