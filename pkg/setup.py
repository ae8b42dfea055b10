"""Build script: compiles the banded RK4 kernel when Cython is available.

The package works without the extension (a numpy fallback is selected at
import time), so a failed extension build should not block installation:
run ``NHLS_SKIP_EXT=1 pip install .`` to skip it explicitly.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("NHLS_SKIP_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "nhls._kernels",
                    ["src/nhls/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_9_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
