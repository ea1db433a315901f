"""Build script for the optional compiled rank kernel.

The package works without the extension; a failed or skipped build leaves
the pure-Python kernel in charge.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("ORBHODGE_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "orbhodge._rankcore",
                    ["src/orbhodge/_rankcore.pyx"],
                    extra_compile_args=["-O3"],
                    optional=True,
                )
            ],
            language_level=3,
        )

setup(ext_modules=ext_modules)
