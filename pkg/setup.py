"""Builds the optional Cython kernels; installs pure Python when Cython is unavailable."""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("TITSGROUP_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("titsgroup._kernels", ["src/titsgroup/_kernels.pyx"], extra_compile_args=["-O2"])],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
