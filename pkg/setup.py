"""Build script for the optional compiled kernels.

The Cython extension is optional: when it cannot be compiled the package
falls back to the numpy implementation in ``kerrqd._kernels_py``.
"""
import os
import sys

import numpy as np
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


def _openmp_flags():
    if sys.platform == "win32":
        return ["/openmp"], []
    if os.environ.get("KERRQD_NO_OPENMP"):
        return [], []
    return ["-fopenmp"], ["-fopenmp"]


class OptionalBuildExt(build_ext):
    """Do not fail the install when the compiler is missing."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - depends on toolchain
            print(f"warning: compiled kernels not built ({exc}); using numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            print(f"warning: failed to build {ext.name} ({exc}); using numpy fallback")


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    cflags, lflags = _openmp_flags()
    ext = Extension(
        "kerrqd._kernels",
        sources=["src/kerrqd/_kernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"] + cflags,
        extra_link_args=lflags,
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3, compiler_directives={"boundscheck": False, "wraparound": False})


setup(ext_modules=_extensions(), cmdclass={"build_ext": OptionalBuildExt})
