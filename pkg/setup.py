"""Build script: compiles the optional Cython stencil kernel.

The package works without the extension (a NumPy reference kernel is
selected at import time), so any compilation failure downgrades to a
pure-Python install instead of aborting.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible; warn and continue otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"WARNING: building C extension failed ({exc}); "
                  "falling back to the NumPy reference kernel.", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"WARNING: {ext.name} failed to build ({exc}); "
                  "falling back to the NumPy reference kernel.", file=sys.stderr)


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "swlw._kernels._claw_cy",
        sources=["src/swlw/_kernels/_claw_cy.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
