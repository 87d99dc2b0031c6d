"""Build script: compiles the optional Euler-Maruyama extension kernel.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so a failing C toolchain only costs speed.
Build in place for development with::

    python setup.py build_ext --inplace
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Degrade to a warning when the extension cannot be compiled."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # toolchain missing entirely
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            "WARNING: building the delaystab._kernels extension failed "
            f"({exc!r}); the pure-Python kernel will be used instead.",
            file=sys.stderr,
        )


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        print(f"WARNING: {exc!r}; skipping extension build.", file=sys.stderr)
        return []
    ext = Extension(
        "delaystab._kernels",
        ["src/delaystab/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
