"""Build the optional compiled row kernel.

The package is pure Python plus one Cython extension for the hot
per-record evaluation loop. If Cython or a C compiler is missing the
install still succeeds and the pure-Python kernel is used at runtime.

Set DQSPEC_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class _OptionalBuildExt(build_ext):
    """build_ext that downgrades compiler failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, broken toolchain
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import warnings

        warnings.warn(
            "dqspec: compiled row kernel unavailable (%s); "
            "falling back to the pure-Python kernel" % exc
        )


ext_modules = []
cmdclass = {}
if os.environ.get("DQSPEC_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/dqspec/_rowkernel_c.pyx"],
            language_level="3",
        )
        cmdclass["build_ext"] = _OptionalBuildExt
    except ImportError:
        pass

setup(ext_modules=ext_modules, cmdclass=cmdclass)
