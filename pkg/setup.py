"""Build script: compiles the optional fast core when Cython and a C++
toolchain are available, otherwise installs the pure-Python backend only."""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Never fail the install because the compiled core cannot be built."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping compiled core ({exc}); "
                  "the pure-Python backend will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: skipping {ext.name} ({exc}); "
                  "the pure-Python backend will be used")


def extensions():
    if os.environ.get("GRIDWIRE_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "gridwire._core_c",
        ["src/gridwire/_core_c.pyx"],
        language="c++",
        extra_compile_args=["-O3", "-std=c++11"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
