"""Builds the optional compiled simulation kernels.

The package is fully functional without the extension: vera.engine.kernels
falls back to the NumPy implementation when the compiled module is missing.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "vera.engine._kernels",
                ["src/vera/engine/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
