"""Build script for the optional compiled tree-edit-distance kernel.

The package works without the extension: `artgen._kernels` falls back to the
pure-Python kernel when the compiled module is missing or fails to build.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "artgen._kernels._ted",
                ["src/artgen/_kernels/_ted.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    extensions = []

setup(ext_modules=extensions)
