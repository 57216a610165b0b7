"""Build script for the compiled kernel extension.

The package works without the extension (a pure-Python/scipy fallback is
selected at import time), but the compiled kernels are strongly recommended
for the large Monte Carlo experiments.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "quadmaps._speedups",
                ["src/quadmaps/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
