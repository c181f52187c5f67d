"""Build script for the optional compiled kernels.

The package works without the extension (pure-Python fallbacks are selected
at import time), so a failed cythonize/compile only costs speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "one3probe._kernel",
                ["src/one3probe/_kernel.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
