"""Build script: compiles the optional fast event-checking kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so the build degrades gracefully when Cython or a C
compiler is unavailable.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("cspmon._ckernel", ["src/cspmon/_ckernel.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
