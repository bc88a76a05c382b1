"""Build script: compiles the optional accelerator extension when Cython is available.

The package is fully functional without the extension; `qbtrials._backend`
falls back to the pure-Python core at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "qbtrials._core",
                ["src/qbtrials/_core.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
