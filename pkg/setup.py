"""Build script: compiles the optional word-reduction extension.

The package is fully functional without the extension; `freefactor._kernel`
falls back to the pure-Python implementation when the compiled module is
missing or fails to import.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "freefactor._reduce",
                ["src/freefactor/_reduce.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception:  # pragma: no cover - cython unavailable
    ext_modules = []

setup(ext_modules=ext_modules)
