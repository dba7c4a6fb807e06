"""Build the optional Cython simulation kernel.

If Cython or a C compiler is unavailable the package still installs and
falls back to the pure-Python kernel at import time.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("CTM_NO_EXTENSION"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "ctm._ckernel",
                    ["src/ctm/_ckernel.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
