"""Builds the optional compiled RK4 kernel; the package works without it."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("OSCNET_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "oscnet._rk4",
                    ["src/oscnet/_rk4.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
