import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    # optional=True: if the C toolchain is missing the install still succeeds
    # and entrev.kernels falls back to the pure-Python implementations.
    ext_modules = cythonize(
        [
            Extension(
                "entrev._kernels",
                ["src/entrev/_kernels.pyx"],
                include_dirs=[np.get_include()],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
