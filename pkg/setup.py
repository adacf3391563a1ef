"""Build the optional compiled kernel extension.

The package works without the extension (a pure-Python fallback is
selected at import time), but the large exhaustive scans are only
practical with it.  Usage: pip install -e . --no-build-isolation
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    import numpy as np

    ext_modules = cythonize(
        "src/usylow/_ckernels.pyx",
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
    include_dirs = [np.get_include()]
except ImportError:
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
