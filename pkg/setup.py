"""Build script: compiles the optional speed kernels.

The compiled extension is a pure accelerator; if Cython or a C compiler is
unavailable the package still installs and falls back to the Python kernels
in graphonlab._kernels_py (selected at import time).
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from setuptools import Extension
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "graphonlab._speed",
                ["src/graphonlab/_speed.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - degraded install path
    sys.stderr.write(
        "graphonlab: building without the compiled kernels (%s); "
        "the pure-Python fallback will be used\n" % exc
    )

setup(ext_modules=ext_modules)
