import numpy as np
from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    # -ffp-contract=off keeps the compiled kernel bit-identical to the
    # pure-Python fallback (no FMA contraction of a*b+c).
    extensions = cythonize(
        [
            Extension(
                "twoqueue._core",
                ["src/twoqueue/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    extensions = []

setup(ext_modules=extensions)
