import os

import numpy as np
from setuptools import Extension, setup

# Set ASAKIT_NO_EXT=1 to install the pure-Python package only.
ext_modules = []
if not os.environ.get("ASAKIT_NO_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "asakit._ckernels",
                ["src/asakit/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
