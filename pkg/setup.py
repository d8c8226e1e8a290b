import numpy as np
from setuptools import Extension, setup

# The compiled kernel core is optional: the package falls back to the pure
# NumPy implementation in quatfrac._kernels_np when the extension is absent.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "quatfrac._kernels_cy",
                ["src/quatfrac/_kernels_cy.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
