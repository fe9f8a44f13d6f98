"""Build the optional Cython kernels.

The extension is optional: when Cython is missing or compilation fails the
package falls back to the NumPy implementation in ``fuzzyols._kernels_py``.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("FUZZYOLS_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "fuzzyols._kernels_cy",
                    [os.path.join("src", "fuzzyols", "_kernels_cy.pyx")],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
