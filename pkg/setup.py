import os

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "hsmeasure._ckernels",
                ["src/hsmeasure/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )

if os.environ.get("HSMEASURE_PURE_PYTHON"):
    ext_modules = []

setup(ext_modules=ext_modules)
