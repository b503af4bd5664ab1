import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

ext = Extension("flrs._kernels", ["src/flrs/_kernels.pyx"], include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # a failed compile leaves the pure-Python kernels in charge
                optional=True)

setup(ext_modules=cythonize([ext], language_level=3))
