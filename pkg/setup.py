import os

import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

openmp = [] if os.environ.get("SARFOCUS_NO_OPENMP") else ["-fopenmp"]

ext_modules = [
    Extension(
        "sarfocus.kernels._core",
        [os.path.join("src", "sarfocus", "kernels", "_core.pyx")],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"] + openmp,
        extra_link_args=openmp,
    )
]

setup(ext_modules=cythonize(ext_modules, compiler_directives={"language_level": "3"}))
