"""Build script: compiles the optional kernel extension when Cython and a
C toolchain are available; the package falls back to the pure-Python kernel
otherwise, so a plain install never fails on the extension."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        "src/formaldisk/_kernel/_core.pyx",
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
