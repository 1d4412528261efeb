"""Build script for the optional compiled kernels.

The package works without a C compiler; ``symrig.kernels`` falls back to
the pure-Python implementation when the extension is missing.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("symrig._kernels", ["src/symrig/_kernels.pyx"],
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
