"""Builds the optional compiled kernel extension.

The package works without it (pure-Python kernels are selected at import
time when the extension is missing), so a failed Cython build should not
make the install fail.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "ordstat._ckernels",
                ["src/ordstat/_ckernels.pyx"],
                language="c++",
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
