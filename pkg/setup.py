import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("EISENSTEIN_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "eisenstein._ckernel",
                ["src/eisenstein/_ckernel.pyx", "src/eisenstein/_core/kernel.c"],
                include_dirs=["src/eisenstein"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
