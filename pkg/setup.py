import os
import sys

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("POSITKIT_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("Cython not found; installing pure-Python positkit", file=sys.stderr)
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "positkit._kernel",
                    ["src/positkit/_kernel.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
