"""Optional Cython build of the numeric kernel; the package works without it."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("QWSCREEN_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("qwscreen._numkern", ["src/qwscreen/_numkern.pyx"])],
            language_level=3,
            quiet=True,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
