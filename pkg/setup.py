"""Build hook: compile the term-operation kernel to a C extension when
Cython is available.  The interpreted module is always installed alongside,
so the package works identically without a compiler; hosup.terms picks
whichever import resolves (the .so shadows the .py when present).

Set HOSUP_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("HOSUP_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("hosup._termops", ["src/hosup/_termops.py"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
