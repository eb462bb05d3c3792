"""Builds the optional compiled elimination kernel.

The package works without it: voalab.kernels falls back to the pure-Python
twin when the extension is absent or VOALAB_PURE_PYTHON=1 is set.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/voalab/_ffelim_cy.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # cython missing or compile env broken: pure wheel
    print(f"voalab: skipping compiled kernel ({exc})")

setup(ext_modules=ext_modules)
