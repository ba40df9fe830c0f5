"""Build hook for the optional compiled kernels.

The package is pure Python plus one optional Cython extension holding the
binary-quadratic-form hot loops.  If Cython or a C compiler is missing the
install still succeeds and the pure-Python fallback is used at import time.
"""

from setuptools import Extension, find_packages, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "k0av._speedups",
                ["src/k0av/_speedups.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )

# package_dir repeated here so build_ext resolves the src layout even on
# toolchains too old to read the pyproject tables
setup(
    ext_modules=ext_modules,
    package_dir={"": "src"},
    packages=find_packages("src"),
)
