"""Build the optional compiled kernel; the package works without it."""
from setuptools import Extension, setup

try:
    import numpy  # noqa: F401
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "islandde._kernels",
                ["src/islandde/_kernels.pyx"],
                # no FMA contraction or fast-math: results must match the numpy fallback bit for bit
                extra_compile_args=["-O3", "-ffp-contract=off", "-fno-fast-math"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
