from setuptools import Extension, setup

# The compiled sweep kernel is optional: if Cython or a C compiler is
# missing, the package falls back to the numpy kernel at import time.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "eulerbrick._sweepcore",
                ["src/eulerbrick/_sweepcore.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
