"""Build script: compiles the theta kernel extension when a toolchain is
available; the package falls back to the pure numpy kernel otherwise."""

from setuptools import Extension, setup


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "prymtheta._kernel",
        ["src/prymtheta/_kernel.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions())
