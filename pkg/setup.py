import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("VANDERCOND_PURE_PYTHON"):
    try:
        import gmpy2
        from Cython.Build import cythonize

        ext = Extension(
            "vandercond._kernels._jacobi_mpfr",
            ["src/vandercond/_kernels/_jacobi_mpfr.pyx"],
            include_dirs=[os.path.dirname(gmpy2.__file__)],
            libraries=["mpfr", "gmp"],
            extra_compile_args=["-O2"],
            # The package works (slower) without the extension; never fail the install.
            optional=True,
        )
        ext_modules = cythonize([ext], language_level=3)
    except ImportError:
        pass

setup(ext_modules=ext_modules)
