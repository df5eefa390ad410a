from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to the pure-Python
# implementation in decspace.geometry._kernels_py when the extension is absent.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "decspace.geometry._kernels_cy",
                ["src/decspace/geometry/_kernels_cy.pyx"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
