from setuptools import Extension, setup


def get_ext_modules():
    """Cython extension for the integration kernel; empty list if Cython is
    unavailable (the pure-Python twin is used at runtime instead)."""
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("WARNING: Cython not available, building without the compiled kernel.")
        return []

    ext = Extension("slspec._kernel_cy", sources=["src/slspec/_kernel_cy.pyx"])
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )


setup(ext_modules=get_ext_modules())
