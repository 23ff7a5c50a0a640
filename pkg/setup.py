from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("idlogic._kernel", ["src/idlogic/_kernel.pyx"])],
        language_level=3,
        quiet=True,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
