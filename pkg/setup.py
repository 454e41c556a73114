from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; bsv falls back to bsv._pykernel
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("bsv._kernel", ["src/bsv/_kernel.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
