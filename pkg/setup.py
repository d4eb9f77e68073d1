from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; kernels.py falls back at import
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("ternclass._ckernels", ["src/ternclass/_ckernels.pyx"], extra_compile_args=["-O2"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
