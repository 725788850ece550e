from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; polydet falls back to numpy kernels
    cythonize = None

extensions = [
    Extension(
        "polydet._kernels",
        ["src/polydet/_kernels.pyx"],
        extra_compile_args=["-O3"],
        libraries=["m"],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(extensions, language_level=3) if cythonize else [],
)
