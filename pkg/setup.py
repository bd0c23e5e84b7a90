import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffp-contract=off keeps the kernel's float arithmetic bit-identical to the
# pure-Python scorer (no fused multiply-add), which the ranking contract needs.
extensions = [
    Extension(
        "sentisearch._scorekernel",
        ["src/sentisearch/_scorekernel.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O2", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
