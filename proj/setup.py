from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "ratiomech._ratiomech",
    sources=[
        "src/quadrature.cpp",
        "src/distribution.cpp",
        "src/threshold_curve.cpp",
        "src/virtual_valuation.cpp",
        "src/mechanism.cpp",
        "src/verify.cpp",
        "src/solve.cpp",
        "python/module.cpp",
    ],
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
