import os
from glob import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

eigen_include = os.environ.get("EIGEN3_INCLUDE_DIR", "/usr/include/eigen3")

ext = Pybind11Extension(
    "wifidop._core",
    sorted(glob("src/*.cpp")) + ["python/bindings.cpp"],
    include_dirs=["include", "vendor", eigen_include],
    cxx_std=20,
    define_macros=[("WIFIDOP_VERSION", "0.1.0")],
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
