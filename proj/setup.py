"""Builds the pybind11 extension through the project's CMake tree."""

import os
import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str, sourcedir: str = "") -> None:
        super().__init__(name, sources=[])
        self.sourcedir = os.fspath(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        ext_fullpath = Path.cwd() / self.get_ext_fullpath(ext.name)
        extdir = ext_fullpath.parent.resolve()
        extdir.mkdir(parents=True, exist_ok=True)

        build_temp = Path(self.build_temp) / ext.name
        build_temp.mkdir(parents=True, exist_ok=True)
        staging = build_temp / "staging"

        import pybind11

        cmake_args = [
            "-DCMAKE_BUILD_TYPE=Release",
            "-DSKBUILD=ON",  # library + python module only
            f"-Dpybind11_DIR={pybind11.get_cmake_dir()}",
            f"-DPython3_EXECUTABLE={sys.executable}",
        ]
        subprocess.run(["cmake", ext.sourcedir, *cmake_args], cwd=build_temp, check=True)
        subprocess.run(
            ["cmake", "--build", ".", "--target", "roadseg_python", "--parallel"],
            cwd=build_temp,
            check=True,
        )
        subprocess.run(["cmake", "--install", ".", "--prefix", str(staging)], cwd=build_temp, check=True)

        for module in (staging / "roadseg").glob("_core*"):
            shutil.copy2(module, extdir / module.name)


setup(
    ext_modules=[CMakeExtension("roadseg._core")],
    cmdclass={"build_ext": CMakeBuild},
    zip_safe=False,
)
