"""CMake-driven build of the fdialab._core extension.

setuptools calls into the top-level CMakeLists with tests and the CLI
switched off, then collects the module from the build tree.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name, sourcedir=""):
        super().__init__(name, sources=[])
        self.sourcedir = str(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        out_dir = Path(self.get_ext_fullpath(ext.name)).parent.resolve()
        build_temp = Path(self.build_temp).resolve()
        build_temp.mkdir(parents=True, exist_ok=True)
        subprocess.run(
            [
                "cmake",
                "-S", ext.sourcedir,
                "-B", str(build_temp),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DFDIA_BUILD_TESTS=OFF",
                "-DFDIA_BUILD_CLI=OFF",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_temp), "--target", "_core", "-j"],
            check=True,
        )
        out_dir.mkdir(parents=True, exist_ok=True)
        built = build_temp / "python" / "fdialab"
        for f in built.iterdir():
            if f.name != "__init__.py":  # the package dir already carries it
                shutil.copy2(f, out_dir / f.name)


setup(
    ext_modules=[CMakeExtension("fdialab._core")],
    cmdclass={"build_ext": CMakeBuild},
)
