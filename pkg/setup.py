"""Build script: compiles the optional C kernel for permutation arithmetic.

The package is fully functional without the extension; grig._kernel falls
back to a numpy implementation when grig._speedups is missing or fails to
build.  Install with ``pip install -e . --no-build-isolation``.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Tolerate a failed extension build; the pure-Python path still works."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: skipping C kernel build ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: skipping {ext.name} ({exc})")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available, building without the C kernel")
        return []
    return cythonize(
        [
            Extension(
                "grig._speedups",
                ["src/grig/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
