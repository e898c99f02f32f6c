import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the compiled kernels when possible; the package falls back to
    the pure-Python twins at import when they are absent."""

    def run(self):
        try:
            super().run()
        except Exception as e:  # missing compiler etc.
            print(f"warning: skipping compiled kernels ({e}); "
                  "pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as e:
            print(f"warning: could not compile {ext.name} ({e}); "
                  "pure-Python fallback will be used")


ext_modules = []
if os.environ.get("GAPFORGE_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "gapforge._kernels",
                    ["src/gapforge/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        print("warning: Cython unavailable; building without compiled kernels")

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
