"""Backend selection for the hot covering kernels.

The compiled extension is used when it imported cleanly; otherwise the
NumPy fallback. GAPFORGE_PURE=1 forces the fallback (handy for the
benchmark and for differential tests). Both backends are bit-identical.
"""

from __future__ import annotations

import os

if os.environ.get("GAPFORGE_PURE") == "1":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND: str = _impl.BACKEND
ResidueScorer = _impl.ResidueScorer
mark_residue_class = _impl.mark_residue_class


def available_backends():
    """Names of importable kernel backends (for tests and the benchmark)."""
    out = ["python"]
    try:
        from . import _kernels  # noqa: F401

        out.insert(0, "c")
    except ImportError:
        pass
    return out


def load_backend(name: str):
    """Import a specific backend module by name ("c" or "python")."""
    if name == "python":
        from . import _kernels_py

        return _kernels_py
    if name == "c":
        from . import _kernels  # type: ignore[attr-defined]

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
