"""Kernel backend selection.

Prefers the compiled Cython extension and falls back to the pure-numpy
implementation.  Both produce bit-identical results; the extension is
simply much faster.  Set ISINGBENCH_KERNELS=python or =compiled to force
a choice (forcing "compiled" raises if the extension is missing).
"""

from __future__ import annotations

import os

_forced = os.environ.get("ISINGBENCH_KERNELS")

if _forced == "python":
    from . import _kernels_py as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _forced == "compiled":
            raise
        from . import _kernels_py as kernels  # type: ignore[no-redef]

        BACKEND = "python"
