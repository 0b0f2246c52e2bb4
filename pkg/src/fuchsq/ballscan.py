"""Backend selection for the ball-scan kernel.

The compiled extension is used when it imports and the caller's moduli fit
in 62 bits; otherwise the pure-Python kernel runs.  Set ``FUCHSQ_PURE_PYTHON=1``
to force the fallback.
"""

from __future__ import annotations

import os

from . import _ballscan_py as python_backend

MAX_COMPILED_MODULUS = 1 << 62

compiled_backend = None
if os.environ.get("FUCHSQ_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ballscan as compiled_backend  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover - depends on the build
        compiled_backend = None

BACKEND = "compiled" if compiled_backend is not None else "python"

KIND_A = python_backend.KIND_A
KIND_B = python_backend.KIND_B


def _pick(gens, p):
    if (compiled_backend is not None and p < MAX_COMPILED_MODULUS
            and all(g[5] < MAX_COMPILED_MODULUS for g in gens)):
        return compiled_backend
    return python_backend


def first_fixed(gens, p: int, radius: int):
    return _pick(gens, p).first_fixed(list(gens), p, radius)


def count_fixed(gens, p: int, radius: int) -> int:
    return _pick(gens, p).count_fixed(list(gens), p, radius)
