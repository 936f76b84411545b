"""Row-kernel selection: compiled extension when available, else pure Python.

DQSPEC_KERNEL=python forces the fallback (used by the benchmark and the
differential tests).
"""

from __future__ import annotations

import os

from . import _rowkernel_py

if os.environ.get("DQSPEC_KERNEL", "").lower() == "python":
    _impl = _rowkernel_py
else:
    try:
        from . import _rowkernel_c as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _rowkernel_py

eval_fields = _impl.eval_fields
KERNEL_NAME = _impl.KERNEL_NAME


def available_kernels() -> dict[str, object]:
    """Importable kernels by name; used by tests and the benchmark."""
    kernels: dict[str, object] = {"python": _rowkernel_py}
    try:
        from . import _rowkernel_c

        kernels["compiled"] = _rowkernel_c
    except ImportError:
        pass
    return kernels
