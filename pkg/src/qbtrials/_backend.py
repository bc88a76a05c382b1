"""Backend selection: compiled extension when available, pure Python otherwise.

Set QBTRIALS_BACKEND=py (or =c) to force a choice; forcing "c" raises if the
extension was not built.  Both backends expose the same functions and must
return identical values.
"""

from __future__ import annotations

import os

from . import _core_py

_forced = os.environ.get("QBTRIALS_BACKEND", "").strip().lower()

if _forced == "py":
    core = _core_py
elif _forced == "c":
    from . import _core as core  # noqa: F401
else:
    try:
        from . import _core as core  # type: ignore[no-redef]
    except ImportError:
        core = _core_py


def backend_name() -> str:
    """Either "c" (compiled extension) or "py" (pure Python)."""
    return "py" if core is _core_py else "c"
