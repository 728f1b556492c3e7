"""Select the jet kernel: compiled Cython core if importable, else numpy."""
import os

if os.environ.get("SUPERBLMP_PURE_PYTHON"):
    from . import _jetcore_py as core
    BACKEND = "python"
else:
    try:
        from . import _jetcore as core
        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _jetcore_py as core
        BACKEND = "python"

__all__ = ["core", "BACKEND"]
