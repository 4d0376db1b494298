"""Kernel backend selection.

The compiled extension (entrev._kernels, Cython) is preferred when it built;
otherwise the pure-Python twins take over. Both backends are bit-identical,
so the choice only affects speed. Set ENTREV_PURE_PYTHON=1 to force the
fallback, e.g. for benchmarking.
"""

import os

if os.environ.get("ENTREV_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.IMPLEMENTATION

encode_windows = _impl.encode_windows
markov_generate = _impl.markov_generate
