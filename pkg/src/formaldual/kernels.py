"""Select the compiled kernels when available, else the pure-Python twin.

Set ``FORMALDUAL_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("FORMALDUAL_PURE_PYTHON", "") not in ("", "0"):
    from ._pykernels import BACKEND, PRUNE_REASONS, explore, canonical_members, weight_counts
else:
    try:
        from ._kernels import BACKEND, PRUNE_REASONS, explore, canonical_members, weight_counts
    except ImportError:
        from ._pykernels import BACKEND, PRUNE_REASONS, explore, canonical_members, weight_counts

from . import _pykernels as python_backend

STATUS_COMPLETE = 0
STATUS_NODE_LIMIT = 1
STATUS_DEADLINE = 2


def compiled_backend():
    """The compiled module, or None if it was not built."""
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels
