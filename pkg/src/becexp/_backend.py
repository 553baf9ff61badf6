"""Kernel backend selection.

The hot loops (shuffling, peeling, GF(2) ranks) exist twice: a compiled
Cython extension and a pure-Python/numpy twin with identical semantics.
The compiled one is used when importable; ``BECEXP_FORCE_PURE=1`` forces
the fallback.  Everything downstream imports the selected functions from
here, so the choice is invisible to the rest of the package.
"""

import os

from . import _purekernels

try:
    from . import _kernels
except ImportError:
    _kernels = None

if os.environ.get("BECEXP_FORCE_PURE") == "1" or _kernels is None:
    _active = _purekernels
else:
    _active = _kernels

COMPILED = _active.COMPILED
NAME = "compiled" if COMPILED else "pure"

fisher_yates = _active.fisher_yates
gf2_rank_packed = _active.gf2_rank_packed
peel_waves = _active.peel_waves
sparse_rank = _active.sparse_rank


def backends():
    """Available (name, module) kernel implementations, pure first."""
    out = [("pure", _purekernels)]
    if _kernels is not None:
        out.append(("compiled", _kernels))
    return out
