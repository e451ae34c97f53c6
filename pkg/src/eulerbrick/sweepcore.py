"""Kernel selection for the quartic-pair sweep.

The compiled extension is preferred; the numpy kernel is the fallback.
Set EULERBRICK_PURE=1 to force the Python lane (benchmarks import both
modules directly).

The prefilter modulus is a product of primes chosen empirically: the sweep
values f1*f2 = D^2 - E^2 carry heavy square structure at most small primes
(64, 63, 65, ... pass everything), while 19, 43, 61, 73 jointly reject
about 91% of non-squares.
"""

from __future__ import annotations

import os

import numpy as np

FILTER_PRIMES = (19, 43, 61, 73)
FILTER_MODULUS = 19 * 43 * 61 * 73  # 3,638,101

if os.environ.get("EULERBRICK_PURE", "") not in ("", "0"):
    from . import _sweeppy as _impl

    BACKEND = "python"
else:
    try:
        from . import _sweepcore as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _sweeppy as _impl

        BACKEND = "python"

scan_pair = _impl.scan_pair


def square_residue_table(modulus: int = FILTER_MODULUS) -> np.ndarray:
    """Byte table marking the square residues mod ``modulus``."""
    table = np.zeros(modulus, dtype=np.uint8)
    k = np.arange(modulus, dtype=np.uint64)
    table[(k * k) % modulus] = 1
    return table
