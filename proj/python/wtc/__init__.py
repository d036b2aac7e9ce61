# SPDX-License-Identifier: Apache-2.0
"""Weighted HOSVD tensor completion.

Arrays are float64 in any memory order; tensors are returned in Fortran
order, which matches the mode-0-fastest layout used by the C++ core.
Sampling patterns are boolean masks and rank-1 weights are lists of factor
vectors.
"""

from ._core import *  # noqa: F401,F403
from ._core import ArgumentError, DomainError, FormatError, NumericalError  # noqa: F401

__version__ = "0.1.0"
