"""Numerical tolerances shared by the floating-point parts of the pipeline."""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_MAX_K = 25
# float64 rounding residuals stay below 1e-8 up to here (4e-9 at k = 7,
# 2e-8 at k = 8); larger k uses the multiprecision path
DOUBLE_PRECISION_MAX_K = 7


@dataclass(frozen=True)
class Tolerances:
    jacobi: float = 1e-9          # off-diagonal Frobenius norm at which Jacobi stops
    cluster: float = 1e-6         # eigenvalues closer than this are one eigenvalue
    rounding: float = 1e-6        # |N - round(N)| allowed when extracting integers
    orthonormality: float = 1e-7
    weights: float = 1e-8         # sum(mu) = 1, mu_1 = mu_2 = 1/(2k+3)
    pf: float = 1e-12             # power-iteration relative step size
    dimension: float = 1e-6       # relative residual of dim(XY) = dim(X) dim(Y)


DEFAULT_TOLERANCES = Tolerances()


def max_k() -> int:
    """Upper end of the supported k range; FUSIONK_MAX_K overrides it."""
    raw = os.environ.get("FUSIONK_MAX_K")
    if raw is None:
        return DEFAULT_MAX_K
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"FUSIONK_MAX_K must be an integer, got {raw!r}") from None
