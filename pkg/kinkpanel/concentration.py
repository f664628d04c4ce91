import numpy as np

from .types import Vector

SHARE_TOLERANCE = 1e-9


def _shares(shares: Vector) -> np.ndarray:
    s = np.asarray(shares, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("concentration requires a nonempty 1D vector of shares")
    if (s < 0).any():
        raise ValueError("shares must be nonnegative")
    return s


def hhi(shares: Vector) -> float:
    s = _shares(shares)
    total = s.sum()
    if abs(total - 1.0) > SHARE_TOLERANCE:
        raise ValueError(f"shares must sum to 1, got {total!r}")
    return float(np.square(s).sum())


def top_k_share(shares: Vector, k: int) -> float:
    # shares are assumed to be sorted descending; ties at rank k do not matter
    # because only the share values are summed
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    s = _shares(shares)
    return float(s[:k].sum())


def top3(shares: Vector) -> float:
    return top_k_share(shares, 3)
