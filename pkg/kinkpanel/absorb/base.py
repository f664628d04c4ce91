from abc import ABCMeta, abstractmethod
from typing import Any
from typing_extensions import final

import numpy as np

from ..types import Indices


def dense_codes(index: Indices, name: str) -> np.ndarray:
    codes = np.asarray(index)
    if codes.ndim != 1:
        raise ValueError(f"{name} must be a 1D integer vector")
    if codes.size and not np.issubdtype(codes.dtype, np.integer):
        raise ValueError(f"{name} must contain integers, got {codes.dtype}")
    codes = codes.astype(np.int64)
    if codes.size and (codes.min() < 0 or np.unique(codes).size != codes.max() + 1):
        raise ValueError(f"{name} must use every code in 0..max exactly (dense)")
    return codes


class Absorber(metaclass=ABCMeta):
    """Base class of the two-way (DAO and quarter) fixed-effect absorbers.

    An absorber is bound to the DAO and quarter index vectors of a panel and
    returns the residuals of a regression of each column on both sets of
    indicators.
    """

    __slots__ = ("_dao", "_quarter", "_n_clusters", "_n_periods")

    def __init__(self, dao_index: Indices, quarter_index: Indices):
        self._dao = dense_codes(dao_index, "dao_index")
        self._quarter = dense_codes(quarter_index, "quarter_index")
        if self._dao.shape != self._quarter.shape:
            raise ValueError(
                f"index lengths differ: {self._dao.size} vs {self._quarter.size}"
            )
        self._n_clusters = int(self._dao.max()) + 1 if self._dao.size else 0
        self._n_periods = int(self._quarter.max()) + 1 if self._quarter.size else 0

    @final
    @property
    def n_obs(self) -> int:
        return int(self._dao.size)

    @final
    @property
    def n_clusters(self) -> int:
        return self._n_clusters

    @final
    @property
    def n_periods(self) -> int:
        return self._n_periods

    @final
    @property
    def degrees(self) -> int:
        # parameters absorbed by the DAO and quarter effects
        return self._n_clusters + self._n_periods - 1

    @final
    def __call__(self, columns: Any) -> np.ndarray:
        m = np.asarray(columns, dtype=float)
        if m.shape[:1] != (self.n_obs,):
            raise ValueError(f"expected {self.n_obs} rows, got shape {m.shape}")
        if m.ndim == 1:
            return self.residualize(m[:, np.newaxis])[:, 0]
        if m.ndim != 2:
            raise ValueError("absorbers only support 1D and 2D inputs")
        return self.residualize(m)

    @abstractmethod
    def residualize(self, columns: np.ndarray) -> np.ndarray:
        ...

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(n_obs={self.n_obs},"
            f" n_clusters={self.n_clusters}, n_periods={self.n_periods})"
        )
