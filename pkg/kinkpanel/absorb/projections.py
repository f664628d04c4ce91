import logging

import numpy as np

from ..errors import ConvergenceError
from ..types import Indices
from .base import Absorber

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_SWEEPS = 10_000


def _group_means(codes: np.ndarray, counts: np.ndarray, column: np.ndarray) -> np.ndarray:
    return np.bincount(codes, weights=column, minlength=counts.size) / counts


class AlternatingProjections(Absorber):
    """Two-way demeaning by alternating projections.

    Each sweep subtracts DAO means and then quarter means from every column.
    Sweeps stop once the largest absolute change of any cell drops below
    ``tol``; balanced panels converge after the second sweep.
    """

    __slots__ = ("tol", "max_sweeps", "_dao_counts", "_quarter_counts")

    def __init__(
        self,
        dao_index: Indices,
        quarter_index: Indices,
        *,
        tol: float = DEFAULT_TOLERANCE,
        max_sweeps: int = DEFAULT_MAX_SWEEPS,
    ):
        super().__init__(dao_index, quarter_index)
        self.tol = tol
        self.max_sweeps = max_sweeps
        self._dao_counts = np.bincount(self._dao, minlength=self.n_clusters).astype(float)
        self._quarter_counts = np.bincount(
            self._quarter, minlength=self.n_periods
        ).astype(float)

    def residualize(self, columns: np.ndarray) -> np.ndarray:
        result = np.array(columns, dtype=float, copy=True)
        for j in range(result.shape[1]):
            result[:, j] = self._demean(result[:, j])
        return result

    def _demean(self, column: np.ndarray) -> np.ndarray:
        if column.size == 0:
            return column
        change = np.inf
        for sweep in range(1, self.max_sweeps + 1):
            dao_means = _group_means(self._dao, self._dao_counts, column)
            column = column - dao_means[self._dao]
            quarter_means = _group_means(self._quarter, self._quarter_counts, column)
            column = column - quarter_means[self._quarter]
            change = max(np.abs(dao_means).max(), np.abs(quarter_means).max())
            if change < self.tol:
                logger.debug("demeaned column after %d sweeps", sweep)
                return column
        raise ConvergenceError(self.max_sweeps, float(change))
