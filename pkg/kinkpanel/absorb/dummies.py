import numpy as np

from ..types import Indices
from .base import Absorber


class DummyVariables(Absorber):
    """Residualizes on explicit DAO and quarter indicator columns.

    Numerically the reference implementation of the within transformation;
    the indicator matrix is dense, so this is only meant for small panels.
    """

    __slots__ = ("_design",)

    def __init__(self, dao_index: Indices, quarter_index: Indices):
        super().__init__(dao_index, quarter_index)
        self._design = indicator_matrix(self._dao, self._quarter)

    @property
    def design(self) -> np.ndarray:
        return self._design

    def residualize(self, columns: np.ndarray) -> np.ndarray:
        coef, *_ = np.linalg.lstsq(self._design, columns, rcond=None)
        return columns - self._design @ coef


def indicator_matrix(dao_index: np.ndarray, quarter_index: np.ndarray) -> np.ndarray:
    """All DAO indicators plus quarter indicators without the first quarter"""
    n = dao_index.size
    g = int(dao_index.max()) + 1 if n else 0
    t = int(quarter_index.max()) + 1 if n else 0
    design = np.zeros((n, g + max(t - 1, 0)))
    rows = np.arange(n)
    design[rows, dao_index] = 1.0
    later = quarter_index > 0
    design[rows[later], g + quarter_index[later] - 1] = 1.0
    return design
