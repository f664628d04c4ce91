"""Two-way fixed-effects least squares with DAO-clustered inference."""

from dataclasses import dataclass, replace
from typing import Any, Optional, Tuple, Union
import logging
import math

import numpy as np
from scipy import stats

from .absorb import Absorber
from .asdataset import PanelDataset
from .errors import IdentificationError
from .types import AbsorberName, Labels, Vector
from .utils import get_absorber

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-10


def percentile(values: Vector, p: float) -> float:
    """Linear interpolation between the closest order statistics"""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("percentile of an empty vector")
    if not 0 <= p <= 100:
        raise ValueError(f"percentile must be in [0, 100], got {p}")
    return float(np.percentile(v, p))


def kink_basis(x: float, c: float) -> Tuple[float, float]:
    if not (math.isfinite(x) and math.isfinite(c)):
        raise ValueError("kink basis requires finite inputs")
    return x, max(x - c, 0.0)


def hinge(x: Any, c: float) -> np.ndarray:
    return np.maximum(np.asarray(x, dtype=float) - c, 0.0)


@dataclass(frozen=True)
class RegressionData:
    """Outcome and slope regressors of one regression, plus the panel indices.

    ``absorbed_df`` is zero for raw data and G + T - 1 once the two-way fixed
    effects have been absorbed by :func:`within_transform`.
    """

    outcome: np.ndarray
    regressors: np.ndarray
    names: Labels
    dao_index: np.ndarray
    quarter_index: np.ndarray
    absorbed_df: int = 0

    @property
    def n_obs(self) -> int:
        return int(self.outcome.shape[0])

    @property
    def n_clusters(self) -> int:
        return int(self.dao_index.max()) + 1 if self.n_obs else 0

    @property
    def n_periods(self) -> int:
        return int(self.quarter_index.max()) + 1 if self.n_obs else 0


def regression_data(dataset: PanelDataset, cutoff: Optional[float] = None) -> RegressionData:
    """Linear design ``[running]``, or kink design ``[running, hinge]`` if a cutoff is given"""
    columns = [dataset.running]
    names = [dataset.running_name]
    if cutoff is not None:
        columns.append(hinge(dataset.running, cutoff))
        names.append(f"({dataset.running_name}-c)+")
    return RegressionData(
        outcome=dataset.outcome,
        regressors=np.column_stack(columns),
        names=tuple(names),
        dao_index=dataset.dao_index,
        quarter_index=dataset.quarter_index,
    )


def make_absorber(
    data: Union[RegressionData, PanelDataset],
    absorber: Union[AbsorberName, Absorber] = "projections",
    **options: Any,
) -> Absorber:
    if isinstance(absorber, Absorber):
        return absorber
    return get_absorber(absorber, data.dao_index, data.quarter_index, **options)


def within_transform(
    data: RegressionData,
    absorber: Union[AbsorberName, Absorber] = "projections",
    **options: Any,
) -> RegressionData:
    """Two-way demeaned copy of the outcome and every regressor column"""
    a = make_absorber(data, absorber, **options)
    stacked = np.column_stack([data.outcome, data.regressors])
    demeaned = a(stacked)
    return replace(
        data,
        outcome=demeaned[:, 0],
        regressors=demeaned[:, 1:],
        absorbed_df=a.degrees,
    )


@dataclass(frozen=True)
class RegressionFit:
    coefficients: np.ndarray
    residuals: np.ndarray
    rss: float
    n_obs: int
    n_clusters: int
    n_periods: int
    absorbed_df: int
    names: Labels = ()


def check_rank(regressors: np.ndarray, names: Labels = ()) -> None:
    """Raises :class:`IdentificationError` unless the smallest singular value
    exceeds ``RANK_TOLERANCE`` times the largest one."""
    x = np.asarray(regressors, dtype=float)
    singular = np.linalg.svd(x, compute_uv=False)
    if singular.size and singular.min() > RANK_TOLERANCE * singular.max():
        return
    labels = names or tuple(f"x{j}" for j in range(x.shape[1]))
    norms = np.sqrt(np.square(x).sum(axis=0))
    zero = np.flatnonzero(norms <= RANK_TOLERANCE * max(norms.max(), 1.0))
    if zero.size:
        column = labels[int(zero[0])]
        raise IdentificationError(
            f"regressor {column} is identically zero after absorbing fixed effects",
            column,
        )
    column = labels[-1]
    raise IdentificationError(
        f"regressor {column} is collinear with the other regressors", column
    )


def ols_fit(data: RegressionData) -> RegressionFit:
    x = data.regressors
    y = data.outcome
    if x.ndim != 2 or x.shape[0] != y.shape[0]:
        raise ValueError(f"regressors must be an n x k matrix, got {x.shape}")
    check_rank(x, data.names)
    coef, *_ = np.linalg.lstsq(x, y, rcond=None)
    residuals = y - x @ coef
    return RegressionFit(
        coefficients=coef,
        residuals=residuals,
        rss=float(residuals @ residuals),
        n_obs=data.n_obs,
        n_clusters=data.n_clusters,
        n_periods=data.n_periods,
        absorbed_df=data.absorbed_df,
        names=data.names,
    )


@dataclass(frozen=True)
class ClusteredInference:
    coefficients: np.ndarray
    covariance: np.ndarray
    se: np.ndarray
    t: np.ndarray
    p: np.ndarray
    df: int
    scale: float


def small_sample_scale(n: int, n_clusters: int, k: int) -> float:
    """c = [G / (G - 1)] * [(n - 1) / (n - K)], K counting absorbed effects"""
    if n_clusters < 2:
        raise IdentificationError(f"clustered inference needs G >= 2 clusters, got {n_clusters}")
    if k >= n:
        raise IdentificationError(f"K = {k} parameters but only n = {n} observations")
    return (n_clusters / (n_clusters - 1)) * ((n - 1) / (n - k))


def clustered_inference(
    fit: RegressionFit, regressors: np.ndarray, dao_index: Any
) -> ClusteredInference:
    x = np.asarray(regressors, dtype=float)
    codes = np.asarray(dao_index, dtype=np.int64)
    n, k = x.shape
    _, codes = np.unique(codes, return_inverse=True)
    n_clusters = int(codes.max()) + 1 if n else 0
    scale = small_sample_scale(n, n_clusters, k + fit.absorbed_df)

    scores = np.zeros((n_clusters, k))
    np.add.at(scores, codes, x * fit.residuals[:, np.newaxis])
    meat = scores.T @ scores
    bread = np.linalg.inv(x.T @ x)
    covariance = scale * (bread @ meat @ bread)

    b = fit.coefficients
    se = np.sqrt(np.clip(np.diag(covariance), 0.0, None))
    df = n_clusters - 1
    positive = se > 0
    t = np.where(positive, b / np.where(positive, se, 1.0), np.copysign(np.inf, b))
    t = np.where(~positive & (b == 0), 0.0, t)
    p = np.where(positive, 2 * stats.t.sf(np.abs(t), df), 0.0)
    return ClusteredInference(
        coefficients=b, covariance=covariance, se=se, t=t, p=p, df=df, scale=scale
    )


def fit_with_inference(
    dataset: PanelDataset,
    cutoff: Optional[float] = None,
    absorber: Union[AbsorberName, Absorber] = "projections",
) -> Tuple[RegressionFit, ClusteredInference]:
    demeaned = within_transform(regression_data(dataset, cutoff), absorber)
    fit = ols_fit(demeaned)
    return fit, clustered_inference(fit, demeaned.regressors, demeaned.dao_index)
