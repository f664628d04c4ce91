"""Kink regressions with RSS-minimizing breakpoint selection."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from .absorb import Absorber
from .asdataset import PanelDataset
from .errors import GridError, IdentificationError
from .regression import (
    ClusteredInference,
    RegressionData,
    RegressionFit,
    check_rank,
    clustered_inference,
    fit_with_inference,
    hinge,
    make_absorber,
    ols_fit,
    percentile,
)
from .types import AbsorberName, GridTrace, Vector

logger = logging.getLogger(__name__)

DEFAULT_GRID_LO = 10.0
DEFAULT_GRID_HI = 90.0
DEFAULT_GRID_POINTS = 101
DEFAULT_BINS = 20

# candidates whose RSS differ by less than this (relative) are tied
RSS_TIE = 1e-12

AbsorberArg = Union[AbsorberName, Absorber]


@dataclass(frozen=True)
class KinkFit:
    cutoff: float
    beta1: float
    beta2: float
    se_beta1: float
    se_beta2: float
    p_beta1: float
    p_kink: float
    t_kink: float
    se_slope_above: float
    rss: float
    n_obs: int
    n_clusters: int
    n_periods: int
    grid: GridTrace = ()

    @property
    def slope_below(self) -> float:
        return self.beta1

    @property
    def slope_above(self) -> float:
        return self.beta1 + self.beta2


@dataclass(frozen=True)
class LinearFit:
    beta: float
    se: float
    p: float
    t: float
    rss: float
    n_obs: int
    n_clusters: int


@dataclass(frozen=True)
class BinnedPoint:
    bin_center: float
    outcome_residual: float
    count: int


def candidate_grid(
    running: Vector,
    p_lo: float = DEFAULT_GRID_LO,
    p_hi: float = DEFAULT_GRID_HI,
    count: int = DEFAULT_GRID_POINTS,
) -> np.ndarray:
    if count < 2:
        raise ValueError(f"grid needs at least 2 points, got {count}")
    lo = percentile(running, p_lo)
    hi = percentile(running, p_hi)
    if not lo < hi:
        raise GridError("running variable has insufficient interior variation")
    return np.linspace(lo, hi, count)


def fit_kink_at(
    dataset: PanelDataset, c: float, absorber: AbsorberArg = "projections"
) -> Tuple[RegressionFit, ClusteredInference]:
    return fit_with_inference(dataset, c, absorber)


def fit_linear(dataset: PanelDataset, absorber: AbsorberArg = "projections") -> LinearFit:
    fit, inference = fit_with_inference(dataset, None, absorber)
    return LinearFit(
        beta=float(inference.coefficients[0]),
        se=float(inference.se[0]),
        p=float(inference.p[0]),
        t=float(inference.t[0]),
        rss=fit.rss,
        n_obs=fit.n_obs,
        n_clusters=fit.n_clusters,
    )


def kink_fit(
    cutoff: float,
    fit: RegressionFit,
    inference: ClusteredInference,
    grid: GridTrace = (),
) -> KinkFit:
    cov = inference.covariance
    var_above = cov[0, 0] + cov[1, 1] + 2 * cov[0, 1]
    return KinkFit(
        cutoff=float(cutoff),
        beta1=float(inference.coefficients[0]),
        beta2=float(inference.coefficients[1]),
        se_beta1=float(inference.se[0]),
        se_beta2=float(inference.se[1]),
        p_beta1=float(inference.p[0]),
        p_kink=float(inference.p[1]),
        t_kink=float(inference.t[1]),
        se_slope_above=float(np.sqrt(max(var_above, 0.0))),
        rss=fit.rss,
        n_obs=fit.n_obs,
        n_clusters=fit.n_clusters,
        n_periods=fit.n_periods,
        grid=grid,
    )


class _Profile:
    """RSS profile over cutoffs; outcome and running variable are demeaned
    once, only the hinge column is absorbed per candidate."""

    def __init__(self, dataset: PanelDataset, absorber: AbsorberArg):
        self.dataset = dataset
        self.absorber = make_absorber(dataset, absorber)
        base = self.absorber(np.column_stack([dataset.outcome, dataset.running]))
        self.outcome = base[:, 0]
        self.running = base[:, 1]
        self.names = (dataset.running_name, f"({dataset.running_name}-c)+")

    def data(self, c: float) -> RegressionData:
        h = self.absorber(hinge(self.dataset.running, c))
        return RegressionData(
            outcome=self.outcome,
            regressors=np.column_stack([self.running, h]),
            names=self.names,
            dao_index=self.dataset.dao_index,
            quarter_index=self.dataset.quarter_index,
            absorbed_df=self.absorber.degrees,
        )

    def rss(self, c: float) -> Optional[float]:
        data = self.data(c)
        try:
            check_rank(data.regressors, data.names)
        except IdentificationError as e:
            logger.warning("skipping candidate cutoff %.6g: %s", c, e)
            return None
        coef, *_ = np.linalg.lstsq(data.regressors, data.outcome, rcond=None)
        residuals = data.outcome - data.regressors @ coef
        rss = float(residuals @ residuals)
        logger.debug("cutoff %.6g rss %.10g", c, rss)
        return rss


def _argmin(trace: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    # trace is sorted by cutoff, so ties resolve to the smallest cutoff
    best_c, best_rss = trace[0]
    for c, rss in trace[1:]:
        if rss < best_rss - RSS_TIE * abs(best_rss):
            best_c, best_rss = c, rss
    return best_c, best_rss


def select_breakpoint(
    dataset: PanelDataset,
    grid: Vector,
    *,
    absorber: AbsorberArg = "projections",
    threads: int = 1,
) -> KinkFit:
    """Fits the kink model at every candidate cutoff on the same sample and
    returns the fit with the smallest residual sum of squares."""
    candidates = np.unique(np.asarray(grid, dtype=float))
    if candidates.size == 0:
        raise ValueError("empty grid of candidate cutoffs")
    profile = _Profile(dataset, absorber)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values: List[Optional[float]] = list(pool.map(profile.rss, candidates))
    else:
        values = [profile.rss(c) for c in candidates]

    trace = tuple(
        (float(c), rss) for c, rss in zip(candidates, values) if rss is not None
    )
    if not trace:
        raise IdentificationError("no candidate cutoff yields an identified kink fit")
    cutoff, _ = _argmin(trace)

    data = profile.data(cutoff)
    fit = ols_fit(data)
    inference = clustered_inference(fit, data.regressors, data.dao_index)
    return kink_fit(cutoff, fit, inference, trace)


def estimate_kink(
    dataset: PanelDataset,
    *,
    p_lo: float = DEFAULT_GRID_LO,
    p_hi: float = DEFAULT_GRID_HI,
    count: int = DEFAULT_GRID_POINTS,
    absorber: AbsorberArg = "projections",
    threads: int = 1,
) -> KinkFit:
    grid = candidate_grid(dataset.running, p_lo, p_hi, count)
    return select_breakpoint(dataset, grid, absorber=absorber, threads=threads)


def binned_residuals(
    dataset: PanelDataset,
    cutoff: float,
    bins: int = DEFAULT_BINS,
    absorber: AbsorberArg = "projections",
) -> List[BinnedPoint]:
    """Quantile-binned means of the two-way residualized outcome against the
    residualized running variable.

    The running residual is restored to the level of the running variable and
    shifted so that the cutoff sits at zero.
    """
    if bins < 2:
        raise ValueError(f"need at least 2 bins, got {bins}")
    if dataset.n_obs < bins:
        raise ValueError(f"{dataset.n_obs} observations cannot fill {bins} bins")
    a = make_absorber(dataset, absorber)
    demeaned = a(np.column_stack([dataset.outcome, dataset.running]))
    centered = demeaned[:, 1] + dataset.running.mean() - cutoff
    order = np.argsort(centered, kind="mergesort")
    points = []
    for rows in np.array_split(order, bins):
        points.append(
            BinnedPoint(
                bin_center=float(centered[rows].mean()),
                outcome_residual=float(demeaned[rows, 0].mean()),
                count=int(rows.size),
            )
        )
    return points
