"""DAO-level cluster bootstrap of the estimated cutoffs."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np

from .errors import BootstrapError
from .kink import DEFAULT_GRID_HI, DEFAULT_GRID_LO, DEFAULT_GRID_POINTS, estimate_kink
from .metrics import DerivedObservation
from .regression import percentile
from .specs import DEFAULT_BOOTSTRAP_SPECS, EstimationSpec
from .types import AbsorberName, Vector

logger = logging.getLogger(__name__)

DEFAULT_REPLICATIONS = 300
MAX_FAILURE_RATE = 0.5


@dataclass(frozen=True)
class BootstrapConfig:
    replications: int = DEFAULT_REPLICATIONS
    master_seed: int = 0
    specs: Tuple[EstimationSpec, ...] = DEFAULT_BOOTSTRAP_SPECS
    grid_lo: float = DEFAULT_GRID_LO
    grid_hi: float = DEFAULT_GRID_HI
    grid_points: int = DEFAULT_GRID_POINTS
    absorber: AbsorberName = "projections"
    threads: int = 1

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications}")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError(
                f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}"
            )
        if not self.specs:
            raise ValueError("no specifications to bootstrap")


@dataclass(frozen=True)
class BootstrapSummary:
    cutoff_name: str
    replications_completed: int
    failures: int
    mean: float
    p50: float
    p2_5: float
    p97_5: float
    draws: Tuple[float, ...]


def replication_seed(master_seed: int, replication: int) -> int:
    """Independent 64-bit stream seed for one replication"""
    sequence = np.random.SeedSequence(entropy=master_seed, spawn_key=(replication,))
    return int(sequence.generate_state(1, np.uint64)[0])


def relabel_draw(
    panel: Sequence[DerivedObservation], drawn: Sequence[str]
) -> List[DerivedObservation]:
    """Stacks the rows of every drawn DAO; the k-th copy of a DAO becomes the
    synthetic cluster ``"{dao_id}#{k}"``."""
    rows: Dict[str, List[DerivedObservation]] = {}
    for obs in panel:
        rows.setdefault(obs.dao_id, []).append(obs)
    copies: Dict[str, int] = {}
    resampled: List[DerivedObservation] = []
    for dao in drawn:
        if dao not in rows:
            raise ValueError(f"drawn DAO {dao!r} is not in the panel")
        copies[dao] = copies.get(dao, 0) + 1
        cluster = f"{dao}#{copies[dao]}"
        resampled.extend(replace(obs, dao_id=cluster) for obs in rows[dao])
    return resampled


def resample_clusters(
    panel: Sequence[DerivedObservation], seed: int
) -> List[DerivedObservation]:
    daos = sorted({obs.dao_id for obs in panel})
    if len(daos) < 2:
        raise BootstrapError(f"cluster bootstrap needs G >= 2 DAOs, got {len(daos)}")
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, len(daos), size=len(daos))
    return relabel_draw(panel, [daos[i] for i in picks])


def summarize_draws(draws: Vector) -> Tuple[float, float, float, float]:
    """(mean, P50, P2.5, P97.5) of the bootstrap draws"""
    values = np.asarray(draws, dtype=float)
    if values.size == 0:
        raise ValueError("cannot summarize an empty set of draws")
    return (
        float(values.mean()),
        percentile(values, 50),
        percentile(values, 2.5),
        percentile(values, 97.5),
    )


def _cutoff(
    panel: Sequence[DerivedObservation], spec: EstimationSpec, config: BootstrapConfig
) -> float:
    fit = estimate_kink(
        spec.dataset(panel),
        p_lo=config.grid_lo,
        p_hi=config.grid_hi,
        count=config.grid_points,
        absorber=config.absorber,
    )
    return fit.cutoff


def _replicate(
    panel: Sequence[DerivedObservation], config: BootstrapConfig, replication: int
) -> Tuple[Optional[float], ...]:
    resampled = resample_clusters(panel, replication_seed(config.master_seed, replication))
    draws: List[Optional[float]] = []
    for spec in config.specs:
        try:
            draws.append(_cutoff(resampled, spec, config))
        except ValueError as e:
            logger.warning("replication %d failed for %s: %s", replication, spec.name, e)
            draws.append(None)
    return tuple(draws)


def bootstrap_breakpoints(
    panel: Sequence[DerivedObservation], config: BootstrapConfig
) -> List[BootstrapSummary]:
    """Re-runs grid construction and breakpoint selection on DAO resamples.

    Replications that fail for a specification are counted and contribute no
    draw to it. Results do not depend on ``config.threads``.
    """
    for spec in config.specs:
        _cutoff(panel, spec, config)

    indices = range(config.replications)
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(lambda r: _replicate(panel, config, r), indices))
    else:
        results = [_replicate(panel, config, r) for r in indices]

    summaries = []
    for j, spec in enumerate(config.specs):
        draws = tuple(d for d in (result[j] for result in results) if d is not None)
        failures = config.replications - len(draws)
        if failures > MAX_FAILURE_RATE * config.replications:
            raise BootstrapError(
                f"{spec.name}: {failures} of {config.replications} replications failed"
            )
        mean, p50, p2_5, p97_5 = summarize_draws(draws)
        logger.info(
            "%s: %d draws, mean %.4f, interval [%.4f, %.4f]",
            spec.cutoff_name,
            len(draws),
            mean,
            p2_5,
            p97_5,
        )
        summaries.append(
            BootstrapSummary(
                cutoff_name=spec.cutoff_name,
                replications_completed=len(draws),
                failures=failures,
                mean=mean,
                p50=p50,
                p2_5=p2_5,
                p97_5=p97_5,
                draws=draws,
            )
        )
    return summaries
