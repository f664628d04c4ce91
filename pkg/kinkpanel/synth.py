"""Synthetic DAO-quarter panels with a known kink, and raw records that
aggregate back to them."""

from dataclasses import dataclass, fields
from os import PathLike
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union
import logging
import math

import numpy as np
import pandas as pd

from .concentration import hhi, top3
from .config import read_key_values
from .errors import ConfigError
from .ingest import PROPOSAL_COLUMNS, VOTE_COLUMNS
from .metrics import DerivedObservation
from .quarter import Quarter
from .regression import hinge, percentile

logger = logging.getLogger(__name__)

OUTCOME_KINDS = ("capacity", "concentration")


@dataclass(frozen=True)
class DgpConfig:
    """Parameters of the data-generating process.

    The linear index of DAO i in quarter t is
    ``intercept + a_i + g_t + beta1 * x + beta2 * max(x - c, 0) + e`` with
    ``x = ln(1 + P)`` and ``P`` a rounded lognormal proposal count.
    """

    n_daos: int = 150
    n_quarters: int = 10
    true_cutoff: float = 2.0
    beta1: float = 1.1
    beta2: float = -0.5
    dao_fe_sd: float = 0.5
    quarter_fe_sd: float = 0.2
    noise_sd: float = 0.3
    proposal_mu: float = 1.9
    proposal_sigma: float = 1.0
    seed: int = 0
    outcome_kind: str = "capacity"
    intercept: float = 2.0
    power_skew: float = 1.0
    first_quarter: str = "2020q1"

    def __post_init__(self) -> None:
        if self.n_daos < 1 or self.n_quarters < 1:
            raise ValueError("n_daos and n_quarters must be positive")
        for name in ("dao_fe_sd", "quarter_fe_sd", "noise_sd", "proposal_sigma"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.outcome_kind not in OUTCOME_KINDS:
            raise ValueError(
                f"outcome_kind must be one of {OUTCOME_KINDS}, got {self.outcome_kind!r}"
            )
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        Quarter.parse(self.first_quarter)


@dataclass(frozen=True)
class SyntheticPanel:
    panel: Tuple[DerivedObservation, ...]
    truth: DgpConfig
    cutoff_interior: bool = True


def read_dgp_config(path: Union[str, "PathLike[str]"]) -> DgpConfig:
    types = {f.name: type(f.default) for f in fields(DgpConfig)}
    values: Dict[str, Any] = {}
    for key, value in read_key_values(path).items():
        if key not in types:
            raise ConfigError(f"{path}: unknown DGP parameter {key!r}")
        try:
            values[key] = types[key](value)
        except ValueError:
            raise ConfigError(f"{path}: invalid value for {key}: {value!r}") from None
    try:
        return DgpConfig(**values)
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from None


def _logistic(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-z))


def _power_shares(voters: int, skew: float) -> Tuple[float, ...]:
    power = (np.arange(voters) + 1.0) ** -skew
    return tuple(float(s) for s in power / power.sum())


def _voter_count(log_count: float) -> int:
    return max(1, int(round(math.exp(log_count))))


def generate_panel(config: DgpConfig) -> SyntheticPanel:
    """Draws a balanced DAO-quarter panel from ``config``

    Every DAO gets at least one proposal: when all of a DAO's draws round to
    zero its first quarter is set to one proposal, so exported records always
    have a proposal to attach votes to.

    With ``noise_sd``, ``dao_fe_sd``, ``quarter_fe_sd`` and ``beta2`` at 0 the
    outcome is ``intercept + beta1 * x``; pass ``intercept=0`` as well to get
    exactly ``y = beta1 * x``.
    """
    rng = np.random.default_rng(config.seed)
    shape = (config.n_daos, config.n_quarters)
    dao_fe = rng.normal(0.0, config.dao_fe_sd, config.n_daos)
    quarter_fe = rng.normal(0.0, config.quarter_fe_sd, config.n_quarters)
    proposals = np.rint(rng.lognormal(config.proposal_mu, config.proposal_sigma, shape))
    proposals = proposals.astype(np.int64)
    idle = proposals.sum(axis=1) == 0
    proposals[idle, 0] = 1
    noise = rng.normal(0.0, config.noise_sd, shape)

    x = np.log1p(proposals)
    index = (
        config.intercept
        + dao_fe[:, np.newaxis]
        + quarter_fe[np.newaxis, :]
        + config.beta1 * x
        + config.beta2 * hinge(x, config.true_cutoff)
        + noise
    )

    lo, hi = percentile(x, 10), percentile(x, 90)
    interior = lo < config.true_cutoff < hi
    if not interior:
        logger.warning(
            "true cutoff %.4g lies outside the P10-P90 range [%.4g, %.4g] of x",
            config.true_cutoff,
            lo,
            hi,
        )

    if config.outcome_kind == "concentration":
        spread = index.std()
        squashed = 0.1 + 0.8 * _logistic((index - np.median(index)) / (spread or 1.0))
        log_voters = config.intercept + x
    else:
        log_voters = index

    first = Quarter.parse(config.first_quarter)
    width = len(str(config.n_daos - 1))
    panel: List[DerivedObservation] = []
    for i in range(config.n_daos):
        dao = f"dao{i:0{width}d}"
        for t in range(config.n_quarters):
            p = int(proposals[i, t])
            v = _voter_count(float(log_voters[i, t]))
            load = p / v
            if config.outcome_kind == "concentration":
                shares: Tuple[float, ...] = ()
                h = float(squashed[i, t])
                outcome = (math.log(v), h, h + 0.5 * (1.0 - h))
            else:
                shares = _power_shares(v, config.power_skew)
                outcome = (float(index[i, t]), hhi(shares), top3(shares))
            panel.append(
                DerivedObservation(
                    dao_id=dao,
                    quarter=first.shifted(t),
                    proposals=p,
                    active_voters=v,
                    number_of_voters=None,
                    vote_shares=shares,
                    x_lnp=float(x[i, t]),
                    y_lnv=outcome[0],
                    load_active=load,
                    ell_active=math.log1p(load),
                    load_nv=None,
                    ell_nv=None,
                    hhi=outcome[1],
                    top3=outcome[2],
                )
            )
    return SyntheticPanel(tuple(panel), config, interior)


def _timestamp(quarter: Quarter, seconds: int) -> str:
    moment = pd.Timestamp(quarter.midpoint()) + pd.Timedelta(seconds=seconds)
    return moment.strftime("%Y-%m-%dT%H:%M:%SZ")


def export_records(synthetic: SyntheticPanel) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """Proposal and vote tables whose aggregation reproduces the proposal and
    active-voter counts of every cell.

    Voter ``j`` of a cell casts one vote with power ``(j + 1) ** -power_skew``.
    Cells without proposals vote on a proposal of the same DAO from another
    quarter.
    """
    skew = synthetic.truth.power_skew
    proposals: List[Tuple[str, str, str]] = []
    ids: Dict[Tuple[str, Quarter], List[str]] = {}
    for obs in synthetic.panel:
        cell = ids.setdefault((obs.dao_id, obs.quarter), [])
        for k in range(obs.proposals):
            pid = f"{obs.dao_id}-{obs.quarter}-p{k}"
            cell.append(pid)
            proposals.append((obs.dao_id, pid, _timestamp(obs.quarter, k)))

    fallback: Dict[str, str] = {}
    for (dao, _), cell in sorted(ids.items()):
        if cell and dao not in fallback:
            fallback[dao] = cell[0]

    votes: List[Tuple[str, str, str, float, str]] = []
    for obs in synthetic.panel:
        cell = ids[(obs.dao_id, obs.quarter)]
        if not cell:
            if obs.dao_id not in fallback:
                raise ValueError(f"{obs.dao_id} has voters but no proposal to vote on")
            cell = [fallback[obs.dao_id]]
        for j in range(obs.active_voters):
            votes.append(
                (
                    obs.dao_id,
                    cell[j % len(cell)],
                    f"{obs.dao_id}-v{j}",
                    float((j + 1.0) ** -skew),
                    _timestamp(obs.quarter, 86_400 + j),
                )
            )
    return (
        pd.DataFrame.from_records(proposals, columns=list(PROPOSAL_COLUMNS)),
        pd.DataFrame.from_records(votes, columns=list(VOTE_COLUMNS)),
    )


def write_records(
    synthetic: SyntheticPanel, directory: Union[str, "PathLike[str]"]
) -> Tuple[Path, Path]:
    proposals, votes = export_records(synthetic)
    out = Path(directory)
    paths = (out / "proposals.csv", out / "votes.csv")
    proposals.to_csv(paths[0], index=False, lineterminator="\n")
    votes.to_csv(paths[1], index=False, lineterminator="\n")
    return paths
