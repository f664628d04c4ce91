"""Derived regressors, concentration measures, nested samples and descriptive statistics."""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union
from os import PathLike
import math

import numpy as np
import pandas as pd

from .concentration import hhi, top3
from .errors import IngestError
from .ingest import DaoQuarterObservation
from .quarter import Quarter
from .types import VariableName

PANEL_COLUMNS = (
    "dao_id",
    "quarter",
    "proposals",
    "active_voters",
    "number_of_voters",
    "hhi",
    "top3",
    "x_lnp",
    "y_lnv",
    "load_active",
    "load_nv",
)


class SampleKind(Enum):
    FULL = "full"
    CAPACITY = "capacity"
    HARMONIZED = "harmonized"
    ALT_LOAD = "altload"


@dataclass(frozen=True)
class DerivedObservation:
    dao_id: str
    quarter: Quarter
    proposals: int
    active_voters: int
    number_of_voters: Optional[int]
    vote_shares: Tuple[float, ...]
    x_lnp: float
    y_lnv: Optional[float]
    load_active: Optional[float]
    ell_active: Optional[float]
    load_nv: Optional[float]
    ell_nv: Optional[float]
    hhi: Optional[float]
    top3: Optional[float]

    def get(self, name: VariableName) -> Optional[float]:
        value = getattr(self, name)
        return None if value is None else float(value)


def _ratio(numerator: int, denominator: Optional[int]) -> Optional[float]:
    if denominator is None or denominator < 1:
        return None
    return numerator / denominator


def derive_variables(obs: DaoQuarterObservation) -> DerivedObservation:
    load_active = _ratio(obs.proposals, obs.active_voters)
    load_nv = _ratio(obs.proposals, obs.number_of_voters)
    return DerivedObservation(
        dao_id=obs.dao_id,
        quarter=obs.quarter,
        proposals=obs.proposals,
        active_voters=obs.active_voters,
        number_of_voters=obs.number_of_voters,
        vote_shares=obs.vote_shares,
        x_lnp=math.log1p(obs.proposals),
        y_lnv=math.log(obs.active_voters) if obs.active_voters >= 1 else None,
        load_active=load_active,
        ell_active=None if load_active is None else math.log1p(load_active),
        load_nv=load_nv,
        ell_nv=None if load_nv is None else math.log1p(load_nv),
        hhi=hhi(obs.vote_shares) if obs.vote_shares else None,
        top3=top3(obs.vote_shares) if obs.vote_shares else None,
    )


def derive_panel(panel: Iterable[DaoQuarterObservation]) -> List[DerivedObservation]:
    return [derive_variables(obs) for obs in panel]


_REQUIRED: Dict[SampleKind, Tuple[VariableName, ...]] = {
    SampleKind.FULL: (),
    SampleKind.CAPACITY: ("x_lnp", "y_lnv"),
    SampleKind.HARMONIZED: ("x_lnp", "y_lnv", "ell_active", "hhi", "top3"),
    SampleKind.ALT_LOAD: ("ell_nv", "hhi", "top3"),
}


def sample_requirements(kind: SampleKind) -> Tuple[VariableName, ...]:
    return _REQUIRED[kind]


def select_sample(
    panel: Sequence[DerivedObservation], kind: SampleKind
) -> List[DerivedObservation]:
    required = _REQUIRED[kind]
    return [obs for obs in panel if all(obs.get(v) is not None for v in required)]


# variable name -> row label, in the row order of the descriptive table
DESCRIBED_VARIABLES: Tuple[Tuple[VariableName, str], ...] = (
    ("proposals", "Proposals"),
    ("active_voters", "Active voters"),
    ("x_lnp", "ln(1+proposals)"),
    ("y_lnv", "ln(active voters)"),
    ("load_active", "Proposals / active voters"),
    ("ell_active", "ln(1+proposals/active voters)"),
    ("hhi", "HHI"),
    ("top3", "Top-3 control share"),
)


@dataclass(frozen=True)
class VariableSummary:
    name: str
    label: str
    n: int
    mean: Optional[float]
    sd: Optional[float]
    median: Optional[float]


@dataclass(frozen=True)
class DescriptiveTable:
    variables: Tuple[VariableSummary, ...]
    dao_quarters: int
    daos: int
    quarters: int
    first_quarter: Quarter
    last_quarter: Quarter


def summarize_variable(name: str, label: str, values: Sequence[float]) -> VariableSummary:
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return VariableSummary(name, label, 0, None, None, None)
    sd = float(np.std(v, ddof=1)) if v.size > 1 else None
    return VariableSummary(name, label, int(v.size), float(v.mean()), sd, float(np.median(v)))


def describe_sample(panel: Sequence[DerivedObservation]) -> DescriptiveTable:
    """Per-variable N, mean, SD (n-1) and median over nonmissing values,
    plus the sample overview counts."""
    if not panel:
        raise ValueError("cannot describe an empty panel")
    rows = []
    for name, label in DESCRIBED_VARIABLES:
        values = [x for x in (obs.get(name) for obs in panel) if x is not None]
        rows.append(summarize_variable(name, label, values))
    quarters = sorted({obs.quarter for obs in panel})
    return DescriptiveTable(
        variables=tuple(rows),
        dao_quarters=len(panel),
        daos=len({obs.dao_id for obs in panel}),
        quarters=len(quarters),
        first_quarter=quarters[0],
        last_quarter=quarters[-1],
    )


NESTED_SAMPLES = (SampleKind.FULL, SampleKind.CAPACITY, SampleKind.HARMONIZED)


def describe_samples(
    panel: Sequence[DerivedObservation],
    kinds: Sequence[SampleKind] = NESTED_SAMPLES,
) -> Dict[SampleKind, DescriptiveTable]:
    result = {}
    for kind in kinds:
        sample = select_sample(panel, kind)
        if sample:
            result[kind] = describe_sample(sample)
    return result


@dataclass(frozen=True)
class QuarterTrend:
    quarter: Quarter
    daos: int
    proposals_total: int
    proposals_mean: float
    hhi_mean: Optional[float]
    top3_mean: Optional[float]


def _mean(values: Sequence[Optional[float]]) -> Optional[float]:
    present = [v for v in values if v is not None]
    return float(np.mean(present)) if present else None


def quarterly_trends(panel: Sequence[DerivedObservation]) -> List[QuarterTrend]:
    by_quarter: Dict[Quarter, List[DerivedObservation]] = {}
    for obs in panel:
        by_quarter.setdefault(obs.quarter, []).append(obs)
    trends = []
    for quarter in sorted(by_quarter):
        cells = by_quarter[quarter]
        proposals = [obs.proposals for obs in cells]
        trends.append(
            QuarterTrend(
                quarter=quarter,
                daos=len({obs.dao_id for obs in cells}),
                proposals_total=int(sum(proposals)),
                proposals_mean=float(np.mean(proposals)),
                hhi_mean=_mean([obs.hhi for obs in cells]),
                top3_mean=_mean([obs.top3 for obs in cells]),
            )
        )
    return trends


def panel_frame(panel: Sequence[DerivedObservation]) -> pd.DataFrame:
    records = [
        {
            "dao_id": obs.dao_id,
            "quarter": str(obs.quarter),
            "proposals": obs.proposals,
            "active_voters": obs.active_voters,
            "number_of_voters": obs.number_of_voters,
            "hhi": obs.hhi,
            "top3": obs.top3,
            "x_lnp": obs.x_lnp,
            "y_lnv": obs.y_lnv,
            "load_active": obs.load_active,
            "load_nv": obs.load_nv,
        }
        for obs in panel
    ]
    df = pd.DataFrame.from_records(records, columns=list(PANEL_COLUMNS))
    df["number_of_voters"] = df["number_of_voters"].astype("Int64")
    return df


def write_panel(panel: Sequence[DerivedObservation], path: Union[str, "PathLike[str]"]) -> None:
    panel_frame(panel).to_csv(path, index=False, lineterminator="\n")


def _optional(value: object) -> Optional[float]:
    if value is None or pd.isna(value):
        return None
    return float(value)  # type: ignore


def read_panel(path: Union[str, "PathLike[str]"]) -> List[DerivedObservation]:
    """Reads a panel CSV written by :func:`write_panel`.

    Vote shares are not stored; ``hhi`` and ``top3`` are taken from the file
    and the log-load variables are recomputed from the load columns.
    """
    try:
        df = pd.read_csv(path, dtype={"dao_id": str, "quarter": str})
    except FileNotFoundError:
        raise IngestError(f"missing file: {path}") from None
    except pd.errors.EmptyDataError:
        raise IngestError(f"malformed header in {path}: file is empty") from None
    if tuple(df.columns) != PANEL_COLUMNS:
        raise IngestError(
            f"malformed header in {path}: expected {','.join(PANEL_COLUMNS)}"
        )
    panel = []
    for i, row in enumerate(df.itertuples(index=False)):
        try:
            quarter = Quarter.parse(row.quarter)
        except ValueError as e:
            raise IngestError(f"{path}:{i + 2}: quarter: {e}") from None
        nv = _optional(row.number_of_voters)
        load_active = _optional(row.load_active)
        load_nv = _optional(row.load_nv)
        panel.append(
            DerivedObservation(
                dao_id=row.dao_id,
                quarter=quarter,
                proposals=int(row.proposals),
                active_voters=int(row.active_voters),
                number_of_voters=None if nv is None else int(nv),
                vote_shares=(),
                x_lnp=float(row.x_lnp),
                y_lnv=_optional(row.y_lnv),
                load_active=load_active,
                ell_active=None if load_active is None else math.log1p(load_active),
                load_nv=load_nv,
                ell_nv=None if load_nv is None else math.log1p(load_nv),
                hhi=_optional(row.hhi),
                top3=_optional(row.top3),
            )
        )
    return panel
