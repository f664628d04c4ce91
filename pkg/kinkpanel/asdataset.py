from dataclasses import dataclass
from typing import Any, Sequence, Tuple, Union, cast

import numpy as np
import pandas as pd

from .absorb import dense_codes
from .metrics import DerivedObservation
from .quarter import Quarter
from .types import Labels, VariableName


@dataclass(frozen=True)
class PanelDataset:
    """Regression-ready arrays of one estimation sample.

    ``dao_index`` and ``quarter_index`` are dense integer codes into
    ``dao_labels`` and ``quarter_labels``; DAOs are the clusters.
    """

    outcome: np.ndarray
    running: np.ndarray
    dao_index: np.ndarray
    quarter_index: np.ndarray
    dao_labels: Labels
    quarter_labels: Tuple[Quarter, ...]
    outcome_name: str = "outcome"
    running_name: str = "running"

    def __post_init__(self) -> None:
        n = self.outcome.shape[0]
        for name in ("outcome", "running", "dao_index", "quarter_index"):
            value = getattr(self, name)
            if value.ndim != 1 or value.shape[0] != n:
                raise ValueError(f"{name} must be a 1D vector of length {n}")
        if not (np.isfinite(self.outcome).all() and np.isfinite(self.running).all()):
            raise ValueError("outcome and running variable must be finite")
        dense_codes(self.dao_index, "dao_index")
        dense_codes(self.quarter_index, "quarter_index")
        if n and self.dao_index.max() + 1 != len(self.dao_labels):
            raise ValueError("dao_labels do not match dao_index")
        if n and self.quarter_index.max() + 1 != len(self.quarter_labels):
            raise ValueError("quarter_labels do not match quarter_index")

    @property
    def n_obs(self) -> int:
        return int(self.outcome.shape[0])

    @property
    def n_clusters(self) -> int:
        return len(self.dao_labels)

    @property
    def n_periods(self) -> int:
        return len(self.quarter_labels)

    def with_outcome(self, outcome: Any, name: str = "outcome") -> "PanelDataset":
        return PanelDataset(
            np.asarray(outcome, dtype=float),
            self.running,
            self.dao_index,
            self.quarter_index,
            self.dao_labels,
            self.quarter_labels,
            name,
            self.running_name,
        )


def _encode(values: Sequence[Any]) -> Tuple[np.ndarray, Tuple[Any, ...]]:
    labels = sorted(set(values))
    lookup = {label: code for code, label in enumerate(labels)}
    return np.array([lookup[v] for v in values], dtype=np.int64), tuple(labels)


def from_arrays(
    outcome: Any,
    running: Any,
    dao_ids: Sequence[str],
    quarters: Sequence[Quarter],
    outcome_name: str = "outcome",
    running_name: str = "running",
) -> PanelDataset:
    dao_index, dao_labels = _encode(list(dao_ids))
    quarter_index, quarter_labels = _encode(list(quarters))
    return PanelDataset(
        np.asarray(outcome, dtype=float),
        np.asarray(running, dtype=float),
        dao_index,
        quarter_index,
        cast(Labels, dao_labels),
        cast(Tuple[Quarter, ...], quarter_labels),
        outcome_name,
        running_name,
    )


def _column(
    panel: Sequence[DerivedObservation], name: VariableName
) -> np.ndarray:
    values = []
    for i, obs in enumerate(panel):
        value = obs.get(name)
        if value is None:
            raise ValueError(
                f"observation {i} ({obs.dao_id}, {obs.quarter}) has no {name};"
                " select an estimation sample first"
            )
        values.append(value)
    return np.array(values, dtype=float)


def asdataset(
    data: Union[PanelDataset, Sequence[DerivedObservation], pd.DataFrame],
    outcome: VariableName = "y_lnv",
    running: VariableName = "x_lnp",
) -> PanelDataset:
    """Converts a derived panel (or a data frame with ``dao_id`` and
    ``quarter`` columns) into a :class:`PanelDataset`."""
    if isinstance(data, PanelDataset):
        return data
    if isinstance(data, pd.DataFrame):
        missing = {"dao_id", "quarter", outcome, running} - set(data.columns)
        if missing:
            raise ValueError(f"data frame lacks columns: {sorted(missing)}")
        frame = data[["dao_id", "quarter", outcome, running]]
        if frame.isna().any().any():
            raise ValueError("data frame has missing values; select an estimation sample first")
        quarters = [q if isinstance(q, Quarter) else Quarter.parse(str(q)) for q in frame["quarter"]]
        return from_arrays(
            frame[outcome].to_numpy(dtype=float),
            frame[running].to_numpy(dtype=float),
            [str(d) for d in frame["dao_id"]],
            quarters,
            outcome,
            running,
        )
    rows = list(data)
    if rows and not isinstance(rows[0], DerivedObservation):
        raise ValueError(f"Unknown type: {type(rows[0])}")
    return from_arrays(
        _column(rows, outcome),
        _column(rows, running),
        [obs.dao_id for obs in rows],
        [obs.quarter for obs in rows],
        outcome,
        running,
    )
