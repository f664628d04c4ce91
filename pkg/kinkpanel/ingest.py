"""Parsing of raw proposal/vote tables and aggregation into the DAO-quarter panel."""

from dataclasses import dataclass, field
from datetime import datetime
from typing import (
    Dict,
    Iterable,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)
from os import PathLike
import logging
import math
import re

import numpy as np
import pandas as pd

from .errors import IngestError, RowError
from .quarter import Quarter, assign_quarter, EPOCH_START, EPOCH_END

logger = logging.getLogger(__name__)

PathType = Union[str, "PathLike[str]"]

PROPOSAL_COLUMNS = ("dao_id", "proposal_id", "timestamp")
VOTE_COLUMNS = ("dao_id", "proposal_id", "voter_id", "voting_power", "timestamp")
VOTER_COLUMNS = ("dao_id", "quarter", "number_of_voters")

# RFC 3339 requires Z or a numeric offset
UTC_OFFSET = re.compile(r"(?:Z|[+-]\d{2}:?\d{2})$")


class ProposalRecord(NamedTuple):
    dao_id: str
    proposal_id: str
    timestamp: datetime


class VoteRecord(NamedTuple):
    dao_id: str
    proposal_id: str
    voter_id: str
    voting_power: float
    timestamp: datetime


class VoterCount(NamedTuple):
    dao_id: str
    quarter: Quarter
    number_of_voters: int


@dataclass(frozen=True)
class DaoQuarterObservation:
    dao_id: str
    quarter: Quarter
    proposals: int
    active_voters: int
    number_of_voters: Optional[int] = None
    # realized vote shares, sorted descending
    vote_shares: Tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.proposals < 0 or self.active_voters < 0:
            raise ValueError(f"negative count in {self.dao_id} {self.quarter}")
        if self.number_of_voters is not None and self.number_of_voters < 0:
            raise ValueError(f"negative number_of_voters in {self.dao_id} {self.quarter}")


@dataclass(frozen=True)
class InputTables:
    proposals: Tuple[ProposalRecord, ...]
    votes: Tuple[VoteRecord, ...]
    voters: Optional[Tuple[VoterCount, ...]] = None
    errors: Tuple[RowError, ...] = field(default=())


def _read_table(path: PathType, columns: Sequence[str]) -> pd.DataFrame:
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, na_filter=False)
    except FileNotFoundError:
        raise IngestError(f"missing file: {path}") from None
    except pd.errors.EmptyDataError:
        raise IngestError(f"malformed header in {path}: file is empty") from None
    header = tuple(str(c).strip() for c in df.columns)
    if header != tuple(columns):
        raise IngestError(
            f"malformed header in {path}: expected {','.join(columns)},"
            f" got {','.join(header)}"
        )
    df.columns = list(columns)
    return df


def _parse_timestamps(
    values: pd.Series, source: str, errors: List[RowError]
) -> List[Optional[datetime]]:
    parsed = pd.to_datetime(values, utc=True, errors="coerce", format="ISO8601")
    result: List[Optional[datetime]] = []
    for i, (raw, ts) in enumerate(zip(values, parsed)):
        line = i + 2
        if pd.isna(ts):
            errors.append(RowError(source, line, "timestamp", f"unparseable: {raw!r}"))
            result.append(None)
            continue
        if not UTC_OFFSET.search(str(raw).strip()):
            errors.append(RowError(source, line, "timestamp", f"missing UTC offset: {raw!r}"))
            result.append(None)
            continue
        dt = ts.floor("s").to_pydatetime()
        if not EPOCH_START <= dt < EPOCH_END:
            errors.append(
                RowError(source, line, "timestamp", f"outside [1970, 2100): {raw!r}")
            )
            result.append(None)
            continue
        result.append(dt)
    return result


def _check_ids(
    df: pd.DataFrame, names: Sequence[str], source: str, errors: List[RowError]
) -> np.ndarray:
    ok = np.ones(len(df), dtype=bool)
    for name in names:
        empty = (df[name].str.strip() == "").to_numpy()
        for i in np.flatnonzero(empty):
            errors.append(RowError(source, int(i) + 2, name, "empty identifier"))
        ok &= ~empty
    return ok


def parse_proposals(
    path: PathType, errors: List[RowError]
) -> Tuple[ProposalRecord, ...]:
    source = str(path)
    df = _read_table(path, PROPOSAL_COLUMNS)
    ok = _check_ids(df, ("dao_id", "proposal_id"), source, errors)
    timestamps = _parse_timestamps(df["timestamp"], source, errors)

    records: List[ProposalRecord] = []
    seen: Dict[Tuple[str, str], int] = {}
    for i, (dao, pid, ts) in enumerate(zip(df["dao_id"], df["proposal_id"], timestamps)):
        if not ok[i] or ts is None:
            continue
        key = (dao, pid)
        if key in seen:
            errors.append(
                RowError(
                    source,
                    i + 2,
                    "proposal_id",
                    f"duplicate proposal ({dao}, {pid}), first seen on line {seen[key]}",
                )
            )
            continue
        seen[key] = i + 2
        records.append(ProposalRecord(dao, pid, ts))
    return tuple(records)


def parse_votes(
    path: PathType,
    known_proposals: Set[Tuple[str, str]],
    errors: List[RowError],
) -> Tuple[VoteRecord, ...]:
    source = str(path)
    df = _read_table(path, VOTE_COLUMNS)
    ok = _check_ids(df, ("dao_id", "proposal_id", "voter_id"), source, errors)
    timestamps = _parse_timestamps(df["timestamp"], source, errors)
    power = pd.to_numeric(df["voting_power"], errors="coerce").to_numpy(dtype=float)

    records: List[VoteRecord] = []
    rows = zip(df["dao_id"], df["proposal_id"], df["voter_id"], df["voting_power"])
    for i, (dao, pid, voter, raw_power) in enumerate(rows):
        line = i + 2
        valid = bool(ok[i]) and timestamps[i] is not None
        p = power[i]
        if not np.isfinite(p):
            errors.append(
                RowError(source, line, "voting_power", f"not a number: {raw_power!r}")
            )
            valid = False
        elif p < 0:
            errors.append(
                RowError(source, line, "voting_power", f"negative: {raw_power!r}")
            )
            valid = False
        if ok[i] and (dao, pid) not in known_proposals:
            errors.append(
                RowError(
                    source,
                    line,
                    "proposal_id",
                    f"vote references unknown proposal (dao_id={dao}, proposal_id={pid})",
                )
            )
            valid = False
        if valid:
            ts = timestamps[i]
            assert ts is not None
            records.append(VoteRecord(dao, pid, voter, float(p), ts))
    return tuple(records)


def parse_voters(path: PathType, errors: List[RowError]) -> Tuple[VoterCount, ...]:
    source = str(path)
    df = _read_table(path, VOTER_COLUMNS)
    ok = _check_ids(df, ("dao_id",), source, errors)
    records: List[VoterCount] = []
    for i, (dao, label, raw) in enumerate(
        zip(df["dao_id"], df["quarter"], df["number_of_voters"])
    ):
        line = i + 2
        valid = bool(ok[i])
        try:
            quarter = Quarter.parse(label)
        except ValueError as e:
            errors.append(RowError(source, line, "quarter", str(e)))
            valid = False
        try:
            count = int(raw.strip())
            if count < 0:
                raise ValueError
        except ValueError:
            errors.append(
                RowError(
                    source, line, "number_of_voters", f"not a nonnegative integer: {raw!r}"
                )
            )
            valid = False
        if valid:
            records.append(VoterCount(dao, quarter, count))
    return tuple(records)


def parse_input_tables(
    proposals_path: PathType,
    votes_path: PathType,
    voters_path: Optional[PathType] = None,
    *,
    strict: bool = True,
) -> InputTables:
    """Parses the proposal, vote and (optional) voter-count CSV files.

    Every row is either parsed or reported as a :class:`RowError`; returned
    records preserve input order. With ``strict=True`` (the default) any row
    error raises an :class:`IngestError` carrying all of them.
    """
    errors: List[RowError] = []
    proposals = parse_proposals(proposals_path, errors)
    known = {(p.dao_id, p.proposal_id) for p in proposals}
    votes = parse_votes(votes_path, known, errors)
    voters = parse_voters(voters_path, errors) if voters_path is not None else None
    if errors:
        logger.warning("%d row-level errors while parsing input tables", len(errors))
        if strict:
            raise IngestError(f"{len(errors)} row-level errors in input tables", errors)
    return InputTables(proposals, votes, voters, tuple(errors))


def build_vote_shares(votes: Iterable[VoteRecord]) -> Tuple[float, ...]:
    """Realized vote shares of one DAO-quarter, sorted descending.

    Only the latest vote per (voter, proposal) counts; on equal timestamps the
    vote appearing last in input order wins. Voters whose deduplicated power
    is zero keep a share of zero. Returns an empty tuple if no power was cast.
    """
    latest: Dict[Tuple[str, str], VoteRecord] = {}
    for vote in votes:
        key = (vote.voter_id, vote.proposal_id)
        current = latest.get(key)
        if current is None or vote.timestamp >= current.timestamp:
            latest[key] = vote

    power: Dict[str, List[float]] = {}
    for (voter, _), vote in latest.items():
        power.setdefault(voter, []).append(vote.voting_power)

    # fsum is exactly rounded and therefore independent of input order
    totals = [math.fsum(p) for p in power.values()]
    grand_total = math.fsum(totals)
    if grand_total <= 0:
        return ()
    return tuple(sorted((t / grand_total for t in totals), reverse=True))


def _voters_lookup(
    voters_table: Sequence[VoterCount],
) -> Dict[Tuple[str, Quarter], int]:
    lookup: Dict[Tuple[str, Quarter], int] = {}
    for row in voters_table:
        key = (row.dao_id, row.quarter)
        if key in lookup:
            raise IngestError(
                f"duplicate voters-table row for dao_id={row.dao_id}, quarter={row.quarter}"
            )
        lookup[key] = row.number_of_voters
    return lookup


class _Cell:
    __slots__ = ("proposals", "votes")

    def __init__(self) -> None:
        self.proposals: Set[str] = set()
        self.votes: List[VoteRecord] = []


def aggregate_panel(
    proposals: Sequence[ProposalRecord],
    votes: Sequence[VoteRecord],
    voters_table: Optional[Sequence[VoterCount]] = None,
) -> List[DaoQuarterObservation]:
    """Aggregates raw records to one observation per active DAO-quarter.

    Proposals are assigned to the quarter of their own timestamp and votes to
    the quarter of the vote timestamp, so late votes can produce cells with
    zero proposals. Output is sorted by (dao_id, quarter).
    """
    lookup = _voters_lookup(voters_table) if voters_table is not None else None

    cells: Dict[Tuple[str, Quarter], _Cell] = {}
    for p in proposals:
        key = (p.dao_id, assign_quarter(p.timestamp))
        cells.setdefault(key, _Cell()).proposals.add(p.proposal_id)
    for v in votes:
        key = (v.dao_id, assign_quarter(v.timestamp))
        cells.setdefault(key, _Cell()).votes.append(v)

    if lookup is not None:
        orphans = [k for k in lookup if k not in cells]
        if orphans:
            logger.warning(
                "%d voters-table rows have no proposal or vote activity", len(orphans)
            )

    panel: List[DaoQuarterObservation] = []
    for key in sorted(cells):
        dao, quarter = key
        cell = cells[key]
        panel.append(
            DaoQuarterObservation(
                dao_id=dao,
                quarter=quarter,
                proposals=len(cell.proposals),
                active_voters=len({v.voter_id for v in cell.votes}),
                number_of_voters=None if lookup is None else lookup.get(key),
                vote_shares=build_vote_shares(cell.votes),
            )
        )
    logger.debug("aggregated %d DAO-quarter observations", len(panel))
    return panel

