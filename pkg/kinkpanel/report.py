"""Aligned-text and CSV renderings of fits, descriptive tables and bootstrap summaries."""

from os import PathLike
from pathlib import Path
from typing import List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union
import math

import pandas as pd

from .bootstrap import BootstrapSummary
from .kink import BinnedPoint, KinkFit, LinearFit
from .metrics import DescriptiveTable, QuarterTrend, SampleKind
from .specs import EstimationSpec

PathType = Union[str, "PathLike[str]"]

FIT_ROWS = (
    "Observations",
    "Estimated cutoff",
    "Slope below cutoff",
    "Slope above cutoff",
    "p-value (kink)",
)

STAR_NOTE = "* p<0.10, ** p<0.05, *** p<0.01"


class Report(NamedTuple):
    text: str
    table: pd.DataFrame


def stars(p: float) -> str:
    if math.isnan(p):
        return ""
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.10:
        return "*"
    return ""


def _coef(value: float, p: float) -> str:
    return f"{value:.3f}{stars(p)}"


def _se(value: float) -> str:
    return f"({value:.3f})"


def _align(rows: Sequence[Tuple[str, ...]]) -> List[str]:
    widths = [max(len(row[j]) for row in rows) for j in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0])]
        cells += [cell.rjust(w) for cell, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return lines


def _frame(rows: Sequence[Tuple[str, ...]], columns: Sequence[str]) -> pd.DataFrame:
    return pd.DataFrame.from_records(list(rows), columns=list(columns))


def fit_rows(fit: KinkFit, linear: LinearFit, spec: EstimationSpec) -> List[Tuple[str, str, str]]:
    return [
        (spec.running_label, _coef(linear.beta, linear.p), _coef(fit.beta1, fit.p_beta1)),
        ("", _se(linear.se), _se(fit.se_beta1)),
        (f"({spec.running_label} - c)+", "", _coef(fit.beta2, fit.p_kink)),
        ("", "", _se(fit.se_beta2)),
        ("Observations", str(linear.n_obs), str(fit.n_obs)),
        ("Estimated cutoff", "", f"{fit.cutoff:.4f}"),
        ("Slope below cutoff", "", f"{fit.slope_below:.3f}"),
        ("Slope above cutoff", "", f"{fit.slope_above:.3f}"),
        ("p-value (kink)", "", f"{fit.p_kink:.4f}"),
    ]


def render_report(fit: KinkFit, linear: LinearFit, spec: EstimationSpec) -> Report:
    """Two-column (linear, kink) results table, as text and as a CSV frame"""
    if fit.n_obs != linear.n_obs:
        raise ValueError(
            f"linear and kink fits use different samples ({linear.n_obs} vs {fit.n_obs})"
        )
    rows = fit_rows(fit, linear, spec)
    body = _align([("", "(1) Linear", "(2) Kink")] + rows)
    rule = "-" * max(len(line) for line in body)
    lines = [
        f"{spec.title} ({spec.name})",
        f"Dependent variable: {spec.outcome_label}",
        rule,
        body[0],
        rule,
        *body[1:5],
        rule,
        *body[5:],
        rule,
        "Two-way (DAO and quarter) fixed effects. Standard errors clustered by DAO",
        f"in parentheses; p-values from a t distribution with G - 1 = {fit.n_clusters - 1}",
        "degrees of freedom. The cutoff is selected by grid search and p-value (kink)",
        "does not account for the search.",
        STAR_NOTE,
    ]
    return Report("\n".join(lines) + "\n", _frame(rows, ("row", "linear", "kink")))


def write_csv(frame: pd.DataFrame, path: PathType) -> None:
    frame.to_csv(path, index=False, lineterminator="\n")


def write_report(report: Report, stem: PathType) -> Tuple[Path, Path]:
    text_path = Path(f"{stem}.txt")
    csv_path = Path(f"{stem}.csv")
    text_path.write_text(report.text, encoding="utf-8")
    write_csv(report.table, csv_path)
    return text_path, csv_path


def grid_frame(fit: KinkFit) -> pd.DataFrame:
    return pd.DataFrame(list(fit.grid), columns=["cutoff", "rss"])


def binned_frame(points: Sequence[BinnedPoint]) -> pd.DataFrame:
    return pd.DataFrame(
        [(p.bin_center, p.outcome_residual, p.count) for p in points],
        columns=["bin_center", "outcome_residual", "count"],
    )


def _number(value: Optional[float], digits: int = 3) -> str:
    return "" if value is None else f"{value:.{digits}f}"


def describe_frame(tables: Mapping[SampleKind, DescriptiveTable]) -> pd.DataFrame:
    records = []
    for kind, table in tables.items():
        for v in table.variables:
            records.append((kind.value, v.name, v.label, v.n, v.mean, v.sd, v.median))
    return pd.DataFrame(
        records, columns=["sample", "variable", "label", "n", "mean", "sd", "median"]
    )


def render_describe(tables: Mapping[SampleKind, DescriptiveTable]) -> str:
    blocks = []
    for kind, table in tables.items():
        rows = [("", "N", "Mean", "SD", "Median")]
        rows += [
            (v.label, str(v.n), _number(v.mean), _number(v.sd), _number(v.median))
            for v in table.variables
        ]
        blocks.append(
            "\n".join(
                [
                    f"Sample: {kind.value}",
                    f"{table.dao_quarters} DAO-quarters, {table.daos} DAOs,"
                    f" {table.quarters} quarters ({table.first_quarter}-{table.last_quarter})",
                    *_align(rows),
                ]
            )
        )
    return "\n\n".join(blocks) + "\n"


def trends_frame(trends: Sequence[QuarterTrend]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            (str(t.quarter), t.daos, t.proposals_total, t.proposals_mean, t.hhi_mean, t.top3_mean)
            for t in trends
        ],
        columns=["quarter", "daos", "proposals_total", "proposals_mean", "hhi_mean", "top3_mean"],
    )


def bootstrap_frame(summaries: Sequence[BootstrapSummary]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            (s.cutoff_name, s.replications_completed, s.failures, s.mean, s.p50, s.p2_5, s.p97_5)
            for s in summaries
        ],
        columns=["cutoff_name", "reps", "failures", "mean", "p50", "p2_5", "p97_5"],
    )


def draws_frame(summaries: Sequence[BootstrapSummary]) -> pd.DataFrame:
    # specs can have different numbers of completed draws
    return pd.DataFrame({s.cutoff_name: pd.Series(s.draws, dtype=float) for s in summaries})


def render_bootstrap(summaries: Sequence[BootstrapSummary]) -> str:
    rows = [("Cutoff", "Reps", "Failures", "Mean", "P50", "P2.5", "P97.5")]
    rows += [
        (
            s.cutoff_name,
            str(s.replications_completed),
            str(s.failures),
            f"{s.mean:.3f}",
            f"{s.p50:.3f}",
            f"{s.p2_5:.3f}",
            f"{s.p97_5:.3f}",
        )
        for s in summaries
    ]
    return "\n".join(_align(rows)) + "\n"
