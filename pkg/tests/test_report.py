from pathlib import Path
from typing import Callable
import math
import pytest
import numpy as np
import pandas as pd
import kinkpanel as kp
from kinkpanel.bootstrap import BootstrapSummary
from kinkpanel.kink import BinnedPoint, KinkFit, LinearFit
from kinkpanel.metrics import DerivedObservation, quarterly_trends
from kinkpanel.report import (
    binned_frame,
    bootstrap_frame,
    describe_frame,
    draws_frame,
    grid_frame,
    render_bootstrap,
    render_describe,
    stars,
    trends_frame,
    write_report,
)
from kinkpanel.specs import get_spec

Obs = Callable[..., DerivedObservation]


@pytest.fixture
def capacity_fit() -> KinkFit:
    return KinkFit(
        cutoff=2.3441,
        beta1=1.104,
        beta2=-0.503,
        se_beta1=0.2,
        se_beta2=0.198,
        p_beta1=1e-5,
        p_kink=0.0123,
        t_kink=-2.54,
        se_slope_above=0.15,
        rss=12.5,
        n_obs=680,
        n_clusters=120,
        n_periods=12,
        grid=((2.0, 13.0), (2.3441, 12.5)),
    )


@pytest.fixture
def capacity_linear() -> LinearFit:
    return LinearFit(beta=0.85, se=0.1, p=0.0001, t=8.5, rss=13.1, n_obs=680, n_clusters=120)


@pytest.mark.parametrize(
    "p,expected",
    [(0.0001, "***"), (0.0123, "**"), (0.07, "*"), (0.5, ""), (0.01, "**"), (math.nan, "")],
)
def test_stars(p: float, expected: str) -> None:
    assert stars(p) == expected


def test_report_matches_golden_csv(
    capacity_fit: KinkFit, capacity_linear: LinearFit, data_dir: Path, tmp_path: Path
) -> None:
    report = kp.render_report(capacity_fit, capacity_linear, get_spec("capacity"))
    _, csv_path = write_report(report, tmp_path / "fit_capacity")
    expected = (data_dir / "report_capacity.csv").read_text()
    assert csv_path.read_text() == expected
    assert (tmp_path / "fit_capacity.txt").read_text() == report.text


def test_report_text(capacity_fit: KinkFit, capacity_linear: LinearFit) -> None:
    text = kp.render_report(capacity_fit, capacity_linear, get_spec("capacity")).text
    assert text.startswith("Participation capacity (capacity)\n")
    assert "Dependent variable: ln(active voters)" in text
    for label in ("Observations", "Estimated cutoff", "Slope above cutoff", "p-value (kink)"):
        assert label in text
    assert "-0.503**" in text and "0.601" in text
    assert "G - 1 = 119" in text
    assert text.endswith("* p<0.10, ** p<0.05, *** p<0.01\n")


def test_report_rejects_mismatched_samples(
    capacity_fit: KinkFit, capacity_linear: LinearFit
) -> None:
    other = LinearFit(beta=0.85, se=0.1, p=0.0001, t=8.5, rss=13.1, n_obs=679, n_clusters=120)
    with pytest.raises(ValueError):
        kp.render_report(capacity_fit, other, get_spec("capacity"))


def test_grid_and_binned_frames(capacity_fit: KinkFit) -> None:
    grid = grid_frame(capacity_fit)
    assert list(grid.columns) == ["cutoff", "rss"]
    assert grid["rss"].tolist() == [13.0, 12.5]
    binned = binned_frame([BinnedPoint(-0.5, -0.4, 3), BinnedPoint(0.5, 0.3, 3)])
    assert list(binned.columns) == ["bin_center", "outcome_residual", "count"]
    assert binned["count"].tolist() == [3, 3]


def test_describe_outputs(obs: Obs) -> None:
    panel = [
        obs("A", "2021q1", proposals=3),
        obs("A", "2021q2", proposals=0, active_voters=0, shares=()),
        obs("B", "2021q1", proposals=5),
    ]
    tables = kp.describe_samples(panel)
    frame = describe_frame(tables)
    assert list(frame.columns) == ["sample", "variable", "label", "n", "mean", "sd", "median"]
    full = frame[(frame["sample"] == "full") & (frame["variable"] == "proposals")]
    assert full["n"].tolist() == [3]
    assert full["mean"].tolist() == [pytest.approx(8 / 3)]
    text = render_describe(tables)
    assert "Sample: full" in text and "Sample: capacity" in text
    assert "3 DAO-quarters, 2 DAOs, 2 quarters (2021q1-2021q2)" in text

    trends = trends_frame(quarterly_trends(panel))
    assert trends["quarter"].tolist() == ["2021q1", "2021q2"]
    assert trends["proposals_total"].tolist() == [8, 0]


def test_bootstrap_outputs() -> None:
    summaries = [
        BootstrapSummary("c_cap", 3, 0, 2.0, 2.0, 1.9, 2.1, (1.9, 2.0, 2.1)),
        BootstrapSummary("c_HHI,L", 2, 1, 0.5, 0.5, 0.4, 0.6, (0.4, 0.6)),
    ]
    frame = bootstrap_frame(summaries)
    assert frame["reps"].tolist() == [3, 2]
    draws = draws_frame(summaries)
    assert list(draws.columns) == ["c_cap", "c_HHI,L"]
    assert len(draws) == 3
    assert np.isnan(draws["c_HHI,L"][2])
    assert isinstance(draws, pd.DataFrame)
    text = render_bootstrap(summaries)
    assert text.splitlines()[0].split() == ["Cutoff", "Reps", "Failures", "Mean", "P50", "P2.5", "P97.5"]
    assert "c_HHI,L" in text
