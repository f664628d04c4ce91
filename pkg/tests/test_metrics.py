from pathlib import Path
from typing import Callable, List
import math
import pytest
import numpy as np
from numpy.testing import assert_allclose
import kinkpanel as kp
from kinkpanel import SampleKind
from kinkpanel.errors import IngestError
from kinkpanel.metrics import (
    DerivedObservation,
    PANEL_COLUMNS,
    panel_frame,
    quarterly_trends,
    sample_requirements,
)
from kinkpanel.synth import SyntheticPanel

Obs = Callable[..., DerivedObservation]


def test_zero_proposal_cell(obs: Obs) -> None:
    o = obs("d1", "2021q1", proposals=0, active_voters=1, shares=(1.0,))
    assert o.x_lnp == 0.0
    assert o.y_lnv == 0.0
    assert o.load_active == 0.0
    assert o.ell_active == 0.0


def test_derive_variables(obs: Obs) -> None:
    o = obs("d1", "2021q1", proposals=9, active_voters=3, number_of_voters=12)
    assert_allclose(o.x_lnp, 2.302585, atol=1e-6)
    assert_allclose(o.y_lnv, math.log(3))
    assert_allclose(o.load_active, 3.0)
    assert_allclose(o.ell_active, math.log(4.0))
    assert_allclose(o.load_nv, 0.75)
    assert_allclose(o.ell_nv, math.log(1.75))
    assert_allclose(o.hhi, 0.38)
    assert_allclose(o.top3, 1.0)


def test_derive_absent_values(obs: Obs) -> None:
    o = obs("d1", "2021q1", proposals=2, active_voters=0, number_of_voters=0, shares=())
    assert o.y_lnv is None
    assert o.load_active is None and o.ell_active is None
    assert o.load_nv is None and o.ell_nv is None
    assert o.hhi is None and o.top3 is None
    assert obs("d1", "2021q1").load_nv is None


def test_cutoff_in_proposals() -> None:
    assert_allclose(math.expm1(2.3441), 9.42, atol=0.01)


def test_log1p_monotone(obs: Obs) -> None:
    xs = [obs("d1", "2021q1", proposals=p).x_lnp for p in range(50)]
    assert xs[0] == 0.0
    assert all(a < b for a, b in zip(xs, xs[1:]))


def fixture_panel(obs: Obs) -> List[DerivedObservation]:
    rows = [obs(f"d{i}", "2021q1", proposals=i, active_voters=2 + i) for i in range(7)]
    rows.append(obs("d7", "2021q2", active_voters=0, shares=()))
    rows.append(obs("d8", "2021q2", active_voters=4, shares=()))
    rows.append(obs("d9", "2021q3", active_voters=4, shares=()))
    return rows


def test_select_sample_counts(obs: Obs) -> None:
    panel = fixture_panel(obs)
    sizes = [len(kp.select_sample(panel, kind)) for kind in kp.metrics.NESTED_SAMPLES]
    assert sizes == [10, 9, 7]
    assert kp.select_sample(panel, SampleKind.ALT_LOAD) == []


def test_select_sample_order_and_noop(obs: Obs) -> None:
    panel = [obs(f"d{i}", "2021q1", number_of_voters=10) for i in range(5)][::-1]
    for kind in SampleKind:
        assert kp.select_sample(panel, kind) == panel


def test_nested_samples_random(obs: Obs) -> None:
    rng = np.random.default_rng(3)
    for _ in range(50):
        panel = []
        for i in range(int(rng.integers(1, 30))):
            voters = int(rng.integers(0, 4))
            shares = () if voters == 0 or rng.random() < 0.2 else (1.0,)
            panel.append(obs(f"d{i}", "2021q1", int(rng.integers(0, 9)), voters, None, shares))
        full, cap, harm = (len(kp.select_sample(panel, k)) for k in kp.metrics.NESTED_SAMPLES)
        assert full >= cap >= harm


def test_sample_requirements() -> None:
    assert sample_requirements(SampleKind.FULL) == ()
    assert "ell_nv" in sample_requirements(SampleKind.ALT_LOAD)
    assert set(sample_requirements(SampleKind.CAPACITY)) <= set(
        sample_requirements(SampleKind.HARMONIZED)
    )


def test_hhi_below_top3(panel_rows: List[DerivedObservation]) -> None:
    for o in panel_rows:
        assert o.hhi is not None and o.top3 is not None
        assert 1.0 / o.active_voters - 1e-12 <= o.hhi <= o.top3 <= 1.0 + 1e-12


def test_describe_single(obs: Obs) -> None:
    table = kp.describe_sample([obs("d1", "2021q1", proposals=4)])
    row = table.variables[0]
    assert (row.name, row.n, row.mean, row.median, row.sd) == ("proposals", 1, 4.0, 4.0, None)
    assert (table.dao_quarters, table.daos, table.quarters) == (1, 1, 1)


def test_describe_moments(obs: Obs) -> None:
    panel = [obs("d1", "2021q2", proposals=1), obs("d2", "2021q4", proposals=3)]
    table = kp.describe_sample(panel)
    proposals = table.variables[0]
    assert proposals.mean == 2.0
    assert_allclose(proposals.sd, math.sqrt(2))
    assert proposals.median == 2.0
    assert str(table.first_quarter) == "2021q2"
    assert str(table.last_quarter) == "2021q4"
    assert (table.daos, table.quarters) == (2, 2)


def test_describe_nonmissing_counts(obs: Obs) -> None:
    table = kp.describe_sample(fixture_panel(obs))
    counts = {v.name: v.n for v in table.variables}
    assert counts["proposals"] == 10
    assert counts["y_lnv"] == 9
    assert counts["hhi"] == 7
    assert [v.name for v in table.variables] == [
        "proposals",
        "active_voters",
        "x_lnp",
        "y_lnv",
        "load_active",
        "ell_active",
        "hhi",
        "top3",
    ]


def test_describe_empty() -> None:
    with pytest.raises(ValueError):
        kp.describe_sample([])


def test_describe_samples(obs: Obs) -> None:
    tables = kp.describe_samples(fixture_panel(obs))
    assert list(tables) == [SampleKind.FULL, SampleKind.CAPACITY, SampleKind.HARMONIZED]
    assert [t.dao_quarters for t in tables.values()] == [10, 9, 7]


def test_quarterly_trends(obs: Obs) -> None:
    panel = [
        obs("d1", "2021q1", proposals=2),
        obs("d2", "2021q1", proposals=4, shares=()),
        obs("d1", "2021q2", proposals=1, shares=(1.0,)),
    ]
    first, second = quarterly_trends(panel)
    assert (str(first.quarter), first.daos, first.proposals_total) == ("2021q1", 2, 6)
    assert first.proposals_mean == 3.0
    assert_allclose(first.hhi_mean, 0.38)
    assert second.hhi_mean == 1.0 and second.top3_mean == 1.0


def test_panel_round_trip(tmp_path: Path, obs: Obs) -> None:
    panel = fixture_panel(obs) + [obs("d5", "2021q4", number_of_voters=8)]
    path = tmp_path / "panel.csv"
    kp.write_panel(panel, path)
    assert path.read_text().splitlines()[0] == ",".join(PANEL_COLUMNS)
    restored = kp.read_panel(path)
    assert len(restored) == len(panel)
    for a, b in zip(panel, restored):
        assert (a.dao_id, a.quarter, a.proposals, a.active_voters) == (
            b.dao_id,
            b.quarter,
            b.proposals,
            b.active_voters,
        )
        assert a.number_of_voters == b.number_of_voters
        for name in ("x_lnp", "y_lnv", "ell_active", "ell_nv", "hhi", "top3"):
            if a.get(name) is None:
                assert b.get(name) is None
            else:
                assert_allclose(b.get(name), a.get(name), rtol=1e-12)


def test_panel_frame_types(small_panel: SyntheticPanel) -> None:
    df = panel_frame(small_panel.panel)
    assert list(df.columns) == list(PANEL_COLUMNS)
    assert str(df["number_of_voters"].dtype) == "Int64"
    assert len(df) == len(small_panel.panel)


def test_read_panel_errors(tmp_path: Path) -> None:
    with pytest.raises(IngestError, match="missing file"):
        kp.read_panel(tmp_path / "none.csv")
    bad = tmp_path / "bad.csv"
    bad.write_text("dao_id,quarter\nd1,2021q1\n")
    with pytest.raises(IngestError, match="malformed header"):
        kp.read_panel(bad)
