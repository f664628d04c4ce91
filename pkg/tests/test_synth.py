from pathlib import Path
from typing import Any, Callable
import logging
import pytest
import numpy as np
from numpy.testing import assert_allclose
import kinkpanel as kp
from kinkpanel.errors import ConfigError
from kinkpanel.ingest import PROPOSAL_COLUMNS, VOTE_COLUMNS
from kinkpanel.metrics import DerivedObservation
from kinkpanel.synth import (
    DgpConfig,
    SyntheticPanel,
    generate_panel,
    read_dgp_config,
    write_records,
)

Obs = Callable[..., DerivedObservation]


def test_deterministic_linear_outcome() -> None:
    config = DgpConfig(
        n_daos=10,
        n_quarters=4,
        intercept=0.0,
        dao_fe_sd=0.0,
        quarter_fe_sd=0.0,
        noise_sd=0.0,
        beta2=0.0,
    )
    for obs in generate_panel(config).panel:
        assert obs.y_lnv == pytest.approx(1.1 * obs.x_lnp, abs=1e-12)


def test_generate_is_deterministic(small_config: DgpConfig) -> None:
    assert generate_panel(small_config) == generate_panel(small_config)
    other = generate_panel(DgpConfig(n_daos=30, n_quarters=6, seed=8))
    assert other.panel != generate_panel(small_config).panel


def test_panel_layout(small_panel: SyntheticPanel) -> None:
    panel = small_panel.panel
    assert len(panel) == 180
    assert panel[0].dao_id == "dao00"
    assert panel[-1].dao_id == "dao29"
    assert [str(o.quarter) for o in panel[:6]] == [
        "2020q1",
        "2020q2",
        "2020q3",
        "2020q4",
        "2021q1",
        "2021q2",
    ]
    for obs in panel:
        assert obs.x_lnp == pytest.approx(np.log1p(obs.proposals))
        assert obs.active_voters >= 1
        assert obs.number_of_voters is None and obs.ell_nv is None
        assert 0 < obs.hhi <= 1  # type: ignore
        assert sum(obs.vote_shares) == pytest.approx(1.0)
    assert small_panel.cutoff_interior


def test_cutoff_outside_range_warns(caplog: Any) -> None:
    caplog.set_level(logging.WARNING, logger="kinkpanel")
    synthetic = generate_panel(DgpConfig(n_daos=20, n_quarters=3, true_cutoff=10.0))
    assert not synthetic.cutoff_interior
    assert "outside the P10-P90 range" in caplog.text


def test_concentration_outcomes() -> None:
    synthetic = generate_panel(DgpConfig(outcome_kind="concentration", n_daos=40, seed=2))
    for obs in synthetic.panel:
        assert 0.1 <= obs.hhi <= 0.9  # type: ignore
        assert obs.hhi <= obs.top3 <= 1.0  # type: ignore
        assert obs.vote_shares == ()
        assert obs.y_lnv == pytest.approx(np.log(obs.active_voters))


def test_running_spread_grows_with_sigma() -> None:
    def spread(sigma: float) -> float:
        panel = generate_panel(DgpConfig(proposal_sigma=sigma, seed=1)).panel
        x = np.array([o.x_lnp for o in panel])
        return kp.percentile(x, 90) - kp.percentile(x, 10)

    assert spread(0.5) < spread(1.0) < spread(1.5)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n_daos=0),
        dict(noise_sd=-0.1),
        dict(outcome_kind="turnout"),
        dict(seed=-1),
        dict(first_quarter="2020-01"),
    ],
)
def test_invalid_config(kwargs: Any) -> None:
    with pytest.raises(ValueError):
        DgpConfig(**kwargs)


ROUND_TRIP_CONFIGS = [
    dict(n_daos=1 + (7 * seed) % 40, n_quarters=1 + seed % 5, seed=seed) for seed in range(20)
]


@pytest.mark.parametrize("shape", ROUND_TRIP_CONFIGS)
def test_records_aggregate_back(shape: Any, tmp_path: Path) -> None:
    config = DgpConfig(intercept=0.5, power_skew=0.7, proposal_mu=0.3, **shape)
    synthetic = generate_panel(config)
    proposals, votes = write_records(synthetic, tmp_path)
    tables = kp.parse_input_tables(proposals, votes)
    panel = kp.aggregate_panel(tables.proposals, tables.votes)

    assert [(o.dao_id, o.quarter, o.proposals, o.active_voters) for o in panel] == [
        (o.dao_id, o.quarter, o.proposals, o.active_voters) for o in synthetic.panel
    ]
    for rebuilt, original in zip(kp.derive_panel(panel), synthetic.panel):
        assert_allclose(rebuilt.vote_shares, original.vote_shares, rtol=1e-12)
        assert rebuilt.hhi == pytest.approx(original.hhi, rel=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_every_dao_has_a_proposal(seed: int) -> None:
    synthetic = generate_panel(DgpConfig(n_quarters=1, proposal_mu=0.0, seed=seed))
    assert len(synthetic.panel) == 150
    assert all(obs.proposals >= 1 for obs in synthetic.panel)
    proposals, votes = kp.export_records(synthetic)
    assert set(votes["dao_id"]) <= set(proposals["dao_id"])
    assert len(votes) == sum(obs.active_voters for obs in synthetic.panel)


def test_export_small_cell(obs: Obs) -> None:
    synthetic = SyntheticPanel((obs("A", "2021q2", proposals=2, active_voters=3),), DgpConfig())
    proposals, votes = kp.export_records(synthetic)
    assert list(proposals["proposal_id"]) == ["A-2021q2-p0", "A-2021q2-p1"]
    assert list(votes["proposal_id"]) == ["A-2021q2-p0", "A-2021q2-p1", "A-2021q2-p0"]
    assert list(votes["voter_id"]) == ["A-v0", "A-v1", "A-v2"]
    assert_allclose(votes["voting_power"], [1.0, 0.5, 1 / 3])
    assert proposals["timestamp"][0] == "2021-05-16T00:00:00Z"


def test_export_zero_proposal_cell(obs: Obs) -> None:
    synthetic = SyntheticPanel(
        (
            obs("A", "2021q1", proposals=1, active_voters=1),
            obs("A", "2021q2", proposals=0, active_voters=2),
        ),
        DgpConfig(),
    )
    _, votes = kp.export_records(synthetic)
    assert list(votes["proposal_id"]) == ["A-2021q1-p0"] * 3


def test_export_empty_panel(tmp_path: Path) -> None:
    proposals, votes = write_records(SyntheticPanel((), DgpConfig()), tmp_path)
    assert proposals.read_text() == ",".join(PROPOSAL_COLUMNS) + "\n"
    assert votes.read_text() == ",".join(VOTE_COLUMNS) + "\n"


def test_read_dgp_config(tmp_path: Path) -> None:
    path = tmp_path / "dgp.txt"
    path.write_text("# small run\nn_daos = 12\nbeta2 = -0.3\noutcome-kind = concentration\n")
    config = read_dgp_config(path)
    assert config == DgpConfig(n_daos=12, beta2=-0.3, outcome_kind="concentration")


@pytest.mark.parametrize(
    "text", ["n_firms = 3\n", "n_daos = many\n", "noise_sd = -1\n", "n_daos\n"]
)
def test_read_dgp_config_errors(text: str, tmp_path: Path) -> None:
    path = tmp_path / "dgp.txt"
    path.write_text(text)
    with pytest.raises(ConfigError):
        read_dgp_config(path)
    with pytest.raises(ConfigError):
        read_dgp_config(tmp_path / "missing.txt")
