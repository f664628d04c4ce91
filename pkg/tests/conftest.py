from pathlib import Path
from typing import Any, Callable, List, Optional, Sequence
import pytest
import kinkpanel as kp
from kinkpanel.ingest import DaoQuarterObservation
from kinkpanel.metrics import DerivedObservation
from kinkpanel.synth import DgpConfig, SyntheticPanel, generate_panel
from kinkpanel.types import AbsorberName

DATA = Path(__file__).parent / "data"


def pytest_addoption(parser: Any) -> None:
    parser.addoption("--absorber", default="projections")


@pytest.fixture(scope="session")
def absorber(request: Any) -> AbsorberName:
    name: str = request.config.option.absorber
    if name not in ("projections", "dummies"):
        pytest.skip(f"unknown absorber {name}")
    return name  # type: ignore


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


def make_obs(
    dao: str,
    quarter: str,
    proposals: int = 3,
    active_voters: int = 5,
    number_of_voters: Optional[int] = None,
    shares: Sequence[float] = (0.5, 0.3, 0.2),
) -> DerivedObservation:
    return kp.derive_variables(
        DaoQuarterObservation(
            dao,
            kp.Quarter.parse(quarter),
            proposals,
            active_voters,
            number_of_voters,
            tuple(shares),
        )
    )


@pytest.fixture(scope="session")
def obs() -> Callable[..., DerivedObservation]:
    return make_obs


@pytest.fixture(scope="session")
def small_config() -> DgpConfig:
    return DgpConfig(n_daos=30, n_quarters=6, seed=7)


@pytest.fixture(scope="session")
def small_panel(small_config: DgpConfig) -> SyntheticPanel:
    return generate_panel(small_config)


@pytest.fixture(scope="session")
def strong_kink() -> SyntheticPanel:
    return generate_panel(DgpConfig(noise_sd=0.1, seed=11))


@pytest.fixture
def panel_rows(small_panel: SyntheticPanel) -> List[DerivedObservation]:
    return list(small_panel.panel)
