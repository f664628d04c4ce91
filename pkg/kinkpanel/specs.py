"""Registry of the estimated specifications."""

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .asdataset import PanelDataset, asdataset
from .errors import SpecError
from .metrics import DerivedObservation, SampleKind, select_sample
from .types import VariableName


@dataclass(frozen=True)
class EstimationSpec:
    name: str
    outcome: VariableName
    running: VariableName
    sample: SampleKind
    cutoff_name: str
    title: str
    outcome_label: str
    running_label: str

    @property
    def requires_voters(self) -> bool:
        # the recorded-voter load exists only with a voters table
        return self.running == "ell_nv"

    def dataset(self, panel: Sequence[DerivedObservation]) -> PanelDataset:
        return asdataset(select_sample(panel, self.sample), self.outcome, self.running)


_LNP = "ln(1+proposals)"
_LOAD = "ln(1+proposals/active voters)"
_NVLOAD = "ln(1+proposals/recorded voters)"

# fmt: off
SPECS: Tuple[EstimationSpec, ...] = (
    EstimationSpec(
        "capacity", "y_lnv", "x_lnp", SampleKind.CAPACITY, "c_cap",
        "Participation capacity", "ln(active voters)", _LNP,
    ),
    EstimationSpec(
        "hhi-load", "hhi", "ell_active", SampleKind.HARMONIZED, "c_HHI,L",
        "Concentration and monitoring load", "HHI", _LOAD,
    ),
    EstimationSpec(
        "top3-load", "top3", "ell_active", SampleKind.HARMONIZED, "c_Top3,L",
        "Concentration and monitoring load", "Top-3 control share", _LOAD,
    ),
    EstimationSpec(
        "hhi-scale", "hhi", "x_lnp", SampleKind.HARMONIZED, "c_HHI,P",
        "Concentration and proposal scale", "HHI", _LNP,
    ),
    EstimationSpec(
        "top3-scale", "top3", "x_lnp", SampleKind.HARMONIZED, "c_Top3,P",
        "Concentration and proposal scale", "Top-3 control share", _LNP,
    ),
    EstimationSpec(
        "hhi-nvload", "hhi", "ell_nv", SampleKind.ALT_LOAD, "c_HHI,NV",
        "Alternative monitoring load", "HHI", _NVLOAD,
    ),
    EstimationSpec(
        "top3-nvload", "top3", "ell_nv", SampleKind.ALT_LOAD, "c_Top3,NV",
        "Alternative monitoring load", "Top-3 control share", _NVLOAD,
    ),
)
# fmt: on

_BY_NAME: Dict[str, EstimationSpec] = {spec.name: spec for spec in SPECS}

SPEC_NAMES: Tuple[str, ...] = tuple(_BY_NAME)

DEFAULT_BOOTSTRAP_SPECS: Tuple[EstimationSpec, ...] = SPECS[:5]


def get_spec(name: str) -> EstimationSpec:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise SpecError(
            f"unknown spec: {name!r} (choose from {', '.join(SPEC_NAMES)})"
        ) from None


def get_specs(names: Sequence[str]) -> List[EstimationSpec]:
    return [get_spec(name) for name in names]
