from os.path import join as _join
from os.path import dirname as _dirname

with open(_join(_dirname(__file__), "VERSION")) as _f:
    __version__ = _f.read().strip()


from . import types  # noqa: F401,E402
from . import errors  # noqa: F401,E402
from .errors import KinkPanelError  # noqa: F401,E402

from .quarter import Quarter  # noqa: F401,E402
from .quarter import assign_quarter  # noqa: F401,E402

from .ingest import parse_input_tables  # noqa: F401,E402
from .ingest import build_vote_shares  # noqa: F401,E402
from .ingest import aggregate_panel  # noqa: F401,E402

from . import concentration  # noqa: F401,E402
from .concentration import hhi  # noqa: F401,E402
from .concentration import top_k_share  # noqa: F401,E402
from .concentration import top3  # noqa: F401,E402

from .metrics import SampleKind  # noqa: F401,E402
from .metrics import derive_variables  # noqa: F401,E402
from .metrics import derive_panel  # noqa: F401,E402
from .metrics import select_sample  # noqa: F401,E402
from .metrics import describe_sample  # noqa: F401,E402
from .metrics import describe_samples  # noqa: F401,E402
from .metrics import read_panel  # noqa: F401,E402
from .metrics import write_panel  # noqa: F401,E402

from .absorb import Absorber  # noqa: F401,E402
from .absorb import AlternatingProjections  # noqa: F401,E402
from .absorb import DummyVariables  # noqa: F401,E402

from . import utils  # noqa: F401,E402

from .asdataset import PanelDataset  # noqa: F401,E402
from .asdataset import asdataset  # noqa: F401,E402

from .regression import percentile  # noqa: F401,E402
from .regression import kink_basis  # noqa: F401,E402
from .regression import within_transform  # noqa: F401,E402
from .regression import ols_fit  # noqa: F401,E402
from .regression import clustered_inference  # noqa: F401,E402

from .kink import KinkFit  # noqa: F401,E402
from .kink import LinearFit  # noqa: F401,E402
from .kink import BinnedPoint  # noqa: F401,E402
from .kink import candidate_grid  # noqa: F401,E402
from .kink import fit_kink_at  # noqa: F401,E402
from .kink import fit_linear  # noqa: F401,E402
from .kink import select_breakpoint  # noqa: F401,E402
from .kink import estimate_kink  # noqa: F401,E402
from .kink import binned_residuals  # noqa: F401,E402

from .specs import get_spec  # noqa: F401,E402

from .bootstrap import BootstrapConfig  # noqa: F401,E402
from .bootstrap import resample_clusters  # noqa: F401,E402
from .bootstrap import bootstrap_breakpoints  # noqa: F401,E402
from .bootstrap import summarize_draws  # noqa: F401,E402

from .synth import DgpConfig  # noqa: F401,E402
from .synth import generate_panel  # noqa: F401,E402
from .synth import export_records  # noqa: F401,E402

from .report import render_report  # noqa: F401,E402
