from typing import Union, Tuple, Sequence
from typing_extensions import Literal

import numpy as np

# numpy.ndarray currently evaluates to Any, so these aliases mostly document intent
Array = np.ndarray
Vector = Union[np.ndarray, Sequence[float]]
Indices = Union[np.ndarray, Sequence[int]]

Labels = Tuple[str, ...]
GridTrace = Tuple[Tuple[float, float], ...]

AbsorberName = Literal["projections", "dummies"]
VariableName = Literal[
    "proposals",
    "active_voters",
    "x_lnp",
    "y_lnv",
    "load_active",
    "ell_active",
    "load_nv",
    "ell_nv",
    "hhi",
    "top3",
]
