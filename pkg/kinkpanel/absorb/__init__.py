from .base import Absorber  # noqa: F401
from .base import dense_codes  # noqa: F401

from .projections import AlternatingProjections  # noqa: F401
from .dummies import DummyVariables  # noqa: F401
from .dummies import indicator_matrix  # noqa: F401
