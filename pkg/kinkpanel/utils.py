from typing import Any, overload
from typing_extensions import Literal

from .absorb import Absorber
from .absorb import AlternatingProjections
from .absorb import DummyVariables
from .types import Indices


@overload
def get_absorber(
    name: Literal["projections"],
    dao_index: Indices,
    quarter_index: Indices,
    **kwargs: Any,
) -> AlternatingProjections:
    ...


@overload
def get_absorber(
    name: Literal["dummies"], dao_index: Indices, quarter_index: Indices, **kwargs: Any
) -> DummyVariables:
    ...


@overload
def get_absorber(
    name: str, dao_index: Indices, quarter_index: Indices, **kwargs: Any
) -> Absorber:
    ...


def get_absorber(
    name: str, dao_index: Indices, quarter_index: Indices, **kwargs: Any
) -> Absorber:
    absorber: Absorber
    if name == "projections":
        absorber = AlternatingProjections(dao_index, quarter_index, **kwargs)
    elif name == "dummies":
        if kwargs:
            raise ValueError(f"dummies absorber takes no options, got {sorted(kwargs)}")
        absorber = DummyVariables(dao_index, quarter_index)
    else:
        raise ValueError(f"unknown absorber: {name}")
    return absorber
