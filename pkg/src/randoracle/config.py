"""Size caps that keep exhaustive computations at desk scale.

All caps are read through :data:`caps`; use :func:`override_caps` to raise
or lower them temporarily.
"""
from __future__ import annotations

import contextlib
import dataclasses

from .errors import CapExceeded


@dataclasses.dataclass
class Caps:
    #: largest M for which S_M is enumerated
    enumeration: int = 6
    #: largest encoding dimension (N*M^2)^k for exact states
    state_dim: int = 10**6
    #: largest number of (query, outcome) cells a transcript law may have
    transcript_cells: int = 5 * 10**7
    #: largest Simon degree n
    simon_degree: int = 4


caps = Caps()


@contextlib.contextmanager
def override_caps(**changes):
    old = dataclasses.asdict(caps)
    for key, value in changes.items():
        if not hasattr(caps, key):
            raise KeyError(key)
        setattr(caps, key, value)
    try:
        yield caps
    finally:
        for key, value in old.items():
            setattr(caps, key, value)


def check_cap(name: str, value: int, what: str = "") -> None:
    limit = getattr(caps, name)
    if value > limit:
        raise CapExceeded(f"{what or name} = {value} exceeds cap {name}={limit}")
