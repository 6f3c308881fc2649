"""Synthetic class-labeled prime streams.

For class groups with no convenient small-discriminant field, the census
and statistics machinery runs on a fake site stream: every rational prime
p <= X becomes one site of norm p whose class is drawn i.i.d. from the
label law.  The generator is splitmix64 (version 1), a counter-based
64-bit mixer, so streams are identical across platforms and runs for a
fixed (group, seed, law).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .abelian import GroupSpec
from .errors import DomainError
from .primes import primes_up_to
from .quadratic import PrimeSite

_GOLDEN = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1


def splitmix64(seed: int, index: int) -> int:
    """Output #index (0-based) of the splitmix64 stream started at seed."""
    z = (seed + (index + 1) * _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SynthModel:
    """A class group, a 64-bit seed, and a label law (None means uniform)."""

    group: GroupSpec
    seed: int
    label_law: tuple[float, ...] | None = None

    def __post_init__(self):
        law = self.label_law
        if law is None:
            return
        law = tuple(float(p) for p in law)
        object.__setattr__(self, "label_law", law)
        if len(law) != self.group.h:
            raise DomainError("label law length must equal the group order")
        if any(p < 0 for p in law):
            raise DomainError("label probabilities must be nonnegative")
        if abs(sum(law) - 1.0) > 1e-9:
            raise DomainError("label probabilities must sum to 1")


def _label(model: SynthModel, index: int) -> int:
    r = splitmix64(model.seed & _MASK, index)
    if model.label_law is None:
        return r % model.group.h + 1
    u = r / 2.0**64
    acc = 0.0
    for i, p in enumerate(model.label_law):
        acc += p
        if u < acc:
            return i + 1
    return model.group.h


def synth_sites(model: SynthModel, limit: int) -> Iterator[PrimeSite]:
    """Deterministic site stream: the i-th prime gets label(seed, i)."""
    if limit < 2:
        raise DomainError("site stream needs limit >= 2")
    for i, p in enumerate(primes_up_to(limit)):
        yield PrimeSite(i, p, p, "synthetic", _label(model, i), i)
