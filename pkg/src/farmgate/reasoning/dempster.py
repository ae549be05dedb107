"""Dempster-Shafer evidence combination over a frame of discernment.

A basic belief assignment (BBA) puts mass on non-empty subsets of the
frame; mass on the whole frame represents ignorance.  Dempster's rule
multiplies masses pairwise, sends each product to the intersection of its
focal sets, measures the mass landing on the empty set as the conflict K,
and renormalizes the rest by 1 - K.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from farmgate.model import FarmgateError

MASS_SUM_TOLERANCE = 1e-9
TOTAL_CONFLICT_TOLERANCE = 1e-12


class TotalConflictError(FarmgateError, ArithmeticError):
    """The sources are fully contradictory (K == 1); combination is undefined."""


@dataclass(frozen=True)
class BBA:
    """A mass function over subsets of an ordered frame of discernment."""

    frame: tuple[str, ...]
    masses: Mapping[frozenset[str], float]
    _frame_set: frozenset[str] = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.frame or len(set(self.frame)) != len(self.frame):
            raise ValueError("frame must be a non-empty sequence of distinct hypotheses")
        frame_set = frozenset(self.frame)
        cleaned: dict[frozenset[str], float] = {}
        total = 0.0
        for subset, mass in self.masses.items():
            subset = frozenset(subset)
            if not subset:
                if mass != 0.0:
                    raise ValueError("mass on the empty set must be zero")
                continue
            if not subset <= frame_set:
                raise ValueError(f"focal set {sorted(subset)} is not a subset of the frame")
            if not -MASS_SUM_TOLERANCE <= mass <= 1.0 + MASS_SUM_TOLERANCE:
                raise ValueError(f"mass must be in [0, 1], got {mass}")
            mass = min(max(mass, 0.0), 1.0)  # absorb combination round-off
            if mass > 0.0:
                cleaned[subset] = cleaned.get(subset, 0.0) + mass
                total += mass
        if abs(total - 1.0) > MASS_SUM_TOLERANCE:
            raise ValueError(f"masses must sum to 1 within {MASS_SUM_TOLERANCE}, got {total!r}")
        object.__setattr__(self, "masses", MappingProxyType(cleaned))
        object.__setattr__(self, "_frame_set", frame_set)

    @classmethod
    def vacuous(cls, frame: Iterable[str]) -> "BBA":
        frame = tuple(frame)
        return cls(frame=frame, masses={frozenset(frame): 1.0})

    @classmethod
    def from_masses(cls, frame: Iterable[str], masses: Mapping[Iterable[str], float]) -> "BBA":
        return cls(frame=tuple(frame), masses={frozenset(k): v for k, v in masses.items()})

    def mass(self, subset: Iterable[str]) -> float:
        return self.masses.get(frozenset(subset), 0.0)

    def belief(self, subset: Iterable[str]) -> float:
        """Total mass committed to subsets of ``subset``."""
        target = frozenset(subset)
        return sum(m for s, m in self.masses.items() if s <= target)

    def best_singleton(self) -> tuple[str, float]:
        """The frame element with the highest singleton mass (frame order on ties)."""
        best = max(self.frame, key=lambda h: (self.mass({h}), -self.frame.index(h)))
        return best, self.mass({best})

    def describe(self) -> str:
        parts = []
        for subset, mass in sorted(self.masses.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
            label = "{" + ",".join(h for h in self.frame if h in subset) + "}"
            parts.append(f"m{label}={mass:.4f}")
        return " ".join(parts)


def ds_combine(a: BBA, b: BBA) -> BBA:
    """Dempster's rule of combination; raises on total conflict."""
    if a.frame != b.frame:
        raise ValueError(f"frames differ: {a.frame} vs {b.frame}")
    conflict = 0.0
    combined: dict[frozenset[str], float] = {}
    for set_a, mass_a in a.masses.items():
        for set_b, mass_b in b.masses.items():
            product = mass_a * mass_b
            intersection = set_a & set_b
            if intersection:
                combined[intersection] = combined.get(intersection, 0.0) + product
            else:
                conflict += product
    if abs(1.0 - conflict) < TOTAL_CONFLICT_TOLERANCE:
        raise TotalConflictError(f"conflict K={conflict!r}; sources are irreconcilable")
    scale = 1.0 / (1.0 - conflict)
    return BBA(frame=a.frame, masses={s: m * scale for s, m in combined.items()})


def ds_combine_all(bbas: Iterable[BBA]) -> BBA:
    """Left fold of :func:`ds_combine`; Dempster's rule is associative."""
    result: BBA | None = None
    for bba in bbas:
        result = bba if result is None else ds_combine(result, bba)
    if result is None:
        raise ValueError("ds_combine_all needs at least one BBA")
    return result
