# core/intervals.py
"""
Interval indicators chi_(s,t] with rational endpoints and support profiles.

Indicators are ordered by f < g iff f lies entirely to the left of g
(t_f <= s_g); f <= g iff f < g or f == g. Only identical or disjoint
indicators are comparable, which is all a support profile may contain.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import ProfileError, WordSyntaxError
from .hierarchy import to_fraction


@dataclass(frozen=True, order=False)
class IntervalIndicator:
    """Characteristic function of the half-open interval (s, t]."""
    s: Fraction
    t: Fraction

    def __post_init__(self):
        s, t = to_fraction(self.s), to_fraction(self.t)
        if s < 0 or not s < t:
            raise ProfileError(f"interval indicator needs 0 <= s < t, got ({s}, {t}]")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    @classmethod
    def parse(cls, text: str) -> "IntervalIndicator":
        """Parse 's:t' with rational endpoints, e.g. '0:1' or '1/2:3'."""
        parts = text.strip().split(":")
        if len(parts) != 2:
            raise WordSyntaxError(f"interval must look like 's:t', got {text!r}")
        try:
            return cls(Fraction(parts[0].strip()), Fraction(parts[1].strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise WordSyntaxError(f"bad interval endpoints in {text!r}: {e}") from None

    @property
    def length(self) -> Fraction:
        return self.t - self.s

    def precedes(self, other: "IntervalIndicator") -> bool:
        """Strict order: self lies to the left of other."""
        return self.t <= other.s

    def precedes_or_equals(self, other: "IntervalIndicator") -> bool:
        return self == other or self.precedes(other)

    def disjoint(self, other: "IntervalIndicator") -> bool:
        return self.t <= other.s or other.t <= self.s

    def inner(self, other: "IntervalIndicator") -> Fraction:
        """L2 pairing <self, other> = length of the overlap."""
        low, high = max(self.s, other.s), min(self.t, other.t)
        return high - low if high > low else Fraction(0)

    def __str__(self) -> str:
        return f"{self.s}:{self.t}"


@dataclass(frozen=True)
class SupportProfile:
    """
    A tuple (f_1, ..., f_n) of interval indicators, pairwise identical or disjoint.

    Positions are 1-based in the public helpers that talk about ground-set
    elements, matching partition blocks.
    """
    entries: Tuple[IntervalIndicator, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        distinct = sorted(set(entries), key=lambda f: (f.s, f.t))
        for left, right in zip(distinct, distinct[1:]):
            if not left.disjoint(right):
                raise ProfileError(f"profile entries {left} and {right} overlap without being equal")

    @classmethod
    def parse(cls, text: str) -> "SupportProfile":
        """Parse '0:1,0:1,1:2,1:2'."""
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(IntervalIndicator.parse(chunk) for chunk in text.split(",")))

    @classmethod
    def of(cls, items: Iterable) -> "SupportProfile":
        """Build from indicators or (s, t) pairs."""
        entries = []
        for item in items:
            if isinstance(item, IntervalIndicator):
                entries.append(item)
            else:
                s, t = item
                entries.append(IntervalIndicator(s, t))
        return cls(tuple(entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, position: int) -> IntervalIndicator:
        return self.entries[position]

    def at(self, element: int) -> IntervalIndicator:
        """Indicator carried by the 1-based ground-set element."""
        return self.entries[element - 1]

    def distinct(self) -> List[IntervalIndicator]:
        """Distinct supports in increasing order."""
        return sorted(set(self.entries), key=lambda f: (f.s, f.t))

    def groups(self) -> List[Tuple[int, ...]]:
        """The grouping sigma_1, ..., sigma_p of 1-based positions sharing a support."""
        by_support: Dict[IntervalIndicator, List[int]] = {}
        for position, f in enumerate(self.entries, start=1):
            by_support.setdefault(f, []).append(position)
        return [tuple(by_support[f]) for f in self.distinct()]

    def is_balanced(self) -> bool:
        """Every support occurs an even number of times."""
        return all(len(group) % 2 == 0 for group in self.groups())

    def __str__(self) -> str:
        return ",".join(str(f) for f in self.entries)


def profile_from_labels(labels: Sequence[int], supports: Sequence[IntervalIndicator]) -> SupportProfile:
    """Profile whose p-th entry is supports[labels[p]]."""
    return SupportProfile(tuple(supports[label] for label in labels))
