"""Split vector bundles on the projective line: slopes, Harder-Narasimhan
blocks, instability degree, Frobenius pullback and induced bundles.

A split bundle is just its multiset of line-summand degrees, so HN data is
sorting and the Frobenius degree law is multiplication by p^t.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple

from .errors import InputError
from .field_tower import is_prime


@dataclass(frozen=True)
class SplittingType:
    """Degrees of the line summands, stored sorted descending."""

    degrees: Tuple[int, ...]

    def __post_init__(self):
        if not self.degrees:
            raise InputError("a splitting type needs at least one summand")
        if any(not isinstance(d, int) for d in self.degrees):
            raise InputError("summand degrees must be integers")
        object.__setattr__(self, "degrees", tuple(sorted(self.degrees, reverse=True)))

    @classmethod
    def of(cls, degrees: Iterable[int]) -> "SplittingType":
        return cls(tuple(degrees))

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def degree(self) -> int:
        return sum(self.degrees)

    def slope(self) -> Fraction:
        return Fraction(self.degree, self.rank)

    def hn_filtration(self) -> Tuple[Tuple[int, ...], ...]:
        """Blocks of equal degree, strictly decreasing across blocks."""
        return tuple(tuple(grp) for _, grp in itertools.groupby(self.degrees))

    def mu_max(self) -> int:
        return self.degrees[0]

    def mu_min(self) -> int:
        return self.degrees[-1]

    def is_semistable(self) -> bool:
        return self.degrees[0] == self.degrees[-1]

    def instability_degree(self) -> int:
        """mu_max - mu_min; zero exactly for semistable splitting types."""
        return self.degrees[0] - self.degrees[-1]

    def frobenius_pullback(self, p: int, t: int) -> "SplittingType":
        """Pull back along t iterated Frobenii: every degree scales by p^t."""
        if not is_prime(p):
            raise InputError(f"p must be prime, got {p}")
        if t < 0:
            raise InputError("t must be non-negative")
        k = p**t
        return SplittingType(tuple(d * k for d in self.degrees))

    def tensor(self, other: "SplittingType") -> "SplittingType":
        return SplittingType(tuple(a + b for a in self.degrees for b in other.degrees))

    def wedge(self, r: int) -> "SplittingType":
        if not 1 <= r <= self.rank:
            raise InputError(f"wedge index {r} out of range 1..{self.rank}")
        return SplittingType(
            tuple(sum(c) for c in itertools.combinations(self.degrees, r))
        )

    def sym(self, N: int) -> "SplittingType":
        if N < 1:
            raise InputError("symmetric power must be positive")
        return SplittingType(
            tuple(sum(c) for c in itertools.combinations_with_replacement(self.degrees, N))
        )

    def induced(self, functor: str, **kw) -> "SplittingType":
        """Dispatcher over the three induced-bundle constructions."""
        if functor == "tensor":
            return self.tensor(kw["other"])
        if functor == "wedge":
            return self.wedge(kw["r"])
        if functor == "sym":
            return self.sym(kw["N"])
        raise InputError(f"unknown functor {functor!r}")

    def __str__(self) -> str:
        return "(" + ",".join(str(d) for d in self.degrees) + ")"
