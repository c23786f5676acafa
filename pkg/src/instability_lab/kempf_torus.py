"""Exact Kempf destabilization over a fixed diagonal torus.

The optimal 1-PS direction is the minimum-norm point of the convex hull of
the hyperplane-projected weight support, found by Caratheodory enumeration:
every affinely independent subset of projected weights contributes the
projection of the origin onto its affine hull, kept when its barycentric
coordinates are non-negative.  All arithmetic is over Fraction, and every
returned point carries a verified certificate (supporting hyperplane for a
nonzero point, an explicit vanishing convex combination otherwise).

Enumeration is exponential in the support size; intended for desk-scale
states (up to roughly fifteen weights).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .elementary_polys import Coeff, Word, evaluate, theta_tensor, transpose
from .errors import CertificateError, InputError

Vector = Tuple[Fraction, ...]


@functools.total_ordering
class Nu:
    """The instability measure as the exact pair (m, <lambda,lambda>).

    Ordered and compared through sign(m) * m^2 / normsq, so scalar multiples
    of a 1-PS compare equal and no square roots are ever taken.
    """

    __slots__ = ("m", "normsq")

    def __init__(self, m: int, normsq: int):
        if normsq <= 0:
            raise InputError("normsq must be positive")
        self.m = m
        self.normsq = normsq

    def key(self) -> Fraction:
        return Fraction(self.m * abs(self.m), self.normsq)

    def __eq__(self, other) -> bool:
        return isinstance(other, Nu) and self.key() == other.key()

    def __lt__(self, other: "Nu") -> bool:
        return self.key() < other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Nu(m={self.m}, normsq={self.normsq})"

    def to_json(self) -> dict:
        return {"m": self.m, "normsq": self.normsq}


@dataclass(frozen=True)
class State:
    """The weight support of a vector: distinct integer characters of the torus."""

    weights: Tuple[Tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        if not self.weights:
            raise InputError("a state needs at least one weight")
        seen = []
        for w in self.weights:
            w = tuple(w)
            if len(w) != self.n:
                raise InputError(f"weight {w!r} does not have length {self.n}")
            if any(not isinstance(x, int) for x in w):
                raise InputError("weights must be integer vectors")
            if w not in seen:
                seen.append(w)
        object.__setattr__(self, "weights", tuple(sorted(seen)))

    @classmethod
    def of(cls, weights: Iterable[Sequence[int]], n: Optional[int] = None) -> "State":
        ws = [tuple(w) for w in weights]
        if n is None:
            if not ws:
                raise InputError("a state needs at least one weight")
            n = len(ws[0])
        return cls(tuple(ws), n)

    def projected(self) -> Tuple[Vector, ...]:
        """Weights pushed into the sum-zero hyperplane: chi - mean(chi) * 1."""
        out = []
        for w in self.weights:
            mean = Fraction(sum(w), self.n)
            out.append(tuple(Fraction(x) - mean for x in w))
        return tuple(out)


@dataclass(frozen=True)
class OnePS:
    """Primitive integral 1-PS of the diagonal torus."""

    exponents: Tuple[int, ...]
    tag: str = "SL"

    def __post_init__(self):
        exp = tuple(self.exponents)
        if not exp or all(x == 0 for x in exp):
            raise InputError("a 1-PS needs a nonzero exponent vector")
        if any(not isinstance(x, int) for x in exp):
            raise InputError("exponents must be integers")
        g = 0
        for x in exp:
            g = gcd(g, x)
        if g != 1:
            raise InputError(f"exponent vector {exp!r} is not primitive")
        if self.tag not in ("SL", "GL"):
            raise InputError(f"unknown 1-PS tag {self.tag!r}")
        if self.tag == "SL" and sum(exp) != 0:
            raise InputError("SL-tagged exponents must sum to zero")
        lead = next(x for x in sorted(exp, reverse=True) if x != 0)
        if lead < 0:
            exp = tuple(-x for x in exp)
        object.__setattr__(self, "exponents", exp)

    @property
    def n(self) -> int:
        return len(self.exponents)

    def pair(self, weight: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.exponents, weight))

    def normsq(self) -> int:
        return sum(x * x for x in self.exponents)


@dataclass(frozen=True)
class ParabolicDescriptor:
    """Stable descending sort of the exponents: permutation plus block sizes."""

    perm: Tuple[int, ...]
    blocks: Tuple[int, ...]

    def to_json(self) -> dict:
        return {"perm": list(self.perm), "blocks": list(self.blocks)}


@dataclass(frozen=True)
class HullCertificate:
    """Exact witness attached to a minimum-norm point.

    kind "supporting_hyperplane": <q, chi_proj> >= <q, q> held for every
    state weight.  kind "zero_combination": the recorded convex combination
    of projected weights vanished.  support maps weight indices (into the
    state's sorted weight list) to barycentric coordinates.
    """

    kind: str
    support: Tuple[Tuple[int, Fraction], ...]
    checked: bool

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "support": [[i, str(c)] for i, c in self.support],
            "checked": self.checked,
        }


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _solve(mat: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    """Exact Gaussian elimination; None when the system is singular."""
    k = len(mat)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(k):
        pivot = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][k] for r in range(k)]


def _affine_min_norm(points: Sequence[Vector]) -> Optional[Tuple[Vector, List[Fraction]]]:
    """Projection of the origin onto the affine hull of the points.

    Returns (point, barycentric coordinates), or None when the points are
    affinely dependent (skipping them is safe: every optimum is already
    witnessed by an independent subset).
    """
    base = points[0]
    diffs = [tuple(x - y for x, y in zip(pt, base)) for pt in points[1:]]
    k = len(diffs)
    if k == 0:
        return base, [Fraction(1)]
    gram = [[_dot(diffs[i], diffs[j]) for j in range(k)] for i in range(k)]
    rhs = [-_dot(base, diffs[i]) for i in range(k)]
    mu = _solve(gram, rhs)
    if mu is None:
        return None
    q = list(base)
    for c, d in zip(mu, diffs):
        for idx in range(len(q)):
            q[idx] += c * d[idx]
    bary = [Fraction(1) - sum(mu, Fraction(0))] + list(mu)
    return tuple(q), bary


def _min_norm_point(points: Sequence[Vector]) -> Tuple[Vector, Tuple[Tuple[int, Fraction], ...]]:
    """Minimum-norm point of the convex hull, with its convex combination."""
    dim = len(points[0])
    best: Optional[Tuple[Fraction, Vector, Tuple[Tuple[int, Fraction], ...]]] = None
    for size in range(1, min(len(points), dim + 1) + 1):
        for subset in itertools.combinations(range(len(points)), size):
            sol = _affine_min_norm([points[i] for i in subset])
            if sol is None:
                continue
            q, bary = sol
            if any(c < 0 for c in bary):
                continue
            normsq = _dot(q, q)
            if best is None or normsq < best[0]:
                support = tuple((i, c) for i, c in zip(subset, bary) if c > 0)
                best = (normsq, q, support)
    assert best is not None  # size-1 subsets are always feasible
    return best[1], best[2]


def nearest_point_with_certificate(
    state: State, mode: str = "SL"
) -> Tuple[Vector, HullCertificate]:
    """Minimum-norm point of the projected weight hull plus a verified witness."""
    if mode != "SL":
        raise InputError(f"unsupported mode {mode!r}; only SL is implemented")
    projected = state.projected()
    q, support = _min_norm_point(projected)
    qq = _dot(q, q)
    if qq == 0:
        combo = [Fraction(0)] * state.n
        total = Fraction(0)
        for idx, c in support:
            total += c
            for k in range(state.n):
                combo[k] += c * projected[idx][k]
        if total != 1 or any(x != 0 for x in combo):
            raise CertificateError("zero-combination certificate failed")
        cert = HullCertificate("zero_combination", support, True)
    else:
        for chi in projected:
            if _dot(q, chi) < qq:
                raise CertificateError("supporting-hyperplane certificate failed")
        cert = HullCertificate("supporting_hyperplane", support, True)
    return q, cert


def nearest_point(state: State, mode: str = "SL") -> Vector:
    return nearest_point_with_certificate(state, mode)[0]


def primitive_direction(q: Sequence[Fraction]) -> Tuple[int, ...]:
    """The primitive integer vector on the ray through q (q nonzero)."""
    scale = lcm(*(f.denominator for f in q))
    ints = [int(f * scale) for f in q]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def torus_destabilizer(state: State) -> Optional[Tuple[OnePS, int, int]]:
    """The ray through the min-norm point as a primitive 1-PS, or None.

    Returns (lambda, m, normsq) with m = min <lambda, chi> over the state;
    the supporting-hyperplane certificate makes lambda optimal among all
    1-PS of the diagonal torus.
    """
    q, _ = nearest_point_with_certificate(state)
    if all(x == 0 for x in q):
        return None
    lam = OnePS(primitive_direction(q), tag="SL")
    m = min(lam.pair(w) for w in state.weights)
    if m <= 0:
        raise CertificateError("destabilizer with non-positive pairing")
    return lam, m, lam.normsq()


def parabolic_of(lam: OnePS) -> ParabolicDescriptor:
    """Sorting permutation (stable, descending) and run lengths of equal exponents."""
    order = sorted(range(lam.n), key=lambda i: (-lam.exponents[i], i))
    blocks = []
    for _, grp in itertools.groupby(order, key=lambda i: lam.exponents[i]):
        blocks.append(len(list(grp)))
    return ParabolicDescriptor(tuple(order), tuple(blocks))


def state_of_tensor(v: Mapping[Word, Coeff], n: int, m: int) -> State:
    """Weight support of a tensor: the word (i_1..i_m) weighs sum_k e_{i_k}."""
    weights = set()
    for word, c in v.items():
        word = tuple(word)
        if len(word) != m:
            raise InputError(f"word {word!r} does not have length {m}")
        if any(not (1 <= a <= n) for a in word):
            raise InputError(f"word {word!r} uses letters outside 1..{n}")
        if not c:
            continue
        w = [0] * n
        for a in word:
            w[a - 1] += 1
        weights.add(tuple(w))
    if not weights:
        raise InputError("all coefficients vanish")
    return State.of(sorted(weights), n)


@dataclass(frozen=True)
class CandidateResult:
    """Best translate found over a finite candidate set.

    The destabilizer of v itself is the conjugate g^-1 lambda g of the
    reported diagonal 1-PS; only the diagonal representative is returned.
    """

    g: Tuple[Tuple[Coeff, ...], ...]
    lam: OnePS
    nu: Nu


def _is_identity(g: Sequence[Sequence]) -> bool:
    return all(
        (g[i][j] == 1 if i == j else not g[i][j])
        for i in range(len(g))
        for j in range(len(g))
    )


def best_over_candidates(
    v: Mapping[Word, Coeff],
    n: int,
    m: int,
    candidates: Sequence[Sequence[Sequence]],
    p: Optional[int] = None,
) -> Optional[CandidateResult]:
    """Maximize the torus measure over translates g.v, g from a finite set.

    A certified lower bound for the instability measure of v; exact only
    when the candidates reach an optimal maximal torus, so for n >= 3 this
    is a documented heuristic, not Kempf's full search.
    """
    candidates = list(candidates)
    if not candidates:
        raise InputError("candidate set is empty")
    if not any(_is_identity(g) for g in candidates):
        raise InputError("candidate set must contain the identity")
    ep = theta_tensor(v, n, m, p)
    best: Optional[CandidateResult] = None
    for g in candidates:
        values = evaluate(ep, transpose(g))
        moved = {w: val for w, val in zip(ep.basis, values) if val}
        if not moved:
            raise CertificateError("group translate annihilated the vector")
        found = torus_destabilizer(state_of_tensor(moved, n, m))
        if found is None:
            continue
        lam, mm, nsq = found
        nu = Nu(mm, nsq)
        if best is None or best.nu < nu:
            best = CandidateResult(tuple(tuple(row) for row in g), lam, nu)
    return best
