"""Numeric bound formulas: p-adic digit bound for SL(2) symmetric powers,
the tensor-power bound, the wedge-of-tensor bound, the Jordan-Holder variant,
and the generic p-power threshold they all feed."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

from .errors import InputError
from .field_tower import is_prime


@dataclass(frozen=True)
class BoundReport:
    """A raw bound value together with the minimal t satisfying p^t > N_raw."""

    rep: str
    n: int
    m: int
    p: int
    N_raw: int
    t: int
    degenerate: bool = False

    def to_json(self) -> dict:
        out = {"rep": self.rep, "n": self.n, "m": self.m, "p": self.p,
               "N_raw": self.N_raw, "t": self.t}
        if self.degenerate:
            out["degenerate"] = True
        return out


def binomial(a: int, r: int) -> int:
    """Exact binomial coefficient; r must lie in 0..a."""
    if r < 0 or r > a:
        raise InputError(f"binomial index {r} out of range 0..{a}")
    return math.comb(a, r)


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise InputError(f"p must be prime, got {p}")


def threshold_t(N_raw: int, p: int) -> int:
    """Minimal t >= 0 with p^t > N_raw."""
    _check_prime(p)
    if N_raw < 0:
        raise InputError("negative bound value")
    t, power = 0, 1
    while power <= N_raw:
        power *= p
        t += 1
    return t


def padic_digits(N: int, p: int) -> List[int]:
    """Base-p digits of N, least significant first, top digit nonzero."""
    _check_prime(p)
    if N < 1:
        raise InputError(f"N must be positive, got {N}")
    digits = []
    while N:
        N, d = divmod(N, p)
        digits.append(d)
    return digits


def sl2_symmetric_t(N: int, p: int) -> int:
    """Index of the top nonzero p-adic digit of N: the symmetric-power field exponent."""
    return len(padic_digits(N, p)) - 1


def tensor_t(n: int, m: int, p: int) -> BoundReport:
    """Bound for the m-th tensor power of the n-dimensional standard module."""
    if n < 1 or m < 1:
        raise InputError("n and m must be positive")
    N_raw = m * n**m
    return BoundReport("tensor", n, m, p, N_raw, threshold_t(N_raw, p))


def _wedge_max(M: int, m: int, r_lo: int) -> Optional[int]:
    values = [binomial(M, r) * (r * m) for r in range(r_lo, M)]
    return max(values) if values else None


def wedge_t(n: int, m: int, p: int) -> BoundReport:
    """Bound over all wedge powers of the m-th tensor power; r ranges over 0..n^m-1."""
    if n < 1 or m < 1:
        raise InputError("n and m must be positive")
    M = n**m
    best = _wedge_max(M, m, 0)
    N_raw = best if best is not None else 0
    return BoundReport("wedge", n, m, p, N_raw, threshold_t(N_raw, p),
                       degenerate=best is None)


def jh_t(n: int, d: int, p: int) -> BoundReport:
    """Wedge bound with the Jordan-Holder degree d in place of m; r ranges over 1..n^d-1.

    An empty r-range (n^d = 1) is reported as degenerate with N_raw 0 and
    t 0 rather than as an error, since the induced statement is vacuous.
    """
    if n < 1 or d < 1:
        raise InputError("n and d must be positive")
    M = n**d
    best = _wedge_max(M, d, 1)
    N_raw = best if best is not None else 0
    return BoundReport("jh", n, d, p, N_raw, threshold_t(N_raw, p),
                       degenerate=best is None)
