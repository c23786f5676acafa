"""Elementary polynomials: the coefficients of a translated vector g.v as
polynomials in the n x n matrix indeterminates G_ij.

theta_tensor realizes the substitution X_i -> sum_j G_ij X_j on tensor
words; theta_wedge the induced map on r-th wedge powers (r x r minors of
the word-action matrix); general_ep the linear-combination form used for an
arbitrary embedded group, with determinant powers tracked symbolically.

Raw substitution composes contravariantly (A(g, A(h, v)) = A(hg, v)), so the
exported left action evaluates EP_v at the transpose; `action` then moves
coordinate vectors by the ordinary matrix-vector product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import InputError
from .field_tower import TowerElement, is_prime

Word = Tuple[int, ...]
Coeff = Union[int, Fraction]


def _reduce_coeff(c, p: Optional[int]):
    if p is None:
        if isinstance(c, float):
            raise InputError("float coefficients are not accepted; use int or Fraction")
        return Fraction(c) if not isinstance(c, int) else c
    if not isinstance(c, int):
        raise InputError("coefficients over F_p must be integers")
    return c % p


class MultiPoly:
    """Sparse polynomial in the variables G_11..G_nn.

    Terms map exponent vectors (length n^2, row-major) to nonzero
    coefficients; with p set, coefficients are canonical integers mod p,
    otherwise exact integers/Fractions.  Printing uses graded-lex order with
    G11 > G12 > ... > Gnn.
    """

    __slots__ = ("n", "p", "terms")

    def __init__(self, n: int, terms: Mapping[Tuple[int, ...], Coeff] = (), p: Optional[int] = None):
        if p is not None and not is_prime(p):
            raise InputError(f"p must be prime, got {p}")
        clean: Dict[Tuple[int, ...], Coeff] = {}
        for exp, c in dict(terms).items():
            exp = tuple(exp)
            if len(exp) != n * n or any(e < 0 for e in exp):
                raise InputError(f"bad exponent vector {exp!r} for n={n}")
            c = _reduce_coeff(c, p)
            if c:
                clean[exp] = c
        self.n = n
        self.p = p
        self.terms = clean

    @classmethod
    def zero(cls, n: int, p: Optional[int] = None) -> "MultiPoly":
        return cls(n, {}, p)

    @classmethod
    def constant(cls, n: int, c: Coeff, p: Optional[int] = None) -> "MultiPoly":
        return cls(n, {tuple([0] * (n * n)): c}, p)

    @classmethod
    def var(cls, n: int, i: int, j: int, p: Optional[int] = None) -> "MultiPoly":
        """The matrix entry G_ij, 1-based indices."""
        if not (1 <= i <= n and 1 <= j <= n):
            raise InputError(f"G index ({i},{j}) out of range for n={n}")
        exp = [0] * (n * n)
        exp[(i - 1) * n + (j - 1)] = 1
        return cls(n, {tuple(exp): 1}, p)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def _check(self, other: "MultiPoly") -> None:
        if self.n != other.n or self.p != other.p:
            raise InputError("mixed polynomial rings")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = out.get(exp, 0) + c
        return MultiPoly(self.n, out, self.p)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.n, {e: -c for e, c in self.terms.items()}, self.p)

    def scaled(self, k: Coeff) -> "MultiPoly":
        return MultiPoly(self.n, {e: c * k for e, c in self.terms.items()}, self.p)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out: Dict[Tuple[int, ...], Coeff] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.n, out, self.p)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.n == other.n
            and self.p == other.p
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.n, self.p, tuple(sorted(self.terms.items()))))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def ordered_terms(self) -> List[Tuple[Tuple[int, ...], Coeff]]:
        """Terms in graded-lex order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def _var_name(self, flat: int) -> str:
        i, j = divmod(flat, self.n)
        if self.n < 10:
            return f"G{i + 1}{j + 1}"
        return f"G{i + 1}_{j + 1}"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for exp, c in self.ordered_terms():
            factors = []
            for flat, e in enumerate(exp):
                if e == 1:
                    factors.append(self._var_name(flat))
                elif e > 1:
                    factors.append(f"{self._var_name(flat)}^{e}")
            mono = "*".join(factors)
            if not mono:
                chunks.append((c, str(abs(c)) if self.p is None else str(c)))
            elif c == 1:
                chunks.append((c, mono))
            elif self.p is None and c == -1:
                chunks.append((c, mono))
            else:
                shown = abs(c) if self.p is None else c
                chunks.append((c, f"{shown}*{mono}"))
        out = []
        for k, (c, text) in enumerate(chunks):
            neg = self.p is None and c < 0
            if k == 0:
                out.append(("-" if neg else "") + text)
            else:
                out.append((" - " if neg else " + ") + text)
        return "".join(out)

    def __repr__(self) -> str:
        return f"MultiPoly(n={self.n}, p={self.p}, {str(self)!r})"

    def evaluate(self, entries: Sequence) -> Union[Coeff, TowerElement]:
        """Substitute G_ij = entries[(i-1)*n + (j-1)].

        Entries may be integers (reduced mod p when p is set), Fractions
        (characteristic-zero ring only), or TowerElements over the same p.
        """
        if len(entries) != self.n * self.n:
            raise InputError("entry vector has the wrong length")
        tower = any(isinstance(e, TowerElement) for e in entries)
        if tower:
            ps = {e.p for e in entries if isinstance(e, TowerElement)}
            if len(ps) != 1 or (self.p is not None and self.p not in ps):
                raise InputError("matrix entries in the wrong characteristic")
            p = ps.pop()
            vals = [
                e if isinstance(e, TowerElement) else TowerElement.constant(p, e)
                for e in entries
            ]
            acc = TowerElement.zero(p)
            for exp, c in self.terms.items():
                term = TowerElement.constant(p, c if isinstance(c, int) else int(c))
                for v, e in zip(vals, exp):
                    if e:
                        term = term * v**e
                acc = acc + term
            return acc
        acc: Coeff = 0
        for exp, c in self.terms.items():
            term = c
            for v, e in zip(entries, exp):
                if e:
                    term = term * v**e
            acc = acc + term
        if self.p is not None:
            if not isinstance(acc, int):
                raise InputError("non-integer entries over F_p")
            acc %= self.p
        return acc


@dataclass(frozen=True)
class EPSet:
    """Ordered elementary polynomials with their basis labels.

    For tensor sets the basis is the lex-ordered words over 1..n of length m;
    for wedge sets it is the lex-ordered r-tuples of (ascending) words.  The
    true translated coefficient is poly / det(G)^det_exponent; the power is
    kept symbolic and never expanded.
    """

    polys: Tuple[MultiPoly, ...]
    n: int
    m: int
    r: Optional[int] = None
    basis: Tuple = ()
    det_exponent: int = 0

    def __len__(self) -> int:
        return len(self.polys)

    def __getitem__(self, k: int) -> MultiPoly:
        return self.polys[k]

    def degrees(self) -> Tuple[int, ...]:
        return tuple(q.total_degree() for q in self.polys)


def tensor_words(n: int, m: int) -> Tuple[Word, ...]:
    """The ordered word basis of the m-th tensor power, lex over letters 1..n."""
    return tuple(itertools.product(range(1, n + 1), repeat=m))


def _check_word(word: Word, n: int, m: int) -> Word:
    word = tuple(word)
    if len(word) != m:
        raise InputError(f"word {word!r} does not have length {m}")
    if any(not (1 <= a <= n) for a in word):
        raise InputError(f"word {word!r} uses letters outside 1..{n}")
    return word


def theta_tensor(v: Mapping[Word, Coeff], n: int, m: int, p: Optional[int] = None) -> EPSet:
    """Elementary polynomials of a tensor v = sum a_w w over degree-m words.

    EP[(j_1..j_m)] = sum over input words of a_(i) * prod_k G_{i_k j_k};
    each member is homogeneous of degree m (or zero), and the set is linear
    in v.
    """
    if n < 1 or m < 1:
        raise InputError("n and m must be positive")
    basis = tensor_words(n, m)
    acc: Dict[Word, Dict[Tuple[int, ...], Coeff]] = {w: {} for w in basis}
    nn = n * n
    for word, a in v.items():
        word = _check_word(word, n, m)
        a = _reduce_coeff(a, p)
        if not a:
            continue
        for jword in basis:
            exp = [0] * nn
            for ik, jk in zip(word, jword):
                exp[(ik - 1) * n + (jk - 1)] += 1
            key = tuple(exp)
            bucket = acc[jword]
            bucket[key] = bucket.get(key, 0) + a
    polys = tuple(MultiPoly(n, acc[w], p) for w in basis)
    return EPSet(polys=polys, n=n, m=m, basis=basis)


def _word_action_matrix(n: int, m: int, p: Optional[int]) -> List[List[MultiPoly]]:
    words = tensor_words(n, m)
    nn = n * n
    mat = []
    for wi in words:
        row = []
        for wj in words:
            exp = [0] * nn
            for ik, jk in zip(wi, wj):
                exp[(ik - 1) * n + (jk - 1)] += 1
            row.append(MultiPoly(n, {tuple(exp): 1}, p))
        mat.append(row)
    return mat


def _det(rows: List[List[MultiPoly]], n: int, p: Optional[int]) -> MultiPoly:
    # permutation expansion; fine for the desk-scale r these sets carry
    size = len(rows)
    out = MultiPoly.zero(n, p)
    for perm in itertools.permutations(range(size)):
        sign = 1
        seen = list(perm)
        for i in range(size):
            for j in range(i + 1, size):
                if seen[i] > seen[j]:
                    sign = -sign
        term = MultiPoly.constant(n, sign, p)
        for i, j in enumerate(perm):
            term = term * rows[i][j]
        out = out + term
    return out


def wedge_basis(n: int, m: int, r: int) -> Tuple[Tuple[Word, ...], ...]:
    """Ascending r-tuples of words, lex-ordered over the word basis."""
    words = tensor_words(n, m)
    return tuple(itertools.combinations(words, r))


def theta_wedge(
    v: Mapping[Tuple[Word, ...], Coeff], n: int, m: int, r: int, p: Optional[int] = None
) -> EPSet:
    """Elementary polynomials on the r-th wedge of the m-th tensor power.

    Members are signed sums of r x r minors of the word-action matrix, hence
    homogeneous of degree r*m.  Keys of v are ascending r-tuples of words.
    """
    if n < 1 or m < 1:
        raise InputError("n and m must be positive")
    M = n**m
    if not 1 <= r <= M:
        raise InputError(f"wedge index {r} out of range 1..{M}")
    words = tensor_words(n, m)
    index_of = {w: k for k, w in enumerate(words)}
    mat = _word_action_matrix(n, m, p)
    basis = wedge_basis(n, m, r)
    out_polys = [MultiPoly.zero(n, p) for _ in basis]
    col_sets = list(itertools.combinations(range(M), r))
    for key, b in v.items():
        b = _reduce_coeff(b, p)
        if not b:
            continue
        try:
            rows = tuple(index_of[_check_word(w, n, m)] for w in key)
        except KeyError as exc:
            raise InputError(f"unknown word in wedge key {key!r}") from exc
        if len(set(rows)) != r or list(rows) != sorted(rows):
            raise InputError(f"wedge key {key!r} must list r distinct words ascending")
        for out_k, cols in enumerate(col_sets):
            sub = [[mat[i][j] for j in cols] for i in rows]
            minor = _det(sub, n, p)
            out_polys[out_k] = out_polys[out_k] + minor.scaled(b)
    return EPSet(polys=tuple(out_polys), n=n, m=m, r=r, basis=basis)


def general_ep(
    rep_matrix: Sequence[Sequence[MultiPoly]],
    det_exponent: int,
    b: Sequence[Coeff],
) -> EPSet:
    """F_k = sum_i f_ki * b_i for a representation matrix of regular functions.

    The true coefficient of the k-th basis vector in the translate is
    F_k(g) / det(g)^det_exponent; the determinant power rides along in the
    returned set and vanishing questions use the numerators alone.
    """
    m = len(rep_matrix)
    if m == 0 or any(len(row) != m for row in rep_matrix):
        raise InputError("representation matrix must be square and nonempty")
    if len(b) != m:
        raise InputError("coordinate vector length does not match the matrix")
    if det_exponent < 0:
        raise InputError("determinant exponent must be non-negative")
    n = rep_matrix[0][0].n
    p = rep_matrix[0][0].p
    polys = []
    for k in range(m):
        acc = MultiPoly.zero(n, p)
        for i in range(m):
            f = rep_matrix[k][i]
            if f.n != n or f.p != p:
                raise InputError("representation matrix mixes polynomial rings")
            bi = _reduce_coeff(b[i], p)
            if bi:
                acc = acc + f.scaled(bi)
        polys.append(acc)
    return EPSet(polys=tuple(polys), n=n, m=m, basis=tuple(range(1, m + 1)),
                 det_exponent=det_exponent)


def evaluate(ep: EPSet, g: Sequence[Sequence]) -> list:
    """Coefficient vector of the raw substitution G_ij = g_ij, basis order."""
    n = ep.n
    if len(g) != n or any(len(row) != n for row in g):
        raise InputError(f"matrix must be {n}x{n}")
    flat = [entry for row in g for entry in row]
    return [q.evaluate(flat) for q in ep.polys]


def vanishing_pattern(ep: EPSet, g: Sequence[Sequence]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """1-based indices (matching the basis order w_1..w_M) that vanish at g."""
    values = evaluate(ep, g)
    vanishing = tuple(k + 1 for k, val in enumerate(values) if not val)
    nonvanishing = tuple(k + 1 for k, val in enumerate(values) if val)
    return vanishing, nonvanishing


def transpose(g: Sequence[Sequence]) -> Tuple[Tuple, ...]:
    return tuple(tuple(row[i] for row in g) for i in range(len(g)))


def action(g: Sequence[Sequence], v: Mapping[Word, Coeff], n: int, m: int,
           p: Optional[int] = None) -> Dict[Word, Coeff]:
    """Left action on tensors: coordinates move by the matrix-vector product."""
    ep = theta_tensor(v, n, m, p)
    values = evaluate(ep, transpose(g))
    return {w: val for w, val in zip(ep.basis, values) if val}


def extension_degree_bound(
    vanishing_degrees: Iterable[int],
    defining_eq_degrees: Iterable[int],
    variant: str = "as_stated",
) -> int:
    """Degree bound certified by a vanishing pattern.

    `as_stated` is the degree of the product polynomial (sum of the listed
    degrees); `bezout_product` multiplies them all, the Bezout-style count.
    Both are exposed so callers can take the conservative maximum.
    """
    vd = list(vanishing_degrees)
    dd = list(defining_eq_degrees)
    if any(d < 0 for d in vd + dd):
        raise InputError("degrees must be non-negative")
    if variant == "as_stated":
        return sum(vd) + sum(dd)
    if variant == "bezout_product":
        out = 1
        for d in vd + dd:
            out *= d
        return out
    raise InputError(f"unknown variant {variant!r}")
