"""Instability analysis for SL(2) on binary forms of degree N over F_p(s).

A form f = sum a_i X^i Y^(N-i) is a vector in the N-th symmetric power of
the plane, X and Y basis vectors.  A matrix g acts by substituting the
basis vectors with the columns of g (X -> g11 X + g21 Y, Y -> g12 X + g22 Y),
so diag(t, 1/t) gives the monomial X^i Y^j the weight i - j.  Zero sets live
in the dual projective line, which the action reaches through the inverse
transpose; `act_on_root` implements that transport, making root motion
covariant with form motion.

The multiplicity profile is the characteristic-p squarefree decomposition:
when the derivative vanishes, f(X) = g(X^p) for the exponent-contracted g
(always over F_p(s), where only p-divisible exponents can occur), and each
class of g deepens by one root-tower level while its multiplicity scales by
p; otherwise the gcd(f, f') chain peels off the separable multiplicity
layers and the loop continues on the residual p-th-power part.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from .errors import CertificateError, InputError
from .field_tower import TowerElement, TowerLike, TowerPoly
from .kempf_torus import Nu

Matrix2 = Tuple[Tuple[TowerElement, TowerElement], Tuple[TowerElement, TowerElement]]

AT_INFINITY = "AT_INFINITY"


class ProjectivePoint:
    """A point of the dual projective line, coordinates in the tower.

    Canonical form: (x, 1) for affine points, (1, 0) for the point at
    infinity.
    """

    __slots__ = ("x", "y")

    def __init__(self, x: TowerLike, y: TowerLike, p: Optional[int] = None):
        if isinstance(x, int) or isinstance(y, int):
            if p is None:
                probe = x if isinstance(x, TowerElement) else y
                if not isinstance(probe, TowerElement):
                    raise InputError("integer coordinates need an explicit p")
                p = probe.p
            if isinstance(x, int):
                x = TowerElement.constant(p, x)
            if isinstance(y, int):
                y = TowerElement.constant(p, y)
        if x.p != y.p:
            raise InputError("coordinates in different characteristics")
        if x.is_zero and y.is_zero:
            raise InputError("(0 : 0) is not a projective point")
        if y.is_zero:
            x, y = TowerElement.one(x.p), y
        else:
            x, y = x / y, TowerElement.one(x.p)
        self.x = x.normalized()
        self.y = y.normalized()

    @property
    def is_infinity(self) -> bool:
        return self.y.is_zero

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ProjectivePoint) and self.x == other.x and self.y == other.y
        )

    def __hash__(self) -> int:
        return hash((self.x, self.y))

    def __str__(self) -> str:
        return f"[{self.x} : {self.y}]"

    def __repr__(self) -> str:
        return f"ProjectivePoint({self!s})"

    def to_json(self) -> list:
        return [self.x.to_json(), self.y.to_json()]


@dataclass(frozen=True)
class RootClass:
    """One layer of the multiplicity profile.

    Over the algebraic closure the roots of this class are the p^insep_exp-th
    roots of the roots of sep_part (a monic squarefree separable polynomial,
    or the AT_INFINITY marker for the point [1:0]), each of multiplicity
    mult; p^insep_exp divides mult.
    """

    sep_part: Union[TowerPoly, str]
    mult: int
    insep_exp: int

    @property
    def at_infinity(self) -> bool:
        return isinstance(self.sep_part, str)

    def root_count(self) -> int:
        return 1 if self.at_infinity else self.sep_part.degree

    def __str__(self) -> str:
        part = self.sep_part if self.at_infinity else self.sep_part.to_text()
        return f"({part}, mult={self.mult}, e={self.insep_exp})"


@dataclass(frozen=True)
class OnePSWitness:
    """Conjugating matrix plus the diagonal exponent pair (1, -1)."""

    matrix: Matrix2
    exponents: Tuple[int, int] = (1, -1)

    def to_json(self) -> dict:
        return {
            "matrix": [[c.to_json() for c in row] for row in self.matrix],
            "exponents": list(self.exponents),
        }


@dataclass(frozen=True)
class InstabilityReport:
    status: str
    dominant_mult: int
    nu: Nu
    dominant_root: Optional[ProjectivePoint]
    field_exponent: Optional[int]
    one_ps: Optional[OnePSWitness]
    parabolic: Optional[ProjectivePoint]

    @property
    def unstable(self) -> bool:
        return self.status == "unstable"


class BinaryForm:
    """f = sum a_i X^i Y^(N-i); coefficients a_0..a_N in the tower over F_p."""

    __slots__ = ("p", "N", "coeffs")

    def __init__(self, p: int, coeffs: Sequence[TowerLike]):
        if len(coeffs) < 2:
            raise InputError("a binary form needs degree at least 1")
        els = []
        for c in coeffs:
            if isinstance(c, int):
                c = TowerElement.constant(p, c)
            elif c.p != p:
                raise InputError("coefficient with mismatched characteristic")
            els.append(c)
        lvl = max(c.level for c in els)
        els = [c.lift(lvl) for c in els]
        if all(c.is_zero for c in els):
            raise InputError("the zero form has no instability analysis")
        self.p = p
        self.N = len(els) - 1
        self.coeffs = tuple(els)

    @classmethod
    def from_strings(cls, p: int, texts: Sequence[str], level: int = 0) -> "BinaryForm":
        from .field_tower import parse_tower

        return cls(p, [parse_tower(t, p, level) for t in texts])

    def dehomogenized(self) -> TowerPoly:
        """f(X, 1) as a univariate polynomial."""
        return TowerPoly(self.p, self.coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BinaryForm)
            and self.p == other.p
            and self.N == other.N
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __str__(self) -> str:
        parts = []
        for i in range(self.N, -1, -1):
            c = self.coeffs[i]
            if c.is_zero:
                continue
            mono = []
            if i:
                mono.append("X" if i == 1 else f"X^{i}")
            if self.N - i:
                j = self.N - i
                mono.append("Y" if j == 1 else f"Y^{j}")
            monomial = "*".join(mono) or "1"
            parts.append(monomial if c == 1 and mono else f"({c})*{monomial}")
        return " + ".join(parts) or "0"

    def __repr__(self) -> str:
        return f"BinaryForm(p={self.p}, N={self.N}, {self!s})"


def _coerce_matrix(p: int, g: Sequence[Sequence[TowerLike]]) -> Matrix2:
    if len(g) != 2 or any(len(row) != 2 for row in g):
        raise InputError("expected a 2x2 matrix")
    out = []
    for row in g:
        new = []
        for c in row:
            if isinstance(c, int):
                c = TowerElement.constant(p, c)
            elif c.p != p:
                raise InputError("matrix entry with mismatched characteristic")
            new.append(c)
        out.append(tuple(new))
    return tuple(out)  # type: ignore[return-value]


def det2(g: Matrix2) -> TowerElement:
    return g[0][0] * g[1][1] - g[0][1] * g[1][0]


def _require_sl2(p: int, g: Sequence[Sequence[TowerLike]]) -> Matrix2:
    mat = _coerce_matrix(p, g)
    d = det2(mat)
    if d.is_zero:
        raise InputError("singular matrix")
    if d != 1:
        raise InputError("matrix determinant must be 1")
    return mat


def act_on_form(f: BinaryForm, g: Sequence[Sequence[TowerLike]]) -> BinaryForm:
    """g.f with X -> g11 X + g21 Y and Y -> g12 X + g22 Y (columns of g)."""
    mat = _require_sl2(f.p, g)
    a, c = mat[0][0], mat[1][0]  # image of X
    b, d = mat[0][1], mat[1][1]  # image of Y
    zero = TowerElement.zero(f.p)
    one = TowerElement.one(f.p)

    def powers(u: TowerElement, v: TowerElement, k: int) -> List[List[TowerElement]]:
        # arrays of X-degree coefficients of (uX + vY)^i for i = 0..k
        rows = [[one]]
        for _ in range(k):
            prev = rows[-1]
            nxt = [zero] * (len(prev) + 1)
            for jj, coef in enumerate(prev):
                nxt[jj] = nxt[jj] + coef * v
                nxt[jj + 1] = nxt[jj + 1] + coef * u
            rows.append(nxt)
        return rows

    px = powers(a, c, f.N)
    py = powers(b, d, f.N)
    out = [zero] * (f.N + 1)
    for i, coeff in enumerate(f.coeffs):
        if coeff.is_zero:
            continue
        left, right = px[i], py[f.N - i]
        for j1, c1 in enumerate(left):
            if c1.is_zero:
                continue
            for j2, c2 in enumerate(right):
                if not c2.is_zero:
                    out[j1 + j2] = out[j1 + j2] + coeff * c1 * c2
    return BinaryForm(f.p, out)


def act_on_root(g: Sequence[Sequence[TowerLike]], pt: ProjectivePoint) -> ProjectivePoint:
    """Induced motion of dual points: (x, y) -> (g^T)^{-1} (x, y)."""
    mat = _require_sl2(pt.x.p, g)
    a, b = mat[0]
    c, d = mat[1]
    return ProjectivePoint(d * pt.x - c * pt.y, -b * pt.x + a * pt.y)


def hm_weight(f: BinaryForm, g: Sequence[Sequence[TowerLike]], a: int = 1) -> int:
    """m(g.f, lambda_a) for lambda_a = diag(t^a, t^-a): min of a*(i - j)
    over the monomials X^i Y^j of g.f with nonzero coefficient."""
    if a < 1:
        raise InputError("the diagonal exponent a must be positive")
    moved = act_on_form(f, g)
    return min(a * (2 * i - f.N) for i, c in enumerate(moved.coeffs) if not c.is_zero)


def multiplicity_profile(f: TowerPoly) -> Tuple[RootClass, ...]:
    """Root classes of a nonzero univariate polynomial over the tower field.

    Classes are pairwise disjoint and reconstruct the input exactly:
    lc(f) * prod sep_part(X^(p^e))^(mult / p^e) = f.
    """
    if f.is_zero:
        raise InputError("the zero polynomial has no multiplicity profile")
    classes = _profile(f.monic())
    return tuple(
        sorted(
            classes,
            key=lambda rc: (-rc.mult, -rc.insep_exp, rc.sep_part.degree, rc.sep_part.to_text()),
        )
    )


def _profile(f: TowerPoly) -> List[RootClass]:
    # f monic
    if f.degree == 0:
        return []
    p = f.p
    df = f.derivative()
    if df.is_zero:
        g = f.pth_decompose()
        if g is None:
            raise CertificateError("vanishing derivative without p-divisible exponents")
        return [
            RootClass(rc.sep_part, rc.mult * p, rc.insep_exp + 1) for rc in _profile(g)
        ]
    out: List[RootClass] = []
    c = f.gcd(df)
    w = f.exact_div(c)
    i = 1
    while w.degree > 0:
        y = w.gcd(c)
        z = w.exact_div(y)
        if z.degree > 0:
            out.append(RootClass(z.monic(), i, 0))
        w = y
        c = c.exact_div(y)
        i += 1
    if c.degree > 0:
        out.extend(_profile(c))
    return out


def reconstruct(classes: Sequence[RootClass], p: int, lc: TowerLike = 1) -> TowerPoly:
    """lc * prod sep_part(X^(p^e))^(mult/p^e): test harness for the profile."""
    acc = TowerPoly(p, (1,)).scale(lc)
    for rc in classes:
        if rc.at_infinity:
            raise InputError("the infinity class does not reconstruct a univariate factor")
        step = rc.sep_part.stretch(p**rc.insep_exp) ** (rc.mult // p**rc.insep_exp)
        acc = acc * step
    return acc


def analyze(f: BinaryForm) -> InstabilityReport:
    """Full instability report: status, nu, dominant root in the tower, the
    field-of-definition exponent, and a verified conjugating witness."""
    p, N = f.p, f.N
    d = max(i for i, c in enumerate(f.coeffs) if not c.is_zero)
    inf_mult = N - d
    classes: List[RootClass] = []
    if d >= 1:
        classes.extend(multiplicity_profile(f.dehomogenized()))
    if inf_mult >= 1:
        classes.append(RootClass(AT_INFINITY, inf_mult, 0))
    T = max((rc.mult for rc in classes), default=0)
    nu = Nu(2 * T - N, 2)
    if 2 * T <= N:
        return InstabilityReport("semistable", T, nu, None, None, None, None)

    dominant = [rc for rc in classes if rc.mult == T]
    if len(dominant) != 1 or dominant[0].root_count() != 1:
        raise CertificateError("dominant root of an unstable form must be unique")
    rc = dominant[0]
    one = TowerElement.one(p)
    if rc.at_infinity:
        root = ProjectivePoint(one, TowerElement.zero(p))
        t = 0
        g = ((TowerElement.zero(p), one), (-one, TowerElement.zero(p)))
    else:
        # sep_part = X - delta; the root is delta^(1/p^e), read off by
        # reinterpreting delta's representation e levels higher.
        delta = -rc.sep_part.coeff(0)
        beta = TowerElement(
            p, delta.num, delta.den, delta.level + rc.insep_exp
        ).normalized()
        root = ProjectivePoint(beta, one)
        t = beta.insep_exponent()
        g = ((one, TowerElement.zero(p)), (beta, one))
    witness = OnePSWitness(matrix=g)
    if hm_weight(f, g, 1) != 2 * T - N:
        raise CertificateError("conjugating witness does not attain 2T - N")
    return InstabilityReport("unstable", T, nu, root, t, witness, root)


def oracle_nu_max(
    f: BinaryForm, candidates: Sequence[Sequence[Sequence[TowerLike]]]
) -> Nu:
    """max over candidate g of m(g.f, diag(t, 1/t)), a lower bound for the
    instability measure; equals analyze(f).nu once some candidate moves the
    dominant root to [0:1]."""
    candidates = list(candidates)
    if not candidates:
        raise InputError("candidate set is empty")
    return Nu(max(hm_weight(f, g, 1) for g in candidates), 2)


def sl2_matrices(p: int) -> List[Tuple[Tuple[int, int], Tuple[int, int]]]:
    """All of SL(2, F_p) as integer matrices; exhaustive oracle fuel."""
    out = []
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p == 1:
            out.append(((a, b), (c, d)))
    return out
