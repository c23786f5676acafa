"""Exact arithmetic in F_p, the rational function field F_p(s), and its
purely inseparable root tower.

The tower level e works with the field F_p(s^(1/p^e)).  An element is stored
as a reduced fraction num/den of univariate polynomials over F_p in a single
generator u subject to s = u^(p^e); lifting to a higher level substitutes
u -> u^(p^delta).  Denominators are monic and fractions coprime, so canonical
representatives are unique and equality is a tuple comparison.
"""

from __future__ import annotations

import re
from typing import Iterable, Optional, Sequence, Union

from .errors import InputError

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every 64-bit (and desk-scale) input."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The prime field F_p; elements are canonical integers in 0..p-1."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise InputError(f"characteristic must be prime, got {p!r}")
        self.p = p

    def element(self, value: int) -> int:
        return value % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return pow(a, -1, self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and self.p == other.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"


class FpPoly:
    """Dense univariate polynomial over F_p.

    Coefficients are stored ascending with no trailing zeros; the zero
    polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Iterable[int] = ()):
        c = [x % p for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.p = p
        self.coeffs = tuple(c)

    @classmethod
    def zero(cls, p: int) -> "FpPoly":
        return cls(p, ())

    @classmethod
    def one(cls, p: int) -> "FpPoly":
        return cls(p, (1,))

    @classmethod
    def constant(cls, p: int, c: int) -> "FpPoly":
        return cls(p, (c,))

    @classmethod
    def gen(cls, p: int) -> "FpPoly":
        return cls(p, (0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def _check(self, other: "FpPoly") -> None:
        if self.p != other.p:
            raise InputError(f"mixed characteristics {self.p} and {other.p}")

    def __add__(self, other: "FpPoly") -> "FpPoly":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        c = list(a)
        for i, bi in enumerate(b):
            c[i] = (c[i] + bi) % self.p
        return FpPoly(self.p, c)

    def __sub__(self, other: "FpPoly") -> "FpPoly":
        self._check(other)
        c = list(self.coeffs) + [0] * max(0, len(other.coeffs) - len(self.coeffs))
        for i, bi in enumerate(other.coeffs):
            c[i] = (c[i] - bi) % self.p
        return FpPoly(self.p, c)

    def __neg__(self) -> "FpPoly":
        return FpPoly(self.p, tuple(-x % self.p for x in self.coeffs))

    def __mul__(self, other: "FpPoly") -> "FpPoly":
        self._check(other)
        if self.is_zero or other.is_zero:
            return FpPoly.zero(self.p)
        a, b = self.coeffs, other.coeffs
        c = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    c[i + j] += ai * bj
        return FpPoly(self.p, c)

    def scale(self, k: int) -> "FpPoly":
        k %= self.p
        return FpPoly(self.p, tuple(x * k for x in self.coeffs))

    def __pow__(self, e: int) -> "FpPoly":
        if e < 0:
            raise InputError("negative polynomial power")
        out = FpPoly.one(self.p)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other: "FpPoly"):
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        r = list(self.coeffs)
        dB = other.degree
        inv_lc = pow(other.lc, -1, p)
        q = [0] * max(0, len(r) - dB)
        while len(r) - 1 >= dB and r:
            c = r[-1] * inv_lc % p
            k = len(r) - 1 - dB
            q[k] = c
            for j, bj in enumerate(other.coeffs):
                r[k + j] = (r[k + j] - c * bj) % p
            while r and r[-1] == 0:
                r.pop()
        return FpPoly(p, q), FpPoly(p, r)

    def __floordiv__(self, other: "FpPoly") -> "FpPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "FpPoly") -> "FpPoly":
        return divmod(self, other)[1]

    def exact_div(self, other: "FpPoly") -> "FpPoly":
        q, r = divmod(self, other)
        if not r.is_zero:
            raise InputError("exact_div with nonzero remainder")
        return q

    def monic(self) -> "FpPoly":
        if self.is_zero or self.lc == 1:
            return self
        return self.scale(pow(self.lc, -1, self.p))

    def gcd(self, other: "FpPoly") -> "FpPoly":
        a, b = self, other
        while not b.is_zero:
            a, b = b, a % b
        return a.monic()

    def lcm(self, other: "FpPoly") -> "FpPoly":
        if self.is_zero or other.is_zero:
            return FpPoly.zero(self.p)
        return (self * other).exact_div(self.gcd(other)).monic()

    def derivative(self) -> "FpPoly":
        return FpPoly(self.p, tuple(i * c for i, c in enumerate(self.coeffs))[1:] or ())

    def stretch(self, k: int) -> "FpPoly":
        """Substitute u -> u^k (exponent scaling)."""
        if self.is_zero:
            return self
        c = [0] * (self.degree * k + 1)
        for i, ci in enumerate(self.coeffs):
            c[i * k] = ci
        return FpPoly(self.p, c)

    def unstretch(self, k: int) -> Optional["FpPoly"]:
        """Inverse of stretch; None unless every exponent is divisible by k."""
        if any(c and i % k for i, c in enumerate(self.coeffs)):
            return None
        return FpPoly(self.p, tuple(self.coeffs[i] for i in range(0, len(self.coeffs), k)))

    def evaluate(self, x: int) -> int:
        y = 0
        for c in reversed(self.coeffs):
            y = (y * x + c) % self.p
        return y

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FpPoly) and self.p == other.p and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def to_text(self, var: str = "s") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else f"{c}*"
                parts.append(f"{head}{var}" + (f"^{i}" if i > 1 else ""))
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"FpPoly(p={self.p}, {self.to_text()!r})"


TowerLike = Union["TowerElement", int]


class TowerElement:
    """An element of F_p(s^(1/p^level)), reduced and with monic denominator."""

    __slots__ = ("p", "level", "num", "den")

    def __init__(self, p: int, num: FpPoly, den: Optional[FpPoly] = None, level: int = 0):
        if den is None:
            den = FpPoly.one(p)
        if num.p != p or den.p != p:
            raise InputError("coefficient polynomials in the wrong characteristic")
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if level < 0:
            raise InputError("negative tower level")
        if num.is_zero:
            num, den = FpPoly.zero(p), FpPoly.one(p)
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            if den.lc != 1:
                inv = pow(den.lc, -1, p)
                num, den = num.scale(inv), den.scale(inv)
        self.p = p
        self.level = level
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, p: int, c: int) -> "TowerElement":
        return cls(p, FpPoly.constant(p, c))

    @classmethod
    def zero(cls, p: int) -> "TowerElement":
        return cls(p, FpPoly.zero(p))

    @classmethod
    def one(cls, p: int) -> "TowerElement":
        return cls(p, FpPoly.one(p))

    @classmethod
    def s(cls, p: int) -> "TowerElement":
        """The base transcendental s of K = F_p(s)."""
        return cls(p, FpPoly.gen(p))

    @classmethod
    def generator(cls, p: int, level: int) -> "TowerElement":
        """The generator s^(1/p^level) of the level's field."""
        return cls(p, FpPoly.gen(p), level=level)

    def _coerce(self, other: TowerLike) -> "TowerElement":
        if isinstance(other, TowerElement):
            if other.p != self.p:
                raise InputError(f"mixed characteristics {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return TowerElement.constant(self.p, other)
        return NotImplemented  # type: ignore[return-value]

    # -- level bookkeeping -------------------------------------------------

    def lift(self, level: int) -> "TowerElement":
        if level < self.level:
            raise InputError("lift target below stored level")
        if level == self.level:
            return self
        k = self.p ** (level - self.level)
        return TowerElement(self.p, self.num.stretch(k), self.den.stretch(k), level)

    @staticmethod
    def _common(a: "TowerElement", b: "TowerElement"):
        lvl = max(a.level, b.level)
        return a.lift(lvl), b.lift(lvl), lvl

    def _descend_once(self) -> Optional["TowerElement"]:
        if self.level == 0:
            return None
        n = self.num.unstretch(self.p)
        d = self.den.unstretch(self.p)
        if n is None or d is None:
            return None
        return TowerElement(self.p, n, d, self.level - 1)

    def normalized(self) -> "TowerElement":
        """Equivalent element stored at its minimal tower level."""
        x = self
        while True:
            y = x._descend_once()
            if y is None:
                return x
            x = y

    def insep_exponent(self) -> int:
        """Minimal e with self in K^(1/p^e), K = F_p(s)."""
        return self.normalized().level

    # -- field operations --------------------------------------------------

    def __add__(self, other: TowerLike) -> "TowerElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b, lvl = self._common(self, o)
        return TowerElement(self.p, a.num * b.den + b.num * a.den, a.den * b.den, lvl)

    __radd__ = __add__

    def __sub__(self, other: TowerLike) -> "TowerElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b, lvl = self._common(self, o)
        return TowerElement(self.p, a.num * b.den - b.num * a.den, a.den * b.den, lvl)

    def __rsub__(self, other: TowerLike) -> "TowerElement":
        return self._coerce(other) - self

    def __neg__(self) -> "TowerElement":
        return TowerElement(self.p, -self.num, self.den, self.level)

    def __mul__(self, other: TowerLike) -> "TowerElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b, lvl = self._common(self, o)
        return TowerElement(self.p, a.num * b.num, a.den * b.den, lvl)

    __rmul__ = __mul__

    def __truediv__(self, other: TowerLike) -> "TowerElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero:
            raise ZeroDivisionError("division by zero tower element")
        a, b, lvl = self._common(self, o)
        return TowerElement(self.p, a.num * b.den, a.den * b.num, lvl)

    def __rtruediv__(self, other: TowerLike) -> "TowerElement":
        return self._coerce(other) / self

    def __pow__(self, e: int) -> "TowerElement":
        if e < 0:
            return (TowerElement.one(self.p) / self) ** (-e)
        return TowerElement(self.p, self.num**e, self.den**e, self.level)

    def inverse(self) -> "TowerElement":
        return TowerElement.one(self.p) / self

    # -- Frobenius structure -----------------------------------------------

    def frobenius(self) -> "TowerElement":
        """The p-th power; coefficients are fixed, exponents scale by p."""
        return TowerElement(self.p, self.num.stretch(self.p), self.den.stretch(self.p), self.level)

    def pth_root(self) -> Optional["TowerElement"]:
        """The y with y^p = self at the same level, when one exists there."""
        n = self.num.unstretch(self.p)
        d = self.den.unstretch(self.p)
        if n is None or d is None:
            return None
        return TowerElement(self.p, n, d, self.level)

    # -- value semantics -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = TowerElement.constant(self.p, other)
        if not isinstance(other, TowerElement):
            return NotImplemented
        if self.p != other.p:
            return False
        a, b, _ = self._common(self, other)
        return a.num == b.num and a.den == b.den

    def __hash__(self) -> int:
        n = self.normalized()
        return hash((n.p, n.level, n.num.coeffs, n.den.coeffs))

    # -- text and JSON forms -------------------------------------------------

    def var_token(self) -> str:
        return "s" if self.level == 0 else "u"

    def __str__(self) -> str:
        var = self.var_token()
        if self.den == FpPoly.one(self.p):
            return self.num.to_text(var)
        return f"({self.num.to_text(var)})/({self.den.to_text(var)})"

    def __repr__(self) -> str:
        return f"TowerElement(p={self.p}, level={self.level}, {str(self)!r})"

    def to_json(self) -> dict:
        var = self.var_token()
        return {
            "p": self.p,
            "level": self.level,
            "num": self.num.to_text(var),
            "den": self.den.to_text(var),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TowerElement":
        try:
            p = int(obj["p"])
            level = int(obj.get("level", 0))
            num = obj["num"]
            den = obj.get("den", "1")
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed tower element object: {obj!r}") from exc
        if not is_prime(p):
            raise InputError(f"characteristic must be prime, got {p}")
        return parse_tower(num, p, level) / parse_tower(den, p, level)


def arith(x: TowerElement, y: TowerElement, op: str) -> TowerElement:
    """Dispatch table for the three field operations used by the CLI."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise InputError(f"unknown field operation {op!r}")


# -- expression grammar ------------------------------------------------------
#
# integer coefficients, the generator token (s at level 0, u above; both are
# accepted anywhere), ^ for powers, explicit or implicit *, / for fractions,
# parentheses, unary minus.

_TOKEN = re.compile(r"\s*(\d+|[a-zA-Z]+|\^|\*|/|\+|-|\(|\))")


class _Parser:
    def __init__(self, text: str, p: int, level: int):
        self.tokens = self._tokenize(text)
        self.pos = 0
        self.p = p
        self.level = level

    @staticmethod
    def _tokenize(text: str):
        out, i = [], 0
        while i < len(text):
            m = _TOKEN.match(text, i)
            if not m:
                raise InputError(f"bad character in expression at {text[i:]!r}")
            tok = m.group(1)
            # implicit product: 2s, 2(, s( , )( , )s
            if out and (
                (tok[0].isalpha() and (out[-1][0].isdigit() or out[-1] in (")",)))
                or (tok == "(" and (out[-1][0].isdigit() or out[-1][0].isalpha() or out[-1] == ")"))
                or (tok[0].isdigit() and out[-1] == ")")
            ):
                out.append("*")
            out.append(tok)
            i = m.end()
        return out

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self):
        tok = self._peek()
        self.pos += 1
        return tok

    def parse(self) -> TowerElement:
        v = self._expr()
        if self._peek() is not None:
            raise InputError(f"unexpected token {self._peek()!r}")
        return v

    def _expr(self) -> TowerElement:
        v = self._term()
        while self._peek() in ("+", "-"):
            if self._next() == "+":
                v = v + self._term()
            else:
                v = v - self._term()
        return v

    def _term(self) -> TowerElement:
        v = self._factor()
        while self._peek() in ("*", "/"):
            if self._next() == "*":
                v = v * self._factor()
            else:
                v = v / self._factor()
        return v

    def _factor(self) -> TowerElement:
        tok = self._peek()
        if tok == "-":
            self._next()
            return -self._factor()
        if tok == "+":
            self._next()
            return self._factor()
        return self._power()

    def _power(self) -> TowerElement:
        base = self._atom()
        if self._peek() == "^":
            self._next()
            sign = 1
            while self._peek() == "-":
                self._next()
                sign = -sign
            tok = self._next()
            if tok is None or not tok.isdigit():
                raise InputError("exponent must be an integer")
            return base ** (sign * int(tok))
        return base

    def _atom(self) -> TowerElement:
        tok = self._next()
        if tok is None:
            raise InputError("unexpected end of expression")
        if tok == "(":
            v = self._expr()
            if self._next() != ")":
                raise InputError("unbalanced parentheses")
            return v
        if tok.isdigit():
            return TowerElement.constant(self.p, int(tok))
        if tok.isalpha():
            if tok not in ("s", "u"):
                raise InputError(f"unknown variable {tok!r} (use s or u)")
            return TowerElement.generator(self.p, self.level)
        raise InputError(f"unexpected token {tok!r}")


def parse_tower(text: str, p: int, level: int = 0) -> TowerElement:
    """Parse an element of F_p(s^(1/p^level)) from the text grammar.

    The generator of the level's field is written `s` (level 0) or `u`
    (any level); e.g. ``(s^2+3)/(s+1)``.
    """
    if not is_prime(p):
        raise InputError(f"characteristic must be prime, got {p}")
    if not isinstance(text, str) or not text.strip():
        raise InputError("empty expression")
    return _Parser(text, p, level).parse()


class TowerPoly:
    """Univariate polynomial in X with TowerElement coefficients.

    Coefficients are kept at a single common tower level; ascending order,
    no trailing zeros.
    """

    __slots__ = ("p", "level", "coeffs")

    def __init__(self, p: int, coeffs: Sequence[TowerLike], level: Optional[int] = None):
        els = []
        for c in coeffs:
            if isinstance(c, int):
                c = TowerElement.constant(p, c)
            elif c.p != p:
                raise InputError("coefficient with mismatched characteristic")
            els.append(c)
        lvl = max([c.level for c in els], default=0)
        if level is not None:
            lvl = max(lvl, level)
        els = [c.lift(lvl) for c in els]
        while els and els[-1].is_zero:
            els.pop()
        self.p = p
        self.level = lvl
        self.coeffs = tuple(els)

    @classmethod
    def zero(cls, p: int) -> "TowerPoly":
        return cls(p, ())

    @classmethod
    def gen(cls, p: int) -> "TowerPoly":
        return cls(p, (0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> TowerElement:
        if self.is_zero:
            return TowerElement.zero(self.p)
        return self.coeffs[-1]

    def coeff(self, i: int) -> TowerElement:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return TowerElement.zero(self.p)

    def _pair(self, other: "TowerPoly"):
        if self.p != other.p:
            raise InputError("mixed characteristics")
        lvl = max(self.level, other.level)
        return lvl

    def __add__(self, other: "TowerPoly") -> "TowerPoly":
        lvl = self._pair(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return TowerPoly(self.p, [self.coeff(i) + other.coeff(i) for i in range(n)], lvl)

    def __sub__(self, other: "TowerPoly") -> "TowerPoly":
        lvl = self._pair(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return TowerPoly(self.p, [self.coeff(i) - other.coeff(i) for i in range(n)], lvl)

    def __neg__(self) -> "TowerPoly":
        return TowerPoly(self.p, [-c for c in self.coeffs], self.level)

    def __mul__(self, other: "TowerPoly") -> "TowerPoly":
        lvl = self._pair(other)
        if self.is_zero or other.is_zero:
            return TowerPoly.zero(self.p)
        out = [TowerElement.zero(self.p) for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero:
                    out[i + j] = out[i + j] + a * b
        return TowerPoly(self.p, out, lvl)

    def scale(self, k: TowerLike) -> "TowerPoly":
        if isinstance(k, int):
            k = TowerElement.constant(self.p, k)
        return TowerPoly(self.p, [c * k for c in self.coeffs], self.level)

    def __pow__(self, e: int) -> "TowerPoly":
        if e < 0:
            raise InputError("negative polynomial power")
        out = TowerPoly(self.p, (1,))
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other: "TowerPoly"):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        lvl = self._pair(other)
        r = list(self.lift_coeffs(lvl))
        b = other.lift_coeffs(lvl)
        dB = len(b) - 1
        inv = b[-1].inverse()
        q = [TowerElement.zero(self.p) for _ in range(max(0, len(r) - dB))]
        while r and len(r) - 1 >= dB:
            c = r[-1] * inv
            k = len(r) - 1 - dB
            q[k] = c
            for j, bj in enumerate(b):
                r[k + j] = r[k + j] - c * bj
            while r and r[-1].is_zero:
                r.pop()
        return TowerPoly(self.p, q, lvl), TowerPoly(self.p, r, lvl)

    def __floordiv__(self, other: "TowerPoly") -> "TowerPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "TowerPoly") -> "TowerPoly":
        return divmod(self, other)[1]

    def exact_div(self, other: "TowerPoly") -> "TowerPoly":
        q, r = divmod(self, other)
        if not r.is_zero:
            raise InputError("exact_div with nonzero remainder")
        return q

    def monic(self) -> "TowerPoly":
        if self.is_zero or self.lc == 1:
            return self
        inv = self.lc.inverse()
        return TowerPoly(self.p, [c * inv for c in self.coeffs], self.level)

    def derivative(self) -> "TowerPoly":
        return TowerPoly(self.p, [c * i for i, c in enumerate(self.coeffs)][1:], self.level)

    def stretch(self, k: int) -> "TowerPoly":
        """Substitute X -> X^k."""
        if self.is_zero:
            return self
        out = [TowerElement.zero(self.p) for _ in range(self.degree * k + 1)]
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return TowerPoly(self.p, out, self.level)

    def pth_decompose(self) -> Optional["TowerPoly"]:
        """The g with self = g(X^p), when only p-divisible exponents occur."""
        if any(not c.is_zero and i % self.p for i, c in enumerate(self.coeffs)):
            return None
        return TowerPoly(
            self.p, [self.coeffs[i] for i in range(0, len(self.coeffs), self.p)], self.level
        )

    def evaluate(self, x: TowerLike) -> TowerElement:
        if isinstance(x, int):
            x = TowerElement.constant(self.p, x)
        y = TowerElement.zero(self.p)
        for c in reversed(self.coeffs):
            y = y * x + c
        return y

    def lift_coeffs(self, level: int):
        return tuple(c.lift(level) for c in self.coeffs)

    def gcd(self, other: "TowerPoly") -> "TowerPoly":
        """Monic gcd over the fraction field, via a primitive PRS over F_p[u][X].

        Denominators and content are cleared up front and the content is
        stripped after every pseudo-remainder, so coefficient growth stays
        bounded by the subresultant degrees rather than exploding the way a
        naive fraction-coefficient Euclid does.
        """
        if self.is_zero:
            return other.monic()
        if other.is_zero:
            return self.monic()
        lvl = self._pair(other)
        a = _integral_primitive(self.lift_coeffs(lvl))
        b = _integral_primitive(other.lift_coeffs(lvl))
        if len(a) - 1 < len(b) - 1:
            a, b = b, a
        while True:
            r = _prem(a, b, self.p)
            if not r:
                break
            a, b = b, _primitive(r)
        lead = b[-1]
        coeffs = [TowerElement(self.p, c, lead, lvl) for c in b]
        return TowerPoly(self.p, coeffs, lvl)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TowerPoly)
            and self.p == other.p
            and self.degree == other.degree
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __hash__(self) -> int:
        return hash((self.p, tuple(hash(c) for c in self.coeffs)))

    def __bool__(self) -> bool:
        return not self.is_zero

    def to_text(self, var: str = "X") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c.is_zero:
                continue
            if i == 0:
                parts.append(str(c))
                continue
            xs = var if i == 1 else f"{var}^{i}"
            if c == 1:
                parts.append(xs)
            elif c.is_constant and c.den.degree == 0:
                parts.append(f"{c}*{xs}")
            else:
                parts.append(f"({c})*{xs}")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"TowerPoly(p={self.p}, level={self.level}, {self.to_text()!r})"


def _integral_primitive(coeffs) -> list:
    """Clear denominators and content: TowerElement coeffs -> primitive FpPoly list."""
    p = coeffs[0].p
    den = FpPoly.one(p)
    for c in coeffs:
        den = den.lcm(c.den)
    ints = [c.num * den.exact_div(c.den) for c in coeffs]
    return _primitive(ints)


def _primitive(coeffs: list) -> list:
    content = coeffs[0]
    for c in coeffs[1:]:
        content = content.gcd(c)
        if content.degree == 0:
            break
    content = content.monic()
    if content.degree > 0:
        coeffs = [c.exact_div(content) for c in coeffs]
    return coeffs


def _prem(a: list, b: list, p: int) -> list:
    """Pseudo-remainder of FpPoly-coefficient polynomials (scalar multiples folded in)."""
    r = list(a)
    dB = len(b) - 1
    lb = b[-1]
    while r and len(r) - 1 >= dB:
        lr = r[-1]
        shift = len(r) - 1 - dB
        r = [c * lb for c in r]
        for k, bc in enumerate(b):
            r[shift + k] = r[shift + k] - bc * lr
        while r and r[-1].is_zero:
            r.pop()
    return r
