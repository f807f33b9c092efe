"""Exact rational-function arithmetic on P1 and divisor bookkeeping.

Polynomials are dense tuples of Fractions, low degree first, with no trailing
zeros (the zero polynomial is the empty tuple).  RationalFunction keeps a
reduced fraction with monic denominator.  P1Divisor supports rational points,
the point at infinity, and conjugate clusters of irrational roots keyed by
their monic minimal polynomial.
"""

from dataclasses import dataclass
from fractions import Fraction

import sympy

from .series import QQ, PowerSeries, ps_geom_inverse, ps_mul

__all__ = [
    "poly_trim", "poly_add", "poly_neg", "poly_mul", "poly_divmod", "poly_gcd",
    "poly_deriv", "poly_eval", "poly_shift", "poly_str", "parse_poly",
    "RationalFunction", "RF_Z", "rf_const", "rf_poly", "z_minus_z2",
    "Infinity", "INFINITY", "P1Divisor", "divisor_of",
    "LocalExpansion", "taylor_expand", "PoleError",
]


class PoleError(ValueError):
    """Evaluation or expansion at a pole of the function."""


def poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(Fraction(x) for x in c)


def poly_add(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return poly_trim(out)


def poly_neg(a):
    return tuple(-x for x in a)


def poly_mul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out)


def poly_divmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        coef = a[i + len(b) - 1] / lead
        if coef:
            q[i] = coef
            for j, y in enumerate(b):
                a[i + j] -= coef * y
    return poly_trim(q), poly_trim(a)


def poly_gcd(a, b):
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if a:
        lead = a[-1]
        a = tuple(x / lead for x in a)
    return a


def poly_deriv(a):
    return poly_trim(i * x for i, x in enumerate(a) if i)


def poly_eval(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_shift(a, s):
    """Coefficients of p(s + t) as a polynomial in t (exact Taylor shift)."""
    out = list(a)
    # repeated synthetic division by (t - s) in reverse builds the shift
    for k in range(len(out) - 1):
        for i in range(len(out) - 2, k - 1, -1):
            out[i] += s * out[i + 1]
    return poly_trim(out)


def poly_str(a, var="z"):
    if not a:
        return "0"
    parts = []
    for i, c in enumerate(a):
        if i == 0:
            parts.append(str(c))
        elif i == 1:
            parts.append("%s*%s" % (c, var))
        else:
            parts.append("%s*%s^%d" % (c, var, i))
    return " + ".join(parts)


def parse_poly(text, var="z"):
    coeffs = {}
    for term in text.split("+"):
        term = term.strip()
        if not term:
            raise ValueError("empty term in polynomial %r" % (text,))
        if var in term:
            c, _, power = term.partition("*" + var)
            if c == term:  # no '*': forms like "z" or "z^2"
                c, _, power = "1", "", term[len(var):]
            else:
                power = term[term.index(var) + len(var):]
            exp = int(power[1:]) if power.startswith("^") else (1 if not power else int(power))
            if not power:
                exp = 1
            coeffs[exp] = coeffs.get(exp, Fraction(0)) + Fraction(c.strip())
        else:
            coeffs[0] = coeffs.get(0, Fraction(0)) + Fraction(term)
    n = max(coeffs) + 1 if coeffs else 0
    return poly_trim(coeffs.get(i, Fraction(0)) for i in range(n))


class RationalFunction:
    """num/den, reduced, monic denominator; immutable."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(Fraction(1),)):
        num = poly_trim(num)
        den = poly_trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num:
            g = poly_gcd(num, den)
            if len(g) > 1:
                num = poly_divmod(num, g)[0]
                den = poly_divmod(den, g)[0]
            lead = den[-1]
            if lead != 1:
                num = tuple(x / lead for x in num)
                den = tuple(x / lead for x in den)
        else:
            den = (Fraction(1),)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @property
    def is_zero(self):
        return not self.num

    @property
    def is_polynomial(self):
        return self.den == (Fraction(1),)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = rf_const(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = rf_const(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        num = poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den))
        return RationalFunction(num, poly_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(poly_neg(self.num), self.den)

    def __sub__(self, other):
        return self + (-other if isinstance(other, RationalFunction)
                       else rf_const(-Fraction(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = rf_const(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return RationalFunction(poly_mul(self.num, other.num),
                                poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = rf_const(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(poly_mul(self.num, other.den),
                                poly_mul(self.den, other.num))

    def __pow__(self, n):
        if n < 0:
            return rf_const(1) / self ** (-n)
        out = rf_const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def deriv(self):
        num = poly_add(poly_mul(poly_deriv(self.num), self.den),
                       poly_neg(poly_mul(self.num, poly_deriv(self.den))))
        return RationalFunction(num, poly_mul(self.den, self.den))

    def eval(self, x):
        x = Fraction(x)
        d = poly_eval(self.den, x)
        if d == 0:
            raise PoleError("pole at %s" % (x,))
        return poly_eval(self.num, x) / d

    def __repr__(self):
        if self.is_polynomial:
            return poly_str(self.num)
        return "(%s)/(%s)" % (poly_str(self.num), poly_str(self.den))


def rf_const(q):
    return RationalFunction((Fraction(q),))


def rf_poly(coeffs):
    return RationalFunction(tuple(Fraction(c) for c in coeffs))


RF_Z = rf_poly((0, 1))


def z_minus_z2():
    return rf_poly((0, 1, -1))


class Infinity:
    """The point at infinity on P1 (divisor support key)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"


INFINITY = Infinity()


def _as_point(pt):
    if isinstance(pt, Infinity):
        return pt
    if isinstance(pt, tuple) and pt and pt[0] == "cluster":
        return ("cluster", poly_trim(pt[1]))
    return Fraction(pt)


class P1Divisor:
    """Finitely supported integer-valued map on points of P1."""

    __slots__ = ("_d",)

    def __init__(self, support=()):
        d = {}
        items = support.items() if isinstance(support, dict) else support
        for pt, m in items:
            pt = _as_point(pt)
            m = int(m)
            if m:
                d[pt] = d.get(pt, 0) + m
                if d[pt] == 0:
                    del d[pt]
        object.__setattr__(self, "_d", d)

    def __setattr__(self, name, value):
        raise AttributeError("P1Divisor is immutable")

    def get(self, pt):
        return self._d.get(_as_point(pt), 0)

    def support(self):
        return set(self._d)

    def items(self):
        return dict(self._d).items()

    @property
    def degree(self):
        total = 0
        for pt, m in self._d.items():
            if isinstance(pt, tuple):  # cluster multiplicities are degree-weighted
                total += m
            else:
                total += m
        return total

    def __add__(self, other):
        out = dict(self._d)
        for pt, m in other._d.items():
            out[pt] = out.get(pt, 0) + m
        return P1Divisor(out)

    def __neg__(self):
        return P1Divisor({pt: -m for pt, m in self._d.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        return P1Divisor({pt: k * m for pt, m in self._d.items()})

    __mul__ = __rmul__

    def meet(self, other):
        """Pointwise minimum over the union of supports (missing = 0)."""
        pts = set(self._d) | set(other._d)
        return P1Divisor({pt: min(self._d.get(pt, 0), other._d.get(pt, 0))
                          for pt in pts})

    def clip_nonpositive(self):
        """min(self, 0) pointwise."""
        return P1Divisor({pt: m for pt, m in self._d.items() if m < 0})

    def __ge__(self, other):
        return all(self._d.get(pt, 0) >= other._d.get(pt, 0)
                   for pt in set(self._d) | set(other._d))

    def __le__(self, other):
        return other.__ge__(self)

    def __eq__(self, other):
        if not isinstance(other, P1Divisor):
            return NotImplemented
        return self._d == other._d

    def __hash__(self):
        return hash(frozenset(self._d.items()))

    def __repr__(self):
        if not self._d:
            return "0"

        def key(item):
            pt, _ = item
            if isinstance(pt, Infinity):
                return (2, 0, "")
            if isinstance(pt, tuple):
                return (1, 0, repr(pt[1]))
            return (0, pt, "")

        parts = []
        for pt, m in sorted(self._d.items(), key=key):
            if isinstance(pt, tuple):
                tag = "[%s]" % poly_str(pt[1])
            else:
                tag = "[%s]" % (pt,)
            parts.append(("%+d" % m) + tag)
        return " ".join(parts)


def _poly_root_divisor(coeffs, sign):
    """Zeros of a rational-coefficient polynomial as divisor entries."""
    z = sympy.Symbol("z")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * z ** i
               for i, c in enumerate(coeffs))
    entries = []
    _, factors = sympy.factor_list(sympy.Poly(expr, z, domain="QQ"))
    for fac, mult in factors:
        fac = sympy.Poly(fac, z)
        if fac.degree() == 1:
            b, a = [Fraction(str(c)) for c in reversed(fac.all_coeffs())]
            entries.append((-b / a, sign * mult))
        elif fac.degree() > 1:
            cs = [Fraction(str(c)) for c in reversed(fac.all_coeffs())]
            lead = cs[-1]
            cs = tuple(c / lead for c in cs)
            entries.append((("cluster", cs), sign * mult * fac.degree()))
    return entries


def divisor_of(f):
    """Zeros minus poles, including infinity; always degree 0."""
    if f.is_zero:
        raise ValueError("the zero function has no divisor")
    entries = []
    if len(f.num) > 1:
        entries += _poly_root_divisor(f.num, +1)
    if len(f.den) > 1:
        entries += _poly_root_divisor(f.den, -1)
    entries.append((INFINITY, (len(f.den) - 1) - (len(f.num) - 1)))
    div = P1Divisor(entries)
    if div.degree != 0:
        raise ArithmeticError("divisor of nonzero function must have degree 0")
    return div


@dataclass(frozen=True)
class LocalExpansion:
    """Truncated Taylor expansion at a rational base point, in t = z - a."""
    base: Fraction
    series: PowerSeries

    def __post_init__(self):
        object.__setattr__(self, "base", Fraction(self.base))
        if self.series.ring is not QQ:
            raise ValueError("local expansions use rational coefficients")

    @property
    def trunc(self):
        return self.series.trunc

    def __getitem__(self, i):
        return self.series[i]


def taylor_expand(f, a, M):
    """Exact Taylor coefficients of f at a to order M (geometric division)."""
    a = Fraction(a)
    if poly_eval(f.den, a) == 0:
        raise PoleError("pole of %r at %s" % (f, a))
    num = poly_shift(f.num, a)
    num_s = PowerSeries(QQ, num[: M + 1], M)
    if f.is_polynomial:
        return LocalExpansion(a, num_s)
    den = poly_shift(f.den, a)
    den_s = PowerSeries(QQ, den[: M + 1], M)
    series = ps_mul(num_s, ps_geom_inverse(den_s, M))
    return LocalExpansion(a, series)
