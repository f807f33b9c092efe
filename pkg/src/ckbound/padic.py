"""p-adic valuations, divided-power series, Newton polygons, zero counts.

A DividedSeries stores the standard coefficients c_i of f = sum c_i t^i
together with the prime; the divided coefficients are a_i = c_i * i!.
PD-integrality (all a_i in Z_p) is the integrality notion used throughout.
Zero counting happens on Newton polygons; counting on a truncated series is
only allowed when the tail is certified not to interfere (PD-integral tails
admit the bound v_p(c_i) >= -v_p(i!)).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from sympy import isprime

from .bounds import UpperBoundReal, DEFAULT_PRECISION

__all__ = [
    "Valuation", "INF_VAL", "vp", "vp_factorial",
    "DividedSeries", "ds_mul", "ds_deriv", "is_pd_integral", "is_pd_unit",
    "NewtonPolygon", "newton_polygon", "count_zeros", "zero_bound_nice",
    "UncertifiedTruncation",
]


class UncertifiedTruncation(ValueError):
    """Zero counting was attempted on a truncation it cannot be trusted on."""


@total_ordering
class Valuation:
    """Integer valuation with a distinguished +infinity (the valuation of 0)."""

    __slots__ = ("v",)

    def __init__(self, v):
        if v is not None and not isinstance(v, int):
            raise TypeError("valuation must be an int or None (= +infinity)")
        object.__setattr__(self, "v", v)

    def __setattr__(self, name, value):
        raise AttributeError("Valuation is immutable")

    @property
    def is_inf(self):
        return self.v is None

    def __add__(self, other):
        if isinstance(other, int):
            other = Valuation(other)
        if not isinstance(other, Valuation):
            return NotImplemented
        if self.is_inf or other.is_inf:
            return INF_VAL
        return Valuation(self.v + other.v)

    __radd__ = __add__

    def __eq__(self, other):
        if isinstance(other, int):
            other = Valuation(other)
        if not isinstance(other, Valuation):
            return NotImplemented
        return self.v == other.v

    def __lt__(self, other):
        if isinstance(other, (int, Fraction)):
            return False if self.is_inf else self.v < other
        if not isinstance(other, Valuation):
            return NotImplemented
        if self.is_inf:
            return False
        return True if other.is_inf else self.v < other.v

    def __hash__(self):
        return hash(("Valuation", self.v))

    def __repr__(self):
        return "+inf" if self.is_inf else repr(self.v)


INF_VAL = Valuation(None)


def vp(x, p):
    """Exact p-adic valuation of a rational; vp(0) is +infinity."""
    if not isprime(p):
        raise ValueError("p = %r is not prime" % (p,))
    x = Fraction(x)
    if x == 0:
        return INF_VAL
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return Valuation(v)


def vp_factorial(i, p):
    """v_p(i!) by Legendre: (i - digit sum of i base p)/(p - 1)."""
    if i < 0:
        raise ValueError("i must be >= 0")
    s, n = 0, i
    while n:
        s += n % p
        n //= p
    return (i - s) // (p - 1)


@dataclass(frozen=True)
class DividedSeries:
    p: int
    coeffs: tuple

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError("p = %r is not prime" % (self.p,))
        object.__setattr__(self, "coeffs",
                           tuple(Fraction(c) for c in self.coeffs))

    @property
    def trunc(self):
        return len(self.coeffs) - 1

    def divided_coeff(self, i):
        """a_i = c_i * i!."""
        a = self.coeffs[i]
        for k in range(2, i + 1):
            a *= k
        return a

    @classmethod
    def from_divided(cls, p, a_list):
        coeffs = []
        fact = 1
        for i, a in enumerate(a_list):
            if i:
                fact *= i
            coeffs.append(Fraction(a) / fact)
        return cls(p, tuple(coeffs))


def ds_mul(f, g):
    if f.p != g.p:
        raise ValueError("prime mismatch")
    M = min(f.trunc, g.trunc)
    out = []
    for k in range(M + 1):
        acc = Fraction(0)
        for i in range(k + 1):
            acc += f.coeffs[i] * g.coeffs[k - i]
        out.append(acc)
    return DividedSeries(f.p, tuple(out))


def ds_deriv(f):
    """d/dt on standard coefficients: c_i -> (i+1) c_{i+1}."""
    out = tuple((i + 1) * f.coeffs[i + 1] for i in range(f.trunc))
    return DividedSeries(f.p, out)


def is_pd_integral(f):
    """True iff every divided coefficient a_i = c_i i! is a p-adic integer."""
    for i, c in enumerate(f.coeffs):
        v = vp(c, f.p)
        if not v.is_inf and v.v + vp_factorial(i, f.p) < 0:
            return False
    return True


def is_pd_unit(f):
    return is_pd_integral(f) and (not vp(f.coeffs[0], f.p).is_inf) \
        and vp(f.coeffs[0], f.p).v == 0


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of (i, v_p(c_i)) over nonzero standard coefficients.

    trunc is None for exact polynomials.  pd_tail records whether dropped
    coefficients obey the PD bound v_p(c_i) >= -v_p(i!), the only tail this
    module can certify.
    """
    p: int
    vertices: tuple
    first_nonzero: int
    trunc: int | None = None
    pd_tail: bool = False


def _lower_hull(pts):
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it is on or above the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return tuple(hull)


def newton_polygon(f, p=None):
    """Build the polygon of a DividedSeries (treated as a certified-or-not
    truncation) or of an explicit polynomial coefficient list (exact)."""
    if isinstance(f, DividedSeries):
        coeffs, p = f.coeffs, f.p
        trunc, pd_tail = f.trunc, is_pd_integral(f)
    else:
        if p is None:
            raise ValueError("a coefficient list needs an explicit p")
        coeffs = tuple(Fraction(c) for c in f)
        trunc, pd_tail = None, False
    pts = [(i, vp(c, p).v) for i, c in enumerate(coeffs) if c != 0]
    if not pts:
        raise ValueError("identically-zero input has no Newton polygon")
    return NewtonPolygon(p, _lower_hull(pts), pts[0][0], trunc, pd_tail)


def count_zeros(polygon, lam):
    """Zeros (with multiplicity, over the completed algebraic closure) of
    valuation >= lam: hull-segment lengths at root valuation >= lam plus the
    order of vanishing at 0.  Raises UncertifiedTruncation when the polygon
    came from a truncation whose tail could interfere."""
    lam = Fraction(lam)
    verts = polygon.vertices
    count = polygon.first_nonzero
    end = verts[0]
    for (i1, v1), (i2, v2) in zip(verts, verts[1:]):
        if Fraction(v1 - v2, i2 - i1) >= lam:
            count += i2 - i1
            end = (i2, v2)
        else:
            break  # slopes increase, so root valuations only decrease
    if polygon.trunc is not None:
        if not polygon.pd_tail:
            raise UncertifiedTruncation(
                "truncated series without a PD-integral tail bound")
        i_l, v_l = end
        if i_l >= polygon.trunc:
            raise UncertifiedTruncation(
                "counted segments reach the truncation order")
        gap = lam - Fraction(1, polygon.p - 1)
        if gap <= 0:
            raise UncertifiedTruncation(
                "lambda <= 1/(p-1): PD tail cannot be ruled out")
        # a tail point (i, b) with b >= -(i-1)/(p-1) extends a counted
        # segment only if it falls strictly below the slope -lam line
        # through (i_l, v_l); that fails for all i > trunc iff:
        i_crit = (v_l + lam * i_l - Fraction(1, polygon.p - 1)) / gap
        if polygon.trunc + 1 < i_crit:
            raise UncertifiedTruncation(
                "truncation %d below certified tail threshold %s"
                % (polygon.trunc, i_crit))
    return count


def zero_bound_nice(N, field, lam, precision=DEFAULT_PRECISION):
    """floor((1 + 1/((lam - 1/(p-1)) log p)) * (N-1)), rounded so the result
    stays a valid bound; the zero count of a nonzero solution of a PD-nice
    operator of order N in the closed disc of radius p^{-lam}."""
    if N < 1:
        raise ValueError("operator order must be >= 1")
    lam = Fraction(lam)
    gap = lam - Fraction(1, field.p - 1)
    if gap <= 0:
        raise ValueError("need lam > 1/(p-1)")
    if N == 1:
        return 0
    p = field.p

    def expr(iv):
        g = iv.mpf(gap.numerator) / iv.mpf(gap.denominator)
        return 1 + 1 / (g * iv.log(p))

    return (UpperBoundReal.from_iv(expr, precision) * (N - 1)).floor()
