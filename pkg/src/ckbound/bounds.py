"""Explicit point-count bound evaluators.

Every bound is an exact big-integer product times a real constant kappa that
involves log(p).  The real factor is handled by UpperBoundReal: an exact dyadic
rational certified to lie above the true value, obtained from interval
arithmetic at a configurable precision.  Only the final ceiling is exposed as
an integer, so results are always valid upper bounds.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime

from .series import ZZ, ps_weighted_product

__all__ = [
    "LocalFieldData", "UpperBoundReal", "CurveBoundInput", "CoarseBound",
    "SiegelChain", "theta", "kappa", "weight_factor",
    "bound_main", "bound_refined", "bound_weight", "n_small",
    "bound_coarse", "bound_siegel", "bound_siegel_chain",
    "example_rank_gplus1_m", "pow_digit_count",
]

DEFAULT_PRECISION = 128


@dataclass(frozen=True)
class LocalFieldData:
    p: int
    e: int = 1
    f: int = 1

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError("p = %r is not prime" % (self.p,))
        if self.e < 1 or self.f < 1:
            raise ValueError("e and f must be >= 1")


def _mpf_tuple_to_fraction(t):
    sign, man, exp, bc = t
    if man == 0:
        if exp == 0:
            return Fraction(0)
        raise ArithmeticError("non-finite interval endpoint")
    v = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -v if sign else v


def _iv_context(precision):
    import mpmath
    return mpmath.iv, precision


class UpperBoundReal:
    """An exact dyadic rational known to be >= the nonnegative real it models.

    Exact operations (integer/Fraction multiplication, addition, ceiling)
    preserve the upper-bound property; enclosure of log-bearing expressions
    happens once, in from_iv, via interval arithmetic.
    """

    __slots__ = ("ub", "precision")

    def __init__(self, ub, precision=DEFAULT_PRECISION):
        object.__setattr__(self, "ub", Fraction(ub))
        object.__setattr__(self, "precision", precision)
        if self.ub < 0:
            raise ValueError("upper bounds here are for nonnegative reals")

    def __setattr__(self, name, value):
        raise AttributeError("UpperBoundReal is immutable")

    @classmethod
    def from_iv(cls, fn, precision=DEFAULT_PRECISION):
        """Evaluate fn(iv_context) -> interval and keep the upper endpoint."""
        iv, prec = _iv_context(precision)
        old = iv.prec
        iv.prec = prec
        try:
            x = fn(iv)
        finally:
            iv.prec = old
        return cls(_mpf_tuple_to_fraction(x._mpi_[1]), precision)

    def __mul__(self, other):
        if isinstance(other, UpperBoundReal):
            return UpperBoundReal(self.ub * other.ub,
                                  min(self.precision, other.precision))
        if isinstance(other, (int, Fraction)):
            if other < 0:
                raise ValueError("multiplying an upper bound by a negative")
            return UpperBoundReal(self.ub * other, self.precision)
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, UpperBoundReal):
            return UpperBoundReal(self.ub + other.ub,
                                  min(self.precision, other.precision))
        if isinstance(other, (int, Fraction)):
            return UpperBoundReal(self.ub + other, self.precision)
        return NotImplemented

    __radd__ = __add__

    def ceil(self):
        return math.ceil(self.ub)

    def floor(self):
        return math.floor(self.ub)

    def __float__(self):
        return float(self.ub)

    def __lt__(self, other):
        return self.ub < other

    def __le__(self, other):
        return self.ub <= other

    def __repr__(self):
        return "UpperBoundReal(<= %.12g @ %d bits)" % (float(self.ub), self.precision)


def theta(field):
    """ceil((e+1)/(p-1))."""
    return -((-(field.e + 1)) // (field.p - 1))


def kappa(field, precision=DEFAULT_PRECISION):
    """p^{(theta-1) f} * (1 + e/((theta - e/(p-1)) log p)), rounded upward."""
    th = theta(field)
    gap = Fraction(th) - Fraction(field.e, field.p - 1)
    if gap <= 0:
        raise ArithmeticError("theta gap not positive (impossible for valid input)")
    p, e = field.p, field.e

    def expr(iv):
        g = iv.mpf(gap.numerator) / iv.mpf(gap.denominator)
        return 1 + e / (g * iv.log(p))

    tail = UpperBoundReal.from_iv(expr, precision)
    return tail * (p ** ((th - 1) * field.f))


@dataclass(frozen=True)
class CurveBoundInput:
    g: int
    r: int
    s: int
    p: int
    n_ell_in_S: tuple = ()
    n_ell_out_S: tuple = ()
    points_mod_p: int = 1
    m: int = 1
    c_loc: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "n_ell_in_S", tuple(self.n_ell_in_S))
        object.__setattr__(self, "n_ell_out_S", tuple(self.n_ell_out_S))
        object.__setattr__(self, "c_loc", tuple(self.c_loc))
        if self.g < 0 or self.r < 0 or self.s < 0:
            raise ValueError("g, r, s must be >= 0")
        if not isprime(self.p):
            raise ValueError("auxiliary prime expected")
        if self.s != len(self.n_ell_in_S):
            raise ValueError("s must equal len(n_ell_in_S)")
        if any(n < 1 for n in self.n_ell_in_S + self.n_ell_out_S):
            raise ValueError("component counts must be positive")
        if self.points_mod_p < 1:
            raise ValueError("point count must be positive")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if len(self.c_loc) < self.m - 1:
            raise ValueError("need c_1..c_{m-1}")


def _c_product(c, m):
    out = 1
    for ci in tuple(c)[: m - 1]:
        if ci < 0:
            raise ValueError("local Hilbert coefficients must be >= 0")
        out *= ci + 1
    return out


def weight_factor(g, r, m, c, base=None):
    """base^m * prod_{i=1}^{m-1}(c_i + 1); base defaults to 4g+2r-2."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if base is None:
        base = 4 * g + 2 * r - 2
    return base ** m * _c_product(c, m)


def bound_main(inp, precision=DEFAULT_PRECISION):
    """ceil(kappa_p * prod n_ell * #X(F_p) * (4g-2)^m * prod(c_i+1)); needs r=s=0."""
    if inp.r != 0 or inp.s != 0:
        raise ValueError("bound_main is the r=0, s=0 case; use bound_refined")
    factor = math.prod(inp.n_ell_out_S) * inp.points_mod_p
    factor *= weight_factor(inp.g, 0, inp.m, inp.c_loc)
    return (kappa(LocalFieldData(inp.p), precision) * factor).ceil()


def bound_refined(inp, precision=DEFAULT_PRECISION):
    """ceil(kappa_p * prod_{l in S}(n_l+r) * prod_{l notin S} n_l
    * #Y(F_p) * (4g+2r-2)^m * prod(c_i+1))."""
    factor = math.prod(n + inp.r for n in inp.n_ell_in_S)
    factor *= math.prod(inp.n_ell_out_S) * inp.points_mod_p
    factor *= weight_factor(inp.g, inp.r, inp.m, inp.c_loc)
    return (kappa(LocalFieldData(inp.p), precision) * factor).ceil()


def bound_weight(field, points_special, m, c, base, precision=DEFAULT_PRECISION):
    """ceil(kappa_v * points * base^m * prod(c_i+1)) for a caller-chosen base."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if points_special < 0:
        raise ValueError("point count must be >= 0")
    factor = points_special * base ** m * _c_product(c, m)
    return (kappa(field, precision) * factor).ceil()


def n_small(g, r, p, curve_class):
    """Smallest N for which the (2g-2)z+D-type divisor argument applies.

    Cases: genus0 -> 0, genus1 -> 0, hyperelliptic (g>=2) -> 1, general g>=2 ->
    2g-3, improved to g+1 when p > 2g-2; fallback 2g+r-2.
    """
    if g < 0 or r < 0:
        raise ValueError("g, r must be >= 0")
    candidates = [2 * g + r - 2]
    if curve_class == "genus0":
        if g != 0:
            raise ValueError("genus0 class needs g = 0")
        candidates.append(0)
    elif curve_class == "genus1":
        if g != 1:
            raise ValueError("genus1 class needs g = 1")
        candidates.append(0)
    elif curve_class in ("hyperelliptic", "general"):
        if g < 2:
            raise ValueError("%s class needs g >= 2" % curve_class)
        if curve_class == "hyperelliptic":
            candidates.append(1)
        candidates.append(2 * g - 3)
        if p > 2 * g - 2:
            candidates.append(g + 1)
    else:
        raise ValueError("unknown curve class %r" % (curve_class,))
    return min(candidates)


def _certified_digit_count(log10_terms, precision):
    """Digit count of a product given (coeff, base) pairs: sum coeff*log10(base).

    Certifies floor agreement of the interval enclosure, doubling precision a
    few times if the enclosure straddles an integer.
    """
    import mpmath
    iv = mpmath.iv
    for prec in (precision, 2 * precision, 4 * precision, 8 * precision):
        old = iv.prec
        iv.prec = prec
        try:
            total = iv.mpf(0)
            for coeff, base in log10_terms:
                total += iv.mpf(coeff) * iv.log(base) / iv.log(10)
        finally:
            iv.prec = old
        lo = _mpf_tuple_to_fraction(total._mpi_[0])
        hi = _mpf_tuple_to_fraction(total._mpi_[1])
        if math.floor(lo) == math.floor(hi):
            return math.floor(lo) + 1
    raise ArithmeticError("could not certify digit count; raise precision")


def pow_digit_count(base, exponent, precision=DEFAULT_PRECISION):
    """Certified number of decimal digits of base**exponent (both positive)."""
    if base < 1 or exponent < 0:
        raise ValueError("positive base and nonnegative exponent expected")
    if exponent == 0 or base == 1:
        return 1
    return _certified_digit_count([(exponent, base)], precision)


@dataclass(frozen=True)
class CoarseBound:
    m: int
    binom_exp: int
    weight_power_digits: int
    depth_power_digits: int
    value: int | None = None


def bound_coarse(g, n, n_ell_product, points_mod_p, field,
                 materialize=False, digit_cap=200_000,
                 precision=DEFAULT_PRECISION):
    """kappa_p * prod n_ell * #X(F_p) * (4g-2)^m * (2g)^{C(m,2)} with
    m = n^{(2g)^n}; returns structured intermediates, full integer opt-in."""
    if g < 2 or n < 2:
        raise ValueError("needs g >= 2 and n >= 2")
    if n_ell_product < 1 or points_mod_p < 1:
        raise ValueError("integer factors must be positive")
    m = n ** ((2 * g) ** n)
    binom_exp = m * (m - 1) // 2
    wd = pow_digit_count(4 * g - 2, m, precision)
    dd = pow_digit_count(2 * g, binom_exp, precision)
    value = None
    if materialize:
        if digit_cap is not None and wd + dd > digit_cap:
            raise OverflowError(
                "materialized bound needs >= %d digits > cap %d" % (wd + dd, digit_cap))
        factor = n_ell_product * points_mod_p
        factor *= (4 * g - 2) ** m * (2 * g) ** binom_exp
        value = (kappa(field, precision) * factor).ceil()
    return CoarseBound(m, binom_exp, wd, dd, value)


def bound_siegel(s):
    """8 * 6^s * 2^{4^s}."""
    if s < 0:
        raise ValueError("s must be >= 0")
    return 8 * 6 ** s * 2 ** (4 ** s)


@dataclass(frozen=True)
class SiegelChain:
    p: int
    kappa_times_pminus2: UpperBoundReal
    intermediate: int
    final: int


def bound_siegel_chain(s, S, precision=DEFAULT_PRECISION):
    """Certified chain for the S-unit count: least prime p outside S, check
    kappa_p (p-2) < 2^{s+2}, evaluate kappa_p 3^s (p-2) 2^{4^s+1}, and return
    the simplified final bound 8 * 6^s * 2^{4^s}."""
    S = frozenset(S)
    if s < 1 or s != len(S):
        raise ValueError("s must be positive and equal to #S")
    if any(not isprime(q) for q in S):
        raise ValueError("S must consist of primes")
    if 2 not in S:
        return SiegelChain(2, UpperBoundReal(0, precision), 0, 0)
    p = 3
    while p in S or not isprime(p):
        p += 2
    if p > 2 ** (s + 1):
        raise ArithmeticError("least prime outside S exceeds 2^{s+1}")
    k = kappa(LocalFieldData(p), precision)
    ktp = k * (p - 2)
    if not ktp.ub < 2 ** (s + 2):
        raise ArithmeticError("kappa_p (p-2) >= 2^{s+2}: violated inequality")
    intermediate = (k * (3 ** s * (p - 2) * 2 ** (4 ** s + 1))).ceil()
    return SiegelChain(p, ktp, intermediate, bound_siegel(s))


def example_rank_gplus1_m(g):
    """For glob = (1-t)^{-(g+1)} and loc = (1-t)^{-g}(1-t^2)^{-2}, return the
    smallest of the three candidate weights 3g+5, 3g+6, 3g+7 at which the
    strict partial-sum inequality holds."""
    if g < 1:
        raise ValueError("g must be >= 1")
    N = 3 * g + 7
    glob = ps_weighted_product({1: g + 1}, N, ZZ)
    loc = ps_weighted_product({1: g, 2: 2}, N, ZZ)
    sg = 0
    sl = 0
    strict = []
    for i in range(N + 1):
        sg += glob[i]
        sl += loc[i]
        strict.append(sg < sl)
    for m in (3 * g + 5, 3 * g + 6, 3 * g + 7):
        if strict[m]:
            return m
    raise AssertionError("no candidate weight works for g=%d" % g)
