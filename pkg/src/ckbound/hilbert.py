"""Hilbert-series constructors for filtered Selmer schemes.

Covers the surface-group series 1/(1-2gt-(r-1)t^2) with its graded dimension
formula, local/global Selmer series built from input dimension data, necklace
polynomials, and the thrice-punctured-line series F(tau) computed by the
functional-equation recursion (with the odd-necklace product kept as a test
oracle).  All thrice-punctured-line series live in the variable tau = t^2.
"""

import threading
from dataclasses import dataclass
from fractions import Fraction

from .series import (
    ZZ, PowerSeries, SelmerDims, ps_geom_inverse, ps_mul, ps_one, ps_poly,
    ps_weighted_product, minimal_strict_m,
)

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    _mpz = int

__all__ = [
    "SurfaceSignature", "GlobalSeriesSpec",
    "moebius", "necklace", "divisors",
    "hs_surface", "labute_dims", "hs_local", "hs_global",
    "F_series", "F_series_product", "hs_siegel_glob", "minimal_m_siegel",
    "LongRunGuard",
]


class LongRunGuard(ValueError):
    """Raised when a computation needs the explicit long-running opt-in."""


@dataclass(frozen=True)
class SurfaceSignature:
    g: int
    r: int

    def __post_init__(self):
        if self.g < 0 or self.r < 0:
            raise ValueError("genus and puncture count must be >= 0")
        if self.g == 0 and self.r == 0:
            raise ValueError("(g, r) = (0, 0) has no surface group")

    @property
    def hyperbolic(self):
        return 2 * self.g + self.r > 2


@dataclass(frozen=True)
class GlobalSeriesSpec:
    """Input data for hs_global.

    variant "standard": (1-t^2)^{-s} * prod_n (1-t^n)^{-dims[n]}
    variant "bd":       (1-t^2)^{-s} * (1-t)^{-bd_rank} * prod_{n>=2} (1-t^n)^{-dims[n]}
    variant "naive":    prod_n (1-t^n)^{-t0_dims[n]}   (no s-factor)
    """
    s: int
    global_dims: SelmerDims
    variant: str = "standard"
    bd_rank: int | None = None
    t0_dims: SelmerDims | None = None

    def __post_init__(self):
        if self.s < 0:
            raise ValueError("s must be >= 0")
        if self.variant not in ("standard", "bd", "naive"):
            raise ValueError("unknown variant %r" % (self.variant,))
        if self.variant == "bd" and (self.bd_rank is None or self.bd_rank < 0):
            raise ValueError("bd variant needs a rank >= 0")
        if self.variant == "naive" and self.t0_dims is None:
            raise ValueError("naive variant needs its T0 dimension data")


def divisors(n):
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def moebius(n):
    if n < 1:
        raise ValueError("moebius needs n >= 1")
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def necklace(q, n):
    """Moreau necklace polynomial M(q, n) = (1/n) sum_{d|n} mu(n/d) q^d."""
    if n < 1:
        raise ValueError("necklace needs n >= 1")
    total = sum(moebius(n // d) * q ** d for d in divisors(n))
    if total % n:
        raise ArithmeticError("necklace sum not divisible by n")
    return total // n


def hs_surface(sig, N):
    """Truncated expansion of 1/(1 - 2g t - (r-1) t^2)."""
    if not isinstance(sig, SurfaceSignature):
        sig = SurfaceSignature(*sig)
    denom = ps_poly(ZZ, (1, -2 * sig.g, -(sig.r - 1)), N)
    return ps_geom_inverse(denom, N)


def _lucas_power_sum(g, d):
    # sum_i (-1)^i (d/(d-i)) C(d-i, i) (2g)^{d-2i}: the d-th power sum of the
    # roots of x^2 - 2gx + 1, always an integer.
    total = Fraction(0)
    for i in range(d // 2 + 1):
        binom = 1
        for j in range(i):
            binom = binom * (d - i - j) // (j + 1)
        total += Fraction((-1) ** i * d, d - i) * binom * (2 * g) ** (d - 2 * i)
    if total.denominator != 1:
        raise ArithmeticError("non-integral power sum for g=%d, d=%d" % (g, d))
    return total.numerator


def labute_dims(g, k):
    """Graded dimension d_k of the closed-surface group: the unique integers
    with prod_k (1-t^k)^{d_k} = 1 - 2g t + t^2."""
    if g < 1 or k < 1:
        raise ValueError("labute_dims needs g >= 1 and k >= 1")
    total = sum(moebius(k // d) * _lucas_power_sum(g, d) for d in divisors(k))
    if total % k:
        raise ArithmeticError("Labute sum not divisible by k (g=%d, k=%d)" % (g, k))
    return total // k


def hs_local(dims, N):
    """prod_{n>=1} (1-t^n)^{-dims[n]} truncated at N."""
    return ps_weighted_product(dims, N)


def hs_global(spec, N):
    if spec.variant == "naive":
        return ps_weighted_product(spec.t0_dims, N)
    if spec.variant == "standard":
        dims = spec.global_dims.dims
    else:  # bd: rank replaces the n=1 dimension
        dims = {n: d for n, d in spec.global_dims.dims.items() if n >= 2}
        if spec.bd_rank:
            dims[1] = spec.bd_rank
    out = ps_weighted_product(SelmerDims(dims), N)
    if spec.s:
        out = ps_mul(out, ps_weighted_product({2: spec.s}, N))
    return out


# --- thrice-punctured line: F(tau) = prod_{odd n} (1 - tau^n)^{-M(2,n)} ---

_F_lock = threading.Lock()
_F_coeffs = [_mpz(1)]  # a_0; extended in place, snapshots are safe to read


def _extend_F(N):
    with _F_lock:
        a = _F_coeffs
        while len(a) <= N:
            m = len(a)
            # 2 a_m = sum_{i<=m/2} b_{m-2i} a_i - sum_{0<i<m} a_i a_{m-i},
            # where b_0 = 1 and b_i = 2^{i+1}: the functional-equation
            # recursion F(tau)^2 = (1+2tau)/(1-2tau) * F(tau^2).
            half = m // 2
            total = _mpz(0)
            for i in range(half + 1):
                j = m - 2 * i
                total += a[i] if j == 0 else (a[i] << (j + 1))
            conv = _mpz(0)
            for i in range(1, (m - 1) // 2 + 1):
                conv += a[i] * a[m - i]
            conv <<= 1
            if m % 2 == 0 and m >= 2:
                conv += a[half] * a[half]
            rest = total - conv
            if rest % 2:
                raise ArithmeticError("odd intermediate in F recursion at m=%d" % m)
            a.append(rest >> 1)


def F_series(N):
    """F(tau) to order N via the quadratic functional-equation recursion."""
    if N < 0:
        raise ValueError("truncation must be >= 0")
    _extend_F(N)
    with _F_lock:
        snapshot = [int(c) for c in _F_coeffs[: N + 1]]
    return PowerSeries(ZZ, snapshot, N)


def F_series_product(N):
    """Oracle form of F(tau): direct product over odd n of (1-tau^n)^{-M(2,n)}."""
    dims = {n: necklace(2, n) for n in range(1, N + 1, 2)}
    return ps_weighted_product(dims, N)


def hs_siegel_glob(s, N):
    """(1-tau)^{-s} * prod_{odd n >= 3} (1-tau^n)^{-M(2,n)}, in tau = t^2."""
    if s < 0:
        raise ValueError("s must be >= 0")
    out = ps_mul(F_series(N), ps_poly(ZZ, (1, -2, 1), N))  # strip the n=1 factor
    if s:
        out = ps_mul(out, ps_weighted_product({1: s}, N))
    return out


def _siegel_partial_sum_coeffs(s, N):
    # Partial sums of hs_siegel_glob(s) are the coefficients of
    # (1-tau)^{-(s-1)} F(tau); for s = 0 that exponent is +1.
    _extend_F(N)
    with _F_lock:
        a = list(_F_coeffs[: N + 1])
    if s == 0:
        return [a[0]] + [a[m] - a[m - 1] for m in range(1, N + 1)]
    for _ in range(s - 1):
        for m in range(1, N + 1):
            a[m] += a[m - 1]
    return a


def minimal_m_siegel(s, m_max=None, long=False):
    """Least m (in tau-degree) where the local partial sums strictly exceed the
    global ones; the search is capped at m_max (default 4^s).

    s >= 8 must be requested with long=True: the recursion is quadratic and the
    expected answer has thousands of digits-bearing coefficients.
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    if s >= 8 and not long:
        raise LongRunGuard("s >= 8 needs the explicit long-running opt-in")
    if m_max is None:
        m_max = 4 ** s
    horizon = min(m_max, 256)
    checked = -1
    while True:
        glob = _siegel_partial_sum_coeffs(s, horizon)
        # local partial sums: coefficient m of 1/((1-tau)(1-2tau)) = 2^{m+1}-1
        for m in range(checked + 1, horizon + 1):
            if glob[m] < (1 << (m + 1)) - 1:
                return m
        checked = horizon
        if horizon == m_max:
            return None
        # Double while cheap; past 4096 the quadratic recursion makes
        # overshooting expensive, so grow the horizon by 5/4 instead.
        step = horizon * 2 if horizon < 4096 else -(-horizon * 5 // 4)
        horizon = min(m_max, step)


def minimal_m_series(glob, loc, m_max=None):
    """minimal_strict_m re-exported at the Hilbert level for convenience."""
    return minimal_strict_m(glob, loc, m_max)
