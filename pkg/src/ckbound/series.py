"""Exact truncated formal power series over pluggable coefficient rings.

Three coefficient domains are provided: EXTNAT (naturals with an absorbing
infinity, the coefficient semiring of dimension series), ZZ (big integers) and
QQ (big rationals).  Truncation is explicit and carried in the value; binary
operations truncate to the smaller of the two orders instead of erroring.
"""

from fractions import Fraction
from functools import total_ordering

__all__ = [
    "ExtNat", "INF", "EXTNAT", "ZZ", "QQ",
    "PowerSeries", "SelmerDims",
    "RingMismatch", "InfiniteExponent", "NonUnitConstantTerm",
    "ps_from_coeffs", "ps_one", "ps_poly",
    "ps_add", "ps_mul", "ps_weighted_product", "ps_geom_inverse",
    "ps_partial_sums", "ps_inflate", "ps_deriv", "ps_integrate",
    "preceq", "minimal_strict_m",
    "parse_selmer_dims", "format_selmer_dims",
]


class RingMismatch(ValueError):
    pass


class InfiniteExponent(ValueError):
    pass


class NonUnitConstantTerm(ValueError):
    pass


@total_ordering
class ExtNat:
    """A natural number or infinity.  0 * inf = 0; inf is absorbing otherwise."""

    __slots__ = ("n",)

    def __init__(self, n):
        if isinstance(n, ExtNat):
            n = n.n
        if n is not None:
            n = int(n)
            if n < 0:
                raise ValueError("ExtNat must be >= 0")
        self.n = n  # None encodes infinity

    @property
    def is_inf(self):
        return self.n is None

    def __add__(self, other):
        other = ExtNat(other)
        if self.is_inf or other.is_inf:
            return INF
        return ExtNat(self.n + other.n)

    __radd__ = __add__

    def __mul__(self, other):
        other = ExtNat(other)
        if (self.n == 0) or (other.n == 0):
            return ExtNat(0)
        if self.is_inf or other.is_inf:
            return INF
        return ExtNat(self.n * other.n)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = ExtNat(other)
        if not isinstance(other, ExtNat):
            return NotImplemented
        return self.n == other.n

    def __le__(self, other):
        other = ExtNat(other)
        if other.is_inf:
            return True
        if self.is_inf:
            return False
        return self.n <= other.n

    def __hash__(self):
        return hash(("ExtNat", self.n))

    def __repr__(self):
        return "inf" if self.is_inf else str(self.n)


INF = ExtNat(None)


class _ExtNatRing:
    name = "ExtNat"
    zero = ExtNat(0)
    one = ExtNat(1)

    @staticmethod
    def from_int(k):
        return ExtNat(k)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        raise TypeError("ExtNat is a semiring: no negation")

    @staticmethod
    def is_unit(a):
        return a == ExtNat(1)

    @staticmethod
    def inv(a):
        if a != ExtNat(1):
            raise NonUnitConstantTerm("only 1 is invertible in ExtNat")
        return ExtNat(1)


class _IntRing:
    name = "ZZ"
    zero = 0
    one = 1
    from_int = staticmethod(int)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def is_unit(a):
        return a in (1, -1)

    @staticmethod
    def inv(a):
        if a not in (1, -1):
            raise NonUnitConstantTerm("%r is not a unit in ZZ" % (a,))
        return a


class _RatRing:
    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)
    from_int = staticmethod(Fraction)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def is_unit(a):
        return a != 0

    @staticmethod
    def inv(a):
        if a == 0:
            raise NonUnitConstantTerm("0 is not invertible")
        return Fraction(1) / a


EXTNAT = _ExtNatRing()
ZZ = _IntRing()
QQ = _RatRing()


class PowerSeries:
    """Truncated series sum_{i<=trunc} coeffs[i] * t^i; immutable."""

    __slots__ = ("ring", "coeffs", "trunc")

    def __init__(self, ring, coeffs, trunc=None):
        coeffs = tuple(ring.from_int(c) if isinstance(c, int) else c for c in coeffs)
        if trunc is None:
            trunc = len(coeffs) - 1
        if trunc < 0:
            raise ValueError("truncation order must be >= 0")
        if len(coeffs) < trunc + 1:
            coeffs = coeffs + (ring.zero,) * (trunc + 1 - len(coeffs))
        elif len(coeffs) > trunc + 1:
            coeffs = coeffs[: trunc + 1]
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, *a):
        raise AttributeError("PowerSeries is immutable")

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return (self.ring is other.ring and self.trunc == other.trunc
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.ring.name, self.coeffs, self.trunc))

    def __add__(self, other):
        return ps_add(self, other)

    def __mul__(self, other):
        return ps_mul(self, other)

    def restrict(self, new_trunc):
        if new_trunc > self.trunc:
            raise ValueError("cannot extend a truncated series")
        return PowerSeries(self.ring, self.coeffs[: new_trunc + 1], new_trunc)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("%s*t" % (c,))
            else:
                terms.append("%s*t^%d" % (c, i))
        return " + ".join(terms)


def ps_from_coeffs(ring, coeffs, trunc=None):
    return PowerSeries(ring, coeffs, trunc)


def ps_one(ring, trunc):
    return PowerSeries(ring, (ring.one,), trunc)


def ps_poly(ring, coeffs, trunc):
    """Polynomial with the given low-order coefficients, padded to trunc."""
    return PowerSeries(ring, coeffs, trunc)


def _check_rings(f, g):
    if f.ring is not g.ring:
        raise RingMismatch("coefficient rings differ: %s vs %s"
                           % (f.ring.name, g.ring.name))


def ps_add(f, g):
    _check_rings(f, g)
    n = min(f.trunc, g.trunc)
    add = f.ring.add
    return PowerSeries(f.ring, [add(f.coeffs[i], g.coeffs[i]) for i in range(n + 1)], n)


def ps_mul(f, g):
    _check_rings(f, g)
    n = min(f.trunc, g.trunc)
    ring = f.ring
    add, mul, zero = ring.add, ring.mul, ring.zero
    out = [zero] * (n + 1)
    for i, a in enumerate(f.coeffs[: n + 1]):
        if a == zero:
            continue
        for j in range(n + 1 - i):
            b = g.coeffs[j]
            if b == zero:
                continue
            out[i + j] = add(out[i + j], mul(a, b))
    return PowerSeries(ring, out, n)


def ps_geom_inverse(poly, N):
    """Multiplicative inverse of `poly` to order N (constant term must be a unit)."""
    ring = poly.ring
    c0 = poly.coeffs[0]
    if not ring.is_unit(c0):
        raise NonUnitConstantTerm("constant term %r is not a unit in %s"
                                  % (c0, ring.name))
    u = ring.inv(c0)
    out = [ring.zero] * (N + 1)
    out[0] = u
    for k in range(1, N + 1):
        acc = ring.zero
        for i in range(1, min(k, poly.trunc) + 1):
            ci = poly.coeffs[i]
            if ci == ring.zero:
                continue
            acc = ring.add(acc, ring.mul(ci, out[k - i]))
        out[k] = ring.mul(ring.neg(acc), u)
    return PowerSeries(ring, out, N)


def _mul_inv_one_minus_tn(coeffs, n, ring):
    # in-place multiply by 1/(1-t^n): running sums with stride n
    for k in range(n, len(coeffs)):
        coeffs[k] = ring.add(coeffs[k], coeffs[k - n])


def _binomial_factor(d, n, N, ring):
    # (1-t^n)^{-d} = sum_k C(d+k-1, k) t^{nk}
    out = [ring.zero] * (N + 1)
    c = 1
    k = 0
    while n * k <= N:
        out[n * k] = ring.from_int(c)
        c = c * (d + k) // (k + 1)
        k += 1
    return PowerSeries(ring, out, N)


def ps_weighted_product(dims, N, ring=ZZ, algorithm="auto"):
    """prod_{1<=n<=N} (1-t^n)^{-d_n} truncated at order N.

    Factors with n > N cannot contribute and are ignored.  The repeated
    geometric route and the binomial-coefficient route must agree exactly;
    "auto" picks per factor by operation count.
    """
    if isinstance(dims, SelmerDims):
        dims = dims.dims
    out = [ring.one] + [ring.zero] * N
    for n in sorted(k for k in dims if k <= N):
        d = dims[n]
        if isinstance(d, ExtNat):
            if d.is_inf:
                raise InfiniteExponent("dimension at n=%d is infinite" % n)
            d = d.n
        d = int(d)
        if d < 0:
            raise ValueError("dimensions must be >= 0")
        if d == 0:
            continue
        if algorithm == "geometric":
            use_binomial = False
        elif algorithm == "binomial":
            use_binomial = True
        else:
            # d passes of O(N) versus one sparse product of O(N^2/n)
            use_binomial = d > max(1, N // n)
        if use_binomial:
            out = list(ps_mul(PowerSeries(ring, out, N),
                              _binomial_factor(d, n, N, ring)).coeffs)
        else:
            for _ in range(d):
                _mul_inv_one_minus_tn(out, n, ring)
    return PowerSeries(ring, out, N)


def ps_partial_sums(f):
    ring = f.ring
    out = []
    acc = ring.zero
    for c in f.coeffs:
        acc = ring.add(acc, c)
        out.append(acc)
    return PowerSeries(ring, out, f.trunc)


def ps_inflate(f, k):
    """Substitute t -> t^k (exponent inflation), truncation k*trunc + k - 1."""
    if k < 1:
        raise ValueError("inflation exponent must be >= 1")
    N = k * f.trunc + k - 1
    out = [f.ring.zero] * (N + 1)
    for i, c in enumerate(f.coeffs):
        out[k * i] = c
    return PowerSeries(f.ring, out, N)


def ps_deriv(f):
    """Formal derivative; truncation drops by one."""
    if f.trunc < 1:
        raise ValueError("cannot differentiate a constant-only truncation")
    ring = f.ring
    out = [ring.mul(ring.from_int(i + 1), f.coeffs[i + 1]) for i in range(f.trunc)]
    return PowerSeries(ring, out, f.trunc - 1)


def ps_integrate(f, up_to=None):
    """Formal antiderivative with constant term 0 (rational coefficients only).

    Knows one more coefficient than the input; pass up_to to cap the result
    truncation (useful to keep a family of series at one common order).
    """
    if f.ring is not QQ:
        raise RingMismatch("integration needs rational coefficients")
    N = f.trunc + 1 if up_to is None else min(up_to, f.trunc + 1)
    out = [Fraction(0)]
    for i in range(1, N + 1):
        out.append(f.coeffs[i - 1] / i)
    return PowerSeries(QQ, out, N)


def preceq(f, g, up_to=None):
    """Partial-sum order: True iff sum_{i<=m} f_i <= sum_{i<=m} g_i for all m <= up_to."""
    _check_rings(f, g)
    if up_to is None:
        up_to = min(f.trunc, g.trunc)
    if up_to > min(f.trunc, g.trunc):
        raise ValueError("up_to exceeds a truncation order")
    ring = f.ring
    sf = ring.zero
    sg = ring.zero
    for m in range(up_to + 1):
        sf = ring.add(sf, f.coeffs[m])
        sg = ring.add(sg, g.coeffs[m])
        if not sf <= sg:
            return False
    return True


def minimal_strict_m(glob, loc, m_max=None):
    """Least m <= m_max with sum_{i<=m} glob_i < sum_{i<=m} loc_i, else None."""
    _check_rings(glob, loc)
    if m_max is None:
        m_max = min(glob.trunc, loc.trunc)
    if m_max > min(glob.trunc, loc.trunc):
        raise ValueError("m_max exceeds a truncation order")
    ring = glob.ring
    sg = ring.zero
    sl = ring.zero
    for m in range(m_max + 1):
        sg = ring.add(sg, glob.coeffs[m])
        sl = ring.add(sl, loc.coeffs[m])
        if sg <= sl and sg != sl:
            return m
    return None


class SelmerDims:
    """Map n (weight index >= 1) -> dim H^1_f at graded weight n; absent keys are 0."""

    __slots__ = ("dims",)

    def __init__(self, dims):
        clean = {}
        for n, d in dims.items():
            n = int(n)
            if n < 1:
                raise ValueError("weight indices must be >= 1")
            d = d if isinstance(d, ExtNat) else ExtNat(d)
            if d != ExtNat(0):
                clean[n] = d
        object.__setattr__(self, "dims", clean)

    def __setattr__(self, *a):
        raise AttributeError("SelmerDims is immutable")

    def __getitem__(self, n):
        return self.dims.get(n, ExtNat(0))

    def __eq__(self, other):
        return isinstance(other, SelmerDims) and self.dims == other.dims

    def __hash__(self):
        return hash(frozenset(self.dims.items()))

    def support(self):
        return sorted(self.dims)

    def union_disjoint(self, other):
        overlap = set(self.dims) & set(other.dims)
        if overlap:
            raise ValueError("supports overlap at %s" % sorted(overlap))
        merged = dict(self.dims)
        merged.update(other.dims)
        return SelmerDims(merged)

    def __repr__(self):
        return "SelmerDims(%s)" % ({n: self.dims[n] for n in self.support()},)


def parse_selmer_dims(text):
    """Parse the shared dims format: one "n = d" per line, '#' comments, d may be "inf"."""
    dims = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError("line %d: expected 'n = d', got %r" % (lineno, raw))
        left, right = line.split("=", 1)
        try:
            n = int(left.strip())
        except ValueError:
            raise ValueError("line %d: bad weight index %r" % (lineno, left.strip()))
        rhs = right.strip()
        if rhs == "inf":
            d = INF
        else:
            try:
                d = ExtNat(int(rhs))
            except ValueError:
                raise ValueError("line %d: bad dimension %r" % (lineno, rhs))
        if n < 1:
            raise ValueError("line %d: weight index must be >= 1" % lineno)
        if n in dims:
            raise ValueError("line %d: duplicate entry for n=%d" % (lineno, n))
        dims[n] = d
    return SelmerDims(dims)


def format_selmer_dims(dims):
    return "".join("%d = %s\n" % (n, dims[n]) for n in dims.support())
