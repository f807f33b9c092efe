"""Shared generators for the operator and acceptance test suites."""
from fractions import Fraction
from math import comb

from ckbound.diffop import DiffOp
from ckbound.rational import rf_poly, z_minus_z2
from ckbound.series import PowerSeries, QQ, ZZ, ps_poly
from ckbound.rational import LocalExpansion


def random_pd_nice_operator(rng, N, p):
    """A random order-N operator with integer polynomial coefficients and
    leading coefficient 1; PD-nice at every rational point for every p."""
    coeffs = []
    for _ in range(N):
        deg = rng.randint(0, 2)
        poly = tuple(Fraction(rng.randint(-p * p, p * p))
                     for _ in range(deg + 1))
        coeffs.append(rf_poly(poly))
    coeffs.append(rf_poly((Fraction(1),)))
    return DiffOp(tuple(coeffs), z_minus_z2())


def expansion_of_divided(sol, a):
    """LocalExpansion carrying the ordinary coefficients of a DividedSeries."""
    return LocalExpansion(Fraction(a), PowerSeries(QQ, sol.coeffs, sol.trunc))


def one_minus_tk_power(k, d, N):
    """(1 - t^k)^d truncated at N, by binomial expansion (d may be huge)."""
    coeffs = [0] * (N + 1)
    for j in range(N // k + 1):
        if j > d:
            break
        coeffs[k * j] = (-1) ** j * comb(d, j)
    return ps_poly(ZZ, tuple(coeffs), N)


def random_rooted_poly(rng, p, lam_values):
    """Monic product of (t - u p^v) factors plus possible t^k; returns
    (coefficients, expected count per lambda)."""
    k = rng.randint(0, 2)              # multiplicity of the zero root
    vals = [rng.randint(0, 3) for _ in range(rng.randint(1, 5))]
    units = [rng.randrange(1, p) for _ in vals]
    roots = [u * p ** v for u, v in zip(units, vals)]
    coeffs = [Fraction(1)]             # ascending coefficients, start with 1
    for r in roots:
        coeffs = [a - r * b for a, b in
                  zip([Fraction(0)] + coeffs, coeffs + [Fraction(0)])]
    coeffs = [Fraction(0)] * k + coeffs
    expected = {lam: k + sum(1 for v in vals if v >= lam)
                for lam in lam_values}
    return coeffs, expected
