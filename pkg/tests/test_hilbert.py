"""Hilbert-series constructors: surface groups, Labute dims, the S-unit search."""
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ckbound.series import SelmerDims, ZZ, ps_geom_inverse, ps_mul, ps_poly
from ckbound.hilbert import (
    F_series, F_series_product, GlobalSeriesSpec, LongRunGuard,
    SurfaceSignature, hs_global, hs_local, hs_siegel_glob, hs_surface,
    labute_dims, minimal_m_series, minimal_m_siegel, necklace,
)
from helpers import one_minus_tk_power


# ---------------------------------------------------------------- surface series

def test_hs_surface_examples():
    assert hs_surface(SurfaceSignature(0, 3), 8).coeffs == (
        1, 0, 2, 0, 4, 0, 8, 0, 16)
    assert hs_surface(SurfaceSignature(2, 0), 6).coeffs == (
        1, 4, 15, 56, 209, 780, 2911)
    assert hs_surface((1, 1), 6).coeffs == tuple(2 ** i for i in range(7))
    # Pell-style recurrence for (1, 2)
    assert hs_surface((1, 2), 5).coeffs == (1, 2, 5, 12, 29, 70)
    with pytest.raises(ValueError):
        SurfaceSignature(0, 0)
    assert SurfaceSignature(0, 3).hyperbolic
    assert not SurfaceSignature(0, 2).hyperbolic


def _count_weighted_words(g, r, n):
    """Words in 2g weight-1 letters and r-1 weight-2 letters of weight n."""
    if n == 0:
        return 1
    total = 0
    if n >= 1:
        total += 2 * g * _count_weighted_words(g, r, n - 1)
    if n >= 2:
        total += (r - 1) * _count_weighted_words(g, r, n - 2)
    return total


@pytest.mark.parametrize("g,r", [(0, 3), (1, 1), (1, 2), (2, 1)])
def test_hs_surface_counts_weighted_words(g, r):
    f = hs_surface((g, r), 12)
    for n in range(13):
        assert f.coeffs[n] == _count_weighted_words(g, r, n)


# ---------------------------------------------------------------- Labute dims

def test_labute_dims_small():
    assert [labute_dims(2, k) for k in (1, 2, 3)] == [4, 5, 16]
    assert [labute_dims(1, k) for k in (1, 2, 3, 4, 5)] == [2, 0, 0, 0, 0]
    assert labute_dims(3, 1) == 6
    assert labute_dims(3, 2) == 14  # 2g^2 - g - 1


@pytest.mark.parametrize("g", [1, 2, 3])
def test_labute_product_identity(g):
    N = 50
    prod = ps_poly(ZZ, (1,), N)
    for k in range(1, N + 1):
        d = labute_dims(g, k)
        assert d >= 0
        if d:
            prod = ps_mul(prod, one_minus_tk_power(k, d, N))
    assert prod.coeffs == tuple([1, -2 * g, 1] + [0] * (N - 2))


def test_hs_surface_closed_matches_labute_factorization():
    # 1/(1-2gt+t^2) = prod (1-t^k)^{-d_k} for the closed surface
    g, N = 2, 25
    target = hs_surface((g, 0), N)
    from ckbound.series import ps_weighted_product
    prod = ps_weighted_product(
        {k: labute_dims(g, k) for k in range(1, N + 1)}, N)
    assert prod == target


# ---------------------------------------------------------------- necklaces

def test_necklace_values():
    assert [necklace(2, n) for n in range(1, 7)] == [2, 1, 2, 3, 6, 9]
    assert necklace(2, 12) == 335


def test_cyclotomic_identity_to_60():
    N = 60
    prod = ps_weighted_necklace(N)
    assert prod.coeffs == tuple(2 ** i for i in range(N + 1))


def ps_weighted_necklace(N):
    from ckbound.series import ps_weighted_product
    return ps_weighted_product({n: necklace(2, n) for n in range(1, N + 1)}, N)


# ---------------------------------------------------------------- F series

F_HEAD = (1, 2, 3, 6, 9, 18, 30, 60, 102)


def test_F_series_head_and_product_route():
    assert tuple(F_series(8).coeffs) == F_HEAD
    assert F_series(120) == F_series_product(120)


def test_F_functional_equation_to_120():
    N = 120
    F = F_series(N)
    F2 = ps_mul(F, F)
    Fsq = F_series(N)
    from ckbound.series import ps_inflate
    inflated = ps_inflate(F_series(N // 2), 2).restrict(N)
    ratio = ps_mul(ps_poly(ZZ, (1, 2), N),
                   ps_geom_inverse(ps_poly(ZZ, (1, -2), N), N))
    assert F2 == ps_mul(ratio, inflated).restrict(N)
    assert Fsq == F


# ---------------------------------------------------------------- local/global

def test_hs_local_and_global_variants():
    assert hs_local(SelmerDims({1: 2, 2: 1}), 2).coeffs == (1, 2, 4)
    spec = GlobalSeriesSpec(s=1, global_dims=SelmerDims({}))
    assert hs_global(spec, 2).coeffs == (1, 0, 1)
    # standard with a weight-1 block
    spec2 = GlobalSeriesSpec(s=0, global_dims=SelmerDims({1: 2}))
    assert hs_global(spec2, 3).coeffs == (1, 2, 3, 4)
    # bd replaces the weight-1 block by the rank
    spec3 = GlobalSeriesSpec(s=1, global_dims=SelmerDims({1: 7, 2: 1}),
                             variant="bd", bd_rank=1)
    bd = hs_global(spec3, 4)
    direct = ps_mul(
        hs_local(SelmerDims({1: 1, 2: 1}), 4),
        hs_local(SelmerDims({2: 1}), 4))
    assert bd == direct
    # naive ignores s and global dims
    spec4 = GlobalSeriesSpec(s=5, global_dims=SelmerDims({1: 3}),
                             variant="naive", t0_dims=SelmerDims({1: 1}))
    assert hs_global(spec4, 3).coeffs == (1, 1, 1, 1)


def test_global_spec_validation():
    with pytest.raises(ValueError):
        GlobalSeriesSpec(s=-1, global_dims=SelmerDims({}))
    with pytest.raises(ValueError):
        GlobalSeriesSpec(s=0, global_dims=SelmerDims({}), variant="bd")
    with pytest.raises(ValueError):
        GlobalSeriesSpec(s=0, global_dims=SelmerDims({}), variant="naive")
    with pytest.raises(ValueError):
        GlobalSeriesSpec(s=0, global_dims=SelmerDims({}), variant="exotic")


# ---------------------------------------------------------------- S-unit search

M_TABLE = {0: 1, 1: 1, 2: 2, 3: 9, 4: 24, 5: 81}


def test_minimal_m_siegel_table_small():
    for s, m in M_TABLE.items():
        assert minimal_m_siegel(s) == m


def test_minimal_m_siegel_guard_and_cap():
    with pytest.raises(LongRunGuard):
        minimal_m_siegel(8)
    with pytest.raises(ValueError):
        minimal_m_siegel(-1)
    # an m_max below the answer reports absence
    assert minimal_m_siegel(3, m_max=8) is None


def test_siegel_global_series_shape():
    # s = 0: F(tau) (1-tau)^2; partial-sum route must agree with the direct
    # coefficient comparison used by the search
    N = 12
    glob = hs_siegel_glob(0, N)
    F = F_series(N)
    sq = ps_mul(ps_poly(ZZ, (1, -2, 1), N), F)
    assert glob == sq
    glob1 = hs_siegel_glob(1, N)
    assert glob1 == ps_mul(
        ps_geom_inverse(ps_poly(ZZ, (1, -1), N), N), sq).restrict(N)


def test_minimal_m_series_reexport():
    assert minimal_m_series is minimal_m_siegel or callable(minimal_m_series)
