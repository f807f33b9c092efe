"""Multiple-polylogarithm word series and the shuffle algebra."""
from fractions import Fraction

import pytest

from ckbound.series import ps_deriv, ps_mul, ps_one, QQ
from ckbound.rational import taylor_expand, RationalFunction, parse_poly, rf_const
from ckbound.polylog import (
    E0, E1, Word, all_words, basis_up_to, classical_polylog,
    iterated_integral, shuffle, word,
)

F = Fraction


# ---------------------------------------------------------------- words

def test_word_construction():
    w = word("e0e1")
    assert w.letters == (E0, E1)
    assert w.weight == 4
    assert len(w) == 2
    assert repr(w) == "e0e1"
    assert repr(word(())) == "(empty)"
    assert word((0, 1, 1)) == word("e0e1e1")
    with pytest.raises(ValueError):
        word("e2")
    with pytest.raises(AttributeError):
        w.letters = ()


def test_all_words_order():
    assert [repr(w) for w in all_words(0)] == ["(empty)"]
    assert [repr(w) for w in all_words(1)] == ["e0", "e1"]
    assert [repr(w) for w in all_words(2)] == ["e0e0", "e0e1", "e1e0", "e1e1"]


# ---------------------------------------------------------------- integrals

def test_iterated_integral_base_cases():
    one = iterated_integral((), F(2), 6)
    assert one.series == ps_one(QQ, 6)
    i0 = iterated_integral("e0", F(2), 6)
    assert i0.series.coeffs[:4] == (F(0), F(1, 2), F(-1, 8), F(1, 24))
    i1 = iterated_integral("e1", F(2), 6)
    assert i1.series.coeffs[:4] == (F(0), F(-1), F(1, 2), F(-1, 3))
    # every nonempty word vanishes at the base point
    for w in all_words(2):
        assert iterated_integral(w, F(2), 8).series.coeffs[0] == 0
    with pytest.raises(ValueError):
        iterated_integral("e0", F(0), 4)
    with pytest.raises(ValueError):
        iterated_integral("e0", F(1), 4)
    with pytest.raises(ValueError):
        iterated_integral("e0", F(2), 0)


def test_iterated_integral_differential_relation():
    # d/dz I(l u) = form(l) * I(u) with form(e0) = 1/z, form(e1) = 1/(1-z)
    forms = {E0: RationalFunction((F(1),), parse_poly("0 + 1*z")),
             E1: RationalFunction((F(1),), parse_poly("1 + -1*z"))}
    for a in (F(2), F(1, 3), F(-1)):
        for w in all_words(3):
            full = iterated_integral(w, a, 12)
            inner = iterated_integral(w.letters[1:], a, 12)
            lhs = ps_deriv(full.series)
            rhs = ps_mul(taylor_expand(forms[w.letters[0]], a, 11).series,
                         inner.series.restrict(11))
            assert lhs == rhs


def test_classical_polylog_words():
    assert classical_polylog(1, F(2), 8).series == \
        iterated_integral("e1", F(2), 8).series
    li2 = classical_polylog(2, F(2), 8)
    assert li2.series == iterated_integral("e0e1", F(2), 8).series
    assert li2.series.coeffs[:5] == (F(0), F(0), F(-1, 4), F(1, 6), F(-5, 48))
    with pytest.raises(ValueError):
        classical_polylog(0, F(2), 8)


def test_basis_up_to_shape():
    basis = basis_up_to(2, F(2), 30)
    assert len(basis) == 7
    assert all(f.base == 2 and f.trunc == 30 for f in basis)
    # first element is the constant 1, then the single letters
    assert basis[0].series == ps_one(QQ, 30)
    assert basis[1].series == iterated_integral("e0", F(2), 30).series


def test_basis_is_linearly_independent():
    N = 40
    basis = basis_up_to(2, F(2), N)
    rows = [list(f.series.coeffs) for f in basis]
    rank = 0
    ncols = N + 1
    col = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                fac = rows[i][col] / rows[rank][col]
                rows[i] = [x - fac * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    assert rank == 7


# ---------------------------------------------------------------- shuffles

def test_shuffle_small_cases():
    assert sorted(repr(w) for w in shuffle("e0", "e1")) == ["e0e1", "e1e0"]
    assert [repr(w) for w in shuffle("e0", "")] == ["e0"]
    assert len(shuffle("e0e1", "e0")) == 3
    assert len(shuffle("e0e1", "e1e0")) == 6


@pytest.mark.parametrize("u,v", [
    ("e0", "e1"), ("e0", "e0"), ("e0e1", "e1"), ("e1e0", "e0e1"),
])
def test_shuffle_product_identity(u, v):
    # I(u) I(v) = sum over shuffles, exactly, from a common base point
    a, N = F(2), 30
    lhs = ps_mul(iterated_integral(u, a, N).series,
                 iterated_integral(v, a, N).series)
    rhs = None
    for w in shuffle(u, v):
        term = iterated_integral(w, a, N).series
        rhs = term if rhs is None else rhs + term
    assert lhs == rhs


def test_shuffle_with_itself_doubles():
    a, N = F(1, 3), 24
    sq = ps_mul(iterated_integral("e0", a, N).series,
                iterated_integral("e0", a, N).series)
    twice = iterated_integral("e0e0", a, N).series
    assert sq == twice + twice
