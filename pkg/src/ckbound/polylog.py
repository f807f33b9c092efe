"""Multiple-polylogarithm series on P1 minus {0, 1, infinity}.

Words over the letters e0 (the form dz/z) and e1 (dz/(1-z)) index iterated
integrals expanded at a rational base point a: the empty word is 1, and
I(l w) is the antiderivative of form(l) * I(w) in t = z - a with constant
term 0.  These exact truncated series are the graded basis every annihilation
statement is tested against; word length is the polylog weight (the geometric
weight is twice that).
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .series import QQ, PowerSeries, ps_integrate, ps_mul
from .rational import LocalExpansion, RationalFunction, rf_poly, taylor_expand

__all__ = [
    "E0", "E1", "Word", "word", "all_words",
    "iterated_integral", "basis_up_to", "classical_polylog", "shuffle",
]

E0 = 0  # dz/z
E1 = 1  # dz/(1-z)

_FORMS = {
    E0: RationalFunction((Fraction(0), Fraction(1)),),
    E1: RationalFunction((Fraction(1), Fraction(-1)),),
}
# stored as denominators: form(e0) = 1/z, form(e1) = 1/(1-z)


@dataclass(frozen=True)
class Word:
    letters: tuple

    def __post_init__(self):
        letters = tuple(int(x) for x in self.letters)
        if any(x not in (E0, E1) for x in letters):
            raise ValueError("letters must be e0/e1")
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    @property
    def weight(self):
        """Geometric weight: twice the word length."""
        return 2 * len(self.letters)

    def __repr__(self):
        return "".join("e%d" % x for x in self.letters) or "(empty)"


def word(spec):
    """Build a Word from a tuple of 0/1 or a string like 'e0e1' / '01'."""
    if isinstance(spec, Word):
        return spec
    if isinstance(spec, str):
        s = spec.replace(",", "").replace(" ", "").replace("e", "")
        return Word(tuple(int(ch) for ch in s))
    return Word(tuple(spec))


def all_words(length):
    return [Word(t) for t in itertools.product((E0, E1), repeat=length)]


def _form_series(letter, a, M):
    den = _FORMS[letter]
    one = rf_poly((Fraction(1),))
    return taylor_expand(one / den, a, M).series


def iterated_integral(w, a, M, _cache=None):
    """The iterated-integral series of the word at base a, truncation M.

    I(empty) = 1; I(l u) = integral of form(l) * I(u), constant term 0.
    """
    if M < 1:
        raise ValueError("truncation must be >= 1")
    w = word(w)
    a = Fraction(a)
    if a in (0, 1):
        raise ValueError("base must avoid 0 and 1")
    cache = {} if _cache is None else _cache
    return _build(w, a, M, cache)


def _build(w, a, M, cache):
    key = w.letters
    hit = cache.get(key)
    if hit is not None:
        return hit
    if not key:
        out = LocalExpansion(a, PowerSeries(QQ, [Fraction(1)], M))
    else:
        inner = _build(Word(key[1:]), a, M, cache)
        integrand = ps_mul(_form_series(key[0], a, M), inner.series)
        out = LocalExpansion(a, ps_integrate(integrand, up_to=M))
    cache[key] = out
    return out


def basis_up_to(m, a, M):
    """All 2^{m+1} - 1 word series of length <= m, length-lexicographic."""
    cache = {}
    out = []
    for length in range(m + 1):
        for w in all_words(length):
            out.append(iterated_integral(w, a, M, _cache=cache))
    return out


def classical_polylog(n, a, M):
    """Li_n as a word series: Li_1 = -log(1-z) normalized to 0 at a, and
    Li_n integrates Li_{n-1}/z; equals the word e0^{n-1} e1."""
    if n < 1:
        raise ValueError("weight must be >= 1")
    return iterated_integral(Word((E0,) * (n - 1) + (E1,)), a, M)


def shuffle(u, v):
    """Multiset of shuffles of two words (as a list of Words)."""
    u = word(u)
    v = word(v)
    if not len(u):
        return [v]
    if not len(v):
        return [u]
    first = [Word((u.letters[0],) + w.letters)
             for w in shuffle(Word(u.letters[1:]), v)]
    second = [Word((v.letters[0],) + w.letters)
              for w in shuffle(u, Word(v.letters[1:]))]
    return first + second
