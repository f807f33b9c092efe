"""Differential operators on P1 with exact rational-function coefficients.

Operators are stored in d/dz normal form: D = sum g_i (d/dz)^i, together with
the derivation unit w so that d/omega = w * d/dz (w = z - z^2 for the
thrice-punctured line).  The module provides operator-series action,
composition, PD-niceness at a base point, the divided-power solution
recurrence, divisor bookkeeping, the Wronskian-style annihilator of a span of
functions, the recursive weight-killing pipeline, and the explicit composed
operator for the line.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .series import (
    QQ, PowerSeries, ps_add, ps_deriv, ps_geom_inverse, ps_mul,
    NonUnitConstantTerm,
)
from .rational import (
    INFINITY, Infinity, LocalExpansion, P1Divisor, RationalFunction,
    poly_divmod, poly_eval, poly_shift, poly_str, parse_poly,
    rf_const, rf_poly, taylor_expand, z_minus_z2,
)
from .padic import DividedSeries, is_pd_integral, vp, vp_factorial

__all__ = [
    "DiffOp", "identity_op", "derivation", "d_over_omega_power",
    "apply", "compose", "is_pd_nice", "pd_primitives_solve",
    "div_of_op", "annihilator_of_span", "kill_weight_pipeline",
    "explicit_line_operator", "format_diffop", "parse_diffop",
    "recognize_polynomial", "RecognitionFailure", "StageAudit",
    "PipelineResult",
]


class RecognitionFailure(ValueError):
    """A series did not match any rational function within the degree bound."""


@dataclass(frozen=True)
class DiffOp:
    coeffs: tuple          # g_0..g_N as RationalFunction, w.r.t. (d/dz)^i
    w: RationalFunction    # derivation unit: d/omega = w * d/dz

    def __post_init__(self):
        coeffs = tuple(c if isinstance(c, RationalFunction) else rf_const(c)
                       for c in self.coeffs)
        while len(coeffs) > 1 and coeffs[-1].is_zero:
            coeffs = coeffs[:-1]
        if not coeffs or coeffs[-1].is_zero:
            raise ValueError("zero operator has no well-defined order")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self):
        return len(self.coeffs) - 1

    def scale(self, f):
        """Left-multiply by a rational function (or constant)."""
        if not isinstance(f, RationalFunction):
            f = rf_const(f)
        return DiffOp(tuple(f * g for g in self.coeffs), self.w)

    def __repr__(self):
        return "DiffOp(order %d: %s)" % (self.order, format_diffop(self))


def identity_op(w):
    return DiffOp((rf_const(1),), w)


def derivation(w):
    """The operator d/omega = w * d/dz."""
    return DiffOp((rf_const(0), w), w)


def d_over_omega_power(n, w):
    """(w d/dz)^n in d/dz normal form."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = identity_op(w)
    for _ in range(n):
        out = compose(derivation(w), out)
    return out


def apply(op, f):
    """Expand coefficients at f.base and act; result truncation is M - N."""
    N = op.order
    M = f.trunc
    if M < N:
        raise ValueError("truncation %d below operator order %d" % (M, N))
    out_trunc = M - N
    acc = PowerSeries(QQ, [Fraction(0)], out_trunc)
    der = f.series
    for i, g in enumerate(op.coeffs):
        if i:
            der = ps_deriv(der)
        if g.is_zero:
            continue
        gexp = taylor_expand(g, f.base, out_trunc)
        acc = ps_add(acc, ps_mul(gexp.series, der).restrict(out_trunc))
    return LocalExpansion(f.base, acc)


def compose(op1, op2):
    """op1 after op2, by Leibniz expansion; order adds."""
    if op1.w != op2.w:
        raise ValueError("operators use different derivation units")
    out = [rf_const(0)] * (op1.order + op2.order + 1)
    for i, g in enumerate(op1.coeffs):
        if g.is_zero:
            continue
        for j, h in enumerate(op2.coeffs):
            if h.is_zero:
                continue
            hk = h
            for k in range(i + 1):
                if k:
                    hk = hk.deriv()
                    if hk.is_zero:
                        break
                out[i + j - k] = out[i + j - k] + comb(i, k) * g * hk
    return DiffOp(tuple(out), op1.w)


def _coefficient_expansions(op, a, M):
    return [taylor_expand(g, a, M).series if not g.is_zero
            else PowerSeries(QQ, [Fraction(0)], M)
            for g in op.coeffs]


def _normalized_expansions(op, a, M):
    """Expansions of g_i / g_N at a; leading entry becomes exactly 1."""
    exps = _coefficient_expansions(op, a, M)
    lead = exps[-1]
    inv = ps_geom_inverse(lead, M)  # raises NonUnitConstantTerm if not a unit
    out = [ps_mul(e, inv).restrict(M) for e in exps[:-1]]
    out.append(PowerSeries(QQ, [Fraction(1)], M))
    return out


def is_pd_nice(op, a, p, M, normalize=False):
    """PD-integrality of every coefficient expansion at a to depth M, plus the
    PD-unit property of the leading coefficient (optionally after dividing all
    coefficients by it)."""
    try:
        if normalize:
            exps = _normalized_expansions(op, a, M)
        else:
            exps = _coefficient_expansions(op, a, M)
    except NonUnitConstantTerm:
        return False
    for e in exps:
        if not is_pd_integral(DividedSeries(p, e.coeffs)):
            return False
    lead = op.coeffs[-1]
    if lead.is_zero:
        return False
    lead_exp = exps[-1]
    v = vp(lead_exp[0], p)
    return (not v.is_inf) and v.v == 0


def pd_primitives_solve(op, a, initial, M, p):
    """The unique divided series f = sum a_i t^i / i! with D(f) = 0 and the
    given initial divided coefficients a_0..a_{N-1}, to depth M.

    Normalizes the leading coefficient to 1 first; requires the normalized
    operator to be PD-nice at a.  The recurrence is
    a_{N+k} = - sum_{l<N} sum_{i+j=k} C(k,i) b_{l,i} a_{l+j},
    where g_l = sum_i b_{l,i} t^i / i! are the normalized coefficients.
    """
    N = op.order
    if len(initial) != N:
        raise ValueError("need exactly N = %d initial values" % N)
    initial = [Fraction(x) for x in initial]
    if any(vp(x, p) < 0 for x in initial):
        raise ValueError("initial divided coefficients must be p-integral")
    try:
        exps = _normalized_expansions(op, a, M)
    except NonUnitConstantTerm:
        raise ValueError("leading coefficient is not a unit at the base point")
    for e in exps:
        if not is_pd_integral(DividedSeries(p, e.coeffs)):
            raise ValueError("operator is not PD-nice at %s" % (a,))
    # divided coefficients of the lower-order normalized expansions
    b = []
    for l in range(N):
        fact = 1
        row = []
        for i, c in enumerate(exps[l].coeffs):
            if i:
                fact *= i
            row.append(c * fact)
        b.append(row)
    a_seq = list(initial)
    for k in range(M - N + 1):
        s = Fraction(0)
        for l in range(N):
            bl = b[l]
            for i in range(k + 1):
                if bl[i]:
                    s += comb(k, i) * bl[i] * a_seq[l + k - i]
        a_seq.append(-s)
    return DividedSeries.from_divided(p, a_seq[: M + 1])


def _to_d_over_omega_form(op):
    """Coefficients h_0..h_N with op = sum_j h_j (w d/dz)^j."""
    N = op.order
    w = op.w
    powers = [d_over_omega_power(j, w) for j in range(N + 1)]
    residual = list(op.coeffs)
    h = [rf_const(0)] * (N + 1)
    for j in range(N, -1, -1):
        hj = residual[j] / w ** j
        h[j] = hj
        if not hj.is_zero:
            for i, c in enumerate(powers[j].coeffs):
                residual[i] = residual[i] - hj * c
    return h


def _poly_order_at(poly, pt):
    """Multiplicity of pt as a root (0 when poly(pt) != 0)."""
    count = 0
    while poly and len(poly) > 1 and poly_eval(poly, pt) == 0:
        poly = poly_divmod(poly, (-pt, Fraction(1)))[0]
        count += 1
    return count


def div_of_op(op, omega_plus, allowed_poles=None):
    """min_j(div(h_j) - j * omega_plus) wedge 0, with h_j the d/omega-form
    coefficients; errors if some h_j has a pole outside the allowed set.

    Only orders at the allowed points and at infinity are tracked: everywhere
    else every h_j is regular, so the pointwise minimum clips to 0 anyway.
    """
    if allowed_poles is None:
        allowed_poles = {Fraction(0), Fraction(1), INFINITY}
    allowed = set(allowed_poles) | set(omega_plus.support())
    finite_pts = sorted(pt for pt in allowed if not isinstance(pt, Infinity)
                        and not isinstance(pt, tuple))
    h = _to_d_over_omega_form(op)
    out = None
    for j, hj in enumerate(h):
        if hj.is_zero:
            continue
        entries = {}
        den_accounted = 0
        for pt in finite_pts:
            o = _poly_order_at(hj.num, pt) - _poly_order_at(hj.den, pt)
            den_accounted += _poly_order_at(hj.den, pt)
            if o:
                entries[pt] = o
        if den_accounted < len(hj.den) - 1:
            raise ValueError(
                "d/omega-form coefficient %d has a pole outside %r" % (j, allowed))
        entries[INFINITY] = (len(hj.den) - 1) - (len(hj.num) - 1)
        dj = P1Divisor(entries) - j * omega_plus
        out = dj if out is None else out.meet(dj)
    return out.clip_nonpositive()


def recognize_polynomial(exp, max_degree):
    """The polynomial p(z) of degree <= max_degree whose expansion at exp.base
    matches, or None; requires at least max_degree + 2 known coefficients so
    the overdetermined tail actually constrains."""
    if exp.trunc < max_degree + 1:
        raise RecognitionFailure(
            "truncation %d cannot certify degree <= %d" % (exp.trunc, max_degree))
    for k in range(max_degree + 1, exp.trunc + 1):
        if exp.series[k] != 0:
            return None
    coeffs = exp.series.coeffs[: max_degree + 1]
    return rf_poly(poly_shift(coeffs, -exp.base))


def _pd_min_valuation(series_coeffs, p):
    """min_i (v_p(c_i) + v_p(i!)) over nonzero coefficients; None if all zero."""
    best = None
    for i, c in enumerate(series_coeffs):
        v = vp(c, p)
        if v.is_inf:
            continue
        t = v.v + vp_factorial(i, p)
        if best is None or t < best:
            best = t
    return best


def _rf_det(mat):
    """Determinant of a small square matrix of RationalFunction, by Gaussian
    elimination over the function field."""
    n = len(mat)
    m = [list(row) for row in mat]
    det = rf_const(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not m[r][col].is_zero:
                piv = r
                break
        if piv is None:
            return rf_const(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = det * rf_const(-1)
        det = det * m[col][col]
        inv_piv = rf_const(1) / m[col][col]
        for r in range(col + 1, n):
            if m[r][col].is_zero:
                continue
            factor = m[r][col] * inv_piv
            for c in range(col, n):
                m[r][c] = m[r][c] - factor * m[col][c]
    return det


class _Row:
    __slots__ = ("form", "cur")

    def __init__(self, form):
        self.form = form   # the transformed basis function
        self.cur = form    # (d/omega)^n applied to form, at the current column


def annihilator_of_span(fns, p, w, rational_forms=None, E=None, verify=True):
    """A PD-nice operator annihilating the rational span of fns.

    fns are local expansions at a common base; rational_forms, when supplied,
    gives their exact rational functions (otherwise each expansion must be
    recognizable as a polynomial).  The order ladder 0 <= n_1 < ... < n_c is
    found by p-adic column reduction of the values ((d/omega)^n f_i)(a) with
    unit pivots, smallest row index first; the operator is the alternating sum
    of maximal minors over columns (n_1..n_c, N), N = n_c + 1.
    """
    if not fns:
        raise ValueError("empty span")
    a = fns[0].base
    if any(f.base != a for f in fns):
        raise ValueError("expansions must share a base point")
    trunc = min(f.trunc for f in fns)
    c = len(fns)
    if rational_forms is None:
        bound = E.degree if E is not None else trunc // 2
        rational_forms = []
        for f in fns:
            poly = recognize_polynomial(f, bound)
            if poly is None:
                raise RecognitionFailure(
                    "span element is not polynomial of degree <= %d; supply "
                    "rational_forms for general inputs" % bound)
            rational_forms.append(poly)
    if len(rational_forms) != c:
        raise ValueError("rational_forms length mismatch")

    def rescaled(form):
        if form.is_zero:
            raise ValueError("zero (or dependent) element in the span")
        ex = taylor_expand(form, a, max(trunc, 2 * c + 4))
        mv = _pd_min_valuation(ex.series.coeffs, p)
        return form * Fraction(p) ** (-mv) if mv else form

    rows = [_Row(rescaled(f)) for f in rational_forms]
    cap = (E.degree + c + 4) if E is not None else max(trunc, 4 * c + 8)
    ladder = []       # (n, row) in assignment order
    active = list(range(c))
    n = 0
    while active:
        if n > cap:
            raise ValueError(
                "insufficient truncation/degree budget to establish the "
                "order ladder (searched up to %d)" % n)
        values = {}
        for i in active:
            # re-normalize a row that drifted into p * (PD ring)
            ex = taylor_expand(rows[i].form, a, max(trunc, 2 * c + 4))
            mv = _pd_min_valuation(ex.series.coeffs, p)
            if mv is None:
                raise ValueError("span became dependent during reduction")
            if mv:
                scale = Fraction(p) ** (-mv)
                rows[i].form = rows[i].form * scale
                rows[i].cur = rows[i].cur * scale
            values[i] = rows[i].cur.eval(a)
        unit_rows = [i for i in active
                     if values[i] != 0 and vp(values[i], p).v == 0]
        if unit_rows:
            piv = min(unit_rows)
            ladder.append((n, piv))
            for i in active:
                if i == piv or values[i] == 0:
                    continue
                coef = values[i] / values[piv]
                rows[i].form = rows[i].form - coef * rows[piv].form
                rows[i].cur = rows[i].cur - coef * rows[piv].cur
            active.remove(piv)
        n += 1
        for i in active:
            rows[i].cur = w * rows[i].cur.deriv()

    orders = [t[0] for t in ladder]
    N = orders[-1] + 1
    if E is not None:
        assert N <= E.degree + 1, "order ladder exceeds deg(E) + 1"

    # minors over the ladder-ordered transformed basis
    basis = [rows[i].form for _, i in ladder]
    col_orders = orders + [N]
    derivs = []  # derivs[i][j] = (d/omega)^{col_orders[j]} basis[i]
    for f in basis:
        row = []
        cur = f
        k = 0
        for target in col_orders:
            while k < target:
                cur = w * cur.deriv()
                k += 1
            row.append(cur)
        derivs.append(row)
    total = None
    for j in range(c + 1):
        minor = [[derivs[i][jj] for jj in range(c + 1) if jj != j]
                 for i in range(c)]
        det = _rf_det(minor) if c else rf_const(1)
        if det.is_zero:
            continue
        sign = 1 if j % 2 == 0 else -1
        term = d_over_omega_power(col_orders[j], w).scale(sign * det)
        total = term if total is None else _op_add(total, term)
    if total is None or total.order != N:
        raise ArithmeticError("degenerate annihilator (leading minor vanished)")
    if verify:
        for f in fns:
            res = apply(total, f)
            if any(x != 0 for x in res.series.coeffs):
                raise ArithmeticError("annihilator failed to kill its span")
    return total


def _op_add(a, b):
    if a.w != b.w:
        raise ValueError("operators use different derivation units")
    n = max(a.order, b.order)
    out = [rf_const(0)] * (n + 1)
    for i, g in enumerate(a.coeffs):
        out[i] = out[i] + g
    for i, g in enumerate(b.coeffs):
        out[i] = out[i] + g
    return DiffOp(tuple(out), a.w)


@dataclass(frozen=True)
class StageAudit:
    weight: int
    span_size: int
    independent_size: int
    order: int
    divisor: P1Divisor


@dataclass(frozen=True)
class PipelineResult:
    operator: DiffOp
    stages: tuple
    truncation: int


def _independent_subset(polys):
    """Earliest-first maximal linearly independent subset, exact over Q."""
    echelon = []  # list of (pivot index, coeff list)
    keep = []
    for idx, f in enumerate(polys):
        vec = list(f.num)
        for piv, row in echelon:
            if piv < len(vec) and vec[piv]:
                coef = vec[piv] / row[piv]
                for i, x in enumerate(row):
                    if i < len(vec):
                        vec[i] -= coef * x
                    elif x:
                        vec.extend([Fraction(0)] * (i - len(vec) + 1))
                        vec[i] -= coef * x
        while vec and vec[-1] == 0:
            vec.pop()
        if vec:
            piv = max(i for i, x in enumerate(vec) if x)
            echelon.append((piv, vec))
            keep.append(idx)
    return keep


def kill_weight_pipeline(m, basis_gen, w=None, omega_plus=None, p=3, a=2,
                         M=None, max_retries=3):
    """Recursive annihilator construction: D_0 = d/omega; at each stage apply
    the current operator to the next weight's basis, recognize the values as
    polynomials of degree bounded by -div(D_k), and left-compose with the
    annihilator of their span.

    basis_gen(length, trunc) must return the local expansions of the
    weight-graded basis elements of the given word length at the common base.
    Returns the final operator with a per-stage audit; asserts the order and
    divisor bounds (delta+2)^m * prod(c_i+1).
    """
    if w is None:
        w = z_minus_z2()
    if omega_plus is None:
        omega_plus = P1Divisor({INFINITY: 2})
    delta = omega_plus.degree
    a = Fraction(a)
    sizes = [len(basis_gen(k, 1)) for k in range(1, m + 1)]
    expected_order = (delta + 2) ** m
    for cs in sizes[: max(0, m - 1)]:
        expected_order *= cs + 1
    trunc = M if M is not None else 4 * expected_order + 32
    last_err = None
    for _ in range(max_retries + 1):
        try:
            return _pipeline_once(m, basis_gen, w, omega_plus, p, a, trunc,
                                  sizes, delta)
        except RecognitionFailure as err:
            last_err = err
            trunc *= 2
    raise RecognitionFailure(
        "pipeline recognition kept failing up to truncation %d: %s"
        % (trunc // 2, last_err))


def _pipeline_once(m, basis_gen, w, omega_plus, p, a, trunc, sizes, delta):
    D = derivation(w)
    audit = [StageAudit(0, 1, 1, D.order, div_of_op(D, omega_plus))]
    for k in range(m):
        new_fns = basis_gen(k + 1, trunc)
        div_k = audit[-1].divisor
        deg_bound = -div_k.degree
        values = [apply(D, f) for f in new_fns]
        polys = []
        for val in values:
            poly = recognize_polynomial(val, deg_bound)
            if poly is None:
                raise RecognitionFailure(
                    "stage %d value did not reduce to a polynomial of degree "
                    "<= %d" % (k + 1, deg_bound))
            polys.append(poly)
        keep = _independent_subset([q for q in polys if not q.is_zero])
        nonzero = [q for q in polys if not q.is_zero]
        indep = [nonzero[i] for i in keep]
        if indep:
            exps = [taylor_expand(q, a, trunc) for q in indep]
            stage_op = annihilator_of_span(
                exps, p, w, rational_forms=indep,
                E=P1Divisor({INFINITY: deg_bound}))
            D = compose(stage_op, D)
        audit.append(StageAudit(k + 1, len(new_fns), len(indep), D.order,
                                div_of_op(D, omega_plus)))
    order_bound = (delta + 2) ** m
    for cs in sizes[: max(0, m - 1)]:
        order_bound *= cs + 1
    assert D.order <= order_bound, "pipeline order exceeds the filtration bound"
    div_bound_mult = (delta + 2) ** m
    for cs in sizes[:m]:
        div_bound_mult *= cs + 1
    assert audit[-1].divisor >= (-div_bound_mult) * omega_plus, \
        "pipeline divisor falls below the filtration bound"
    return PipelineResult(D, tuple(audit), trunc)


def explicit_line_operator(m):
    """(z-z^2)^{2^m} d^{2^m}/dz^{2^m} o ... o (z-z^2) d/dz; order 2^{m+1}-1."""
    if m < 0:
        raise ValueError("m must be >= 0")
    w = z_minus_z2()
    D = None
    for i in range(m + 1):
        k = 2 ** i
        factor = DiffOp(tuple([rf_const(0)] * k + [w ** k]), w)
        D = factor if D is None else compose(factor, D)
    return D


_TERM_RE = re.compile(
    r"\(([^()]*)\)(?:/\(([^()]*)\))?\s*\*\s*d\^(\d+)/dz\^(\d+)")


def format_diffop(op):
    """Text form "(g_i) * d^i/dz^i + ..."; round-trips through parse_diffop."""
    parts = []
    for i, g in enumerate(op.coeffs):
        if g.is_zero:
            continue
        if g.is_polynomial:
            head = "(%s)" % poly_str(g.num)
        else:
            head = "(%s)/(%s)" % (poly_str(g.num), poly_str(g.den))
        parts.append("%s * d^%d/dz^%d" % (head, i, i))
    return " + ".join(parts) if parts else "(0) * d^0/dz^0"


def parse_diffop(text, w=None):
    if w is None:
        w = z_minus_z2()
    coeffs = {}
    matched = 0
    for mt in _TERM_RE.finditer(text):
        num, den, i1, i2 = mt.groups()
        if i1 != i2:
            raise ValueError("mismatched derivative powers in %r" % (mt.group(0),))
        i = int(i1)
        rf = RationalFunction(parse_poly(num),
                             parse_poly(den) if den else (Fraction(1),))
        coeffs[i] = coeffs.get(i, rf_const(0)) + rf
        matched += 1
    if not matched:
        raise ValueError("no operator terms found in %r" % (text,))
    n = max(coeffs)
    return DiffOp(tuple(coeffs.get(i, rf_const(0)) for i in range(n + 1)), w)
