"""HTTP service exposing the computation kernel.

Every endpoint is a thin adapter: decode the request model, call the library,
encode the result.  All arithmetic stays exact; numbers are serialized as
decimal/fraction strings by the model layer.  Invalid mathematical input maps
to HTTP 422; verification outcomes are data, not errors.
"""
import math
from fractions import Fraction

from fastapi import FastAPI, HTTPException

from . import __version__
from .series import (
    ExtNat, INF, SelmerDims, ZZ, PowerSeries,
    ps_partial_sums, ps_weighted_product, minimal_strict_m,
)
from .hilbert import (
    GlobalSeriesSpec, LongRunGuard, SurfaceSignature,
    hs_global, hs_local, hs_surface, minimal_m_siegel,
)
from .bounds import (
    CurveBoundInput, LocalFieldData, UpperBoundReal,
    bound_coarse, bound_main, bound_refined, bound_siegel, bound_siegel_chain,
    bound_weight, example_rank_gplus1_m, kappa, n_small, theta, weight_factor,
)
from .padic import (
    DividedSeries, UncertifiedTruncation, count_zeros, newton_polygon,
)
from .rational import INFINITY, P1Divisor
from .diffop import (
    RecognitionFailure, apply, div_of_op, explicit_line_operator, format_diffop,
    kill_weight_pipeline,
)
from .polylog import all_words, basis_up_to, iterated_integral
from .models import (
    BoundRequest, BoundResponse, HSRequest, HSResponse, HealthResponse,
    MinmRequest, MinmResponse, NewtonRequest, NewtonResponse, OperatorRequest,
    OperatorResponse, SiegelChainModel, SiegelRequest, SiegelResponse,
    StageModel, VerifyPolylogRequest, VerifyPolylogResponse,
)

app = FastAPI(title="ckbound", version=__version__)

OMEGA_PLUS = P1Divisor({INFINITY: 2})
VERIFY_M_CAP = 4


def _usage(msg):
    raise HTTPException(status_code=422, detail=str(msg))


def _selmer(dims_map):
    try:
        return SelmerDims({n: (INF if d == "inf" else int(d))
                           for n, d in dims_map.items()})
    except ValueError as err:
        _usage(err)


def _fraction(text, what):
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        _usage("bad %s %r (expected an integer or p/q)" % (what, text))


def _series_response(mode, f):
    sums = ps_partial_sums(f)
    return HSResponse(
        mode=mode,
        ring=f.ring.name,
        trunc=f.trunc,
        coeffs=[str(c) for c in f.coeffs],
        partial_sums=[str(c) for c in sums.coeffs],
        text=repr(f),
    )


def _decimal(ub):
    return repr(float(ub.ub))


@app.get("/health", response_model=HealthResponse)
def health():
    return HealthResponse(status="ok", version=__version__)


@app.post("/hs", response_model=HSResponse)
def hs(req: HSRequest):
    try:
        if req.mode == "surface":
            if req.g is None or req.r is None:
                _usage("surface mode needs g and r")
            return _series_response("surface",
                                    hs_surface(SurfaceSignature(req.g, req.r),
                                               req.trunc))
        if req.mode == "local":
            if req.dims is None:
                _usage("local mode needs dims")
            return _series_response("local", hs_local(_selmer(req.dims),
                                                      req.trunc))
        dims = _selmer(req.dims or {})
        spec = GlobalSeriesSpec(
            s=req.s,
            global_dims=dims,
            variant=req.variant,
            bd_rank=req.bd_rank if req.variant == "bd" else None,
            t0_dims=_selmer(req.t0_dims) if req.t0_dims is not None else None,
        )
        return _series_response("global", hs_global(spec, req.trunc))
    except HTTPException:
        raise
    except (ValueError, TypeError) as err:
        _usage(err)


@app.post("/minm", response_model=MinmResponse)
def minm(req: MinmRequest):
    try:
        glob = ps_weighted_product(_selmer(req.glob_dims), req.max_m)
        loc = ps_weighted_product(_selmer(req.loc_dims), req.max_m)
        if req.candidates is not None:
            if not req.candidates:
                _usage("candidates must be non-empty when given")
            if any(c < 0 or c > req.max_m for c in req.candidates):
                _usage("candidates must lie in [0, max_m]")
            m = None
            for c in sorted(req.candidates):
                if sum(glob.coeffs[: c + 1]) < sum(loc.coeffs[: c + 1]):
                    m = c
                    break
        else:
            m = minimal_strict_m(glob, loc, m_max=req.max_m)
    except HTTPException:
        raise
    except ValueError as err:
        _usage(err)
    if m is None:
        return MinmResponse(m=None, max_m=req.max_m)
    gp = sum(glob.coeffs[: m + 1])
    lp = sum(loc.coeffs[: m + 1])
    return MinmResponse(m=m, max_m=req.max_m,
                        glob_partial_at_m=str(gp), loc_partial_at_m=str(lp))


@app.post("/siegel", response_model=SiegelResponse)
def siegel(req: SiegelRequest):
    try:
        m = minimal_m_siegel(req.s, m_max=req.m_max, long=req.long)
    except LongRunGuard as err:
        _usage(err)
    except ValueError as err:
        _usage(err)
    chain = None
    if req.prime_set is not None:
        try:
            ch = bound_siegel_chain(req.s, req.prime_set)
        except (ValueError, ArithmeticError) as err:
            _usage(err)
        chain = SiegelChainModel(
            p=ch.p,
            kappa_times_pminus2=str(ch.kappa_times_pminus2.ub),
            kappa_times_pminus2_decimal=_decimal(ch.kappa_times_pminus2),
            threshold=str(2 ** (req.s + 2)),
            intermediate=str(ch.intermediate),
            final=str(ch.final),
        )
    return SiegelResponse(s=req.s, m=m, bound=str(bound_siegel(req.s)),
                          chain=chain)


def _bound_curve_input(req, want_refined):
    if req.g is None or req.p is None or req.m is None:
        _usage("formula %r needs g, p and m" % req.formula)
    s = req.s
    if want_refined:
        if s == 0 and req.n_ell_in_s:
            s = len(req.n_ell_in_s)
        if s != len(req.n_ell_in_s):
            _usage("s = %d does not match %d bad primes inside S"
                   % (s, len(req.n_ell_in_s)))
    return CurveBoundInput(
        g=req.g, r=req.r if want_refined else 0, s=s if want_refined else 0,
        p=req.p, n_ell_in_S=tuple(req.n_ell_in_s) if want_refined else (),
        n_ell_out_S=tuple(req.n_ell), points_mod_p=req.points,
        m=req.m, c_loc=tuple(req.c),
    )


@app.post("/bound", response_model=BoundResponse)
def bound(req: BoundRequest):
    detail = {}
    try:
        if req.formula == "kappa":
            if req.p is None:
                _usage("kappa needs p")
            field = LocalFieldData(req.p, req.e, req.f)
            ub = kappa(field, req.precision)
            detail["decimal"] = _decimal(ub)
            detail["theta"] = str(theta(field))
            detail["precision"] = str(req.precision)
            return BoundResponse(formula="kappa", value=str(ub.ub),
                                 detail=detail)
        if req.formula in ("main", "refined"):
            inp = _bound_curve_input(req, req.formula == "refined")
            fn = bound_refined if req.formula == "refined" else bound_main
            value = fn(inp, req.precision)
            detail["weight_factor"] = str(weight_factor(inp.g, inp.r, inp.m,
                                                        inp.c_loc))
            detail["kappa_decimal"] = _decimal(
                kappa(LocalFieldData(inp.p), req.precision))
            return BoundResponse(formula=req.formula, value=str(value),
                                 digits=len(str(value)), detail=detail)
        if req.formula == "weight":
            if req.p is None or req.m is None or req.base is None:
                _usage("weight formula needs p, m and base")
            value = bound_weight(LocalFieldData(req.p, req.e, req.f),
                                 req.points, req.m, tuple(req.c), req.base,
                                 req.precision)
            return BoundResponse(formula="weight", value=str(value),
                                 digits=len(str(value)), detail=detail)
        if req.formula == "coarse":
            if req.g is None or req.p is None or req.depth is None:
                _usage("coarse formula needs g, p and depth")
            cb = bound_coarse(req.g, req.depth, math.prod(req.n_ell),
                              req.points, LocalFieldData(req.p, req.e, req.f),
                              materialize=req.materialize,
                              digit_cap=req.digit_cap,
                              precision=req.precision)
            detail["m"] = str(cb.m)
            detail["binom_exp"] = str(cb.binom_exp)
            detail["weight_power_digits"] = str(cb.weight_power_digits)
            detail["depth_power_digits"] = str(cb.depth_power_digits)
            value = None if cb.value is None else str(cb.value)
            return BoundResponse(formula="coarse", value=value,
                                 digits=None if value is None else len(value),
                                 detail=detail)
        if req.formula == "n-small":
            if req.g is None or req.p is None or req.curve_class is None:
                _usage("n-small needs g, p and curve-class")
            value = n_small(req.g, req.r, req.p, req.curve_class)
            return BoundResponse(formula="n-small", value=str(value),
                                 detail=detail)
        if req.formula == "rank-example":
            if req.g is None:
                _usage("rank-example needs g")
            value = example_rank_gplus1_m(req.g)
            return BoundResponse(formula="rank-example", value=str(value),
                                 detail=detail)
        _usage("unknown formula %r" % req.formula)
    except HTTPException:
        raise
    except OverflowError as err:
        _usage(err)
    except (ValueError, ArithmeticError) as err:
        _usage(err)


def _basis_gen_at(a, p):
    def basis_gen(length, trunc):
        cache = {}
        return [iterated_integral(w, a, trunc, _cache=cache)
                for w in all_words(length)]
    return basis_gen


def _build_operator(m, pipeline, p, a, trunc):
    if pipeline:
        res = kill_weight_pipeline(m, _basis_gen_at(a, p), p=p, a=a, M=trunc)
        stages = [StageModel(weight=st.weight, span_size=st.span_size,
                             independent_size=st.independent_size,
                             order=st.order, divisor=str(st.divisor))
                  for st in res.stages]
        return res.operator, "pipeline", stages, res.truncation
    op = explicit_line_operator(m)
    return op, "explicit", [], None


@app.post("/operator", response_model=OperatorResponse)
def operator(req: OperatorRequest):
    a = _fraction(req.base, "base point")
    if a in (0, 1):
        _usage("base point must avoid 0 and 1")
    try:
        op, kind, stages, used = _build_operator(req.m, req.pipeline, req.p,
                                                 a, req.trunc)
        divisor = str(div_of_op(op, OMEGA_PLUS))
    except HTTPException:
        raise
    except RecognitionFailure as err:
        _usage("pipeline recognition failed: %s" % err)
    except (ValueError, ArithmeticError) as err:
        _usage(err)
    return OperatorResponse(m=req.m, kind=kind, order=op.order,
                            operator=format_diffop(op), divisor=divisor,
                            truncation=used, stages=stages)


@app.post("/verify-polylog", response_model=VerifyPolylogResponse)
def verify_polylog(req: VerifyPolylogRequest):
    if req.m > VERIFY_M_CAP and not req.allow_large:
        _usage("m = %d exceeds the default cap %d; pass the explicit "
               "large-run flag" % (req.m, VERIFY_M_CAP))
    a = _fraction(req.base, "base point")
    if a in (0, 1):
        _usage("base point must avoid 0 and 1")
    try:
        op, kind, stages, _ = _build_operator(req.m, req.pipeline, req.p,
                                              a, req.trunc)
        divisor = str(div_of_op(op, OMEGA_PLUS))
        trunc = req.trunc if req.trunc is not None else 2 * op.order + 32
        if trunc <= op.order:
            _usage("truncation %d leaves no certified coefficients beyond "
                   "order %d" % (trunc, op.order))
        basis = basis_up_to(req.m, a, trunc)
        max_residual = Fraction(0)
        checked = 0
        for f in basis:
            out = apply(op, f)
            checked += len(out.series.coeffs)
            for cc in out.series.coeffs:
                if abs(cc) > max_residual:
                    max_residual = abs(cc)
    except HTTPException:
        raise
    except RecognitionFailure as err:
        _usage("pipeline recognition failed: %s" % err)
    except (ValueError, ArithmeticError) as err:
        _usage(err)
    return VerifyPolylogResponse(
        passed=(max_residual == 0), m=req.m, kind=kind, order=op.order,
        basis_size=len(basis), trunc=trunc, checked_coefficients=checked,
        max_residual=str(max_residual), divisor=divisor, stages=stages)


@app.post("/newton", response_model=NewtonResponse)
def newton(req: NewtonRequest):
    lam = _fraction(req.lam, "lambda")
    if (req.coeffs is None) == (req.divided_coeffs is None):
        _usage("give exactly one of coeffs or divided_coeffs")
    if req.p is None:
        _usage("p is required")
    try:
        if req.coeffs is not None:
            coeffs = [_fraction(c, "coefficient") for c in req.coeffs]
            polygon = newton_polygon(coeffs, req.p)
        else:
            divided = [_fraction(c, "coefficient") for c in req.divided_coeffs]
            polygon = newton_polygon(DividedSeries.from_divided(req.p, divided))
    except HTTPException:
        raise
    except ValueError as err:
        _usage(err)
    base = dict(
        p=polygon.p, lam=str(lam),
        vertices=[[str(i), str(v)] for i, v in polygon.vertices],
        first_nonzero=polygon.first_nonzero, pd_tail=polygon.pd_tail,
        truncation=polygon.trunc)
    try:
        count = count_zeros(polygon, lam)
    except UncertifiedTruncation as err:
        return NewtonResponse(certified=False, count=None, message=str(err),
                              **base)
    except ValueError as err:
        _usage(err)
    return NewtonResponse(certified=True, count=count, **base)
