"""Exact-arithmetic toolkit for weight-filtered point-count bounds.

Subpackages: series (truncated exact power series and the partial-sum order),
hilbert (Hilbert-series constructors and the minimal-weight search), bounds
(explicit bound evaluators with directed rounding), padic (valuations, divided
series, Newton polygons), rational/diffop (rational functions and differential
operators on P1), polylog (iterated-integral word basis), cli/service
(command line and HTTP surfaces).
"""

from .series import (
    ExtNat, INF, EXTNAT, ZZ, QQ, PowerSeries, SelmerDims,
    ps_add, ps_mul, ps_weighted_product, ps_geom_inverse, ps_partial_sums,
    ps_inflate, preceq, minimal_strict_m, parse_selmer_dims, format_selmer_dims,
)
from .hilbert import (
    SurfaceSignature, GlobalSeriesSpec, moebius, necklace, hs_surface,
    labute_dims, hs_local, hs_global, F_series, hs_siegel_glob,
    minimal_m_siegel,
)
from .bounds import (
    LocalFieldData, UpperBoundReal, CurveBoundInput, theta, kappa,
    bound_main, bound_refined, bound_weight, n_small, bound_coarse,
    bound_siegel, bound_siegel_chain, example_rank_gplus1_m,
)
from .padic import (
    Valuation, vp, DividedSeries, is_pd_integral, is_pd_unit,
    newton_polygon, count_zeros, zero_bound_nice,
)
from .rational import (
    RationalFunction, P1Divisor, INFINITY, LocalExpansion, taylor_expand,
    divisor_of,
)
from .diffop import (
    DiffOp, apply, compose, is_pd_nice, pd_primitives_solve, div_of_op,
    annihilator_of_span, kill_weight_pipeline, explicit_line_operator,
    format_diffop, parse_diffop,
)
from .polylog import Word, word, iterated_integral, basis_up_to, classical_polylog

__version__ = "0.1.0"
