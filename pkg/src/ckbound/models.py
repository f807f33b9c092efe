"""Request/response schemas shared by the HTTP service and the CLI client.

All exact quantities cross the wire as strings: integers in decimal, rationals
as "p/q", extended naturals as a decimal or "inf".  That keeps arbitrary
precision intact through JSON and makes the CLI output a pure formatting step.
"""
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field

DimValue = Union[int, Literal["inf"]]
DimsMap = Dict[int, DimValue]


class HealthResponse(BaseModel):
    status: str
    version: str


# ---------------------------------------------------------------- hs

class HSRequest(BaseModel):
    mode: Literal["surface", "local", "global"]
    trunc: int = Field(ge=0)
    # surface mode
    g: Optional[int] = None
    r: Optional[int] = None
    # local / global modes
    dims: Optional[DimsMap] = None
    s: int = 0
    variant: Literal["standard", "bd", "naive"] = "standard"
    bd_rank: int = 0
    t0_dims: Optional[DimsMap] = None


class HSResponse(BaseModel):
    mode: str
    ring: str
    trunc: int
    coeffs: List[str]
    partial_sums: List[str]
    text: str


# ---------------------------------------------------------------- minm

class MinmRequest(BaseModel):
    glob_dims: DimsMap
    loc_dims: DimsMap
    max_m: int = Field(ge=0)
    # When set, report the least member of this list at which the strict
    # inequality holds, instead of the overall least m.
    candidates: Optional[List[int]] = None


class MinmResponse(BaseModel):
    m: Optional[int]
    max_m: int
    glob_partial_at_m: Optional[str] = None
    loc_partial_at_m: Optional[str] = None


# ---------------------------------------------------------------- siegel

class SiegelChainModel(BaseModel):
    p: int
    kappa_times_pminus2: str
    kappa_times_pminus2_decimal: str
    threshold: str
    intermediate: str
    final: str


class SiegelRequest(BaseModel):
    s: int = Field(ge=0)
    prime_set: Optional[List[int]] = None
    long: bool = False
    m_max: Optional[int] = None


class SiegelResponse(BaseModel):
    s: int
    m: Optional[int]
    bound: str
    chain: Optional[SiegelChainModel] = None


# ---------------------------------------------------------------- bound

BoundFormula = Literal["main", "refined", "weight", "coarse", "kappa",
                       "n-small", "rank-example"]


class BoundRequest(BaseModel):
    formula: BoundFormula
    g: Optional[int] = None
    r: int = 0
    s: int = 0
    p: Optional[int] = None
    e: int = 1
    f: int = 1
    n_ell: List[int] = Field(default_factory=list)
    n_ell_in_s: List[int] = Field(default_factory=list)
    points: int = 1
    m: Optional[int] = None
    c: List[int] = Field(default_factory=list)
    base: Optional[int] = None
    depth: Optional[int] = None          # coarse: the word length n
    curve_class: Optional[str] = None    # n-small
    precision: int = 128
    materialize: bool = False            # coarse: build the full integer
    digit_cap: Optional[int] = 200_000


class BoundResponse(BaseModel):
    formula: str
    value: Optional[str] = None
    digits: Optional[int] = None
    detail: Dict[str, str] = Field(default_factory=dict)


# ---------------------------------------------------------------- operator

class StageModel(BaseModel):
    weight: int
    span_size: int
    independent_size: int
    order: int
    divisor: str


class OperatorRequest(BaseModel):
    m: int = Field(ge=0)
    pipeline: bool = False
    p: int = 3
    base: str = "2"
    trunc: Optional[int] = None


class OperatorResponse(BaseModel):
    m: int
    kind: Literal["explicit", "pipeline"]
    order: int
    operator: str
    divisor: Optional[str] = None
    truncation: Optional[int] = None
    stages: List[StageModel] = Field(default_factory=list)


# ---------------------------------------------------------------- verify-polylog

class VerifyPolylogRequest(BaseModel):
    m: int = Field(ge=0)
    base: str = "2"
    trunc: Optional[int] = None
    pipeline: bool = False
    p: int = 3
    allow_large: bool = False


class VerifyPolylogResponse(BaseModel):
    passed: bool
    m: int
    kind: Literal["explicit", "pipeline"]
    order: int
    basis_size: int
    trunc: int
    checked_coefficients: int
    max_residual: str
    divisor: Optional[str] = None
    stages: List[StageModel] = Field(default_factory=list)


# ---------------------------------------------------------------- newton

class NewtonRequest(BaseModel):
    lam: str = "1"
    p: Optional[int] = None
    coeffs: Optional[List[str]] = None           # ordinary coefficients c_i
    divided_coeffs: Optional[List[str]] = None   # a_i with f = sum a_i t^i/i!


class NewtonResponse(BaseModel):
    p: int
    lam: str
    vertices: List[List[str]]
    first_nonzero: int
    pd_tail: bool
    truncation: Optional[int] = None
    certified: bool
    count: Optional[int] = None
    message: str = ""
