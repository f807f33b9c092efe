"""Command-line client for the computation service.

Every subcommand builds a request model, posts it to the in-process ASGI app,
and renders the structured response.  Output is deterministic: same flags and
files, byte-identical bytes.  Two render modes are shared by all commands:

  plain    "key value" lines; scalar lists join with commas on one line
  records  "key<TAB>value" lines; list entries get ".<index>" suffixes

Exit status: 0 success, 1 verification failure (verify-polylog not passing,
newton count not certifiable), 2 usage/input error.
"""
import argparse
import asyncio
import sys

import httpx


def _post(path, payload):
    from .service import app as service_app

    async def go():
        transport = httpx.ASGITransport(app=service_app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://ckbound.local",
                                     timeout=None) as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _detail_text(resp):
    try:
        detail = resp.json().get("detail")
    except ValueError:
        return resp.text
    if isinstance(detail, list):  # pydantic validation errors
        parts = []
        for item in detail:
            loc = ".".join(str(x) for x in item.get("loc", ())[1:])
            parts.append("%s: %s" % (loc or "request", item.get("msg", "")))
        return "; ".join(parts)
    return str(detail)


def _scalar(value):
    if value is None:
        return "none"
    if value is True:
        return "true"
    if value is False:
        return "false"
    return str(value)


def _flatten(data, prefix=""):
    """Depth-first (key, scalar-or-list) pairs in response order."""
    out = []
    if isinstance(data, dict):
        for k, v in data.items():
            key = "%s.%s" % (prefix, k) if prefix else str(k)
            out.extend(_flatten(v, key))
    elif isinstance(data, list):
        if not data:
            out.append((prefix, "none"))
        elif all(not isinstance(v, (dict, list)) for v in data):
            out.append((prefix, [_scalar(v) for v in data]))
        else:
            for i, v in enumerate(data):
                out.extend(_flatten(v, "%s.%d" % (prefix, i)))
    else:
        out.append((prefix, _scalar(data)))
    return out


def _cap_digits(text, cap):
    if cap is None:
        return text
    stripped = text[1:] if text.startswith("-") else text
    if stripped.isdigit() and len(stripped) > cap:
        return "[%d digits]" % len(stripped)
    return text


def _render(data, fmt, digits_cap):
    lines = []
    for key, value in _flatten(data):
        if isinstance(value, list):
            if fmt == "records":
                for i, v in enumerate(value):
                    lines.append("%s.%d\t%s" % (key, i,
                                                _cap_digits(v, digits_cap)))
            else:
                joined = ",".join(_cap_digits(v, digits_cap) for v in value)
                lines.append("%s %s" % (key, joined))
        else:
            value = _cap_digits(value, digits_cap)
            sep = "\t" if fmt == "records" else " "
            lines.append("%s%s%s" % (key, sep, value))
    return "\n".join(lines)


def _read_dims_file(path):
    from .series import parse_selmer_dims
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        print("error: cannot read %s: %s" % (path, err), file=sys.stderr)
        raise SystemExit(2)
    try:
        dims = parse_selmer_dims(text)
    except ValueError as err:
        print("error: %s: %s" % (path, err), file=sys.stderr)
        raise SystemExit(2)
    return {str(n): ("inf" if dims[n].is_inf else dims[n].n)
            for n in dims.support()}


def _csv_ints(text, what):
    if not text.strip():
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        print("error: bad %s list %r" % (what, text), file=sys.stderr)
        raise SystemExit(2)


def _csv_strs(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def _run(path, payload, args, fail_key=None, transform=None):
    resp = _post(path, payload)
    if resp.status_code != 200:
        print("error: %s" % _detail_text(resp), file=sys.stderr)
        return 2
    data = resp.json()
    if transform is not None:
        data = transform(data)
    print(_render(data, args.format, args.digits_cap))
    if fail_key is not None and not data.get(fail_key):
        return 1
    return 0


def _add_common(p):
    p.add_argument("--format", choices=("plain", "records"), default="plain",
                   help="plain 'key value' lines or 'key<TAB>value' records")
    p.add_argument("--digits-cap", type=int, default=None, metavar="N",
                   help="elide integers longer than N digits as '[D digits]'")


def cmd_hs(args):
    if sum(x is not None for x in
           (args.surface, args.local, args.glob)) != 1:
        print("error: give exactly one of --surface, --local, --global",
              file=sys.stderr)
        return 2
    if args.surface is not None:
        gr = _csv_ints(args.surface, "g,r")
        if len(gr) != 2:
            print("error: --surface wants 'g,r'", file=sys.stderr)
            return 2
        payload = {"mode": "surface", "g": gr[0], "r": gr[1],
                   "trunc": args.trunc}
    elif args.local is not None:
        payload = {"mode": "local", "dims": _read_dims_file(args.local),
                   "trunc": args.trunc}
    else:
        payload = {"mode": "global", "s": args.s, "trunc": args.trunc}
        dims = _read_dims_file(args.glob)
        if args.naive:
            payload["variant"] = "naive"
            payload["t0_dims"] = dims
        elif args.bd is not None:
            payload["variant"] = "bd"
            payload["bd_rank"] = args.bd
            payload["dims"] = dims
        else:
            payload["dims"] = dims
    return _run("/hs", payload, args)


def cmd_minm(args):
    payload = {"glob_dims": _read_dims_file(args.glob),
               "loc_dims": _read_dims_file(args.loc),
               "max_m": args.max}
    if args.candidates:
        payload["candidates"] = _csv_ints(args.candidates, "--candidates")
    return _run("/minm", payload, args)


def cmd_siegel(args):
    payload = {"s": args.s, "long": args.long}
    if args.set is not None:
        payload["prime_set"] = _csv_ints(args.set, "prime")
    if args.max is not None:
        payload["m_max"] = args.max
    return _run("/siegel", payload, args)


def cmd_bound(args):
    payload = {"formula": args.formula, "r": args.r, "s": args.s,
               "e": args.e, "f": args.f, "points": args.points,
               "n_ell": _csv_ints(args.n_ell, "n_ell"),
               "n_ell_in_s": _csv_ints(args.n_ell_in_s, "n_ell_in_s"),
               "c": _csv_ints(args.c, "c"),
               "precision": args.precision,
               "materialize": args.materialize}
    for name in ("g", "p", "m", "base", "depth", "curve_class"):
        value = getattr(args, name)
        if value is not None:
            payload[name] = value
    return _run("/bound", payload, args)


def cmd_operator(args):
    payload = {"m": args.m, "pipeline": args.pipeline, "p": args.p,
               "base": args.base}
    if args.trunc is not None:
        payload["trunc"] = args.trunc
    return _run("/operator", payload, args)


def cmd_verify_polylog(args):
    payload = {"m": args.m, "base": args.base, "pipeline": args.pipeline,
               "p": args.p, "allow_large": args.allow_large}
    if args.trunc is not None:
        payload["trunc"] = args.trunc
    return _run("/verify-polylog", payload, args, fail_key="passed")


def cmd_newton(args):
    if (args.coeffs is None) == (args.divided is None):
        print("error: give exactly one of --coeffs, --divided",
              file=sys.stderr)
        return 2
    payload = {"p": args.p, "lam": args.lam}
    if args.coeffs is not None:
        payload["coeffs"] = _csv_strs(args.coeffs)
    else:
        payload["divided_coeffs"] = _csv_strs(args.divided)

    def transform(data):
        data = dict(data)
        data["vertices"] = ["%s:%s" % (i, v) for i, v in data["vertices"]]
        return data

    return _run("/newton", payload, args, fail_key="certified",
                transform=transform)


def cmd_serve(args):
    import uvicorn
    from .service import app as service_app
    uvicorn.run(service_app, host=args.host, port=args.port)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ckbound",
        description="Exact Hilbert-series, weight-bound and p-adic "
                    "differential-operator computations.")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser(
        "hs", help="Hilbert series (surface, local or global)",
        epilog="record keys: mode, ring, trunc, coeffs.<i>, "
               "partial_sums.<i>, text")
    p.add_argument("--surface", metavar="G,R",
                   help="1/(1-2g t-(r-1)t^2) for the (g,r) surface group")
    p.add_argument("--local", metavar="FILE",
                   help="dims file for prod (1-t^n)^{-d_n}")
    p.add_argument("--global", dest="glob", metavar="FILE",
                   help="dims file for the global series")
    p.add_argument("--s", type=int, default=0,
                   help="number of primes in S (adds (1-t^2)^{-s})")
    p.add_argument("--bd", type=int, default=None, metavar="RANK",
                   help="replace the weight-1 block by (1-t)^{-RANK}")
    p.add_argument("--naive", action="store_true",
                   help="plain weighted product of the file dims, no s-factor")
    p.add_argument("--trunc", type=int, required=True, metavar="N")
    _add_common(p)
    p.set_defaults(fn=cmd_hs)

    p = sub.add_parser(
        "minm", help="least m with strict partial-sum inequality",
        epilog="record keys: m, max_m, glob_partial_at_m, loc_partial_at_m")
    p.add_argument("--glob", required=True, metavar="FILE")
    p.add_argument("--loc", required=True, metavar="FILE")
    p.add_argument("--max", type=int, required=True, metavar="M")
    p.add_argument("--candidates", metavar="M1,M2,...", default=None,
                   help="restrict the search to these weights (least "
                        "listed weight at which the inequality is strict)")
    _add_common(p)
    p.set_defaults(fn=cmd_minm)

    p = sub.add_parser(
        "siegel", help="S-unit minimal weight and count bounds",
        epilog="record keys: s, m, bound, chain.p, chain.kappa_times_pminus2, "
               "chain.kappa_times_pminus2_decimal, chain.threshold, "
               "chain.intermediate, chain.final")
    p.add_argument("--s", type=int, required=True,
                   help="number of primes in S")
    p.add_argument("--set", metavar="P1,P2,...", default=None,
                   help="the actual primes of S, enables the certified chain")
    p.add_argument("--long", action="store_true",
                   help="allow the long-running search (s >= 8)")
    p.add_argument("--max", type=int, default=None, metavar="M",
                   help="cap the m search (default 4^s)")
    _add_common(p)
    p.set_defaults(fn=cmd_siegel)

    p = sub.add_parser(
        "bound", help="explicit point-count bound formulas",
        epilog="record keys: formula, value, digits, detail.<name>; "
               "coarse detail: m, binom_exp, weight_power_digits, "
               "depth_power_digits")
    p.add_argument("--formula", required=True,
                   choices=("main", "refined", "weight", "coarse", "kappa",
                            "n-small", "rank-example"))
    p.add_argument("--g", type=int, default=None)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--f", type=int, default=1)
    p.add_argument("--n-ell", default="", metavar="N1,N2,...",
                   help="bad-prime factors outside S")
    p.add_argument("--n-ell-in-s", default="", metavar="N1,N2,...",
                   help="bad-prime factors inside S (refined)")
    p.add_argument("--points", type=int, default=1,
                   help="residue-disc count #X(F_p) (or #Y(F_p))")
    p.add_argument("--m", type=int, default=None, help="weight")
    p.add_argument("--c", default="", metavar="C1,C2,...",
                   help="local constants c_1..c_{m-1}")
    p.add_argument("--base", type=int, default=None,
                   help="exponential base override (weight formula)")
    p.add_argument("--depth", type=int, default=None,
                   help="word length n (coarse formula)")
    p.add_argument("--curve-class", default=None,
                   choices=("genus0", "genus1", "hyperelliptic", "general"))
    p.add_argument("--precision", type=int, default=128)
    p.add_argument("--materialize", action="store_true",
                   help="build the full coarse integer (guarded by digit cap)")
    _add_common(p)
    p.set_defaults(fn=cmd_bound)

    p = sub.add_parser(
        "operator", help="annihilating differential operator for the line",
        epilog="record keys: m, kind, order, operator, divisor, truncation, "
               "stages.<i>.{weight,span_size,independent_size,order,divisor}")
    p.add_argument("--m", type=int, required=True, help="weight cut 2m")
    p.add_argument("--pipeline", action="store_true",
                   help="recursive construction instead of the closed form")
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--base", default="2", metavar="A",
                   help="expansion base point (rational, not 0 or 1)")
    p.add_argument("--trunc", type=int, default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_operator)

    p = sub.add_parser(
        "verify-polylog", help="apply the operator to the full word basis",
        epilog="record keys: passed, m, kind, order, basis_size, trunc, "
               "checked_coefficients, max_residual, divisor, stages.<i>.*")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--base", default="2", metavar="A")
    p.add_argument("--trunc", type=int, default=None)
    p.add_argument("--pipeline", action="store_true")
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--allow-large", action="store_true",
                   help="lift the default cap m <= 4")
    _add_common(p)
    p.set_defaults(fn=cmd_verify_polylog)

    p = sub.add_parser(
        "newton", help="Newton-polygon zero count in the open unit disc",
        epilog="record keys: p, lam, vertices.<i> (as i:v), first_nonzero, "
               "pd_tail, truncation, certified, count, message")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--lam", default="1", help="count zeros of valuation >= lam")
    p.add_argument("--coeffs", default=None, metavar="C0,C1,...",
                   help="ordinary coefficients (exact rationals)")
    p.add_argument("--divided", default=None, metavar="A0,A1,...",
                   help="divided-power coefficients a_i, f = sum a_i t^i/i!")
    _add_common(p)
    p.set_defaults(fn=cmd_newton)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "fn", None):
        parser.print_help()
        return 2
    try:
        return args.fn(args)
    except SystemExit as err:
        code = err.code
        return code if isinstance(code, int) else 2
    except httpx.HTTPError as err:
        print("error: %s" % err, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
