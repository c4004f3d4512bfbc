"""Command-line interface.

Exit codes: 0 on success, 2 on contract errors (bad input, bad files),
3 when a numerical procedure does not converge.  Numbers are written with
17 significant digits; ``--out`` files are written atomically.

Fixed constants of the dynamics commands: Denjoy-Wolff iteration budget
1e5 with tolerances 1e-4 (parabolic), 1e-8 (hyperbolic automorphisms) and
1e-6 (other maps); parabolic detection ``| |tr| - 2 | <= 1e-10``.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
import warnings

import numpy as np

from . import __version__
from ._io import atomic_write, csv_text, dumps17
from .errors import ContractError, ConvergenceError, FileFormatError, InvalidParameter


def parse_complex(text: str) -> complex:
    """``"re,im"`` or a Python complex literal such as ``"0.5+0.25j"``."""
    t = text.strip()
    try:
        if "," in t:
            re_, im_ = t.split(",")
            return complex(float(re_), float(im_))
        return complex(t.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _read(path, what):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise FileFormatError(f"cannot read {what} file {path!r}: {exc.strerror}") from None


def _domain(args):
    from .domains import SlitDomain
    d = SlitDomain.from_json(_read(args.domain, "domain-spec"))
    if args.truncation is not None:
        d = dataclasses.replace(d, truncation=args.truncation)
    return d


def _selfmap(args):
    from .dynamics import selfmap_from_json
    return selfmap_from_json(_read(args.map, "self-map"))


def _table(columns, rows, summary, fmt, kind):
    if fmt == "csv":
        return csv_text(columns, rows)
    return dumps17({"schema": f"slithyp.{kind}/1", "columns": columns,
                    "rows": [dict(zip(columns, r)) for r in rows], "summary": summary}, indent=1) + "\n"


def _json(obj):
    return dumps17(obj, indent=1) + "\n"


# ---------------------------------------------------------------- commands

def cmd_petersen_report(args):
    from .reports import petersen_report
    r = petersen_report(args.y, args.M, args.n_max)
    return _table(r.columns, r.rows, r.summary, args.format, r.kind)


def cmd_comb_report(args):
    from .reports import comb_report
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        r = comb_report(args.k, args.h, args.r0, args.M, args.n_max)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return _table(r.columns, r.rows, r.summary, args.format, r.kind)


def cmd_bounds(args):
    from .bounds import curve_length_bounds, distance_upper
    d = _domain(args)
    pts = list(args.points)
    if len(pts) < 2:
        raise InvalidParameter("bounds needs at least two points")
    bp = curve_length_bounds(d, np.array(pts))
    out = {"curve": [[p.real, p.imag] for p in pts], **bp.to_dict()}
    if args.distance_upper:
        out["distance_upper"] = distance_upper(d, pts[0], pts[-1])
    if args.format == "csv":
        keys = [k for k in ("lower", "upper", "distance_upper") if k in out]
        return csv_text(keys, [[out[k] for k in keys]])
    return _json(out)


def cmd_orbit(args):
    from .dynamics import iterate
    m = _selfmap(args)
    orb = iterate(m, args.z0, args.n)
    if args.format == "csv":
        return orb.to_csv()
    return _json({"start": [orb.start.real, orb.start.imag], "hint": orb.hint,
                  "points": [[p.real, p.imag] for p in orb.points],
                  "step_distances": [float(s) for s in orb.step_distances]})


def cmd_dw(args):
    from .dynamics import NoneIndicator, denjoy_wolff_point
    r = denjoy_wolff_point(_selfmap(args))
    if isinstance(r, NoneIndicator):
        out = {"verdict": "none", "fixed_point": [r.fixed_point.real, r.fixed_point.imag]}
    else:
        out = {"verdict": "denjoy-wolff", "point": [r.point.real, r.point.imag],
               "iterations": r.iterations, "spread": r.spread, "tolerance": r.tolerance}
    if args.format == "csv":
        p = out.get("point", out.get("fixed_point"))
        return csv_text(["verdict", "re", "im"], [[out["verdict"], p[0], p[1]]])
    return _json(out)


def cmd_divergence(args):
    from .dynamics import divergence_rate
    r = divergence_rate(_selfmap(args), args.z0, args.n)
    out = {"n": r.n, "rate": r.rate, "half_rate": r.half_rate, "diagnostic": r.diagnostic}
    if args.format == "csv":
        return csv_text(list(out), [list(out.values())])
    return _json(out)


def _fitted(args):
    from .conformal import fit_map, load_map
    if args.map_file:
        return load_map(args.map_file)
    if not args.domain:
        raise InvalidParameter("give --domain or --map-file")
    return fit_map(_domain(args), args.samples, args.anchor)


def cmd_fitmap(args):
    from .conformal import fit_map
    m = fit_map(_domain(args), args.samples, args.anchor)
    return m.to_json(indent=1) + "\n"


def cmd_cluster(args):
    from .horolab import cluster_set
    m = _fitted(args)
    params = {"R": args.R} if args.kind == "horospheric" else {"c": args.c} if args.kind == "nontangential" else {}
    e = cluster_set(m, args.sigma, args.kind, params, args.levels)
    if args.format == "csv":
        return csv_text(["level", "re", "im"], e.witness_rows())
    return _json(e.summary())


# ------------------------------------------------------------------ parser

def build_parser():
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS, help="output file (default: standard output)")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for sampled quantities (outputs are deterministic)")
    common.add_argument("--truncation", type=int, default=argparse.SUPPRESS,
                        help="override the truncation N of a domain spec")
    p = argparse.ArgumentParser(prog="slithyp", description="Hyperbolic geometry of slit domains.",
                                parents=[common])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    s = add("petersen-report", help="T_n certificate of the Petersen domain")
    s.add_argument("--y", type=float, default=1.0)
    s.add_argument("--M", type=float, default=0.0)
    s.add_argument("--n-max", type=int, default=60)
    s.set_defaults(func=cmd_petersen_report)

    s = add("comb-report", help="lower/upper chain of the comb domain")
    s.add_argument("--k", type=float, default=0.5)
    s.add_argument("--h", type=float, default=0.02)
    s.add_argument("--r0", type=float, default=0.5)
    s.add_argument("--M", type=float, default=0.0)
    s.add_argument("--n-max", type=int, default=20)
    s.set_defaults(func=cmd_comb_report)

    s = add("bounds", help="hyperbolic length bounds of a polyline")
    s.add_argument("--domain", required=True)
    s.add_argument("points", nargs="+", type=parse_complex, help="polyline vertices as re,im")
    s.add_argument("--distance-upper", action="store_true", help="also run the grid search between the end points")
    s.set_defaults(func=cmd_bounds)

    for name, func, hlp in (("orbit", cmd_orbit, "orbit of a self-map"),
                            ("divergence", cmd_divergence, "divergence rate of a self-map")):
        s = add(name, help=hlp)
        s.add_argument("--map", required=True, help="self-map spec file")
        s.add_argument("--z0", type=parse_complex, default=0j)
        s.add_argument("--n", type=int, default=200)
        s.set_defaults(func=func)

    s = add("dw", help="Denjoy-Wolff point of a disk self-map")
    s.add_argument("--map", required=True, help="self-map spec file")
    s.set_defaults(func=cmd_dw)

    s = add("fitmap", help="fit and serialize a conformal map")
    s.add_argument("--domain", required=True)
    s.add_argument("--samples", type=int, default=512)
    s.add_argument("--anchor", type=parse_complex, default=None)
    s.set_defaults(func=cmd_fitmap)

    s = add("cluster", help="cluster set estimate at a boundary point")
    s.add_argument("--domain")
    s.add_argument("--map-file", help="serialized map from fitmap (instead of --domain)")
    s.add_argument("--samples", type=int, default=512)
    s.add_argument("--anchor", type=parse_complex, default=None)
    s.add_argument("--sigma", type=parse_complex, default=1 + 0j)
    s.add_argument("--kind", choices=("unrestricted", "nontangential", "horospheric"), default="horospheric")
    s.add_argument("--R", type=float, default=1.0)
    s.add_argument("--c", type=float, default=0.5)
    s.add_argument("--levels", type=int, default=6)
    s.set_defaults(func=cmd_cluster)
    return p


GLOBAL_DEFAULTS = {"out": None, "format": "json", "seed": 0, "truncation": None}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # parents share action objects, so global defaults are filled in here
    for k, v in GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    try:
        text = args.func(args)
        if args.out:
            atomic_write(args.out, text)
        else:
            sys.stdout.write(text)
    except ContractError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
