"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 work budget exceeded, 4 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from fractions import Fraction

from . import auxiliary as aux
from . import circle, counting, cubes, lab
from .config import Config
from .errors import BudgetExceeded, ValidationError
from .matrices import IntMatrix, all_square_minors_nonsingular, hns_block_equivalence, \
    is_highly_nonsingular, parse_inline, read_matrix

EXIT_USAGE, EXIT_BUDGET, EXIT_VALIDATION = 2, 3, 4


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# argument helpers


def matrix_arg(text: str) -> IntMatrix:
    """A file in the text format, the keyword 'example', or an inline '1,0;0,1' string."""
    if text == "example":
        return aux.EXAMPLE_BLOCK
    if os.path.exists(text):
        return read_matrix(text)
    try:
        return parse_inline(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse matrix {text!r}") from exc


def int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def shape_arg(text: str) -> aux.AuxShape:
    vals = int_list(text)
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("shape is n,r,t,omega")
    try:
        return aux.AuxShape(*vals)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def pair_arg(text: str) -> tuple[int, int]:
    vals = int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("expected n,r")
    return vals[0], vals[1]


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--cache-dir", default=None, help="directory for rho-table caches (env CUBELAB_CACHE wins)")
    g.add_argument("--budget", type=float, default=counting.DEFAULT_BUDGET, help="enumeration budget")
    g.add_argument("--eta", type=float, default=0.5)
    g.add_argument("--sigma", type=float, default=0.0)
    g.add_argument("--delta", type=float, default=0.5)
    g.add_argument("--threads", type=int, default=1, help="work partitions")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--no-timing", action="store_true", help="report millis as 0 for reproducible output")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="cubelab", description="Sums of three cubes: matrices, counts, circle method.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rho", parents=[common], help="representation counts")
    p.add_argument("--n", type=int, help="query a single n")
    p.add_argument("--N", type=int, help="tabulate 0..N")
    p.add_argument("--variant", choices=("plain", "smooth", "window"), default="plain")
    p.add_argument("--P", type=int, help="window size for the window variant")
    p.add_argument("--moment", type=int, help="print sum of counts^moment instead of the table")

    p = sub.add_parser("xi", parents=[common], help="correlation sums over the positive cone")
    p.add_argument("--A", type=matrix_arg, required=True)
    p.add_argument("--h", type=int_list, default=None)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--smooth", action="store_true", help="weight with the smooth count")
    p.add_argument("--bound", action="store_true", help="also count the eliminated system that dominates Xi")

    p = sub.add_parser("count", help="exact counts of Diophantine systems")
    csub = p.add_subparsers(dest="kind", required=True)
    q = csub.add_parser("system", parents=[common])
    q.add_argument("--C", type=matrix_arg, required=True)
    q.add_argument("--H", type=int_list, default=None)
    q.add_argument("--P", type=int, required=True)
    q.add_argument("--variant", choices=("plain", "smooth", "window"), default="plain")
    q.add_argument("--signature", type=int_list, default=None, help="signed block, e.g. 1,1 for x^3+y^3")
    q.add_argument("--strategy", choices=("auto", "mitm", "direct"), default="auto")
    q = csub.add_parser("iomega", parents=[common])
    q.add_argument("--shape", type=shape_arg, required=True)
    q.add_argument("--D", type=matrix_arg, default=None, help="matrix (default: built-in instance of the shape)")
    q.add_argument("--P", type=int, required=True)
    q.add_argument("--strategy", choices=("auto", "mitm", "direct"), default="auto")
    q = csub.add_parser("upsilon", parents=[common])
    q.add_argument("--C", type=matrix_arg, required=True)
    q.add_argument("--N", type=int, required=True)

    p = sub.add_parser("matrix", help="matrix classes and transforms")
    msub = p.add_subparsers(dest="action", required=True)
    q = msub.add_parser("check", parents=[common], help="all square minors non-singular?")
    q.add_argument("matrix", type=matrix_arg)
    q.add_argument("--hns", action="store_true", help="also report high non-singularity")
    q = msub.add_parser("build", parents=[common], help="build an auxiliary matrix")
    q.add_argument("--aux", type=shape_arg, required=True)
    q.add_argument("--lam", type=int, default=1)
    q.add_argument("--block", type=matrix_arg, default=None, help="r x r block used for every M_l")
    q = msub.add_parser("validate", parents=[common])
    q.add_argument("matrix", type=matrix_arg)
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--aux", type=shape_arg)
    g.add_argument("--adjuvant", type=pair_arg)
    q = msub.add_parser("delete", parents=[common], help="delete rows/columns and validate")
    q.add_argument("matrix", type=matrix_arg)
    q.add_argument("--aux", type=shape_arg, required=True, help="type of the input")
    q.add_argument("--pattern", choices=("D1", "D2", "D3", "D4", "D5", "D6"))
    q.add_argument("--rows", type=int_list, default=[])
    q.add_argument("--cols", type=int_list, default=[])
    q.add_argument("--claim", type=shape_arg)
    q = msub.add_parser("complify", parents=[common])
    q.add_argument("matrix", type=matrix_arg)
    q.add_argument("--adjuvant", type=pair_arg, required=True)
    q = msub.add_parser("reduce", parents=[common], help="eliminate the cone variables")
    q.add_argument("matrix", type=matrix_arg)
    q.add_argument("--h", type=int_list, default=None)
    q = msub.add_parser("random", parents=[common], help="seeded random member of a matrix class")
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--aux", type=shape_arg)
    g.add_argument("--adjuvant", type=pair_arg)
    g.add_argument("--hns", type=pair_arg, help="r,s")
    q = msub.add_parser("from-hns", parents=[common], help="adjuvant matrix of type (2, r) from an r x 2r matrix")
    q.add_argument("matrix", type=matrix_arg)

    p = sub.add_parser("circle", help="circle-method numerics")
    ksub = p.add_subparsers(dest="action", required=True)
    q = ksub.add_parser("weyl", parents=[common])
    q.add_argument("--P", type=int, required=True)
    q.add_argument("--alpha", type=str, required=True, help="float or fraction a/q")
    q.add_argument("--c", type=int, default=1)
    q.add_argument("--smooth", action="store_true")
    q = ksub.add_parser("gauss", parents=[common])
    q.add_argument("--q", type=int, required=True)
    q.add_argument("--a", type=int, required=True)
    q = ksub.add_parser("v", parents=[common])
    q.add_argument("--beta", type=float, required=True)
    q.add_argument("--P", type=float, required=True)
    q = ksub.add_parser("series", parents=[common])
    q.add_argument("--C", type=matrix_arg, required=True)
    q.add_argument("--Q", type=int, required=True)
    q = ksub.add_parser("integral", parents=[common])
    q.add_argument("--C", type=matrix_arg, required=True)
    q.add_argument("--X", type=float, required=True)
    q.add_argument("--P", type=float, required=True)
    q = ksub.add_parser("predict", parents=[common])
    q.add_argument("--C", type=matrix_arg, required=True)
    q.add_argument("--P", type=int, required=True)
    q.add_argument("--variant", choices=("plain", "smooth"), default="plain")
    q.add_argument("--q-cap", type=int, default=1024)
    q.add_argument("--x-cap", type=float, default=None)
    q = ksub.add_parser("arcs", parents=[common])
    q.add_argument("--alpha", type=str, required=True, help="comma separated for box arcs")
    q.add_argument("--P", type=int, required=True)
    q.add_argument("--family", choices=("wide", "narrow", "box"), default="wide")
    q = ksub.add_parser("moment", parents=[common])
    q.add_argument("--P", type=int, required=True)
    q.add_argument("--c", type=int, default=1)
    q.add_argument("--power", type=float, default=None, help="default 2 + delta")
    q.add_argument("--region", choices=("full", "major", "major_minus_narrow"), default="full")
    q.add_argument("--kind", choices=("f", "fg2"), default="f")
    q = ksub.add_parser("sup", parents=[common], help="largest |f| on the minor arcs")
    q.add_argument("--P", type=int, required=True)
    q.add_argument("--c", type=int, default=1)

    p = sub.add_parser("lab", help="exponent experiments")
    lsub = p.add_subparsers(dest="action", required=True)
    lsub.add_parser("list", parents=[common])
    q = lsub.add_parser("run", parents=[common])
    q.add_argument("target", help="a shipped spec name (see 'lab list')")
    q.add_argument("--shape", type=shape_arg, default=None)
    q.add_argument("--pmax", type=int, default=None, help="sweep 2..pmax")
    q.add_argument("--sweep", type=int_list, default=None)
    q.add_argument("--C", type=matrix_arg, default=None)
    q.add_argument("--tolerance", type=float, default=None)
    return parser


# --------------------------------------------------------------------------
# output


def _matrix_payload(M: IntMatrix) -> dict:
    return {"rows": M.rows, "cols": M.cols, "matrix": M.tolist()}


def _emit(payload, cfg: Config, out) -> None:
    if cfg.fmt == "csv":
        out.write(_to_csv(payload))
    else:
        out.write(json.dumps(payload) + "\n")


def _to_csv(payload) -> str:
    if isinstance(payload, str):
        return payload
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(payload, dict) and "matrix" in payload:
        for row in payload["matrix"]:
            w.writerow(row)
        return buf.getvalue()
    if isinstance(payload, dict):
        flat = {k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in payload.items()}
        w.writerow(list(flat))
        w.writerow(list(flat.values()))
        return buf.getvalue()
    w.writerow([payload])
    return buf.getvalue()


def _report(rep: counting.CountReport, cfg: Config) -> dict:
    d = rep.to_dict()
    if not cfg.timing:
        d["millis"] = 0
    return d


def _variant(name: str, cfg: Config, P: int | None = None):
    if name == "plain":
        return cubes.Plain()
    if name == "smooth":
        return cubes.Smooth(cfg.eta)
    if P is None:
        raise UsageError("the window variant needs --P")
    return cubes.Window(cfg.sigma, P, cfg.eta)


# --------------------------------------------------------------------------
# handlers


def cmd_rho(args, cfg):
    variant = _variant(args.variant, cfg, args.P)
    if args.n is not None:
        if args.n < 0:
            raise UsageError("--n must be >= 0")
        table = cubes.rho_table(max(args.n, 1), variant, cache_dir=cfg.cache_dir)
        return {"n": args.n, "rho": int(table.counts[args.n]), "variant": args.variant}
    if args.N is None:
        raise UsageError("give --n or --N")
    table = cubes.rho_table(args.N, variant, cache_dir=cfg.cache_dir)
    if args.moment is not None:
        return {"N": args.N, "power": args.moment, "sum": str(cubes.moment_sum(table, args.moment, args.N))}
    if cfg.fmt == "csv":
        return "n,rho\n" + "".join(f"{n},{int(c)}\n" for n, c in enumerate(table.counts))
    return {"N": args.N, "variant": args.variant, "counts": [int(c) for c in table.counts]}


def cmd_xi(args, cfg):
    variant = cubes.Smooth(cfg.eta) if args.smooth else cubes.Plain()
    rep = counting.count_xi(args.A, args.h, args.N, variant, partitions=cfg.threads, budget=cfg.budget)
    out = _report(rep, cfg)
    if args.bound:
        b = counting.xi_reduction_bound(args.A, args.h, args.N, variant, partitions=cfg.threads, budget=cfg.budget)
        out["system_bound"] = str(b.count)
        out["system_P"] = b.extra["P"]
    return out


def cmd_count(args, cfg):
    if args.kind == "system":
        variant = _variant(args.variant, cfg, args.P)
        rep = counting.count_system(args.C, args.H, args.P, variant, signature=args.signature,
                                    strategy=args.strategy, partitions=cfg.threads, budget=cfg.budget)
    elif args.kind == "iomega":
        D = aux.as_auxiliary(args.D, args.shape) if args.D is not None else aux.default_auxiliary(args.shape)
        rep = counting.count_I_omega(D, args.P, strategy=args.strategy, partitions=cfg.threads, budget=cfg.budget)
    else:
        rep = counting.count_upsilon(args.C, args.N, partitions=cfg.threads, budget=cfg.budget)
    return _report(rep, cfg)


def cmd_matrix(args, cfg):
    act = args.action
    if act == "check":
        out = {"all_minors_nonsingular": all_square_minors_nonsingular(args.matrix)}
        if args.hns:
            M = args.matrix
            out["highly_nonsingular"] = is_highly_nonsingular(M) if M.cols >= M.rows else False
            if M.cols == 2 * M.rows:
                out["block_equivalence"] = list(hns_block_equivalence(M))
        return out
    if act == "build":
        shape = args.aux
        blocks = []
        for blk in aux.block_layout(shape):
            rows, cols = blk.m_shape
            base = args.block if args.block is not None else aux.default_block(rows, cols)
            if base.rows < rows or base.cols < cols:
                raise ValidationError(f"block is {base.rows}x{base.cols}, need {rows}x{cols}")
            blocks.append(base.submatrix(range(rows), range(cols)))
        A = aux.build_auxiliary(shape, [args.lam] * (shape.n + 1), blocks)
        return {"shape": [shape.n, shape.r, shape.t, shape.omega], "R": shape.R, "S": shape.S,
                **_matrix_payload(A.D)}
    if act == "validate":
        if args.aux is not None:
            why = aux.check_auxiliary(args.matrix, args.aux)
        else:
            why = aux.check_adjuvant(args.matrix, *args.adjuvant)
        if why is not None:
            raise ValidationError(why)
        return {"valid": True}
    if act == "delete":
        D = aux.as_auxiliary(args.matrix, args.aux)
        if args.pattern:
            rows, cols, claim = aux.deletion_pattern(args.aux, args.pattern)
        else:
            if args.claim is None:
                raise UsageError("give --pattern or --rows/--cols with --claim")
            rows, cols, claim = args.rows, args.cols, args.claim
        res = aux.aux_deletion(D, rows, cols, claim)
        sh = res.shape
        return {"shape": [sh.n, sh.r, sh.t, sh.omega], **_matrix_payload(res.D)}
    if act == "complify":
        adj = aux.as_adjuvant(args.matrix, *args.adjuvant)
        res = aux.complify(adj)
        return {"type": [res.n, res.r], **_matrix_payload(res.matrix)}
    if act == "reduce":
        B, H, lam = aux.eliminate_cone_variables(args.matrix, args.h)
        return {"lambda": lam, "H": list(H), **_matrix_payload(B)}
    if act == "random":
        rng = random.Random(cfg.seed)
        if args.aux is not None:
            sh = args.aux
            return {"shape": [sh.n, sh.r, sh.t, sh.omega], **_matrix_payload(aux.random_auxiliary(sh, rng).D)}
        if args.adjuvant is not None:
            adj = aux.random_adjuvant(*args.adjuvant, rng)
            return {"type": [adj.n, adj.r], **_matrix_payload(adj.matrix)}
        return _matrix_payload(aux.random_hns(*args.hns, rng))
    if act == "from-hns":
        adj, delta = aux.adjuvant_from_hns(args.matrix)
        return {"type": [adj.n, adj.r], "delta": delta, **_matrix_payload(adj.matrix)}
    raise UsageError(act)


def _parse_alpha(text: str):
    return Fraction(text) if "/" in text else float(text)


def cmd_circle(args, cfg):
    act = args.action
    if act == "weyl":
        spec = circle.WeylSumSpec(args.P, cfg.sigma, cfg.eta if args.smooth else None, args.c)
        val = circle.weyl_sum(spec, _parse_alpha(args.alpha))
        return circle.CircleEstimate(val, 0.0, "closed-form", {"P": args.P, "alpha": args.alpha}).to_dict()
    if act == "gauss":
        return circle.CircleEstimate(circle.gauss_sum(args.q, args.a), 0.0, "closed-form",
                                     {"q": args.q, "a": args.a}).to_dict()
    if act == "v":
        return circle.v_integral(args.beta, args.P, cfg.sigma).to_dict()
    if act == "series":
        return circle.singular_series(args.Q, args.C).to_dict()
    if act == "integral":
        return circle.singular_integral(args.X, args.C, args.P, cfg.sigma).to_dict()
    if act == "predict":
        return circle.major_arc_prediction(args.C, args.P, cfg.sigma, args.variant, eta=cfg.eta,
                                           q_cap=args.q_cap, x_cap=args.x_cap).to_dict()
    if act == "arcs":
        parts = args.alpha.split(",")
        if args.family == "box":
            dis = circle.ArcDissection("box", args.P, len(parts))
            hit = circle.arc_membership([float(x) for x in parts], dis)
            return {"family": "box", "arc": None if hit is None else {"q": hit[0], "a": list(hit[1])}}
        dis = circle.ArcDissection(args.family, args.P)
        hit = circle.arc_membership(_parse_alpha(parts[0]), dis)
        return {"family": args.family, "arc": None if hit is None else {"q": hit[0], "a": hit[1]}}
    if act == "moment":
        power = args.power if args.power is not None else 2 + cfg.delta
        return circle.arc_moment(args.c, args.P, power, args.region, kind=args.kind, sigma=cfg.sigma,
                                 eta=cfg.eta).to_dict()
    if act == "sup":
        return circle.minor_arc_sup(args.c, args.P).to_dict()
    raise UsageError(act)


def cmd_lab(args, cfg):
    if args.action == "list":
        return {name: {"target": s.target, "exponent": s.exponent, "sweep": s.sweep, "instance": s.instance}
                for name, s in lab.SHIPPED.items()}
    base = lab.SHIPPED[lab.resolve(args.target)]
    instance = dict(base.instance)
    if args.shape is not None:
        sh = args.shape
        instance["shape"] = [sh.n, sh.r, sh.t, sh.omega]
    if args.C is not None:
        instance["C"] = args.C.tolist()
    sweep = base.sweep
    if args.sweep is not None:
        sweep = args.sweep
    elif args.pmax is not None:
        sweep = list(range(2, args.pmax + 1))
    tol = args.tolerance if args.tolerance is not None else (base.tolerance if instance == base.instance else None)
    try:
        spec = lab.ExperimentSpec(base.target, instance, sweep, tolerance=tol, eps=base.eps)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = lab.run_experiment(spec, budget=cfg.budget, partitions=cfg.threads, cache_dir=cfg.cache_dir)
    if cfg.fmt == "csv":
        return lab.report_csv(report)
    return report


HANDLERS = {"rho": cmd_rho, "xi": cmd_xi, "count": cmd_count, "matrix": cmd_matrix, "circle": cmd_circle,
            "lab": cmd_lab}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        cfg = Config.from_args(args)
        payload = HANDLERS[args.command](args, cfg)
    except BudgetExceeded as exc:
        print(f"cubelab: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValidationError as exc:
        print(f"cubelab: validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (UsageError, ValueError) as exc:
        print(f"cubelab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(payload, cfg, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
