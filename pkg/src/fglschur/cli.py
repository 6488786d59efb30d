"""Command line entry point: ``fgl-schur``.

Exit status is 0 on success, 1 when a verification case fails and 2 on
usage errors.  JSON output is deterministic and echoes the configuration.
"""

from __future__ import annotations

import argparse
import json
import sys

from fglschur import __version__
from fglschur.dual import StabilityError, extract_duals, shat_dual
from fglschur.fgl import FormalGroupLaw
from fglschur.ktheory import phatK_by_word
from fglschur.partitions import PartitionError, parse_partition
from fglschur.schur import schur_P, schur_Q, schur_s_double, schur_s_factorial
from fglschur.series import MAX_CUTOFF, SeriesError
from fglschur.suites import SUITES, RunConfig
from fglschur.tableaux import check_conjectures


class UsageError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser, fgl_default="additive"):
    p.add_argument("--fgl", default=fgl_default, help="additive, k-theory (or multiplicative), universal")
    p.add_argument("--beta", default=None, help="numeric beta for k-theory (default symbolic)")
    p.add_argument("--degree", type=int, default=4, help="truncation degree D")
    p.add_argument("--n", type=int, default=None, help="number of x variables")
    p.add_argument("--ny", type=int, default=4, help="number of y variables")
    p.add_argument("--lambda", dest="lam", default=None, help="partition, e.g. 2,1")
    p.add_argument("--mu", default=None, help="second partition")
    p.add_argument("--factorial", choices=["on", "off"], default=None)
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--out", choices=["text", "json"], default="text")
    p.add_argument("--json", dest="out", action="store_const", const="json")
    p.add_argument("--jobs", type=int, default=1, help="worker bound (suites run serially)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-large", action="store_true", help=f"permit D above {MAX_CUTOFF}")
    p.add_argument("--type-d", action="store_true", help="add the report-only type D case (k-recursion)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fgl-schur", description="Factorial Schur functions for formal group laws")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute a symmetric series")
    c.add_argument("kind", choices=["P", "Q", "s", "s-double", "phatK"])
    c.add_argument("--via", choices=["kernel", "word"], default="kernel")
    _add_common(c)

    d = sub.add_parser("dual", help="extract dual functions from the Cauchy kernel")
    d.add_argument("kind", choices=["phat", "qhat", "shat"])
    _add_common(d)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", nargs="?", choices=sorted(SUITES))
    v.add_argument("--list", action="store_true", help="list suites")
    _add_common(v, fgl_default="all")

    k = sub.add_parser("conjecture", help="scan the tableau conjectures")
    k.add_argument("kind", choices=["gp", "gq", "staircase"])
    _add_common(k)
    return parser


def _config(args) -> RunConfig:
    if args.degree < 0:
        raise UsageError("--degree must be non-negative")
    if args.degree > MAX_CUTOFF and not args.allow_large:
        raise UsageError(f"--degree above {MAX_CUTOFF} needs --allow-large")
    strict = args.command != "compute" or args.kind in ("P", "Q", "phatK")
    if args.command == "dual":
        strict = args.kind != "shat"
    lam = parse_partition(args.lam, strict) if args.lam is not None else None
    mu = parse_partition(args.mu, strict) if args.mu is not None else None
    fac = args.factorial or ("both" if args.command == "verify" else "on")
    return RunConfig(
        fgl=args.fgl,
        beta=args.beta,
        degree=args.degree,
        n=args.n,
        n_y=args.ny,
        lam=lam,
        mu=mu,
        factorial=fac,
        max_size=args.max_size,
        seed=args.seed,
        jobs=args.jobs,
        allow_large=args.allow_large,
        type_d=args.type_d,
    )


def _provider(cfg: RunConfig) -> FormalGroupLaw:
    if cfg.fgl == "all":
        raise UsageError("choose a single --fgl for this command")
    try:
        return FormalGroupLaw.from_name(cfg.fgl, cfg.beta)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from exc


def _emit(out: str, payload: dict, text: str) -> None:
    if out == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def _show(val, requested: int) -> str:
    # lost precision is easy to miss when the surviving part is zero
    if val.cutoff < requested:
        return f"{val} + O(degree {val.cutoff + 1})"
    return str(val)


def cmd_compute(args, cfg: RunConfig) -> int:
    p = _provider(cfg)
    lam = cfg.lam if cfg.lam is not None else ()
    fac = cfg.factorial == "on"
    D = cfg.degree
    n = cfg.n if cfg.n is not None else max(len(lam), 1)
    if args.kind == "P":
        val = schur_P(lam, n, p, fac, D).value
    elif args.kind == "Q":
        val = schur_Q(lam, n, p, fac, D).value
    elif args.kind == "s":
        val = schur_s_factorial(lam, n, p, fac, D).value
    elif args.kind == "s-double":
        val = schur_s_double(lam, n, p, D).value
    else:
        if args.via == "word":
            val = phatK_by_word(lam, cfg.n_y, D, p)
        else:
            n_x = cfg.n if cfg.n is not None else D
            val = extract_duals(n_x, cfg.n_y, p, "Q_with_phat", fac, D)[lam]
    payload = {"config": cfg.to_json_obj(), "command": f"compute {args.kind}", "result": val.to_json_obj(), "text": _show(val, D)}
    _emit(args.out, payload, _show(val, D))
    return 0


def cmd_dual(args, cfg: RunConfig) -> int:
    p = _provider(cfg)
    D = cfg.degree
    n_x = cfg.n if cfg.n is not None else D
    fac = cfg.factorial == "on"
    if args.kind == "phat":
        exp = extract_duals(n_x, cfg.n_y, p, "Q_with_phat", fac, D)
    elif args.kind == "qhat":
        exp = extract_duals(n_x, cfg.n_y, p, "P_with_qhat", fac, D)
    else:
        exp = shat_dual(n_x, p, cfg.n_y, D)
    if cfg.lam is not None:
        if cfg.lam not in exp.entries:
            raise UsageError(f"no dual for {list(cfg.lam)} at degree {D}")
        entries = {cfg.lam: exp[cfg.lam]}
    else:
        entries = dict(exp.items())
    key = lambda lam: ",".join(map(str, lam)) or "0"  # noqa: E731
    payload = {
        "config": cfg.to_json_obj(),
        "command": f"dual {args.kind}",
        "result": {key(lam): v.to_json_obj() for lam, v in sorted(entries.items())},
    }
    text = "\n".join(f"{args.kind}[{key(lam)}] = {_show(v, D)}" for lam, v in sorted(entries.items()))
    _emit(args.out, payload, text)
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    if args.list or args.suite is None:
        if not args.list:
            raise UsageError("name a suite or pass --list")
        print("\n".join(sorted(SUITES)))
        return 0
    rep = SUITES[args.suite](cfg)
    lines = []
    for c in rep.cases:
        tag = ("PASS" if c.ok else "FAIL") + ("" if c.asserted else " (report)")
        lines.append(f"{tag} {c.name}" + (f": {c.witness}" if c.witness else ""))
    lines.extend(f"note: {n}" for n in rep.notes)
    lines.append(f"{args.suite}: {'PASS' if rep.ok else 'FAIL'} ({len(rep.cases)} cases, {len(rep.failures())} failed)")
    _emit(args.out, rep.to_json_obj(), "\n".join(lines))
    return 0 if rep.ok else 1


def cmd_conjecture(args, cfg: RunConfig) -> int:
    size = cfg.max_size if cfg.max_size is not None else 4
    rep = check_conjectures(size, cfg.n_y, (args.kind,))
    rows = rep["results"][args.kind]
    payload = {"config": cfg.to_json_obj(), "command": f"conjecture {args.kind}", "report": rep}
    lines = []
    asserted_fail = False
    for row in rows:
        if args.kind == "staircase":
            lines.append(f"{row['status']} {row['name']}" + (f": {row['witness']}" if "witness" in row else ""))
            continue
        for conv in ("beta=-1", "beta=+1"):
            c = row[conv]
            lines.append(f"{c['status']} {c['name']}" + (f": {c['witness']}" if "witness" in c else ""))
            if c["status"] == "FAIL" and c["asserted"]:
                asserted_fail = True
        lines.append(f"     g-expansion {row['g_expansion']} ({row['g_sign_pattern']})")
    _emit(args.out, payload, "\n".join(lines))
    return 1 if asserted_fail else 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = _config(args)
        handler = {"compute": cmd_compute, "dual": cmd_dual, "verify": cmd_verify, "conjecture": cmd_conjecture}
        return handler[args.command](args, cfg)
    except (UsageError, PartitionError, StabilityError, SeriesError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
