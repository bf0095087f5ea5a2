"""Command-line front end: ``freehyper {moments,verify,scan,export}``.

Exit codes: 0 on success / all checks passing, 1 on a verification failure,
2 on configuration errors (bad flags, size limits, singular Gram matrices,
unsupported parameters).
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import freelaws, io, suites, twist, weingarten
from .partitions import Kind, SizeLimitError, enumerate_partitions

log = logging.getLogger("freehyper")

OUTPUT_DIR_ENV = "FREEHYPER_OUTPUT_DIR"
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


def _ladder(text: str) -> list[tuple[int, int, int]]:
    """``"2,2,4;4,4,16"`` -> ``[(2, 2, 4), (4, 4, 16)]``."""
    out = []
    for chunk in filter(None, (c.strip() for c in text.replace(" ", ";").split(";"))):
        parts = [int(x) for x in chunk.split(",")]
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"size {chunk!r} is not n,m,N")
        out.append(tuple(parts))
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--output", "-o", help="output file (default: stdout, or $%s/<name>)" % OUTPUT_DIR_ENV)
    common.add_argument("--config", help="key=value file; keys override flags")
    common.add_argument("--precision", type=int, default=30, help="decimal digits for closed forms")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="freehyper", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    mo = sub.add_parser("moments", parents=[common], help="exact moments of X(n,m,N) or u_ij^2k")
    mo.add_argument("--model", choices=["fhg", "ao"], required=True)
    mo.add_argument("-n", type=int, required=True)
    mo.add_argument("-m", type=int)
    mo.add_argument("-N", type=int)
    mo.add_argument("--pmax", type=int, default=4)

    ve = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ve.add_argument("suite", choices=suites.SUITES)
    ve.add_argument("--small", action="store_true", help="desk-scale acceptance preset")
    ve.add_argument("--kmax", type=int)
    ve.add_argument("-n", type=int)

    sc = sub.add_parser("scan", parents=[common], help="finite-size scan toward a limit law")
    sc.add_argument("--regime", type=int, choices=[1, 2], required=True)
    sc.add_argument("--ladder", type=_ladder, required=True, help='sizes "n,m,N;n,m,N;..."')
    sc.add_argument("--pmax", type=int, default=4)

    ex = sub.add_parser("export", parents=[common], help="export Gram/Weingarten matrices or cocycle tables")
    ex.add_argument("what", choices=["gram", "weingarten", "cocycle"])
    ex.add_argument("--kind", choices=[k.value for k in Kind], default="NC")
    ex.add_argument("-k", type=int, default=2)
    ex.add_argument("-m", type=int, default=4)
    ex.add_argument("-n", type=int, default=2)
    return p


def read_config(path: str) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key] = val
    return out


def apply_config(args: argparse.Namespace, cfg: dict[str, str]) -> None:
    for key, raw in cfg.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ConfigError(f"unknown config key {key!r}")
        current = getattr(args, attr)
        if attr == "ladder":
            val = _ladder(raw)
        elif attr == "small":
            val = raw.lower() in ("1", "true", "yes")
        elif isinstance(current, int) or attr in ("n", "m", "N", "kmax", "pmax", "k"):
            val = int(raw)
        else:
            val = raw
        setattr(args, attr, val)


def validate(args: argparse.Namespace) -> None:
    if args.precision < 30:
        raise ConfigError("precision must be >= 30 digits")
    if getattr(args, "kmax", None) is not None and args.kmax > 8:
        raise ConfigError("kmax is limited to 8 (exact inversion guard)")
    if args.command == "moments":
        if args.model == "fhg" and (args.m is None or args.N is None):
            raise ConfigError("--model fhg needs -m and -N")
        if args.pmax < 1:
            raise ConfigError("--pmax must be >= 1")


def emit(text: str, args: argparse.Namespace, default_name: str) -> None:
    target = args.output
    if target is None and os.environ.get(OUTPUT_DIR_ENV):
        target = str(Path(os.environ[OUTPUT_DIR_ENV]) / default_name)
    if target is None:
        sys.stdout.write(text)
        return
    Path(target).parent.mkdir(parents=True, exist_ok=True)
    Path(target).write_text(text)
    log.info("wrote %s", target)


def cmd_moments(args) -> int:
    rows = []
    if args.model == "fhg":
        for p in range(1, args.pmax + 1):
            rows.append([p, io.fraction_str(weingarten.fhg_moment(args.n, args.m, args.N, p))])
        params = {"model": "fhg", "n": args.n, "m": args.m, "N": args.N, "pmax": args.pmax}
    else:
        # row k holds int u_ij^(2k)
        for k in range(1, args.pmax + 1):
            rows.append([k, io.fraction_str(weingarten.hyperspherical_moment(args.n, k))])
        params = {"model": "ao", "n": args.n, "pmax": args.pmax}
    if args.format == "csv":
        text = io.table_to_csv(["p", "moment"], rows)
    else:
        text = io.dumps({"parameters": params, "moments": [r[1] for r in rows]})
    emit(text, args, f"moments_{args.model}.{args.format}")
    return EXIT_OK


def _suite_kwargs(name: str, args) -> dict:
    if args.small:
        kw = dict(suites.SMALL[name])
    else:
        kw = {}
        if args.kmax is not None and name in ("cabling", "ks-join", "thm34"):
            kw["kmax"] = args.kmax
        if args.n is not None and name in ("cabling", "equal-laws", "thm34", "psi-iso"):
            kw["ns"] = [args.n]
    if name == "thm34":
        kw["precision"] = args.precision
    if name in ("equal-laws", "haar-transport", "structural"):
        kw["seed"] = args.seed
    return kw


def cmd_verify(args) -> int:
    names = list(suites.RUNNERS) if args.suite == "all" else [args.suite]
    results = []
    for name in names:
        log.info("running %s", name)
        results.append(suites.RUNNERS[name](**_suite_kwargs(name, args)))
    ok = all(r.passed for r in results)
    bundle = {"pass": ok, "suites": [r.to_dict() for r in results]}
    if args.format == "csv":
        rows = [[r.suite, c["check"], c["pass"]] for r in results for c in r.checks]
        text = io.table_to_csv(["suite", "check", "pass"], rows)
    else:
        text = io.dumps(bundle)
    emit(text, args, f"verify_{args.suite}.{args.format}")
    for r in results:
        for c in r.checks:
            if not c["pass"]:
                log.error("FAIL %s: %s", r.suite, c["check"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_scan(args) -> int:
    report = freelaws.asymptotic_scan(args.regime, args.ladder, args.pmax, digits=args.precision)
    if args.format == "csv":
        header = ["n", "m", "N", "distance"] + [f"kappa_{p}" for p in range(1, args.pmax + 1)]
        rows = [[r.n, r.m, r.N, repr(r.distance)] + list(r.cumulants) for r in report.rows]
        text = io.table_to_csv(header, rows)
    else:
        text = io.dumps(report.to_dict())
    emit(text, args, f"scan_regime{args.regime}.{args.format}")
    return EXIT_OK


def cmd_export(args) -> int:
    if args.what == "cocycle":
        c = twist.standard_cocycle(args.n)
        text = io.cocycle_to_csv(c) if args.format == "csv" else io.dumps(
            {"n": args.n, "exponents": c.exponent_table().tolist()})
        emit(text, args, f"cocycle_n{args.n}.{args.format}")
        return EXIT_OK
    fam = enumerate_partitions(args.kind, args.k)
    mat = weingarten.gram(fam, args.m) if args.what == "gram" else weingarten.weingarten(fam, args.m)
    text = io.matrix_to_csv(mat) if args.format == "csv" else io.matrix_to_json(mat)
    emit(text, args, f"{args.what}_{args.kind}{args.k}_m{args.m}.{args.format}")
    return EXIT_OK


COMMANDS = {"moments": cmd_moments, "verify": cmd_verify, "scan": cmd_scan, "export": cmd_export}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.config:
            apply_config(args, read_config(args.config))
        validate(args)
        return COMMANDS[args.command](args)
    except freelaws.UnsupportedParameter as e:
        print(f"freehyper: unsupported-parameter: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except SizeLimitError as e:
        print(f"freehyper: size-limit: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except weingarten.SingularGramError as e:
        print(f"freehyper: singular-gram: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, ValueError, OSError) as e:
        print(f"freehyper: invalid-argument: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
