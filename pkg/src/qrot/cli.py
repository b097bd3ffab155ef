"""Command-line front end.

Exit codes: 0 success, 1 a verification verdict of FAIL, 2 invalid input,
3 a corrupted on-disk Weingarten table.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from fractions import Fraction

from . import config
from .cumulants import as_word, cumulants_from_moments
from .errors import CacheCorrupted, InvalidInput, QrotError
from .haar import haar_moment, parse_monomial
from .invariance import averaged_invariance_check, bound_scan, counterexample_report
from .models import parse_model
from .nclattice import mobius
from .partitions import (
    Partition,
    enumerate_all_partitions,
    enumerate_nc,
    enumerate_nc2,
    enumerate_nc2_decorated,
)
from .rational import to_text
from .weingarten import ORTHOGONAL, UNITARY, set_cache_dir, validate_cache_dir, weingarten_table

CACHE_ENV = "QROT_CACHE_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _emit_json(obj):
    print(json.dumps(obj, indent=2))


def _approx(x: Fraction) -> str:
    return f"{float(x):.12g}"


def _scalar_out(args, value: Fraction, extra: dict | None = None):
    if args.format == "json":
        obj = dict(extra or {})
        obj["value"] = to_text(value)
        if args.approx:
            obj["approx"] = _approx(value)
        _emit_json(obj)
    else:
        text = to_text(value, plain=True)
        print(f"{text} ~{_approx(value)}" if args.approx else text)


def _parse_word(text: str):
    labels, d = [], []
    for tok in text.split():
        m = re.fullmatch(r"(\d+)(\*?)", tok)
        if not m:
            raise InvalidInput(f"cannot parse letter {tok!r}")
        labels.append(int(m.group(1)))
        d.append("*" if m.group(2) else "1")
    if not labels:
        raise InvalidInput("empty word")
    return as_word(labels, "".join(d))


def _table_key(args):
    if args.flavor == ORTHOGONAL:
        if args.k is None or args.d is not None:
            raise InvalidInput("orthogonal flavor takes --k")
        return args.k
    if args.d is None or args.k is not None:
        raise InvalidInput("unitary flavor takes --d")
    return args.d


def cmd_partitions(args):
    cls = args.cls
    if cls == "nc2d":
        if args.d is None:
            raise InvalidInput("--class nc2d needs --d")
        parts = enumerate_nc2_decorated(args.d)
    else:
        if args.k is None:
            raise InvalidInput(f"--class {cls} needs --k")
        parts = {"all": enumerate_all_partitions, "nc": enumerate_nc, "nc2": enumerate_nc2}[cls](args.k)
    if args.format == "json":
        _emit_json([p.text() for p in parts])
    else:
        for p in parts:
            print(p.text())
    return 0


def cmd_mobius(args):
    lower, upper = Partition.from_text(args.lower), Partition.from_text(args.upper)
    _scalar_out(args, mobius(lower, upper), {"lower": lower.text(), "upper": upper.text()})
    return 0


def cmd_weingarten(args):
    key = _table_key(args)
    t = weingarten_table(args.flavor, key, args.n)
    index = [p.text() for p in t.index]
    rows = [[to_text(x) for x in t.wg.row(i)] for i in range(t.wg.rows)]
    if args.format == "json":
        obj = {"flavor": t.flavor}
        obj["k" if t.flavor == ORTHOGONAL else "decoration"] = key
        obj.update(n=t.n, index=index, wg=rows)
        _emit_json(obj)
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["pairing"] + index)
        for name, r in zip(index, rows):
            w.writerow([name] + r)
        sys.stdout.write(buf.getvalue())
    else:
        for name in index:
            print(name)
        for i in range(t.wg.rows):
            print(" ".join(to_text(x, plain=True) for x in t.wg.row(i)))
    return 0


def cmd_haar(args):
    m = parse_monomial(args.word, args.flavor, args.n)
    _scalar_out(args, haar_moment(m), {"flavor": m.flavor, "n": m.n, "word": m.text()})
    return 0


def cmd_moments(args):
    oracle = parse_model(args.model)
    word = _parse_word(args.word)
    _scalar_out(args, oracle.eval(word), {"model": oracle.describe(), "word": args.word.split()})
    return 0


def cmd_cumulants(args):
    oracle = parse_model(args.model)
    table = cumulants_from_moments(oracle, _parse_word(args.word))
    rows = table.to_json()
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["partition", "value"])
        for r in rows:
            w.writerow([r["partition"], r["value"]])
        sys.stdout.write(buf.getvalue())
    elif args.format == "plain":
        for p, v in table.values.items():
            print(p.text(), to_text(v, plain=True))
    else:
        _emit_json(rows)
    return 0


def cmd_verify(args):
    if args.what == "rotatable":
        oracle = parse_model(args.model)
        report = averaged_invariance_check(oracle, args.flavor, args.n, args.max_degree, dedupe=not args.all_words)
        _emit_json(report.to_json())
        return 0 if report.passed else 1
    if args.what == "counterexample":
        rep = counterexample_report(args.n, args.max_degree)
        _emit_json(rep.to_json())
        return 0 if rep.invariance.passed else 1
    scan = bound_scan(args.flavor, _table_key(args), args.n_min, args.n_max)
    _emit_json(scan.to_json())
    return 0


def cmd_cache(args):
    directory = args.cache_dir
    if directory is None:
        raise InvalidInput(f"cache validate needs --cache-dir or ${CACHE_ENV}")
    if not os.path.isdir(directory):
        raise InvalidInput(f"no such cache directory: {directory}")
    problems = validate_cache_dir(directory)
    _emit_json({
        "cache_dir": str(directory),
        "corrupt": [{"file": p.name, "error": msg} for p, msg in problems],
        "verdict": "FAIL" if problems else "PASS",
    })
    return 3 if problems else 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "plain"], default=None)
    common.add_argument("--cache-dir", default=None, help=f"persist Weingarten tables here (or ${CACHE_ENV})")
    common.add_argument("--approx", action="store_true", help="append a decimal rendering to exact values")
    common.add_argument("--cap-degree", type=int, default=None, help="override the moment degree cap")
    common.add_argument("--cap-weingarten", type=int, default=None, help="override the Weingarten half-degree cap")

    parser = _Parser(prog="qrot", description="Exact free probability and quantum group Weingarten calculus.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("partitions", parents=[common], help="enumerate partitions")
    p.add_argument("--class", dest="cls", choices=["all", "nc", "nc2", "nc2d"], required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--d")
    p.set_defaults(func=cmd_partitions, default_format="plain")

    p = sub.add_parser("mobius", parents=[common], help="Möbius function of NC(k)")
    p.add_argument("--lower", required=True)
    p.add_argument("--upper", required=True)
    p.set_defaults(func=cmd_mobius, default_format="plain")

    p = sub.add_parser("weingarten", parents=[common], help="print a Weingarten matrix")
    p.add_argument("--flavor", choices=[ORTHOGONAL, UNITARY], required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--d")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_weingarten, default_format="json")

    p = sub.add_parser("haar", parents=[common], help="Haar state of a generator monomial")
    p.add_argument("--flavor", choices=[ORTHOGONAL, UNITARY], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--word", required=True, help='factors "i,j" or "i,j*", e.g. "1,1 1,2* 2,1"')
    p.set_defaults(func=cmd_haar, default_format="plain")

    p = sub.add_parser("moments", parents=[common], help="evaluate a model oracle on a word")
    p.add_argument("--model", required=True)
    p.add_argument("--word", required=True, help='labels with optional star, e.g. "1 1* 2"')
    p.set_defaults(func=cmd_moments, default_format="plain")

    p = sub.add_parser("cumulants", parents=[common], help="free cumulant table of a word")
    p.add_argument("--model", required=True)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_cumulants, default_format="json")

    p = sub.add_parser("verify", help="verification harnesses")
    vsub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    v = vsub.add_parser("rotatable", parents=[common])
    v.add_argument("--model", required=True)
    v.add_argument("--flavor", choices=[ORTHOGONAL, UNITARY], required=True)
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--max-degree", type=int, required=True)
    v.add_argument("--all-words", action="store_true", help="check every column word, not one per kernel")
    v.set_defaults(func=cmd_verify, default_format="json")
    v = vsub.add_parser("counterexample", parents=[common])
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--max-degree", type=int, default=4)
    v.set_defaults(func=cmd_verify, default_format="json")
    v = vsub.add_parser("bound-scan", parents=[common])
    v.add_argument("--flavor", choices=[ORTHOGONAL, UNITARY], required=True)
    v.add_argument("--k", type=int)
    v.add_argument("--d")
    v.add_argument("--n-min", type=int, required=True)
    v.add_argument("--n-max", type=int, required=True)
    v.set_defaults(func=cmd_verify, default_format="json")

    p = sub.add_parser("cache", help="manage the on-disk table cache")
    csub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = csub.add_parser("validate", parents=[common])
    c.set_defaults(func=cmd_cache, default_format="json")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    if args.format is None:
        args.format = args.default_format
    if args.cache_dir is None:
        args.cache_dir = os.environ.get(CACHE_ENV) or None
    if args.cap_degree is not None:
        config.caps.degree = args.cap_degree
    if args.cap_weingarten is not None:
        config.caps.weingarten_k = args.cap_weingarten
    try:
        set_cache_dir(args.cache_dir if args.func is not cmd_cache else None)
        return args.func(args)
    except CacheCorrupted as exc:
        print(f"qrot: cache corrupted: {exc}", file=sys.stderr)
        return 3
    except (InvalidInput, QrotError) as exc:
        print(f"qrot: {exc}", file=sys.stderr)
        return 2
    finally:
        set_cache_dir(None)


if __name__ == "__main__":
    sys.exit(main())
