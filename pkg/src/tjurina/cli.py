"""Command line interface: ``tjurina compute`` and ``tjurina selftest``."""

import argparse
import json
import sys
import time

from . import __version__
from .errors import InputError, ParseError, TjurinaError
from .inputs import build_curve, load_document, parse_order, read_input
from .invariants import compute

__all__ = ["main", "format_report", "format_tables", "run_compute"]


class StageError(Exception):
    """Wraps a package error with the pipeline stage it came from."""

    def __init__(self, stage, error):
        self.stage = stage
        self.error = error
        super().__init__(f"{stage}: {error}")


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ParseError as exc:
        raise StageError("parse", exc) from exc
    except TjurinaError as exc:
        raise StageError(name, exc) from exc


def run_compute(doc, trunc=None, box_slack=None, order=None, verify=None):
    """Validate, build and analyse one CurveInput; CLI arguments override the document."""
    doc, opts = _stage("input", load_document, doc)
    if trunc is not None:
        opts.trunc = trunc
    if box_slack is not None:
        opts.box_slack = box_slack
    if verify is not None:
        opts.verify = verify
    if order is not None:
        opts.order = order
    curve = _stage("construct", build_curve, doc, opts.trunc)
    if opts.order is not None:
        if len(opts.order) != curve.r:
            raise StageError("input", InputError(
                f"branch order has {len(opts.order)} entries but the curve has {curve.r} branches"))
        curve = curve.reorder(opts.order)
    report = _stage("compute", compute, curve, opts.verify, opts.box_slack, opts.order)
    return report, opts


def _fmt_set(values, conductor):
    below = [str(v) for v in values if v < conductor]
    return "{" + ",".join(below + [str(conductor), "..."]) + "}"


def _pair_label(key):
    return "(" + ",".join(str(int(i) + 1) for i in key.split(",")) + ")"


def format_report(rep):
    lines = []
    lines.append(f"branches: {rep.r}   ambient dimension: {rep.n}")
    if rep.coordinate_change:
        lines.append(f"coordinates: x replaced by x + {rep.coordinate_change}*y for transversality")
    lines.append("")
    lines.append("branch  label  mult  c(Gamma)  c(Lambda)  delta  tau  Gamma / Lambda")
    for k, b in enumerate(rep.branches, 1):
        lines.append(
            f"{k:>6}  {b.label:<5}  {b.multiplicity:>4}  {b.gamma_conductor:>8}  "
            f"{b.lam_conductor:>9}  {b.delta:>5}  {b.tau:>3}  "
            f"{_fmt_set(b.gamma, b.gamma_conductor)} / {_fmt_set(b.lam, b.lam_conductor)}"
        )
    lines.append("")
    if rep.intersections:
        pairs = "  ".join(f"I{_pair_label(k)}={v}" for k, v in rep.intersections.items())
        lines.append(f"intersections: {pairs}")
        lines.append("intersection sums: " + ", ".join(str(v) for v in rep.intersection_sums))
    lines.append("conductor of Gamma: " + str(tuple(rep.gamma_conductor)))
    lines.append("conductor of Lambda: " + str(tuple(rep.lambda_conductor)))
    for key, v in rep.maximals.items():
        lines.append(
            f"Lambda{_pair_label(key)}: #M={len(v['M'])} #RM={len(v['RM'])} #AM={len(v['AM'])}"
        )
    lines.append("Theta: " + ", ".join(str(t) for t in rep.theta))
    lines.append(f"delta: {rep.delta}")
    formulas = rep.formula_values()
    extra = ", ".join(f"{k} {v}" for k, v in formulas.items() if k != "main")
    suffix = f"   ({extra})" if extra else ""
    cond = "   [conditional on a complete intersection]" if rep.ci_conditional else ""
    lines.append(f"tau: {rep.tau}{suffix}{cond}")
    if rep.checks:
        lines.append("")
        lines.append("checks:")
        for ch in rep.checks:
            mark = "ok  " if ch.passed else "FAIL"
            lines.append(f"  {mark} {ch.name}: {ch.details}")
    for name, reason in rep.skipped:
        lines.append(f"  skip {name}: {reason}")
    return "\n".join(lines)


def format_tables(rep):
    """Maximal points as tab-separated tables, one block per subset of branches."""
    out = []
    for key, v in rep.maximals.items():
        for name in ("M", "RM", "AM"):
            out.append(f"# Lambda{_pair_label(key)} {name}")
            for p in v[name]:
                out.append("\t".join(str(x) for x in p))
    return "\n".join(out)


def _cmd_compute(args):
    try:
        doc, _ = read_input(args.input)
        order = parse_order(args.order) if args.order else None
    except TjurinaError as exc:
        print(f"error [input]: {exc}", file=sys.stderr)
        return exc.exit_code
    try:
        rep, opts = run_compute(
            doc,
            trunc=args.trunc,
            box_slack=args.box_slack,
            order=order,
            verify=True if args.verify else None,
        )
    except StageError as exc:
        print(f"error [{exc.stage}]: {exc.error}", file=sys.stderr)
        return exc.error.exit_code
    if args.json:
        print(json.dumps(rep.to_dict(), indent=2))
    else:
        print(format_report(rep))
    if args.tables:
        print(format_tables(rep))
    failed = [ch.name for ch in rep.checks if not ch.passed]
    if failed:
        print(f"error [verify]: failed check(s): {', '.join(failed)}", file=sys.stderr)
        return 4
    return 0


def selftest(stream=None):
    """Run the built-in corpus; returns the list of ``(name, ok, message)``."""
    from .corpus import CORPUS

    stream = stream or sys.stdout
    rows = []
    print(f"{'curve':<16} {'r':>2} {'expected':>8} {'tau':>5} {'oracle':>6} {'checks':>7} {'time':>6}  result",
          file=stream)
    for e in CORPUS:
        t0 = time.perf_counter()
        try:
            rep, _ = run_compute(e.data, verify=True)
        except StageError as exc:
            rows.append((e.name, False, f"{exc.stage}: {exc.error}"))
            print(f"{e.name:<16} error [{exc.stage}]: {exc.error}", file=stream)
            continue
        dt = time.perf_counter() - t0
        bad = [ch.name for ch in rep.checks if not ch.passed]
        ok = not bad and (e.tau is None or rep.tau == e.tau)
        msg = "pass" if ok else "FAIL " + ",".join(bad or ["expected tau"])
        oracle = "-" if rep.tau_direct is None else str(rep.tau_direct)
        expected = "-" if e.tau is None else str(e.tau)
        print(
            f"{e.name:<16} {rep.r:>2} {expected:>8} {rep.tau:>5} {oracle:>6} "
            f"{len(rep.checks) - len(bad):>3}/{len(rep.checks):<3} {dt:>6.2f}  {msg}",
            file=stream,
        )
        rows.append((e.name, ok, msg))
    passed = sum(ok for _, ok, _ in rows)
    print(f"{passed}/{len(rows)} passed", file=stream)
    return rows


def _cmd_selftest(args):
    rows = selftest()
    return 0 if all(ok for _, ok, _ in rows) else 4


def build_parser():
    p = argparse.ArgumentParser(
        prog="tjurina",
        description="Tjurina number and value-set invariants of reduced curve germs.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compute", help="analyse the curve described by a JSON input file")
    c.add_argument("input", help="CurveInput JSON file")
    c.add_argument("--json", action="store_true", help="emit the report as JSON")
    c.add_argument("--verify", action="store_true", help="run every cross-check (exit 4 on failure)")
    c.add_argument("--trunc", type=int, metavar="N", help="initial truncation of branch series")
    c.add_argument("--box-slack", type=int, metavar="K", help="enlarge value-set windows by K")
    c.add_argument("--order", metavar="i,j,k", help="branch order, 1-based")
    c.add_argument("--tables", action="store_true",
                   help="also print maximal points as tab-separated tables")
    c.set_defaults(func=_cmd_compute)
    s = sub.add_parser("selftest", help="run the built-in corpus")
    s.set_defaults(func=_cmd_selftest)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage, which matches the input error code
        return exc.code if isinstance(exc.code, int) else 2
    for name in ("trunc", "box_slack"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            print(f"error [input]: --{name.replace('_', '-')} must be nonnegative", file=sys.stderr)
            return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
