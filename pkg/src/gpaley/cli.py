"""``gpl``: build graphs, run verification suites and surveys.

Exit codes: 0 success, 1 soft failure (outside a guaranteed regime),
2 input error, 3 cap exceeded, 4 hard violation (a reproducer is dumped).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import counting, identify
from .circulant import analyze_circulant, circulant_catalog
from .ffield import field_of_order, is_prime, make_field
from .graphs import (
    MAX_VERTICES,
    build_gpaley,
    build_vls,
    classify_ls_nl,
    is_connected,
    srg_params,
    vls_summary,
)
from .permgrp import MAX_AUT_DEGREE, aut_in_agammal
from .cohconf import MAX_POINTS
from .report import CapExceededError, jsonable

EXIT_OK, EXIT_SOFT, EXIT_INPUT, EXIT_CAP, EXIT_HARD = 0, 1, 2, 3, 4

SURVEY_COLUMNS = [
    "q", "p", "d", "k", "status", "reason", "degree", "connected", "srg",
    "srg_class", "aut_order", "agammal_pass", "base_witness",
    "pairwise_threshold_met", "half_delta_threshold_met",
]


class InputError(ValueError):
    pass


def _field(args):
    if args.q is not None:
        return field_of_order(args.q)
    if args.p is None:
        raise InputError("give --q or --p (and --d)")
    if not is_prime(args.p):
        raise InputError(f"p={args.p} is not prime")
    return make_field(args.p, args.d)


def _gp_graph(args):
    if args.k is None:
        raise InputError("--k is required")
    return build_gpaley(_field(args), args.k)


def graph_summary(g) -> dict:
    params = srg_params(g)
    out = {
        "n": g.n,
        "degree": int(g.degrees()[0]) if g.is_regular() else None,
        "connected": is_connected(g),
        "srg": list(params) if params else None,
        "srg_class": None,
    }
    if params is not None:
        cls = classify_ls_nl(params)
        out["srg_class"] = cls.label if cls else None
    return out


# -- output -----------------------------------------------------------------------

class Writer:
    """Single-threaded sink for records in json, jsonl or csv form."""

    def __init__(self, stream, fmt: str, columns=None):
        self.stream, self.fmt = stream, fmt
        self.columns = columns
        self.buffer: list[dict] = []
        self._csv = None

    def write(self, rec: dict):
        rec = jsonable(rec)
        if self.fmt == "jsonl":
            self.stream.write(json.dumps(rec) + "\n")
        elif self.fmt == "json":
            self.buffer.append(rec)
        else:
            if self._csv is None:
                cols = self.columns or list(rec)
                self._csv = csv.DictWriter(self.stream, cols, extrasaction="ignore",
                                           lineterminator="\n")
                self._csv.writeheader()
            self._csv.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v
                                for k, v in rec.items()})

    def close(self):
        if self.fmt == "json":
            json.dump(self.buffer, self.stream, indent=2)
            self.stream.write("\n")


class Outcome:
    """Tracks soft and hard failures across a suite."""

    def __init__(self, out_path):
        self.soft = False
        self.hard = []
        self.out_path = out_path

    def record(self, passed: bool, hard: bool, rec: dict):
        if passed:
            return
        if hard:
            self.hard.append(rec)
        else:
            self.soft = True

    def code(self) -> int:
        if self.hard:
            base = os.path.dirname(os.path.abspath(self.out_path)) if self.out_path else os.getcwd()
            path = os.path.join(base, "gpl-reproducer.json")
            with open(path, "w") as fh:
                json.dump(jsonable(self.hard), fh, indent=2)
            print(f"hard violation: reproducer written to {path}", file=sys.stderr)
            return EXIT_HARD
        return EXIT_SOFT if self.soft else EXIT_OK


# -- commands ---------------------------------------------------------------------

def cmd_build(args, stream) -> int:
    if args.kind == "gpaley":
        g = _gp_graph(args)
        extra = {}
    else:
        if None in (args.p, args.e, args.t):
            raise InputError("vls needs --p, --e and --t")
        g = build_vls(args.p, args.e, args.t)
        extra = vls_summary(args.p, args.e, args.t, g)
    summary = graph_summary(g)
    if extra:
        summary["vls"] = extra
    stream.write(g.to_json() + "\n")
    # keep stdout parseable: summary goes to stderr unless the graph went to a file
    target = sys.stdout if args.out else sys.stderr
    print("summary: " + json.dumps(jsonable(summary)), file=target)
    return EXIT_OK


def _verify_bounds(args, w: Writer, oc: Outcome):
    if None in (args.k, args.t):
        raise InputError("bounds needs --k and --t")
    F = _field(args)
    n = args.n if args.n is not None else args.t
    if n == args.t:
        reps = counting.residue_sweep(F, args.k, args.t, args.trials, args.seed)
        for r in reps:
            rec = counting.sweep_record(r)
            w.write(rec)
            oc.record(r.passed, r.hard, r.to_dict())
    else:
        for mixed, ie in counting.mixed_sweep(F, args.k, args.t, n, args.trials, args.seed):
            rec = counting.sweep_record(mixed)
            rec["inclusion_exclusion"] = ie.passed
            w.write(rec)
            oc.record(mixed.passed, mixed.hard, mixed.to_dict())
            oc.record(ie.passed, ie.hard, ie.to_dict())


def _verify_distinguish(args, w: Writer, oc: Outcome):
    g = _gp_graph(args)
    reps = [identify.check_pairwise_distinguishing(g)]
    if args.statement in ("half", "both"):
        reps.append(identify.check_half_delta(g, args.mode, args.trials, args.seed))
    if args.statement == "half":
        reps = reps[1:]
    for r in reps:
        d = r.to_dict()
        w.write(d)
        oc.record(r.passed, r.threshold_met, d)


def _verify_normality(args, w: Writer, oc: Outcome):
    for n, conn in circulant_catalog(args.max_n):
        rec = analyze_circulant(n, conn, args.seed)
        w.write(rec)
        # both witnesses are guaranteed for every circulant, so any miss is hard
        oc.record(rec["ok"], True, rec)


def _verify_aut(args, w: Writer, oc: Outcome):
    g = _gp_graph(args)
    r = aut_in_agammal(g, args.max_aut_degree)
    d = r.to_dict()
    w.write(d)
    oc.record(r.passed, r.hard, d)


def _verify_base(args, w: Writer, oc: Outcome):
    g = _gp_graph(args)
    wit = identify.base_witness(g)
    rec = {"check": "base_witness", "params": {"q": g.n, "k": args.k},
           "pass": wit is not None, "witness": list(wit) if wit else None}
    w.write(rec)
    oc.record(wit is not None, False, rec)
    r = identify.delta_extension_discrete(g)
    w.write(r.to_dict())
    oc.record(r.passed, r.hard, r.to_dict())


def _verify_lower(args, w: Writer, oc: Outcome):
    r = identify.twl_smoke_test()
    w.write(r.to_dict())
    oc.record(r.passed, r.hard, r.to_dict())
    if args.p is not None:
        if None in (args.e, args.t):
            raise InputError("lower needs --p, --e and --t")
        r = identify.lower_bound_experiment(args.p, args.e, args.t)
        w.write(r.to_dict())
        oc.record(r.passed, r.hard, r.to_dict())


SUITES = {
    "bounds": _verify_bounds,
    "distinguish": _verify_distinguish,
    "normality": _verify_normality,
    "aut": _verify_aut,
    "base": _verify_base,
    "lower": _verify_lower,
}


def cmd_verify(args, stream) -> int:
    w = Writer(stream, args.format)
    oc = Outcome(args.out)
    try:
        SUITES[args.suite](args, w, oc)
    finally:
        w.close()
    return oc.code()


def survey_row(p: int, d: int, k: int, max_q: int) -> dict:
    q = p**d
    row = dict.fromkeys(SURVEY_COLUMNS)
    row.update(q=q, p=p, d=d, k=k, status="ok", reason="")
    if q > max_q:
        row.update(status="capped", reason=f"q={q} exceeds max_q={max_q}")
        return row
    try:
        g = build_gpaley(make_field(p, d), k)
    except ValueError as exc:
        row.update(status="skipped", reason=str(exc))
        return row
    s = graph_summary(g)
    row.update(degree=s["degree"], connected=s["connected"],
               srg=" ".join(map(str, s["srg"])) if s["srg"] else "",
               srg_class=s["srg_class"] or "")
    row["pairwise_threshold_met"] = q**0.5 > identify.pairwise_threshold(k)
    row["half_delta_threshold_met"] = q**0.5 > identify.half_delta_threshold(k)
    notes = []
    if q <= MAX_AUT_DEGREE:
        r = aut_in_agammal(g)
        row.update(aut_order=r.details["aut_order"], agammal_pass=r.passed)
    else:
        notes.append("aut capped")
    if q <= MAX_POINTS:
        row["base_witness"] = identify.base_witness(g) is not None
    else:
        notes.append("base capped")
    row["reason"] = "; ".join(notes)
    return row


def cmd_survey(args, stream) -> int:
    grid = [(p, d, k) for p in args.grid_p for d in args.grid_d for k in args.grid_k]
    if not grid:
        raise InputError("empty grid")
    bad = [p for p in args.grid_p if not is_prime(p)]
    if bad:
        raise InputError(f"not prime: {bad}")
    w = Writer(stream, args.format, SURVEY_COLUMNS)
    soft = False
    for p, d, k in grid:
        row = survey_row(p, d, k, args.max_q)
        soft |= row["agammal_pass"] is False or row["base_witness"] is False
        w.write(row)
    w.close()
    return EXIT_SOFT if soft else EXIT_OK


# -- parser -----------------------------------------------------------------------

def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker count; results do not depend on it")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-q", type=int, default=MAX_VERTICES)
    common.add_argument("--max-aut-degree", type=int, default=MAX_AUT_DEGREE)

    fieldargs = argparse.ArgumentParser(add_help=False)
    fieldargs.add_argument("--q", type=int)
    fieldargs.add_argument("--p", type=int)
    fieldargs.add_argument("--d", type=int, default=1)
    fieldargs.add_argument("--k", type=int)
    fieldargs.add_argument("--e", type=int)
    fieldargs.add_argument("--t", type=int)

    parser = argparse.ArgumentParser(prog="gpl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common, fieldargs], help="construct a graph")
    b.add_argument("kind", choices=["gpaley", "vls"])
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", parents=[common, fieldargs], help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--n", type=int, help="total number of conditions for mixed bound systems")
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--max-n", type=int, default=20)
    v.add_argument("--statement", choices=["pairwise", "half", "both"], default="pairwise")
    v.add_argument("--mode", choices=["sampled", "exhaustive"], default="sampled")
    v.add_argument("--format", choices=["json", "jsonl", "csv"], default="jsonl")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("survey", parents=[common], help="tabulate a (p, d, k) grid")
    s.add_argument("--grid-p", type=_int_list, required=True)
    s.add_argument("--grid-d", type=_int_list, default=[1])
    s.add_argument("--grid-k", type=_int_list, default=[2])
    s.add_argument("--format", choices=["json", "jsonl", "csv"], default="csv")
    s.set_defaults(func=cmd_survey)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "q", None) is not None and args.q > args.max_q:
        print(f"error: q={args.q} exceeds max_q={args.max_q}", file=sys.stderr)
        return EXIT_CAP
    stream = open(args.out, "w") if args.out else sys.stdout
    try:
        return args.func(args, stream)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        if args.out:
            stream.close()
        else:
            stream.flush()


if __name__ == "__main__":
    sys.exit(main())
