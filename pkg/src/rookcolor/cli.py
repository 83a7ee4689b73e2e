"""Command-line front end: ``rookcolor <command> ...``.

Exit codes: 0 success / verified / found, 1 valid negative result
(not in the family, exhausted, bracket, budget ran out), 2 usage or parse
error, 3 refutation alarm (a 19-colouring of K_6 x K_7 was reported).
"""
from __future__ import annotations

import argparse
import json
import re
import shlex
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__
from .bounds import feasible_frequency_profiles, upper_bound
from .core import (ColorMatrix, MatrixError, MatrixParseError, build_ledger,
                   frequency_profile, is_complete, is_proper, read_matrix, write_matrix)
from .lemmas import all_qsets, p_range, qset_generate
from .search import (ExtensionError, SearchConfig, Status, achromatic, extend_coloring,
                     find_coloring)

SCHEMA = "rookcolor.report/1"
EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_ALARM = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    instance: dict
    status: str
    seed: Optional[int] = None
    witness_path: Optional[str] = None
    stats: dict = field(default_factory=dict)
    result: dict = field(default_factory=dict)
    version: str = __version__
    schema: str = SCHEMA

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def parse_duration(text: str) -> float:
    """'90', '90s', '15m', '2h' or '1h30m' -> seconds."""
    if re.fullmatch(r"\d+(\.\d+)?", text):
        return float(text)
    parts = re.findall(r"(\d+(?:\.\d+)?)([hms])", text)
    if not parts or "".join(n + u for n, u in parts) != text:
        raise argparse.ArgumentTypeError(f"bad duration {text!r} (try 3600s, 10m, 1h)")
    scale = {"h": 3600, "m": 60, "s": 1}
    return sum(float(n) * scale[u] for n, u in parts)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _search_flags(sp, lemmas=False):
    sp.add_argument("--budget", type=parse_duration, default=0.0, help="time budget, e.g. 3600s")
    sp.add_argument("--nodes", type=int, default=0, help="node budget (0 = unlimited)")
    sp.add_argument("--threads", type=_positive, default=1, help="parallel subtree workers")
    sp.add_argument("--seed", type=int, default=0, help="value-order tie-break seed")
    sp.add_argument("--backend", choices=("auto", "cython", "python"), default="auto")
    if lemmas:
        sp.add_argument("--lemmas", action="store_true", help="enable lemma pruning")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rookcolor", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("verify", help="check a matrix file for membership in the family")
    sp.add_argument("path")

    sp = sub.add_parser("find", help="search for a complete proper k-colouring")
    sp.add_argument("-p", type=_positive, required=True)
    sp.add_argument("-q", type=_positive, required=True)
    sp.add_argument("-k", type=_positive, required=True)
    sp.add_argument("-o", dest="output", help="witness output file")
    _search_flags(sp, lemmas=True)

    sp = sub.add_parser("achromatic", help="compute the achromatic number of K_p x K_q")
    sp.add_argument("-p", type=_positive, required=True)
    sp.add_argument("-q", type=_positive, required=True)
    sp.add_argument("-o", dest="output", help="witness output file")
    _search_flags(sp)

    sp = sub.add_parser("refute", help="search for a complete 19-colouring of K_6 x K_7")
    sp.add_argument("--sample-cuts", type=int, default=0, help="keep this many lemma cuts")
    sp.add_argument("--audit-depth", type=int, default=0,
                    help="replay sampled cuts this many cells deep (0 = no audit)")
    sp.add_argument("-o", dest="output", help="alarm witness file",
                    default="refute_alarm.mat")
    _search_flags(sp, lemmas=True)

    sp = sub.add_parser("qsets", help="list admissible Q-sequences")
    sp.add_argument("r2_1", type=int, nargs="?")
    sp.add_argument("p_param", type=int, nargs="?")

    sp = sub.add_parser("profiles", help="list feasible frequency profiles")
    sp.add_argument("p", type=_positive)
    sp.add_argument("q", type=_positive)
    sp.add_argument("k", type=_positive)

    sp = sub.add_parser("extend", help="append a column to a complete colouring")
    sp.add_argument("path")
    sp.add_argument("-o", dest="output", help="output file")

    for name, sp in sub.choices.items():
        sp.add_argument("--json", action="store_true", help="machine-readable report")
    return parser


def _config(args) -> SearchConfig:
    return SearchConfig(time_budget=args.budget, node_budget=args.nodes,
                        use_lemma_pruning=getattr(args, "lemmas", False),
                        parallel_width=args.threads, seed=args.seed, backend=args.backend)


def _stats(out) -> dict:
    return {"nodes": out.nodes_expanded, "wall_time": round(out.wall_time, 3),
            "prunes": dict(out.prunes), "backend": out.backend}


def _emit(args, report: RunReport, lines: list[str]):
    if args.json:
        print(report.to_json())
    else:
        for line in lines:
            print(line)


def _comments(report: RunReport) -> list[str]:
    return [f"rookcolor {report.version}: {report.command}",
            f"seed={report.seed} status={report.status}"]


# --- commands --------------------------------------------------------------

def cmd_verify(args, echo) -> int:
    m = read_matrix(args.path)
    inst = {"p": m.rows, "q": m.cols, "k": m.palette_size}
    result: dict = {"total": m.is_total}
    lines = []
    if not m.is_total:
        result["proper"] = is_proper(m)
        report = RunReport(echo, inst, "NOT_TOTAL", result=result)
        _emit(args, report, ["matrix not total"])
        return EXIT_NEGATIVE
    proper = is_proper(m)
    result["proper"] = proper
    lines.append(f"proper: {'yes' if proper else 'no'}")
    complete = False
    if proper:
        ledger = build_ledger(m)
        k = m.palette_size
        total = k * (k - 1) // 2
        good = ledger.good_pairs()
        row_only = sum(1 for pr in good if ledger.row_counts[pr] and not ledger.col_counts[pr])
        col_only = sum(1 for pr in good if ledger.col_counts[pr] and not ledger.row_counts[pr])
        complete = is_complete(m)
        missing = ledger.uncovered_pairs()
        result.update(complete=complete, good_pairs=len(good), pairs=total,
                      row_only=row_only, col_only=col_only,
                      uncovered=[list(pr) for pr in missing[:20]])
        lines.append(f"complete: {'yes' if complete else 'no'}")
        lines.append(f"good pairs: {len(good)}/{total} "
                     f"(row only {row_only}, column only {col_only}, "
                     f"both {len(good) - row_only - col_only})")
        if missing:
            shown = ", ".join(f"{a}-{b}" for a, b in missing[:10])
            lines.append(f"uncovered: {shown}{' ...' if len(missing) > 10 else ''}")
    profile = frequency_profile(m)
    result["profile"] = {str(l): c for l, c in profile.counts}
    lines.append(f"profile: {profile}")
    ok = proper and complete
    lines.append(f"in family M({m.rows},{m.cols},{m.palette_size}): {'yes' if ok else 'no'}")
    _emit(args, RunReport(echo, inst, "VALID" if ok else "INVALID", result=result), lines)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_find(args, echo) -> int:
    out = find_coloring(args.p, args.q, args.k, _config(args))
    report = RunReport(echo, {"p": args.p, "q": args.q, "k": args.k}, out.status.value,
                       seed=args.seed, stats=_stats(out))
    lines = [f"{out.status.value} ({out.nodes_expanded} nodes, {out.wall_time:.2f}s)"]
    if out.witness is not None:
        if args.output:
            write_matrix(args.output, out.witness, _comments(report))
            report.witness_path = args.output
        lines.append(str(out.witness))
    _emit(args, report, lines)
    return EXIT_OK if out.status is Status.FOUND else EXIT_NEGATIVE


def cmd_achromatic(args, echo) -> int:
    p, q = args.p, args.q
    start = time.monotonic()
    res = achromatic(p, q, _config(args))
    probes = [{"k": k, "status": s.value, "nodes": n} for k, s, n in res.probes]
    report = RunReport(echo, {"p": p, "q": q}, "EXACT" if res.exact else "BRACKET",
                       seed=args.seed,
                       stats={"nodes": sum(n for _, _, n in res.probes),
                              "wall_time": round(time.monotonic() - start, 3)},
                       result={"lower": res.lower, "upper": res.upper, "probes": probes})
    if args.output and res.witness is not None:
        write_matrix(args.output, res.witness, _comments(report))
        report.witness_path = args.output
    lines = [str(res)]
    if report.witness_path:
        lines.append(f"witness: {report.witness_path}")
    _emit(args, report, lines)
    return EXIT_OK if res.exact else EXIT_NEGATIVE


def cmd_refute(args, echo) -> int:
    from .refutation import RefutationAlarm, audit_cuts, refute
    config = _config(args)
    try:
        out = refute(config, sample_cuts=args.sample_cuts, alarm_path=args.output)
    except RefutationAlarm as alarm:
        print(f"ALARM: a witness was reported and dumped to {alarm.path}", file=sys.stderr)
        return EXIT_ALARM
    report = RunReport(echo, {"p": 6, "q": 7, "k": 19}, out.status.value, seed=args.seed,
                       stats=_stats(out))
    lines = [f"{out.status.value} ({out.nodes_expanded} nodes, {out.wall_time:.2f}s)"]
    lines += [f"  {rule}: {n}" for rule, n in sorted(out.prunes.items()) if n]
    cuts = getattr(out, "cuts", [])
    if cuts:
        report.result["sampled_cuts"] = len(cuts)
        lines.append(f"sampled cuts: {len(cuts)} of {getattr(out, 'cut_events', len(cuts))}")
    if cuts and args.audit_depth:
        audit = audit_cuts(cuts, args.audit_depth)
        report.result["audit"] = {"passed": audit.passed, "cuts": audit.cuts,
                                  "replayed": audit.replayed, "nodes": audit.nodes,
                                  "failures": audit.failures[:20]}
        lines.append(f"audit depth {args.audit_depth}: "
                     f"{'passed' if audit.passed else 'FAILED'} "
                     f"({audit.replayed}/{audit.cuts} cuts, {audit.nodes} nodes)")
        if not audit.passed:
            _emit(args, report, lines)
            return EXIT_ALARM
    _emit(args, report, lines)
    return EXIT_NEGATIVE


def cmd_qsets(args, echo) -> int:
    if (args.r2_1 is None) != (args.p_param is None):
        raise UsageError("qsets takes both r2_1 and p_param, or neither")
    if args.r2_1 is None:
        table = all_qsets()
    else:
        try:
            p_range(args.r2_1)
            table = {(args.r2_1, args.p_param): qset_generate(args.r2_1, args.p_param)}
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    lines = []
    result = {}
    for (r, pp), seqs in table.items():
        if len(table) > 1:
            lines.append(f"Q({r},{pp}) size={len(seqs)}")
        lines += [",".join(map(str, s.values)) for s in seqs]
        result[f"{r},{pp}"] = [list(s.values) for s in seqs]
    inst = {} if args.r2_1 is None else {"r2_1": args.r2_1, "p_param": args.p_param}
    _emit(args, RunReport(echo, inst, "OK", result=result), lines)
    return EXIT_OK


def cmd_profiles(args, echo) -> int:
    p, q, k = args.p, args.q, args.k
    profiles = feasible_frequency_profiles(p, q, k)
    lines = [f"{len(profiles)} profiles"] + [str(pr) for pr in profiles]
    result = {"profiles": [{str(l): c for l, c in pr.counts} for pr in profiles],
              "upper_bound": upper_bound(min(p, q), max(p, q))}
    _emit(args, RunReport(echo, {"p": p, "q": q, "k": k},
                          "FEASIBLE" if profiles else "EMPTY", result=result), lines)
    return EXIT_OK if profiles else EXIT_NEGATIVE


def _extended_name(path: str, m: ColorMatrix) -> str:
    src = Path(path)
    old, new = f"{m.rows}{m.cols}", f"{m.rows}{m.cols + 1}"
    stem = src.stem
    stem = stem[: -len(old)] + new if stem.endswith(old) else stem + f"_{m.rows}x{m.cols + 1}"
    return str(src.with_name(stem + (src.suffix or ".mat")))


def cmd_extend(args, echo) -> int:
    m = read_matrix(args.path)
    target = args.output or _extended_name(args.path, m)
    inst = {"p": m.rows, "q": m.cols, "k": m.palette_size}
    try:
        out = extend_coloring(m)
    except ExtensionError as exc:
        _emit(args, RunReport(echo, inst, "FAILED", result={"error": str(exc)}),
              [f"cannot extend: {exc}"])
        return EXIT_NEGATIVE
    report = RunReport(echo, inst, "EXTENDED", witness_path=target,
                       result={"rows": out.rows, "cols": out.cols})
    write_matrix(target, out, _comments(report))
    _emit(args, report, [f"wrote {out.rows}x{out.cols} matrix to {target}"])
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "find": cmd_find, "achromatic": cmd_achromatic,
            "refute": cmd_refute, "qsets": cmd_qsets, "profiles": cmd_profiles,
            "extend": cmd_extend}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    echo = "rookcolor " + shlex.join(argv)
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, echo)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except MatrixParseError as exc:
        print(f"{args.path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MatrixError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
