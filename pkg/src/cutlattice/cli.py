"""Command-line front end.

Subcommands: ``gen`` (random trace files), ``partition`` (build and describe
the uniflow partition), ``traverse`` (enumerate cuts with any of the three
algorithms), ``verify`` (cross-check the enumerators against each other), and
``bench`` (batch runs with a CSV report).

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
error (stored-cut cap exceeded).

Cuts are always printed highest chain leftmost, and uniflow results are
remapped to the original process chains before display, so output lines are
comparable across algorithms.
"""

from __future__ import annotations

import argparse
import csv
import re
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path

from .baselines import brute_force_downsets, traditional_bfs
from .model import Computation, ResourceLimitError, UsageError, format_cut, make_computation
from .traceio import GenSpec, TraceError, generate_random, parse_document, serialize_trace
from .traversal import traverse_rank_range
from .uniflow import (
    UniflowPartition,
    build_uniflow_partition,
    regenerate_vector_clocks,
    verify_uniflow,
)

_TERM_RE = re.compile(r"^(p(\d+)|rank)\s*(>=|<=|=|≥|≤)\s*(\d+)$")
_OP_NORM = {"≥": ">=", "≤": "<="}


@dataclass(frozen=True)
class PredicateSpec:
    """Conjunction of per-process count bounds plus optional rank bounds.

    Grammar: terms joined by ``&``; a term is ``p<i><op><count>`` or
    ``rank<op><count>`` with ``op`` one of ``=``, ``<=``, ``>=``.
    """

    terms: tuple[tuple[int, str, int], ...]
    rank_min: int | None = None
    rank_max: int | None = None

    def matches(self, cut, r: int) -> bool:
        if self.rank_min is not None and r < self.rank_min:
            return False
        if self.rank_max is not None and r > self.rank_max:
            return False
        for process, op, count in self.terms:
            have = cut[process - 1]
            if op == "=" and have != count:
                return False
            if op == ">=" and have < count:
                return False
            if op == "<=" and have > count:
                return False
        return True

    def validate(self, comp: Computation) -> None:
        for process, _, count in self.terms:
            if not 1 <= process <= comp.n:
                raise UsageError(f"predicate process p{process} outside 1..{comp.n}")
            if count > comp.chain_lengths[process - 1]:
                raise UsageError(
                    f"predicate count {count} exceeds the {comp.chain_lengths[process - 1]} "
                    f"events of process {process}"
                )


def parse_predicate(text: str) -> PredicateSpec:
    terms: list[tuple[int, str, int]] = []
    rank_min: int | None = None
    rank_max: int | None = None
    for chunk in text.split("&"):
        chunk = chunk.strip()
        m = _TERM_RE.match(chunk)
        if not m:
            raise UsageError(f"bad predicate term {chunk!r}")
        op = _OP_NORM.get(m.group(3), m.group(3))
        count = int(m.group(4))
        if m.group(1) == "rank":
            if op in ("=", ">="):
                rank_min = count if rank_min is None else max(rank_min, count)
            if op in ("=", "<="):
                rank_max = count if rank_max is None else min(rank_max, count)
        else:
            terms.append((int(m.group(2)), op, count))
    return PredicateSpec(tuple(terms), rank_min, rank_max)


def parse_rank_spec(text: str, total: int) -> tuple[int, int]:
    """``all``, ``r``, or ``r1..r2`` -> inclusive rank window."""
    text = text.strip()
    if text == "all":
        return 0, total
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            r1, r2 = int(lo), int(hi)
        except ValueError:
            raise UsageError(f"bad rank spec {text!r}") from None
    else:
        try:
            r1 = r2 = int(text)
        except ValueError:
            raise UsageError(f"bad rank spec {text!r}") from None
    if not 0 <= r1 <= r2 <= total:
        raise UsageError(f"rank window {r1}..{r2} invalid for {total} events")
    return r1, r2


@dataclass
class RunReport:
    """One enumerator run, as printed by ``traverse`` and tabled by ``bench``."""

    algorithm: str
    trace: str
    n: int
    events: int
    n_u: int | None
    ranks: str
    cuts: int | None
    first_match_rank: int | None
    first_match_cut: str | None
    partition_s: float
    traverse_s: float
    peak_stored_cuts: int | None
    aux_int_peak: int | None
    status: str
    error: str | None


REPORT_FIELDS = [f.name for f in fields(RunReport)]

_INT_FIELDS = {"n", "events", "n_u", "cuts", "first_match_rank", "peak_stored_cuts", "aux_int_peak"}
_FLOAT_FIELDS = {"partition_s", "traverse_s"}


def report_to_row(report: RunReport) -> list[str]:
    row = []
    for name in REPORT_FIELDS:
        value = getattr(report, name)
        if value is None:
            row.append("")
        elif name in _FLOAT_FIELDS:
            row.append(repr(value))
        else:
            row.append(str(value))
    return row


def report_from_row(row: list[str]) -> RunReport:
    kwargs = {}
    for name, cell in zip(REPORT_FIELDS, row):
        if cell == "" and name not in _FLOAT_FIELDS:
            kwargs[name] = None
        elif name in _INT_FIELDS:
            kwargs[name] = int(cell)
        elif name in _FLOAT_FIELDS:
            kwargs[name] = float(cell)
        else:
            kwargs[name] = cell
    return RunReport(**kwargs)


def write_reports_csv(reports, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(REPORT_FIELDS)
    for report in reports:
        writer.writerow(report_to_row(report))


def read_reports_csv(stream) -> list[RunReport]:
    reader = csv.reader(stream)
    header = next(reader)
    if header != REPORT_FIELDS:
        raise UsageError(f"unexpected CSV header {header!r}")
    return [report_from_row(row) for row in reader]


def _load_trace(path: str) -> tuple[str, Computation]:
    data = Path(path).read_bytes()
    doc = parse_document(data)
    comp = make_computation(doc.n, doc.records)
    name = doc.name or Path(path).stem
    return name, comp


def _prepare_partition(comp: Computation) -> tuple[UniflowPartition, float]:
    t0 = time.perf_counter()
    part = regenerate_vector_clocks(build_uniflow_partition(comp))
    return part, time.perf_counter() - t0


def _run_enumerator(
    algo: str,
    name: str,
    comp: Computation,
    window: tuple[int, int],
    ranks_text: str,
    predicate: PredicateSpec | None,
    mode: str,
    max_stored: int | None,
    out,
) -> tuple[RunReport, bool]:
    """Run one algorithm over one trace; returns (report, matched)."""
    r1, r2 = window
    listing = mode == "list"
    first_match = mode == "first-match"
    match: list[tuple[int, tuple[int, ...]]] = []
    enumerated = 0
    matched_count = 0

    def handle(original_cut, r) -> bool:
        nonlocal enumerated, matched_count
        enumerated += 1
        if predicate is not None and not predicate.matches(original_cut, r):
            return True
        matched_count += 1
        if listing:
            out.write(f"rank={r} cut={format_cut(original_cut)}\n")
        if first_match:
            match.append((r, original_cut))
            return False
        return True

    partition_s = 0.0
    n_u = None
    peak = None
    aux = None
    status = "ok"
    error = None
    t0 = time.perf_counter()
    if algo == "uniflow":
        part, partition_s = _prepare_partition(comp)
        n_u = part.n_u
        t0 = time.perf_counter()
        if predicate is None and not listing and not first_match:
            stats = traverse_rank_range(part, r1, r2)
            enumerated = stats.cuts_visited
        else:
            stats = traverse_rank_range(
                part, r1, r2, lambda cut, r, remap_fn: handle(remap_fn(), r)
            )
        peak = stats.peak_live_cuts
        aux = stats.aux_int_peak
    elif algo == "traditional":
        stats = traditional_bfs(
            comp,
            lambda cut, r, remap_fn: handle(cut, r),
            rank_filter=(r1, r2),
            max_stored_cuts=max_stored,
        )
        peak = stats.peak_stored_cuts
    elif algo == "brute":
        by_rank = brute_force_downsets(comp)
        stop = False
        for r in range(r1, r2 + 1):
            for cut in sorted(by_rank.get(r, ()), key=lambda c: c[::-1]):
                if not handle(cut, r):
                    stop = True
                    break
            if stop:
                break
        peak = sum(len(s) for s in by_rank.values())
    else:
        raise UsageError(f"unknown algorithm {algo!r}")
    traverse_s = time.perf_counter() - t0

    first_rank, first_cut = (match[0][0], format_cut(match[0][1])) if match else (None, None)
    report = RunReport(
        algorithm=algo,
        trace=name,
        n=comp.n,
        events=comp.event_count,
        n_u=n_u,
        ranks=ranks_text,
        cuts=enumerated if predicate is None else matched_count,
        first_match_rank=first_rank,
        first_match_cut=first_cut,
        partition_s=partition_s,
        traverse_s=traverse_s,
        peak_stored_cuts=peak,
        aux_int_peak=aux,
        status=status,
        error=error,
    )
    return report, bool(match)


def cmd_gen(args) -> int:
    spec = GenSpec(
        n=args.n,
        total_events=args.events,
        message_probability=args.p,
        seed=args.seed,
    )
    comp = generate_random(spec)
    name = args.name or Path(args.output).stem
    text = serialize_trace(comp, name=name, seed=spec.seed)
    Path(args.output).write_bytes(text.encode("utf-8"))
    print(f"wrote {args.output}: n={spec.n} events={spec.total_events} "
          f"p={spec.message_probability} seed={spec.seed}")
    return 0


def cmd_partition(args) -> int:
    name, comp = _load_trace(args.trace)
    part, partition_s = _prepare_partition(comp)
    print(f"trace={name} n={comp.n} events={comp.event_count}")
    print(f"n_u={part.n_u}")
    for i, chain in enumerate(part.chains, start=1):
        print(f"chain {i}: {len(chain)} events")
    print(f"uniflow={'ok' if verify_uniflow(part) else 'VIOLATED'}")
    print(f"partition_s={partition_s:.6f}")
    if args.dump_clocks:
        for i, chain in enumerate(part.chains, start=1):
            for k, eid in enumerate(chain, start=1):
                print(f"chain {i} pos {k} event {eid} uvc={format_cut(part.uvc[eid])}")
    return 0


def cmd_traverse(args) -> int:
    name, comp = _load_trace(args.trace)
    window = parse_rank_spec(args.ranks, comp.event_count)
    predicate = parse_predicate(args.predicate) if args.predicate else None
    if predicate is not None:
        predicate.validate(comp)
    print(f"trace={name} algo={args.algo} ranks={args.ranks} mode={args.mode}")
    try:
        report, matched = _run_enumerator(
            args.algo, name, comp, window, args.ranks, predicate,
            args.mode, args.max_stored, sys.stdout,
        )
    except ResourceLimitError as exc:
        stats = exc.stats
        print(f"resource-error: {exc}", file=sys.stderr)
        if stats is not None:
            print(f"partial: cuts={stats.cuts_visited} peak_stored_cuts={stats.peak_stored_cuts}")
        return 3
    if args.mode == "first-match":
        if matched:
            print(f"match rank={report.first_match_rank} cut={report.first_match_cut}")
        else:
            print("no-match")
    else:
        print(f"cuts={report.cuts}")
    nu = f" n_u={report.n_u}" if report.n_u is not None else ""
    print(f"n={report.n} events={report.events}{nu}")
    print(
        f"partition_s={report.partition_s:.6f} traverse_s={report.traverse_s:.6f} "
        f"peak_stored_cuts={report.peak_stored_cuts}"
    )
    return 0


def _collect_rank_sets(algo, comp, part, max_rank) -> dict[int, set]:
    sets: dict[int, set] = {}

    def keep(cut, r, _remap=None):
        sets.setdefault(r, set()).add(tuple(cut))
        return True

    if algo == "uniflow":
        traverse_rank_range(part, 0, max_rank, lambda cut, r, remap_fn: keep(remap_fn(), r))
    elif algo == "traditional":
        traditional_bfs(comp, lambda cut, r, remap_fn: keep(cut, r), rank_filter=(0, max_rank))
    else:
        for r, cuts in brute_force_downsets(comp).items():
            if r <= max_rank:
                sets[r] = set(cuts)
    return sets


def cmd_verify(args) -> int:
    name, comp = _load_trace(args.trace)
    max_rank = comp.event_count if args.max_rank is None else args.max_rank
    if not 0 <= max_rank <= comp.event_count:
        raise UsageError(f"max rank {max_rank} outside 0..{comp.event_count}")
    part, _ = _prepare_partition(comp)
    if not verify_uniflow(part):
        print(f"trace={name}: partition failed the uniflow check")
        return 1
    results = {
        "uniflow": _collect_rank_sets("uniflow", comp, part, max_rank),
        "traditional": _collect_rank_sets("traditional", comp, part, max_rank),
    }
    if comp.event_count <= args.brute_guard:
        results["brute"] = _collect_rank_sets("brute", comp, part, max_rank)
    if args.corrupt_rank is not None:
        # test hook: damage the uniflow answer at one rank to prove the
        # comparison actually bites
        bucket = results["uniflow"].setdefault(args.corrupt_rank, set())
        bucket.add((-1,) * comp.n)
    names = sorted(results)
    print(f"trace={name} enumerators={','.join(names)} max_rank={max_rank}")
    for r in range(0, max_rank + 1):
        per = {a: results[a].get(r, set()) for a in names}
        counts = {a: len(s) for a, s in per.items()}
        baseline = per[names[0]]
        if any(per[a] != baseline for a in names[1:]):
            print(f"MISMATCH at rank {r}: " + " ".join(f"{a}={counts[a]}" for a in names))
            for a in names[1:]:
                extra = per[a] - baseline
                missing = baseline - per[a]
                if extra:
                    print(f"  {a} extra: {sorted(format_cut(c) for c in extra)}")
                if missing:
                    print(f"  {a} missing: {sorted(format_cut(c) for c in missing)}")
            return 1
        print(f"rank {r}: cuts={counts[names[0]]} ok")
    print("verified: per-rank cut sets identical")
    return 0


def cmd_bench(args) -> int:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    reports: list[RunReport] = []
    for path in args.traces:
        name, comp = _load_trace(path)
        for ranks_text in args.ranks:
            window = parse_rank_spec(ranks_text, comp.event_count)
            for algo in algos:
                for rep in range(args.reps):
                    try:
                        report, _ = _run_enumerator(
                            algo, name, comp, window, ranks_text,
                            None, "count", args.max_stored, sys.stdout,
                        )
                    except ResourceLimitError as exc:
                        stats = exc.stats
                        report = RunReport(
                            algorithm=algo, trace=name, n=comp.n,
                            events=comp.event_count, n_u=None, ranks=ranks_text,
                            cuts=stats.cuts_visited if stats else None,
                            first_match_rank=None, first_match_cut=None,
                            partition_s=0.0, traverse_s=stats.elapsed_s if stats else 0.0,
                            peak_stored_cuts=stats.peak_stored_cuts if stats else None,
                            aux_int_peak=None, status="resource-error", error=str(exc),
                        )
                    reports.append(report)
    _print_report_table(reports)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            write_reports_csv(reports, fh)
        print(f"csv written to {args.csv}")
    return 0


def _print_report_table(reports: list[RunReport]) -> None:
    cols = ["trace", "algorithm", "ranks", "events", "n_u", "cuts",
            "partition_s", "traverse_s", "peak_stored_cuts", "status"]
    table = [cols]
    for r in reports:
        table.append([
            r.trace, r.algorithm, r.ranks, str(r.events),
            "" if r.n_u is None else str(r.n_u),
            "" if r.cuts is None else str(r.cuts),
            f"{r.partition_s:.4f}", f"{r.traverse_s:.4f}",
            "" if r.peak_stored_cuts is None else str(r.peak_stored_cuts),
            r.status,
        ])
    widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
    for row in table:
        print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cutlattice",
        description="Enumerate consistent global states of message-passing traces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random trace file")
    p.add_argument("-n", type=int, required=True, help="process count")
    p.add_argument("-e", "--events", type=int, required=True, help="total events")
    p.add_argument("-p", type=float, default=0.3, help="message probability")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--name", default=None, help="trace name (default: output stem)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("partition", help="build the uniflow partition of a trace")
    p.add_argument("trace")
    p.add_argument("--dump-clocks", action="store_true")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("traverse", help="enumerate consistent cuts")
    p.add_argument("trace")
    p.add_argument("--algo", choices=["uniflow", "traditional", "brute"], default="uniflow")
    p.add_argument("--ranks", default="all", help="all, R, or R1..R2")
    p.add_argument("--predicate", default=None, help="e.g. 'p2>=2 & p1>=2'")
    p.add_argument("--mode", choices=["count", "list", "first-match"], default="count")
    p.add_argument("--max-stored", type=int, default=None,
                   help="stored-cut cap for the traditional algorithm")
    p.set_defaults(func=cmd_traverse)

    p = sub.add_parser("verify", help="cross-check the enumerators on a trace")
    p.add_argument("trace")
    p.add_argument("--max-rank", type=int, default=None)
    p.add_argument("--brute-guard", type=int, default=25,
                   help="skip the brute-force oracle above this many events")
    p.add_argument("--corrupt-rank", type=int, default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="batch enumerator runs with a CSV report")
    p.add_argument("traces", nargs="+")
    p.add_argument("--algos", default="uniflow,traditional")
    p.add_argument("--ranks", nargs="*", default=["all"])
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--max-stored", type=int, default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TraceError as exc:
        print(f"trace error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 3
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
