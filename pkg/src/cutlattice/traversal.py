"""Rank-by-rank traversal of the consistent-cut lattice in constant cut storage.

Works over a uniflow partition with regenerated vector clocks.  For each rank
the walk starts at the lexically smallest consistent cut of that rank and
repeatedly steps to the lexical successor at the same rank, so the whole
lattice (or any rank slice) is enumerated without ever storing a level.
At most a couple of cut vectors plus one ``n_u x n_u`` projection matrix are
alive at any moment; the stats object tracks both so tests can assert the
space claim instead of trusting it.

A visitor is any callable ``visitor(cut, rank, remap)``; ``cut`` is the cut
over the uniflow chains, and ``remap()`` lazily translates it to the original
process chains.  Returning ``False`` stops the traversal early; any other
return value continues it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .model import Clock, Cut, UsageError, is_consistent
from .uniflow import UniflowPartition

Visitor = Callable[[Cut, int, Callable[[], Cut]], object]


@dataclass
class TraversalStats:
    """Counters and space accounting for one traversal.

    ``min_cut_calls`` and ``successor_calls`` are keyed by the rank argument
    of each call, which is how rank-slice isolation is asserted.
    ``component_ops`` counts inner-loop vector-component operations and backs
    the per-cut cost measurements.  ``peak_live_cuts`` / ``aux_int_peak``
    track the most cut vectors and auxiliary integers simultaneously retained
    by the traversal machinery.
    """

    cuts_visited: int = 0
    per_rank: dict[int, int] = field(default_factory=dict)
    min_cut_calls: dict[int, int] = field(default_factory=dict)
    successor_calls: dict[int, int] = field(default_factory=dict)
    component_ops: int = 0
    peak_live_cuts: int = 0
    aux_int_peak: int = 0
    early_stopped: bool = False
    elapsed_s: float = 0.0
    live_cuts: int = 0
    aux_ints: int = 0

    def cut_acquire(self) -> None:
        self.live_cuts += 1
        if self.live_cuts > self.peak_live_cuts:
            self.peak_live_cuts = self.live_cuts

    def cut_free(self) -> None:
        self.live_cuts -= 1

    def aux_add(self, count: int) -> None:
        self.aux_ints += count
        if self.aux_ints > self.aux_int_peak:
            self.aux_int_peak = self.aux_ints

    def aux_drop(self, count: int) -> None:
        self.aux_ints -= count

    def count_min_cut(self, r: int) -> None:
        self.min_cut_calls[r] = self.min_cut_calls.get(r, 0) + 1

    def count_successor(self, r: int) -> None:
        self.successor_calls[r] = self.successor_calls.get(r, 0) + 1


def _fill_to_rank(buf: list[int], d: int, lengths: Sequence[int], stats: TraversalStats | None) -> None:
    """Add ``d`` events bottom-up, taking as much of each low chain as fits."""
    for j in range(len(buf)):
        if d == 0:
            return
        cap = lengths[j] - buf[j]
        take = d if d < cap else cap
        buf[j] += take
        d -= take
        if stats is not None:
            stats.component_ops += 1


def get_min_cut(
    g: Sequence[int], r: int, part: UniflowPartition, stats: TraversalStats | None = None
) -> Cut:
    """Lexically smallest consistent cut of rank ``r`` at or above ``g``.

    ``g`` must be consistent.  The missing ``r - rank(g)`` events are taken
    from the lowest chains first; on a uniflow partition that preserves
    consistency (the retained upper entries never depend on higher chains).
    """
    rk = sum(g)
    if r < rk:
        raise UsageError(f"target rank {r} below the cut's rank {rk}")
    if r > part.event_count:
        raise UsageError(f"target rank {r} exceeds the event count {part.event_count}")
    if stats is not None:
        stats.count_min_cut(r)
        stats.cut_acquire()
    buf = list(g)
    _fill_to_rank(buf, r - rk, part.chain_lengths, stats)
    return tuple(buf)


def get_successor(
    g: Sequence[int], r: int, part: UniflowPartition, stats: TraversalStats | None = None
) -> Cut | None:
    """Least consistent cut of rank ``r`` lexically above ``g``, or ``None``.

    ``g`` must be a consistent cut of rank ``r``.  Candidate chains are tried
    from the second-lowest upward: bump the chain by one event, drop all
    lower chains, then pull the lower components back up to the causal
    closure of every retained frontier event.  The first candidate whose rank
    still fits is topped up to rank ``r`` and returned.
    """
    rows = part.clock_rows
    lengths = part.chain_lengths
    n_u = len(lengths)
    if stats is not None:
        stats.count_successor(r)
    K: list[int] | None = None
    for i in range(1, n_u):
        if g[i] >= lengths[i]:
            continue
        if K is None:
            if stats is not None:
                stats.cut_acquire()
            K = list(g)
        else:
            K[:] = g
        K[i] += 1
        for t in range(i):
            K[t] = 0
        for j in range(i, n_u):
            kj = K[j]
            if kj:
                vc = rows[j][kj - 1]
                for t in range(i):
                    v = vc[t]
                    if v > K[t]:
                        K[t] = v
                if stats is not None:
                    stats.component_ops += i
        rk = sum(K)
        if rk <= r:
            if stats is not None:
                stats.count_min_cut(r)
            _fill_to_rank(K, r - rk, lengths, stats)
            return tuple(K)
    if K is not None and stats is not None:
        stats.cut_free()
    return None


def compute_projections(
    g: Sequence[int], part: UniflowPartition, stats: TraversalStats | None = None
) -> list[Clock]:
    """Accumulated causal projections of a cut's frontier, one row per chain.

    Row ``i`` (index ``i - 1``) combines the clocks of the frontier events on
    chains ``i..n_u``; only components ``1..i`` of a row are ever consumed.
    The bottom row always reproduces the cut itself.  Empty chains contribute
    nothing (their row aliases the row above).
    """
    rows = part.clock_rows
    n_u = part.n_u
    proj: list[Clock] = [()] * n_u
    above: Clock = (0,) * n_u
    for i in range(n_u - 1, -1, -1):
        k = g[i]
        if k:
            vc = rows[i][k - 1]
            above = tuple(a if a > b else b for a, b in zip(vc, above))
            if stats is not None:
                stats.component_ops += n_u
        proj[i] = above
    return proj


def _successor_with_projections(
    g: Sequence[int],
    r: int,
    part: UniflowPartition,
    proj: list[Clock],
    stats: TraversalStats | None,
) -> tuple[Cut, int] | None:
    """Successor step using precomputed projections.

    Fixing the lower components of a candidate takes a single componentwise
    max of the bumped event's clock with the projection row of its chain.
    Returns ``(cut, chain)`` with the 1-based chain that was incremented, or
    ``None`` when ``g`` is the lexical maximum of rank ``r``.
    """
    rows = part.clock_rows
    lengths = part.chain_lengths
    n_u = len(lengths)
    if stats is not None:
        stats.count_successor(r)
    K: list[int] | None = None
    for i in range(1, n_u):
        ki = g[i]
        if ki >= lengths[i]:
            continue
        if K is None:
            if stats is not None:
                stats.cut_acquire()
            K = list(g)
        else:
            K[:] = g
        K[i] = ki + 1
        vc = rows[i][ki]
        prow = proj[i]
        for t in range(i):
            a = vc[t]
            b = prow[t]
            K[t] = a if a > b else b
        if stats is not None:
            stats.component_ops += i
        rk = sum(K)
        if rk <= r:
            if stats is not None:
                stats.count_min_cut(r)
            _fill_to_rank(K, r - rk, lengths, stats)
            return tuple(K), i + 1
    if K is not None and stats is not None:
        stats.cut_free()
    return None


def get_successor_optimized(
    g: Sequence[int], r: int, part: UniflowPartition, stats: TraversalStats | None = None
) -> Cut | None:
    """Same contract as :func:`get_successor`, via the projection matrix.

    Projections are computed once up front, after which every candidate
    chain costs one row combination instead of a rescan of all higher
    chains.
    """
    n_u = part.n_u
    if stats is not None:
        stats.aux_add(n_u * n_u)
    proj = compute_projections(g, part, stats)
    out = _successor_with_projections(g, r, part, proj, stats)
    if stats is not None:
        stats.aux_drop(n_u * n_u)
    return out[0] if out is not None else None


def _refresh_rows(
    proj: list[Clock],
    cut: Sequence[int],
    rows,
    upto: int,
    n_u: int,
    stats: TraversalStats | None,
) -> None:
    """Recompute projection rows for chains ``1..upto`` against ``cut``.

    Rows above ``upto`` stay valid after a successor step because the cut
    did not change there.
    """
    above: Clock = proj[upto] if upto < n_u else (0,) * n_u
    for i in range(upto - 1, -1, -1):
        k = cut[i]
        if k:
            vc = rows[i][k - 1]
            above = tuple(a if a > b else b for a, b in zip(vc, above))
            if stats is not None:
                stats.component_ops += n_u
        proj[i] = above


def remap(g_u: Sequence[int], part: UniflowPartition, stats: TraversalStats | None = None) -> Cut:
    """Translate a consistent uniflow cut to the original process chains.

    The result is the unique consistent cut of the source computation with
    the same event set.  Frontier events are mapped back to their original
    ``(process, index)`` pairs; taking the componentwise max of the indexed
    events' original clocks then recovers the contributions of non-frontier
    events through causal closure.
    """
    if not is_consistent(g_u, part):
        raise UsageError(f"cut {tuple(g_u)} is not consistent in this partition")
    return _remap_unchecked(g_u, part, stats)


def _remap_unchecked(
    g_u: Sequence[int], part: UniflowPartition, stats: TraversalStats | None
) -> Cut:
    comp = part.source
    n = comp.n
    back = part.back_map
    chains = part.chains
    if stats is not None:
        stats.aux_add(n)
    indicator = [0] * n
    for i, k in enumerate(g_u):
        if k:
            c, e = back[chains[i][k - 1]]
            if e > indicator[c - 1]:
                indicator[c - 1] = e
    rows = comp.clock_rows
    out = [0] * n
    for j in range(n):
        kj = indicator[j]
        if kj:
            vc = rows[j][kj - 1]
            for t in range(n):
                v = vc[t]
                if v > out[t]:
                    out[t] = v
            if stats is not None:
                stats.component_ops += n
    if stats is not None:
        stats.aux_drop(n)
    return tuple(out)


def traverse_bfs(
    part: UniflowPartition,
    visitor: Visitor | None = None,
    *,
    full_projection_refresh: bool = False,
) -> TraversalStats:
    """Visit every consistent cut once, in rank-major lexical-minor order.

    Starts at the empty cut and walks each rank's lexical chain from its
    minimum.  ``full_projection_refresh`` recomputes the whole projection
    matrix after every step instead of only the invalidated rows; it exists
    for differential testing and should stay off.
    """
    return traverse_rank_range(
        part, 0, part.event_count, visitor, full_projection_refresh=full_projection_refresh
    )


def traverse_rank_range(
    part: UniflowPartition,
    r1: int,
    r2: int,
    visitor: Visitor | None = None,
    *,
    full_projection_refresh: bool = False,
) -> TraversalStats:
    """Visit exactly the consistent cuts with ``r1 <= rank <= r2``, each once.

    Every rank is seeded independently from the empty cut, so no work
    happens at ranks outside the requested range.
    """
    if not 0 <= r1 <= r2 <= part.event_count:
        raise UsageError(
            f"rank range {r1}..{r2} invalid for a computation of {part.event_count} events"
        )
    if part.uvc is None:
        raise UsageError("partition has no uniflow vector clocks; regenerate them first")
    stats = TraversalStats()
    start = time.perf_counter()
    rows = part.clock_rows
    n_u = part.n_u
    proj: list[Clock] = [(0,) * n_u] * n_u
    stats.aux_add(n_u * n_u)
    per_rank = stats.per_rank
    for r in range(r1, r2 + 1):
        stats.cut_acquire()  # zero seed for this rank
        g = get_min_cut((0,) * n_u, r, part, stats)
        stats.cut_free()
        _refresh_rows(proj, g, rows, n_u, n_u, stats)
        while True:
            stats.cuts_visited += 1
            per_rank[r] = per_rank.get(r, 0) + 1
            if visitor is not None:

                def remap_now(_cut: Cut = g) -> Cut:
                    stats.cut_acquire()
                    out = _remap_unchecked(_cut, part, stats)
                    stats.cut_free()
                    return out

                if visitor(g, r, remap_now) is False:
                    stats.early_stopped = True
                    stats.cut_free()  # g
                    stats.aux_drop(n_u * n_u)
                    stats.elapsed_s = time.perf_counter() - start
                    return stats
            step = _successor_with_projections(g, r, part, proj, stats)
            if step is None:
                stats.cut_free()  # g
                break
            nxt, inc = step
            stats.cut_free()  # g replaced by its successor
            g = nxt
            _refresh_rows(
                proj, g, rows, n_u if full_projection_refresh else inc, n_u, stats
            )
    stats.aux_drop(n_u * n_u)
    stats.elapsed_s = time.perf_counter() - start
    return stats
