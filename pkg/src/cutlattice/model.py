"""Core data model: events, computations, vector clocks, and cuts.

A computation is a finite set of events partially ordered by causality
(program order within a process plus message edges, transitively closed).
Events are grouped into chains; chain ``i`` of a partition occupies index
``i - 1`` of every vector in this package, so index 0 is always the lowest
chain.  Rendering is the one place where that order flips: ``format_cut``
prints the highest chain leftmost (``[c_n, ..., c_1]``), which is the
notation used throughout the docs and the golden tests.

A cut is a per-chain count vector; the cut is consistent when the counted
prefix of every chain already contains all causal predecessors of its
events.  Cuts and clocks are plain tuples of ints: they are tiny, hashable,
and cheap to compare, which the traversal code leans on heavily.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence


class UsageError(ValueError):
    """An operation was called with arguments that violate its contract."""


class ResourceLimitError(RuntimeError):
    """A configured resource cap (stored-cut budget) was exceeded."""

    def __init__(self, message: str, stats=None):
        super().__init__(message)
        self.stats = stats


Clock = tuple[int, ...]
Cut = tuple[int, ...]


@dataclass(frozen=True)
class Event:
    """One executed operation of a computation.

    ``deps`` holds direct causal predecessors only (never the transitive
    closure) and always includes the same-process predecessor when one
    exists.  ``vc`` is the vector clock over the original process chains;
    ``vc[process - 1]`` equals ``index_on_process``.
    """

    id: int
    process: int
    index_on_process: int
    deps: frozenset[int]
    vc: Clock


@dataclass(frozen=True)
class Computation:
    """A complete computation: ``n`` process chains plus a topological order.

    Instances are immutable and safe to share between threads.  Build them
    with :func:`make_computation`; the constructor itself performs no
    validation.
    """

    n: int
    chains: tuple[tuple[int, ...], ...]
    events: Mapping[int, Event]
    topo_order: tuple[int, ...]

    @cached_property
    def event_count(self) -> int:
        return len(self.topo_order)

    @cached_property
    def chain_lengths(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.chains)

    @cached_property
    def clock_rows(self) -> tuple[tuple[Clock, ...], ...]:
        """Per-chain vector clocks: ``clock_rows[i][k]`` is the clock of the
        (k+1)-th event on chain i+1."""
        return tuple(
            tuple(self.events[eid].vc for eid in chain) for chain in self.chains
        )

    def full_cut(self) -> Cut:
        return self.chain_lengths


def make_computation(n: int, records: Iterable[tuple[int, int, Iterable[int]]]) -> Computation:
    """Build a validated :class:`Computation` from ``(id, process, deps)`` records.

    Records must arrive in an order consistent with causality: every
    dependency refers to an earlier record.  The same-process predecessor is
    added to ``deps`` implicitly, and vector clocks are computed before the
    result is returned.

    Raises :class:`UsageError` on duplicate ids, out-of-range processes, or
    a dependency on an unseen event.
    """
    if n < 0:
        raise UsageError("process count must be non-negative")
    chains: list[list[int]] = [[] for _ in range(n)]
    staged: list[tuple[int, int, frozenset[int]]] = []
    seen: set[int] = set()
    for rec_no, (eid, process, deps) in enumerate(records, start=1):
        if eid < 0:
            raise UsageError(f"record {rec_no}: event id {eid} is negative")
        if eid in seen:
            raise UsageError(f"record {rec_no}: duplicate event id {eid}")
        if not 1 <= process <= n:
            raise UsageError(f"record {rec_no}: process {process} outside 1..{n}")
        dep_set = set(deps)
        for d in dep_set:
            if d not in seen:
                raise UsageError(
                    f"record {rec_no}: dependency {d} does not refer to an earlier event"
                )
        chain = chains[process - 1]
        if chain:
            dep_set.add(chain[-1])  # implicit same-process predecessor
        chain.append(eid)
        seen.add(eid)
        staged.append((eid, process, frozenset(dep_set)))

    index_of = {}
    for chain in chains:
        for k, eid in enumerate(chain, start=1):
            index_of[eid] = k

    events: dict[int, Event] = {}
    for eid, process, dep_set in staged:
        acc = [0] * n
        for d in dep_set:
            dvc = events[d].vc
            for i in range(n):
                if dvc[i] > acc[i]:
                    acc[i] = dvc[i]
        acc[process - 1] = index_of[eid]
        events[eid] = Event(eid, process, index_of[eid], dep_set, tuple(acc))

    return Computation(
        n=n,
        chains=tuple(tuple(c) for c in chains),
        events=events,
        topo_order=tuple(e for e, _, _ in staged),
    )


def compute_vector_clocks(comp: Computation) -> Computation:
    """Return a copy of ``comp`` with vector clocks recomputed from ``deps``.

    The clock of an event is the componentwise max over its dependencies'
    clocks, with its own component set to its index on its process.  Raises
    :class:`UsageError` if ``topo_order`` is not a valid linearization of the
    dependency graph (which is the case whenever the graph has a cycle).
    """
    position = {eid: i for i, eid in enumerate(comp.topo_order)}
    n = comp.n
    events: dict[int, Event] = {}
    for eid in comp.topo_order:
        ev = comp.events[eid]
        acc = [0] * n
        for d in ev.deps:
            if d not in position or position[d] >= position[eid]:
                raise UsageError(
                    f"event {eid}: dependency {d} does not precede it; "
                    "the dependency graph is cyclic or the order is invalid"
                )
            dvc = events[d].vc
            for i in range(n):
                if dvc[i] > acc[i]:
                    acc[i] = dvc[i]
        acc[ev.process - 1] = ev.index_on_process
        events[eid] = Event(ev.id, ev.process, ev.index_on_process, ev.deps, tuple(acc))
    return Computation(comp.n, comp.chains, events, comp.topo_order)


def happened_before(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff clock ``a`` causally precedes clock ``b``.

    Componentwise ``a <= b`` with at least one strictly smaller component.
    """
    if len(a) != len(b):
        raise UsageError(f"clock lengths differ: {len(a)} vs {len(b)}")
    strict = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            strict = True
    return strict


def concurrent(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff neither clock precedes the other.

    Identical vectors compare as concurrent under this definition; two
    distinct events can never carry identical clocks, so callers must not
    feed the same event's clock on both sides and expect a meaningful answer.
    """
    return not happened_before(a, b) and not happened_before(b, a)


def rank(cut: Sequence[int]) -> int:
    """Number of events contained in the cut."""
    return sum(cut)


def lexical_compare(g: Sequence[int], h: Sequence[int]) -> int:
    """Compare cuts with the highest-numbered chain most significant.

    Returns a negative value, zero, or a positive value as ``g`` is
    lexically below, equal to, or above ``h``.
    """
    if len(g) != len(h):
        raise UsageError(f"cut lengths differ: {len(g)} vs {len(h)}")
    for i in range(len(g) - 1, -1, -1):
        if g[i] != h[i]:
            return -1 if g[i] < h[i] else 1
    return 0


def is_consistent(cut: Sequence[int], source) -> bool:
    """True iff ``cut`` is a consistent cut of ``source``.

    ``source`` is anything exposing ``chain_lengths`` and ``clock_rows``
    (a :class:`Computation` or a uniflow partition).  The check uses the
    frontier events' clocks: chain ``i``'s ``k``-th event must have a clock
    componentwise ``<=`` the cut.
    """
    lengths = source.chain_lengths
    if len(cut) != len(lengths):
        raise UsageError(f"cut has {len(cut)} entries for {len(lengths)} chains")
    for i, k in enumerate(cut):
        if k < 0 or k > lengths[i]:
            raise UsageError(f"cut entry {k} outside 0..{lengths[i]} on chain {i + 1}")
    rows = source.clock_rows
    for i, k in enumerate(cut):
        if k:
            vc = rows[i][k - 1]
            for j, c in enumerate(cut):
                if vc[j] > c:
                    return False
    return True


def cut_from_display(values: Sequence[int]) -> Cut:
    """Convert a ``[c_n, ..., c_1]`` rendering into internal chain order."""
    return tuple(reversed(tuple(values)))


def cut_to_display(cut: Sequence[int]) -> tuple[int, ...]:
    """Internal chain order -> ``[c_n, ..., c_1]`` rendering order."""
    return tuple(reversed(tuple(cut)))


def format_cut(cut: Sequence[int]) -> str:
    """Render a cut with the highest chain leftmost, per the display convention."""
    return "[" + ",".join(str(c) for c in reversed(tuple(cut))) + "]"
