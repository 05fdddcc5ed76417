"""Uniflow chain partitions.

A chain partition is *uniflow* when causality only ever flows upward:
whenever chain(x) < chain(y), y never happened-before x.  Equivalently,
every causal dependency of an event sits on the same chain below it or on a
strictly lower chain.  Partitions with this shape admit the constant-space
rank traversal in :mod:`cutlattice.traversal`, because topping up any prefix
of low chains can never violate consistency (``uniflow_fill``).

Two constructions are provided: an online partitioner that places each
arriving event greedily (``find_uniflow_chain`` / ``build_uniflow_partition``)
and the trivial one-event-per-chain partition.  Neither aims for the minimum
chain count; that optimization problem is out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .model import (
    Clock,
    Computation,
    Cut,
    Event,
    UsageError,
    concurrent,
    happened_before,
    is_consistent,
)


@dataclass(frozen=True)
class UniflowPartition:
    """A repartition of a computation's events into ``n_u`` chains.

    ``chains[i]`` lists event ids in chain order for chain ``i + 1``.
    ``uvc`` maps each event to its vector clock over the *uniflow* chains and
    is ``None`` until :func:`regenerate_vector_clocks` has run.  ``back_map``
    recovers each event's original ``(process, index)`` pair, which is what
    :func:`cutlattice.traversal.remap` consumes.

    Instances are immutable once built and safe to share between threads.
    """

    source: Computation
    chains: tuple[tuple[int, ...], ...]
    chain_of: Mapping[int, int]
    uvc: Mapping[int, Clock] | None = None

    @property
    def n_u(self) -> int:
        return len(self.chains)

    @cached_property
    def event_count(self) -> int:
        return self.source.event_count

    @cached_property
    def chain_lengths(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.chains)

    @cached_property
    def back_map(self) -> dict[int, tuple[int, int]]:
        events = self.source.events
        return {
            eid: (events[eid].process, events[eid].index_on_process)
            for chain in self.chains
            for eid in chain
        }

    @cached_property
    def clock_rows(self) -> tuple[tuple[Clock, ...], ...]:
        """Per-chain uniflow clocks; requires regenerated vector clocks."""
        if self.uvc is None:
            raise UsageError(
                "partition has no uniflow vector clocks; call regenerate_vector_clocks first"
            )
        uvc = self.uvc
        return tuple(tuple(uvc[eid] for eid in chain) for chain in self.chains)

    def full_cut(self) -> Cut:
        return self.chain_lengths


@dataclass
class PartitionerState:
    """Mutable working state of the online partitioner.

    Single-owner: feed events sequentially through
    :func:`find_uniflow_chain`.  Chain ids may be sparse while building;
    :func:`build_uniflow_partition` compacts them at the end.
    """

    events: Mapping[int, Event]
    chains: dict[int, list[int]] = field(default_factory=dict)
    chain_of: dict[int, int] = field(default_factory=dict)
    last_event_of: dict[int, int] = field(default_factory=dict)
    maxid: int = 0


def find_uniflow_chain(event: Event, state: PartitionerState) -> int:
    """Place one event on a uniflow chain and return the chain id.

    Events must arrive in an order consistent with causality (all
    dependencies already placed), otherwise the concurrency test against only
    the last chain event would be unsound.  The candidate chain is the max of
    the event's own process id and its dependencies' uniflow chains; if that
    chain's last event is concurrent with the new one, a fresh chain is
    opened above all existing ones.
    """
    uid = event.process
    for d in event.deps:
        placed = state.chain_of.get(d)
        if placed is None:
            raise UsageError(
                f"event {event.id}: dependency {d} not yet placed; "
                "deliver events in a causality-consistent order"
            )
        if placed > uid:
            uid = placed
    if uid in state.chains:
        last = state.events[state.last_event_of[uid]]
        if concurrent(event.vc, last.vc):
            state.maxid += 1
            cid = state.maxid
            state.chains[cid] = [event.id]
        else:
            cid = uid
            state.chains[uid].append(event.id)
    else:
        cid = uid
        state.chains[uid] = [event.id]
        if uid > state.maxid:
            state.maxid = uid
    state.chain_of[event.id] = cid
    state.last_event_of[cid] = event.id
    return cid


def build_uniflow_partition(comp: Computation) -> UniflowPartition:
    """Run the online partitioner over the whole computation.

    Events are delivered in ``topo_order``.  Chain ids are compacted to
    ``1..n_u`` at the end (placement can leave gaps when a process id jumps
    past existing chains).  Uniflow vector clocks are not filled; chain with
    :func:`regenerate_vector_clocks`.
    """
    state = PartitionerState(events=comp.events)
    for eid in comp.topo_order:
        find_uniflow_chain(comp.events[eid], state)
    order = sorted(state.chains)
    renumber = {old: new for new, old in enumerate(order, start=1)}
    chains = tuple(tuple(state.chains[old]) for old in order)
    chain_of = {eid: renumber[cid] for eid, cid in state.chain_of.items()}
    return UniflowPartition(source=comp, chains=chains, chain_of=chain_of)


def partition_from_chains(
    comp: Computation, chains: Sequence[Sequence[int]]
) -> UniflowPartition:
    """Wrap explicitly given chains as a partition (clocks not yet filled).

    The chains must partition the event set exactly; no uniflow property is
    assumed or checked here (that is :func:`verify_uniflow`'s job).
    """
    flat = [eid for chain in chains for eid in chain]
    if len(flat) != comp.event_count or set(flat) != set(comp.events):
        raise UsageError("chains do not partition the computation's events")
    chain_of = {
        eid: ci for ci, chain in enumerate(chains, start=1) for eid in chain
    }
    return UniflowPartition(
        source=comp,
        chains=tuple(tuple(chain) for chain in chains),
        chain_of=chain_of,
    )


def regenerate_vector_clocks(part: UniflowPartition) -> UniflowPartition:
    """Return the partition with vector clocks recomputed over its chains.

    Same construction as for the original clocks, but over ``n_u`` chains and
    with the implicit predecessor edge along each uniflow chain included.
    """
    comp = part.source
    n_u = part.n_u
    pos: dict[int, int] = {}
    prev_on_chain: dict[int, int | None] = {}
    for chain in part.chains:
        for k, eid in enumerate(chain):
            pos[eid] = k + 1
            prev_on_chain[eid] = chain[k - 1] if k else None
    uvc: dict[int, Clock] = {}
    for eid in comp.topo_order:
        ev = comp.events[eid]
        acc = [0] * n_u
        preds = list(ev.deps)
        if prev_on_chain[eid] is not None:
            preds.append(prev_on_chain[eid])
        for d in preds:
            dvc = uvc[d]
            for i in range(n_u):
                if dvc[i] > acc[i]:
                    acc[i] = dvc[i]
        acc[part.chain_of[eid] - 1] = pos[eid]
        uvc[eid] = tuple(acc)
    return UniflowPartition(
        source=comp, chains=part.chains, chain_of=part.chain_of, uvc=uvc
    )


def verify_uniflow(part: UniflowPartition) -> bool:
    """Check the uniflow property against the original clocks.

    True iff every chain is totally ordered by causality and no event on a
    higher chain happened-before an event on a lower chain.  Quadratic in the
    event count; meant for validation, not hot paths.
    """
    events = part.source.events
    for chain in part.chains:
        for a, b in zip(chain, chain[1:]):
            if not happened_before(events[a].vc, events[b].vc):
                return False
    flat = [
        (ci, events[eid].vc)
        for ci, chain in enumerate(part.chains, start=1)
        for eid in chain
    ]
    for ci, vci in flat:
        for cj, vcj in flat:
            if ci < cj and happened_before(vcj, vci):
                return False
    return True


def trivial_partition(comp: Computation) -> UniflowPartition:
    """Every event on its own chain, ordered by a causality-respecting sort.

    Events are sorted lexically by their original clocks (highest chain most
    significant); any lexical order extends causal dominance, so the result
    is always uniflow.  Clocks over the new chains are filled in.
    """
    order = sorted(
        comp.topo_order,
        key=lambda eid: (tuple(reversed(comp.events[eid].vc)), comp.events[eid].process),
    )
    chains = tuple((eid,) for eid in order)
    chain_of = {eid: i for i, eid in enumerate(order, start=1)}
    part = UniflowPartition(source=comp, chains=chains, chain_of=chain_of)
    return regenerate_vector_clocks(part)


def uniflow_fill(g: Sequence[int], k: int, part: UniflowPartition) -> Cut:
    """Top up the ``k`` lowest chains of a consistent cut.

    Returns the cut that keeps ``g``'s entries above chain ``k`` and takes
    every event from chains ``1..k``.  On a uniflow partition this is always
    consistent: the retained upper entries have all their dependencies on
    lower chains, which are now complete.  ``k = 0`` is a no-op.
    """
    if not is_consistent(g, part):
        raise UsageError(f"cut {tuple(g)} is not consistent in this partition")
    if not 0 <= k <= part.n_u:
        raise UsageError(f"chain index {k} outside 0..{part.n_u}")
    lengths = part.chain_lengths
    return tuple(lengths[i] if i < k else g[i] for i in range(part.n_u))
