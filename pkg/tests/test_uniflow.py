"""Uniflow partitions: the online partitioner, clock regeneration, and the
fill lemma, cross-checked against explicit transitive closures."""

from __future__ import annotations

import itertools
import random

import pytest

from cutlattice.model import UsageError, cut_from_display, is_consistent, make_computation
from cutlattice.traversal import remap
from cutlattice.uniflow import (
    PartitionerState,
    build_uniflow_partition,
    find_uniflow_chain,
    partition_from_chains,
    regenerate_vector_clocks,
    trivial_partition,
    uniflow_fill,
    verify_uniflow,
)

from conftest import (
    closure_predecessors,
    downset_event_sets,
    event_set_to_cut,
    identity_partition,
    random_computation,
)


def dv(*values):
    return cut_from_display(values)


def eq1_holds_by_closure(part) -> bool:
    """Independent uniflow check: no higher-chain event precedes a lower one."""
    preds = closure_predecessors(part.source)
    placed = [(part.chain_of[eid], eid) for eid in part.source.topo_order]
    for cx, x in placed:
        for cy, y in placed:
            if cx < cy and y in preds[x]:
                return False
    return True


class TestFindUniflowChain:
    def test_worked_delivery(self, crossing):
        state = PartitionerState(events=crossing.events)
        placements = [
            find_uniflow_chain(crossing.events[eid], state) for eid in (1, 2, 3, 4)
        ]
        assert placements == [1, 2, 2, 3]

    def test_single_process(self):
        comp = make_computation(1, [(i, 1, []) for i in range(1, 6)])
        state = PartitionerState(events=comp.events)
        assert all(
            find_uniflow_chain(comp.events[eid], state) == 1 for eid in comp.topo_order
        )

    def test_unplaced_dependency_rejected(self, crossing):
        state = PartitionerState(events=crossing.events)
        with pytest.raises(UsageError, match="not yet placed"):
            find_uniflow_chain(crossing.events[3], state)

    def test_random_delivery_orders_stay_uniflow(self):
        comp = random_computation(seed=11, n=3, events=12, p=0.3)
        rng = random.Random(0)
        for _ in range(5):
            # random topological shuffle via seeded Kahn's algorithm
            remaining = {eid: set(comp.events[eid].deps) for eid in comp.topo_order}
            order = []
            ready = sorted(e for e, d in remaining.items() if not d)
            while ready:
                eid = ready.pop(rng.randrange(len(ready)))
                order.append(eid)
                del remaining[eid]
                ready = sorted(
                    e for e, d in remaining.items() if d <= set(order)
                )
            shuffled = make_computation(
                comp.n,
                [(eid, comp.events[eid].process, comp.events[eid].deps) for eid in order],
            )
            part = build_uniflow_partition(shuffled)
            assert verify_uniflow(part)
            assert eq1_holds_by_closure(part)


class TestBuildUniflowPartition:
    def test_cross_computation_three_chains(self, crossing):
        part = build_uniflow_partition(crossing)
        assert part.n_u == 3
        assert part.chains == ((1,), (2, 3), (4,))

    def test_antichain_gets_one_chain_each(self):
        k = 5
        comp = make_computation(k, [(i, i, []) for i in range(1, k + 1)])
        part = build_uniflow_partition(comp)
        assert part.n_u == k
        assert verify_uniflow(part)

    def test_six_event_partition_preserves_cut_count(self, six_event):
        part = regenerate_vector_clocks(build_uniflow_partition(six_event))
        assert verify_uniflow(part)
        ranges = [range(m + 1) for m in part.chain_lengths]
        count = sum(1 for cut in itertools.product(*ranges) if is_consistent(cut, part))
        assert count == len(downset_event_sets(six_event)) == 12

    def test_sparse_chain_ids_compacted(self):
        # the first event of a low process arrives after higher chains exist,
        # so the partitioner creates a chain below maxid; ids get compacted
        comp = make_computation(4, [(1, 4, []), (2, 3, [])])
        part = build_uniflow_partition(comp)
        assert part.n_u == 2
        assert part.chains == ((2,), (1,))
        assert verify_uniflow(part)

    def test_nu_never_exceeds_event_count(self):
        for seed in range(8):
            comp = random_computation(seed, n=4, events=14, p=0.5)
            part = build_uniflow_partition(comp)
            assert part.n_u <= comp.event_count


class TestRegenerateVectorClocks:
    def test_cross_partition_labels(self, crossing):
        part = regenerate_vector_clocks(build_uniflow_partition(crossing))
        assert part.uvc[4] == dv(1, 1, 1)  # P1#2 alone on the top chain
        assert part.uvc[3] == dv(0, 2, 1)  # P2#2

    def test_three_chain_labels(self, three_chain):
        part = identity_partition(three_chain)
        assert part.uvc[6] == dv(0, 3, 1)  # third event of the middle chain
        assert part.uvc[7] == dv(1, 2, 0)
        assert part.uvc[9] == dv(3, 2, 2)

    def test_first_event_on_lowest_chain(self, three_chain):
        part = identity_partition(three_chain)
        assert part.uvc[1] == dv(0, 0, 1)

    def test_position_invariant(self):
        comp = random_computation(seed=21, n=4, events=16, p=0.4)
        part = regenerate_vector_clocks(build_uniflow_partition(comp))
        for ci, chain in enumerate(part.chains, start=1):
            for k, eid in enumerate(chain, start=1):
                assert part.uvc[eid][ci - 1] == k


class TestVerifyUniflow:
    def test_upward_two_chain_partition(self, six_event):
        assert verify_uniflow(identity_partition(six_event)) is True

    def test_upward_three_chain_partition(self, three_chain):
        assert verify_uniflow(identity_partition(three_chain)) is True

    def test_crossing_partition_rejected(self, crossing):
        assert verify_uniflow(identity_partition(crossing)) is False

    def test_downward_message_rejected(self, downward_msg):
        assert verify_uniflow(identity_partition(downward_msg)) is False

    def test_downward_message_repartitioned(self, downward_msg):
        # moving the late receiver onto the upper chain restores the property
        part = partition_from_chains(downward_msg, [(1, 2), (3, 4, 5, 6)])
        assert verify_uniflow(part) is True

    def test_agrees_with_closure_check(self):
        for seed in range(6):
            comp = random_computation(seed, n=3, events=12, p=0.4)
            part = build_uniflow_partition(comp)
            assert verify_uniflow(part) == eq1_holds_by_closure(part)
            ident = partition_from_chains(comp, comp.chains)
            assert verify_uniflow(ident) == eq1_holds_by_closure(ident)

    def test_fifty_event_partitions_pass_closure_check(self):
        for seed in (201, 202):
            comp = random_computation(seed, n=6, events=50, p=0.3)
            for part in (build_uniflow_partition(comp), trivial_partition(comp)):
                assert verify_uniflow(part)
                assert eq1_holds_by_closure(part)


class TestTrivialPartition:
    def test_one_chain_per_event(self, six_event):
        part = trivial_partition(six_event)
        assert part.n_u == 6
        assert all(len(c) == 1 for c in part.chains)
        assert verify_uniflow(part)

    def test_empty_computation(self):
        comp = make_computation(2, [])
        assert trivial_partition(comp).n_u == 0

    def test_random_traces_stay_uniflow(self):
        for seed in (31, 32, 33):
            comp = random_computation(seed, n=4, events=20, p=0.3)
            part = trivial_partition(comp)
            assert verify_uniflow(part)
            assert eq1_holds_by_closure(part)


class TestUniflowFill:
    def test_fill_lowest_chain(self, three_chain):
        part = identity_partition(three_chain)
        filled = uniflow_fill(dv(1, 2, 1), 1, part)
        assert filled == dv(1, 2, 3)
        assert is_consistent(filled, part)

    def test_fill_two_chains(self, three_chain):
        part = identity_partition(three_chain)
        filled = uniflow_fill(dv(1, 2, 1), 2, part)
        assert filled == dv(1, 3, 3)
        assert is_consistent(filled, part)

    def test_zero_is_noop(self, three_chain):
        part = identity_partition(three_chain)
        assert uniflow_fill(dv(1, 2, 1), 0, part) == dv(1, 2, 1)

    def test_inconsistent_cut_rejected(self, three_chain):
        part = identity_partition(three_chain)
        with pytest.raises(UsageError, match="not consistent"):
            uniflow_fill(dv(1, 0, 0), 1, part)

    def test_lemma_holds_exhaustively(self):
        for seed in (41, 42):
            comp = random_computation(seed, n=3, events=14, p=0.3)
            part = regenerate_vector_clocks(build_uniflow_partition(comp))
            cuts = {
                event_set_to_cut(members, part)
                for members in downset_event_sets(comp)
            }
            for g in cuts:
                for k in range(part.n_u + 1):
                    assert is_consistent(uniflow_fill(g, k, part), part)

    def test_lemma_fails_without_uniflow(self, downward_msg):
        # the known counterexample: filling the lower chain of [2,2] in the
        # downward-message partition includes an event without its dependency
        part = identity_partition(downward_msg)
        g = dv(2, 2)
        assert is_consistent(g, part)
        lengths = part.chain_lengths
        filled = tuple(lengths[i] if i < 1 else g[i] for i in range(2))
        assert filled == dv(2, 3)
        assert not is_consistent(filled, part)


class TestCutCountInvariance:
    @pytest.mark.parametrize("seed,n,events,p", [
        (51, 2, 16, 0.3),
        (52, 3, 18, 0.3),
        (53, 4, 20, 0.0),
        (54, 4, 20, 0.7),
    ])
    def test_per_rank_counts_match_original(self, seed, n, events, p):
        comp = random_computation(seed, n, events, p)
        part = regenerate_vector_clocks(build_uniflow_partition(comp))
        assert verify_uniflow(part)
        original: dict[int, set] = {}
        repartitioned: dict[int, set] = {}
        for members in downset_event_sets(comp):
            original.setdefault(len(members), set()).add(event_set_to_cut(members, comp))
            repartitioned.setdefault(len(members), set()).add(event_set_to_cut(members, part))
        assert {r: len(s) for r, s in original.items()} == {
            r: len(s) for r, s in repartitioned.items()
        }


class TestBackMap:
    def test_bijection(self):
        comp = random_computation(seed=61, n=3, events=15, p=0.3)
        part = build_uniflow_partition(comp)
        pairs = set(part.back_map.values())
        expected = {
            (p_, k)
            for p_, chain in enumerate(comp.chains, start=1)
            for k in range(1, len(chain) + 1)
        }
        assert pairs == expected

    def test_full_cut_round_trip(self):
        for seed in (62, 63):
            comp = random_computation(seed, n=4, events=16, p=0.4)
            part = regenerate_vector_clocks(build_uniflow_partition(comp))
            assert remap(part.full_cut(), part) == comp.full_cut()
