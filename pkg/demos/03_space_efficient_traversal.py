"""The space contrast: constant cut storage versus whole levels.

A randomly generated 10-process computation produces a lattice with a couple
hundred thousand consistent cuts.  The rank traversal walks all of them while
retaining two cut vectors and one small matrix; the traditional level BFS has
to hold entire levels, tens of thousands of cuts wide.
"""

import time

from cutlattice import (
    GenSpec,
    build_uniflow_partition,
    generate_random,
    regenerate_vector_clocks,
    traditional_bfs,
    traverse_bfs,
)

spec = GenSpec(n=10, total_events=30, message_probability=0.3, seed=6)
comp = generate_random(spec)
print(f"generated trace: n={spec.n} events={spec.total_events} "
      f"p={spec.message_probability} seed={spec.seed}")

t0 = time.perf_counter()
part = regenerate_vector_clocks(build_uniflow_partition(comp))
t_part = time.perf_counter() - t0
print(f"uniflow partition: n_u={part.n_u} built in {t_part:.3f}s")

t0 = time.perf_counter()
stats = traverse_bfs(part)
t_uni = time.perf_counter() - t0

t0 = time.perf_counter()
tstats = traditional_bfs(comp)
t_trad = time.perf_counter() - t0

assert stats.cuts_visited == tstats.cuts_visited
print(f"\nboth traversals visited {stats.cuts_visited} consistent cuts")
print(f"  rank traversal:  {t_uni:6.2f}s  peak cuts retained: {stats.peak_live_cuts}"
      f"  aux ints: {stats.aux_int_peak} (= n_u^2 here)")
print(f"  level traversal: {t_trad:6.2f}s  peak cuts stored:   {tstats.peak_stored_cuts}"
      f"  (max level width {tstats.max_level_width})")

widths = sorted(tstats.per_rank.items())
widest = max(widths, key=lambda kv: kv[1])
print(f"\nlevel widths grow to {widest[1]} cuts at rank {widest[0]}; the rank "
      "traversal never stores a level at all.")
