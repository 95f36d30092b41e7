"""Strongly connected components: lockstep double BFS pivoting vs. DFS.

The parallel member runs on a width-n machine over the symmetric closure of
the instance: each round initializes the lowest-index unassigned node as
pivot, advances a forward and a backward search one layer per step among
unassigned nodes (min-aggregation of the passed pivot index), then closes by
assigning the intersection.  Search cells are namespaced by pivot id, so a
round never needs a mass reset: a node counts as discovered exactly when its
cell equals the current pivot.

The sequential member is hosted on a width-1 machine (a single processor
walking the graph kept in shared memory).  Each step is one DFS event: a
root seed, one edge scan, or a node finish, with finishes folded into the
step that exhausts the node, so a full run takes at most n+m steps per pass.
"""

from __future__ import annotations

from ..graphs import Digraph
from ..machine import (
    InterconnectionGraph,
    MachineState,
    NodeUpdate,
    Trace,
    UNDEF,
    as_flag,
    as_index,
    run_machine,
    stable_digest,
    symmetric_graph,
)

# width-n local slots (bidirectional BFS / pivot loop)
FWD = 0
BWD = 1
PTR = 2
DONE = 3

# pivot-loop shared cells
PIVOT_ADDR = 0
OPEN_ADDR = 1


def bidirectional_bfs(
    g: Digraph, source: int, alive: frozenset[int] | set[int]
) -> tuple[set[int], set[int], Trace]:
    """Forward and backward reachability from one source, in lockstep.

    Both searches advance one layer per machine step, restricted to the
    alive set; a node adopts the source index as the minimum over its
    already-reached neighbors.  Depth equals the larger of the two
    eccentricities.
    """
    alive = frozenset(alive)
    if source not in alive:
        raise ValueError("source must be alive")
    n = g.n
    graph = symmetric_graph(n, g.edges)
    rows = [(UNDEF, UNDEF)] * n
    rows[source] = (source, source)
    initial = MachineState(tuple(rows), (UNDEF,), 0)

    def candidates(state):
        local = state.local
        out = set()
        for u in alive:
            if local[u][FWD] is UNDEF and any(
                local[j][FWD] is not UNDEF for j in g.in_neighbors(u) if j in alive
            ):
                out.add(u)
            if local[u][BWD] is UNDEF and any(
                local[j][BWD] is not UNDEF for j in g.out_neighbors(u) if j in alive
            ):
                out.add(u)
        return sorted(out)

    def step(ctx):
        u = ctx.pid
        update = {}
        if ctx.own(FWD) is UNDEF:
            got = []
            for j in g.in_neighbors(u):
                if j in alive:
                    cell = ctx.read(j, FWD)
                    if cell is not UNDEF:
                        got.append(as_index(cell))
            if got:
                update[FWD] = min(got)
        if ctx.own(BWD) is UNDEF:
            got = []
            for j in g.out_neighbors(u):
                if j in alive:
                    cell = ctx.read(j, BWD)
                    if cell is not UNDEF:
                        got.append(as_index(cell))
            if got:
                update[BWD] = min(got)
        return NodeUpdate(local=update) if update else None

    trace = run_machine(
        initial,
        step,
        graph,
        lambda s: not candidates(s),
        max(len(alive), 1),
        algo_id="bidirectional_bfs",
        input_digest=stable_digest(
            {"n": n, "edges": sorted(g.edges), "source": source, "alive": sorted(alive)}
        ),
        candidates_fn=candidates,
        instance_edges=g.edges,
    )
    final = trace.states[-1].local
    descendants = {u for u in alive if final[u][FWD] is not UNDEF}
    predecessors = {u for u in alive if final[u][BWD] is not UNDEF}
    return descendants, predecessors, trace


def dcsc(g: Digraph) -> tuple[tuple[int, ...], Trace]:
    """Pivot loop: double BFS among unassigned nodes, assign the intersection.

    The pivot is always the minimal-index unassigned node; it becomes the
    representative its component points at.  Recursion over the leftover
    subsets is flattened into the sequential pivot loop, only the two
    searches of a round run in parallel.
    """
    n = g.n
    graph = symmetric_graph(n, g.edges)
    rows = tuple((UNDEF, UNDEF, u, False) for u in range(n))
    initial = MachineState(rows, (UNDEF, UNDEF), 0)

    def candidates(state):
        local = state.local
        undone = [u for u in range(n) if not local[u][DONE]]
        if not undone:
            return ()
        pivot = undone[0]
        if local[pivot][FWD] != pivot:
            return (pivot,)
        frontier = set()
        for u in undone:
            if local[u][FWD] != pivot and any(
                local[j][FWD] == pivot for j in g.in_neighbors(u)
            ):
                frontier.add(u)
            if local[u][BWD] != pivot and any(
                local[j][BWD] == pivot for j in g.out_neighbors(u)
            ):
                frontier.add(u)
        if frontier:
            return sorted(frontier)
        return tuple(
            u for u in undone if local[u][FWD] == pivot and local[u][BWD] == pivot
        )

    def step(ctx):
        if as_flag(ctx.own(DONE)):
            return None
        open_cell = ctx.shared(OPEN_ADDR)
        if open_cell is UNDEF or not as_flag(open_cell):
            pivot = ctx.pid
            return NodeUpdate(
                local={FWD: pivot, BWD: pivot, PTR: pivot},
                writes=((PIVOT_ADDR, pivot), (OPEN_ADDR, True)),
            )
        pivot = as_index(ctx.shared(PIVOT_ADDR))
        fwd = ctx.own(FWD)
        bwd = ctx.own(BWD)
        if fwd == pivot and bwd == pivot:
            return NodeUpdate(local={DONE: True}, writes=((OPEN_ADDR, False),))
        update = {}
        if fwd != pivot:
            hit = False
            for j in g.in_neighbors(ctx.pid):
                if ctx.read(j, FWD) == pivot:
                    hit = True
            if hit:
                update[FWD] = pivot
        if bwd != pivot:
            hit = False
            for j in g.out_neighbors(ctx.pid):
                if ctx.read(j, BWD) == pivot:
                    hit = True
            if hit:
                update[BWD] = pivot
        if not update:
            return None
        if update.get(FWD, fwd) == pivot and update.get(BWD, bwd) == pivot:
            update[PTR] = pivot
        return NodeUpdate(local=update)

    trace = run_machine(
        initial,
        step,
        graph,
        lambda s: all(s.local[u][DONE] for u in range(n)),
        2 * n * n + 2 * n + 4,
        algo_id="dcsc",
        input_digest=stable_digest({"n": n, "edges": sorted(g.edges)}),
        candidates_fn=candidates,
        instance_edges=g.edges,
    )
    final = trace.states[-1].local
    return tuple(as_index(final[u][PTR]) for u in range(n)), trace


# width-1 machine layout for the DFS host: shared memory carries per-node
# algorithm state, the processor's local memory carries the DFS control.
def _shared_layout(n: int):
    return 0, n, 2 * n, 3 * n  # COLOR1, ORDER, COLOR2, COMP block bases


def kosaraju(g: Digraph) -> tuple[tuple[int, ...], Trace]:
    """Two DFS passes: finish order on g, component assignment on reversed g."""
    n = g.n
    m = g.m
    color1, order, color2, comp = _shared_layout(n)
    # local slots
    stack = 0
    sp = n
    iter1 = n + 1
    iter2 = 2 * n + 1
    ctr = 3 * n + 1
    phase = 3 * n + 2
    root = 3 * n + 3

    graph = InterconnectionGraph(1, frozenset(), frozenset({0}))
    local = [UNDEF] * (3 * n + 4)
    local[sp] = 0
    for u in range(n):
        local[iter1 + u] = 0
        local[iter2 + u] = 0
    local[ctr] = 0
    local[phase] = 1
    initial = MachineState((tuple(local),), (UNDEF,) * (4 * n), 0)

    def step(ctx):
        ph = as_index(ctx.own(phase))
        depth_sp = as_index(ctx.own(sp))
        if ph == 1:
            if depth_sp == 0:
                seed = next(
                    (v for v in range(n) if ctx.shared(color1 + v) is UNDEF), None
                )
                if seed is None:
                    return NodeUpdate(local={phase: 2})
                if not g.out_neighbors(seed):
                    count = as_index(ctx.own(ctr))
                    return NodeUpdate(
                        local={ctr: count + 1},
                        writes=((color1 + seed, True), (order + seed, count)),
                    )
                return NodeUpdate(
                    local={stack: seed, sp: 1}, writes=((color1 + seed, True),)
                )
            u = as_index(ctx.own(stack + depth_sp - 1))
            k = as_index(ctx.own(iter1 + u))
            out = g.out_neighbors(u)
            if k < len(out):
                w = out[k]
                if ctx.shared(color1 + w) is UNDEF:
                    if not g.out_neighbors(w):
                        count = as_index(ctx.own(ctr))
                        return NodeUpdate(
                            local={iter1 + u: k + 1, ctr: count + 1},
                            writes=((color1 + w, True), (order + w, count)),
                        )
                    return NodeUpdate(
                        local={iter1 + u: k + 1, stack + depth_sp: w, sp: depth_sp + 1},
                        writes=((color1 + w, True),),
                    )
                if k + 1 == len(out):
                    count = as_index(ctx.own(ctr))
                    return NodeUpdate(
                        local={iter1 + u: k + 1, sp: depth_sp - 1, ctr: count + 1},
                        writes=((order + u, count),),
                    )
                return NodeUpdate(local={iter1 + u: k + 1})
            count = as_index(ctx.own(ctr))
            return NodeUpdate(
                local={sp: depth_sp - 1, ctr: count + 1}, writes=((order + u, count),)
            )
        if ph == 2:
            if depth_sp == 0:
                seed = None
                best = -1
                for v in range(n):
                    if ctx.shared(color2 + v) is UNDEF:
                        rank = as_index(ctx.shared(order + v))
                        if rank > best:
                            best = rank
                            seed = v
                if seed is None:
                    return NodeUpdate(local={phase: 3})
                writes = ((color2 + seed, True), (comp + seed, seed))
                if not g.in_neighbors(seed):
                    return NodeUpdate(local={root: seed}, writes=writes)
                return NodeUpdate(
                    local={root: seed, stack: seed, sp: 1}, writes=writes
                )
            u = as_index(ctx.own(stack + depth_sp - 1))
            k = as_index(ctx.own(iter2 + u))
            out = g.in_neighbors(u)
            current_root = as_index(ctx.own(root))
            if k < len(out):
                w = out[k]
                if ctx.shared(color2 + w) is UNDEF:
                    writes = ((color2 + w, True), (comp + w, current_root))
                    if not g.in_neighbors(w):
                        return NodeUpdate(local={iter2 + u: k + 1}, writes=writes)
                    return NodeUpdate(
                        local={iter2 + u: k + 1, stack + depth_sp: w, sp: depth_sp + 1},
                        writes=writes,
                    )
                if k + 1 == len(out):
                    return NodeUpdate(local={iter2 + u: k + 1, sp: depth_sp - 1})
                return NodeUpdate(local={iter2 + u: k + 1})
            return NodeUpdate(local={sp: depth_sp - 1})
        return None

    trace = run_machine(
        initial,
        step,
        graph,
        lambda s: s.local[0][phase] == 3,
        2 * (n + m) + 6,
        algo_id="kosaraju",
        input_digest=stable_digest({"n": n, "edges": sorted(g.edges)}),
        candidates_fn=lambda s: (0,),
        instance_edges=g.edges,
    )
    shared = trace.states[-1].shared
    return tuple(as_index(shared[comp + u]) for u in range(n)), trace
