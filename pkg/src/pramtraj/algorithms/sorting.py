"""Sorting pair: odd-even transposition rounds vs. single-comparison bubble.

Nodes keep their items for good; sorting rearranges chain *positions*.  The
shared memory holds the position table (position -> node id), which is how a
node locates the partner it must compare with on the complete graph.  The
emitted output is the predecessor pointer per node along the final chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..machine import (
    HOLD,
    MachineState,
    NodeUpdate,
    Trace,
    UNDEF,
    complete_graph,
    run_machine,
    stable_digest,
)

ITEM = 0
POSN = 1


@dataclass(frozen=True)
class SortInstance:
    """Items to sort; duplicates allowed, node i starts at chain position i."""

    items: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.items) < 1:
            raise ValueError("need at least one item")

    @property
    def n(self) -> int:
        return len(self.items)


def predecessors_from_table(table: tuple[int, ...]) -> tuple[int, ...]:
    """Chain pointers: node at position k points at position k-1, head at itself."""
    pred = [0] * len(table)
    pred[table[0]] = table[0]
    for k in range(1, len(table)):
        pred[table[k]] = table[k - 1]
    return tuple(pred)


def chain_order(pred: tuple[int, ...]) -> list[int]:
    """Decode a predecessor chain back into position order."""
    n = len(pred)
    succ = {}
    head = None
    for node, p in enumerate(pred):
        if p == node:
            head = node
        else:
            succ[p] = node
    if head is None:
        raise ValueError("chain has no head")
    order = [head]
    while len(order) < n:
        order.append(succ[order[-1]])
    return order


def _position_table(state: MachineState, n: int) -> tuple[int, ...]:
    return state.shared[:n]


def oets_machine(inst: SortInstance):
    """Machine pieces for one odd-even transposition run:
    (initial state, step fn, candidates fn, halt fn, interconnection)."""
    n = inst.n
    graph = complete_graph(n)
    last_swap = n  # shared address behind the position table
    local = tuple((item, i) for i, item in enumerate(inst.items))
    initial = MachineState(local, tuple(range(n)) + (UNDEF,), 0)

    def candidates(state):
        phase = state.clock % 2
        table = state.shared
        out = []
        for k in range(phase, n - 1, 2):
            out.append(table[k])
            out.append(table[k + 1])
        return out

    def step(ctx):
        phase = ctx.clock % 2
        pos = ctx.own_index(POSN)
        mine = ctx.own_scalar(ITEM)
        if (pos - phase) % 2 == 0:
            if pos + 1 >= n:
                return None
            partner = ctx.shared_index(pos + 1)
            other = ctx.read_scalar(partner, ITEM)
            if mine > other:
                return NodeUpdate(
                    local={POSN: pos + 1},
                    writes=((pos + 1, ctx.pid), (last_swap, ctx.clock)),
                )
            return HOLD
        partner = ctx.shared_index(pos - 1)
        other = ctx.read_scalar(partner, ITEM)
        if other > mine:
            return NodeUpdate(
                local={POSN: pos - 1},
                writes=((pos - 1, ctx.pid), (last_swap, ctx.clock)),
            )
        return HOLD

    def halt(state):
        c = state.clock
        if c >= n:
            return True
        if c < 2:
            return False
        last = state.shared[last_swap]
        return last is UNDEF or last <= c - 3

    return initial, step, candidates, halt, graph


def oets_sort(inst: SortInstance) -> tuple[tuple[int, ...], Trace]:
    """Odd-even transposition sort.

    Round r pairs adjacent chain positions starting at ``r % 2``; both pair
    members compare across the pair's two directed edges and swap positions
    when out of order.  Swapping pairs stamp the round index into a shared
    cell so the halt predicate can see two consecutive swap-free rounds;
    rounds are capped at n either way.
    """
    n = inst.n
    initial, step, candidates, halt, graph = oets_machine(inst)
    trace = run_machine(
        initial,
        step,
        graph,
        halt,
        n,
        algo_id="oets",
        input_digest=stable_digest({"items": inst.items}),
        candidates_fn=candidates,
    )
    pred = predecessors_from_table(_position_table(trace.states[-1], n))
    return pred, trace


@lru_cache(maxsize=None)
def bubble_schedule(n: int) -> tuple[tuple[int, int], ...]:
    """Fixed comparison schedule: pass i probes positions (j, j+1)."""
    return tuple((i, j) for i in range(n - 1) for j in range(n - 1 - i))


def bubble_sort(inst: SortInstance) -> tuple[tuple[int, ...], Trace]:
    """One adjacent comparison per layer over the full fixed schedule.

    No early exit: depth is exactly n(n-1)/2, the reproducible worst case.
    The cursor of a layer (pass index, compared slot) is a pure function of
    the clock via the schedule.
    """
    n = inst.n
    graph = complete_graph(n)
    schedule = bubble_schedule(n)
    local = tuple((item, i) for i, item in enumerate(inst.items))
    initial = MachineState(local, tuple(range(n)), 0)

    def candidates(state):
        _, j = schedule[state.clock]
        return (state.shared[j], state.shared[j + 1])

    def step(ctx):
        _, j = schedule[ctx.clock]
        pos = ctx.own_index(POSN)
        mine = ctx.own_scalar(ITEM)
        if pos == j:
            partner = ctx.shared_index(j + 1)
            other = ctx.read_scalar(partner, ITEM)
            if mine > other:
                return NodeUpdate(local={POSN: pos + 1}, writes=((j + 1, ctx.pid),))
            return HOLD
        partner = ctx.shared_index(j)
        other = ctx.read_scalar(partner, ITEM)
        if other > mine:
            return NodeUpdate(local={POSN: pos - 1}, writes=((j, ctx.pid),))
        return HOLD

    total = len(schedule)
    trace = run_machine(
        initial,
        step,
        graph,
        lambda s: s.clock >= total,
        max(total, 1),
        algo_id="bubble_sort",
        input_digest=stable_digest({"items": inst.items}),
        candidates_fn=candidates,
    )
    pred = predecessors_from_table(_position_table(trace.states[-1], n))
    return pred, trace
