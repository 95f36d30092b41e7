"""Searching pair: one-shot priority-write search vs. binary search.

Both operate on a descending list with an extra node carrying the query, and
both return the rank ``min{i : items[i] <= x}`` (``n`` when no item
qualifies, i.e. the query-node category).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..machine import (
    NodeUpdate,
    UNDEF,
    as_index,
    as_scalar,
    complete_graph,
    run_machine,
    stable_digest,
    star_graph,
    MachineState,
    Trace,
)

ITEM = 0
MASK = 1

# shared-memory layout for binary search
LO, HI, MID, RANK = 0, 1, 2, 3


@dataclass(frozen=True)
class SearchInstance:
    """Strictly descending items plus a query value."""

    items: tuple[float, ...]
    x: float

    def __post_init__(self) -> None:
        if len(self.items) < 1:
            raise ValueError("need at least one item")
        for a, b in zip(self.items, self.items[1:]):
            if not a > b:
                raise ValueError("items must be strictly descending")

    @property
    def n(self) -> int:
        return len(self.items)


def parallel_search(inst: SearchInstance) -> tuple[int, Trace]:
    """Constant-depth search: mask layer, then a priority write of the rank.

    Step 1: every item node computes ``max(item - x, 0)`` after reading the
    query from the extra node.  Step 2: nodes whose mask is zero race to
    write their index to the shared rank cell; the query node writes ``n`` as
    the not-found category and loses to any item node by priority.
    """
    n = inst.n
    xnode = n
    graph = star_graph(n)
    local = tuple((item, UNDEF) for item in inst.items) + ((inst.x, UNDEF),)
    initial = MachineState(local, (UNDEF,), 0)

    def step(ctx):
        if ctx.clock == 0:
            if ctx.pid == xnode:
                return None
            item = as_scalar(ctx.own(ITEM))
            x = as_scalar(ctx.read(xnode, ITEM))
            return NodeUpdate(local={MASK: max(item - x, 0.0)})
        if ctx.pid == xnode:
            return NodeUpdate(writes=((0, xnode),))
        if as_scalar(ctx.own(MASK)) == 0.0:
            return NodeUpdate(writes=((0, ctx.pid),))
        return None

    trace = run_machine(
        initial,
        step,
        graph,
        lambda s: s.clock >= 2,
        2,
        algo_id="parallel_search",
        input_digest=stable_digest({"items": inst.items, "x": inst.x}),
    )
    rank = as_index(trace.states[-1].shared[0])
    return rank, trace


def binary_search(inst: SearchInstance) -> tuple[int, Trace]:
    """Halving search over the shared [lo, hi) window, one probe per layer."""
    n = inst.n
    xnode = n
    graph = complete_graph(n + 1)
    local = tuple((item,) for item in inst.items) + ((inst.x,),)
    initial = MachineState(local, (0, n, UNDEF, UNDEF), 0)

    def candidates(state):
        lo = state.shared[LO]
        hi = state.shared[HI]
        return ((lo + hi) // 2,)

    def step(ctx):
        lo = as_index(ctx.shared(LO))
        hi = as_index(ctx.shared(HI))
        mid = (lo + hi) // 2
        if ctx.pid != mid:
            return None
        item = as_scalar(ctx.own(ITEM))
        x = as_scalar(ctx.read(xnode, ITEM))
        if item <= x:
            hi = mid
        else:
            lo = mid + 1
        writes = [(LO, lo), (HI, hi), (MID, mid)]
        if lo == hi:
            writes.append((RANK, lo))
        return NodeUpdate(writes=tuple(writes))

    trace = run_machine(
        initial,
        step,
        graph,
        lambda s: s.shared[LO] == s.shared[HI],
        n + 1,
        algo_id="binary_search",
        input_digest=stable_digest({"items": inst.items, "x": inst.x}),
        candidates_fn=candidates,
    )
    rank = as_index(trace.states[-1].shared[RANK])
    return rank, trace
