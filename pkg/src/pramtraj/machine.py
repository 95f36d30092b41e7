"""Synchronous priority-CRCW machine with per-layer activity recording.

The machine holds ``width`` processors, each with a fixed-size list of local
cells, plus a shared memory (the graph-level feature).  One step applies a
per-processor transition function synchronously: every processor reads the
*previous* state, all shared-memory writes of a step are resolved by the
priority rule (lowest processor index wins each address), and the step's
activity -- which nodes executed a non-identity operation, which edges
carried information into them -- is recorded.

Cells are plain Python values: ``float`` (scalar), ``int`` (node index),
``bool`` (flag), or the ``UNDEF`` sentinel.  Reading a cell through a typed
accessor enforces the variant; an ``UNDEF`` cell stores no information, so
reading one never records an active edge.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence, Union

GRAPH = -1  # pseudo endpoint for node <-> graph-feature (shared memory) traffic


class MachineError(Exception):
    """Base class for machine-level failures."""


class CellTypeError(MachineError):
    """A cell was interpreted as a variant it does not hold."""


class UndefinedValueError(CellTypeError):
    """An undefined cell was interpreted inside a non-identity operation."""


class NeighborhoodViolation(MachineError):
    """A transition read a processor outside its declared neighborhood."""


class StepLimitExceeded(MachineError):
    """The halt predicate never fired within the step budget."""


class _Undef:
    """Singleton sentinel distinguishable from every legal cell value."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "UNDEF"

    def __bool__(self) -> bool:
        raise UndefinedValueError("truth value of an undefined cell")


UNDEF = _Undef()

Cell = Union[float, int, bool, _Undef]


def is_undef(cell: Cell) -> bool:
    return cell is UNDEF


def as_scalar(cell: Cell) -> float:
    if type(cell) is float:
        return cell
    _bad_cell(cell, "scalar")


def as_index(cell: Cell) -> int:
    if type(cell) is int:
        return cell
    _bad_cell(cell, "index")


def as_flag(cell: Cell) -> bool:
    if type(cell) is bool:
        return cell
    _bad_cell(cell, "flag")


def _bad_cell(cell: Cell, wanted: str) -> None:
    if cell is UNDEF:
        raise UndefinedValueError(f"read of undefined cell where {wanted} expected")
    raise CellTypeError(f"cell {cell!r} is not a {wanted}")


class MachineState(NamedTuple):
    """Immutable snapshot: per-processor locals, shared memory, clock."""

    local: tuple[tuple[Cell, ...], ...]
    shared: tuple[Cell, ...]
    clock: int = 0

    @property
    def width(self) -> int:
        return len(self.local)


def fresh_state(width: int, slots: int, shared_size: int) -> MachineState:
    """All-UNDEF state; uninitialized reads then fail loudly."""
    row = (UNDEF,) * slots
    return MachineState((row,) * width, (UNDEF,) * shared_size, 0)


class WriteRequest(NamedTuple):
    proc_id: int
    address: int
    value: Cell


@dataclass(frozen=True)
class InterconnectionGraph:
    """Fixed communication topology; edge (i, j) lets j read i's state."""

    n: int
    edges: frozenset[tuple[int, int]]
    self_loops: frozenset[int] = frozenset()
    _in_nbrs: dict[int, frozenset[int]] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self edge ({i},{j}); use self_loops instead")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i},{j}) out of range for n={self.n}")
        for i in self.self_loops:
            if not 0 <= i < self.n:
                raise ValueError(f"self loop at {i} out of range for n={self.n}")
        incoming: dict[int, set[int]] = {i: set() for i in range(self.n)}
        for i, j in self.edges:
            incoming[j].add(i)
        frozen = {i: frozenset(s) for i, s in incoming.items()}
        object.__setattr__(self, "_in_nbrs", frozen)

    def in_neighbors(self, i: int) -> frozenset[int]:
        return self._in_nbrs[i]


@lru_cache(maxsize=None)
def complete_graph(n: int) -> InterconnectionGraph:
    edges = frozenset((i, j) for i in range(n) for j in range(n) if i != j)
    return InterconnectionGraph(n, edges, frozenset(range(n)))


@lru_cache(maxsize=None)
def star_graph(n_leaves: int) -> InterconnectionGraph:
    """Leaves 0..n-1 wired both ways to hub node n."""
    hub = n_leaves
    edges = frozenset((hub, i) for i in range(n_leaves)) | frozenset(
        (i, hub) for i in range(n_leaves)
    )
    return InterconnectionGraph(n_leaves + 1, edges, frozenset(range(n_leaves + 1)))


def symmetric_graph(n: int, directed_edges: Iterable[tuple[int, int]]) -> InterconnectionGraph:
    """Symmetric closure of a directed edge set, self loops everywhere."""
    sym: set[tuple[int, int]] = set()
    for u, v in directed_edges:
        sym.add((u, v))
        sym.add((v, u))
    return InterconnectionGraph(n, frozenset(sym), frozenset(range(n)))


class ActivityRecord(NamedTuple):
    """What happened at one layer.

    ``active_edges`` holds graph edges (including self loops) whose source
    cell was read, held a defined value, and fed an executed operation.
    Node <-> shared-memory traffic is kept apart in ``graph_edges`` as
    (GRAPH, i) reads and (i, GRAPH) write attempts; the shared-memory update
    itself is budgeted as one extra operation (``graph_op``).
    """

    step: int
    active_nodes: frozenset[int]
    active_edges: frozenset[tuple[int, int]]
    graph_edges: frozenset[tuple[int, int]]
    op_count: int
    graph_op: bool


@dataclass(frozen=True)
class Trace:
    """Full record of one run: T+1 state snapshots, T activity records."""

    algo_id: str
    width: int
    states: tuple[MachineState, ...]
    activity: tuple[ActivityRecord, ...]
    graph: InterconnectionGraph
    input_digest: str
    instance_edges: frozenset[tuple[int, int]] | None = None

    @property
    def depth(self) -> int:
        return len(self.activity)

    def __post_init__(self) -> None:
        if len(self.states) != len(self.activity) + 1:
            raise ValueError("trace must hold depth+1 state snapshots")
        if any(s.width != self.width for s in self.states):
            raise ValueError("trace width must be constant across states")


class NodeUpdate(NamedTuple):
    """Result of a non-identity operation: local overwrites + shared writes."""

    local: Mapping[int, Cell] | None = None
    writes: Sequence[tuple[int, Cell]] = ()


# an executed operation that changes nothing (e.g. a compare with no swap)
HOLD = NodeUpdate()


StepFn = Callable[["NodeContext"], NodeUpdate | None]


class NodeContext:
    """Read interface handed to one processor for one step.

    ``own``    -- this processor's previous cell, structural (not an edge).
    ``read``   -- a neighbor's previous cell; validated against the
                  interconnection graph and recorded as an active edge when
                  the cell holds a defined value.  ``read(pid, ...)`` needs a
                  self loop and records (pid, pid).
    ``shared`` -- shared memory; recorded as a graph-level pseudo edge.
    """

    __slots__ = ("pid", "clock", "_local", "_shared", "_graph", "edge_reads", "shared_read")

    def __init__(self, state: MachineState, graph: InterconnectionGraph, pid: int) -> None:
        self.pid = pid
        self.clock = state.clock
        self._local = state.local
        self._shared = state.shared
        self._graph = graph
        self.edge_reads: list[tuple[int, int]] = []
        self.shared_read = False

    def own(self, slot: int) -> Cell:
        return self._local[self.pid][slot]

    def own_index(self, slot: int) -> int:
        cell = self._local[self.pid][slot]
        if type(cell) is int:
            return cell
        _bad_cell(cell, "index")

    def own_scalar(self, slot: int) -> float:
        cell = self._local[self.pid][slot]
        if type(cell) is float:
            return cell
        _bad_cell(cell, "scalar")

    def read(self, j: int, slot: int) -> Cell:
        pid = self.pid
        if j == pid:
            if pid not in self._graph.self_loops:
                raise NeighborhoodViolation(f"node {pid} has no self loop")
        elif j not in self._graph._in_nbrs[pid]:
            raise NeighborhoodViolation(f"node {pid} may not read node {j}")
        cell = self._local[j][slot]
        if cell is not UNDEF:
            self.edge_reads.append((j, pid))
        return cell

    def read_scalar(self, j: int, slot: int) -> float:
        pid = self.pid
        if j == pid:
            if pid not in self._graph.self_loops:
                raise NeighborhoodViolation(f"node {pid} has no self loop")
        elif j not in self._graph._in_nbrs[pid]:
            raise NeighborhoodViolation(f"node {pid} may not read node {j}")
        cell = self._local[j][slot]
        if type(cell) is float:
            self.edge_reads.append((j, pid))
            return cell
        _bad_cell(cell, "scalar")

    def shared(self, addr: int) -> Cell:
        cell = self._shared[addr]
        if cell is not UNDEF:
            self.shared_read = True
        return cell

    def shared_index(self, addr: int) -> int:
        cell = self._shared[addr]
        if type(cell) is int:
            self.shared_read = True
            return cell
        _bad_cell(cell, "index")


def resolve_writes(requests: Sequence[WriteRequest]) -> list[tuple[int, Cell]]:
    """Priority CRCW: per address, the lowest requesting proc_id wins."""
    best: dict[int, WriteRequest] = {}
    for req in requests:
        cur = best.get(req.address)
        if cur is None or req.proc_id < cur.proc_id:
            best[req.address] = req
    return [(addr, best[addr].value) for addr in sorted(best)]


_EMPTY: frozenset = frozenset()


def step_machine(
    state: MachineState,
    step_fn: StepFn,
    graph: InterconnectionGraph,
    candidates: Iterable[int] | None = None,
) -> tuple[MachineState, ActivityRecord]:
    """One synchronous layer.

    ``candidates`` optionally restricts which processors are offered the step
    function; every other processor is identity by construction.  Returning
    ``None`` from ``step_fn`` means identity: the node is not active and its
    reads are discarded.
    """
    local_rows = state.local
    shared_cells = state.shared
    width = len(local_rows)
    if candidates is None:
        pids = range(width)
    else:
        if not isinstance(candidates, (list, tuple)):
            candidates = list(candidates)
        if len(candidates) == 2:
            a, b = candidates
            pids = (a, b) if a < b else ((b, a) if b < a else (a,))
        else:
            pids = sorted(set(candidates))
    new_local: list[tuple[Cell, ...]] | None = None
    # candidates run in ascending pid order, so the first write per address
    # is already the priority-CRCW winner
    winners: dict[int, Cell] | None = None
    active: list[int] = []
    edges: list[tuple[int, int]] = []
    gedges: list[tuple[int, int]] = []
    shared_len = len(shared_cells)

    for pid in pids:
        if not 0 <= pid < width:
            raise MachineError(f"candidate {pid} out of range")
        ctx = NodeContext(state, graph, pid)
        update = step_fn(ctx)
        if update is None:
            continue
        active.append(pid)
        if ctx.edge_reads:
            edges.extend(ctx.edge_reads)
        if ctx.shared_read:
            gedges.append((GRAPH, pid))
        local_update, writes = update
        if local_update:
            if new_local is None:
                new_local = list(local_rows)
            row = list(new_local[pid])
            for slot, value in local_update.items():
                if not 0 <= slot < len(row):
                    raise MachineError(f"local slot {slot} out of range at node {pid}")
                row[slot] = value
            new_local[pid] = tuple(row)
        if writes:
            if winners is None:
                winners = {}
            for addr, value in writes:
                if not 0 <= addr < shared_len:
                    raise MachineError(f"shared address {addr} out of range at node {pid}")
                if addr not in winners:
                    winners[addr] = value
                gedges.append((pid, GRAPH))

    if winners:
        cells = list(shared_cells)
        for addr, value in winners.items():
            cells[addr] = value
        new_shared = tuple(cells)
    else:
        new_shared = shared_cells

    next_state = MachineState(
        tuple(new_local) if new_local is not None else local_rows,
        new_shared,
        state.clock + 1,
    )
    record = ActivityRecord(
        state.clock + 1,
        frozenset(active) if active else _EMPTY,
        frozenset(edges) if edges else _EMPTY,
        frozenset(gedges) if gedges else _EMPTY,
        len(active) + (1 if winners else 0),
        winners is not None,
    )
    return next_state, record


def run_machine(
    initial: MachineState,
    step_fn: StepFn,
    graph: InterconnectionGraph,
    halt_predicate: Callable[[MachineState], bool],
    max_steps: int,
    *,
    algo_id: str = "",
    input_digest: str = "",
    candidates_fn: Callable[[MachineState], Iterable[int]] | None = None,
    instance_edges: frozenset[tuple[int, int]] | None = None,
) -> Trace:
    """Step until the halt predicate fires; deterministic for fixed inputs."""
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    states = [initial]
    activity: list[ActivityRecord] = []
    state = initial
    while not halt_predicate(state):
        if len(activity) >= max_steps:
            raise StepLimitExceeded(
                f"{algo_id or 'run'} did not halt within {max_steps} steps"
            )
        cands = candidates_fn(state) if candidates_fn is not None else None
        state, record = step_machine(state, step_fn, graph, cands)
        states.append(state)
        activity.append(record)
    return Trace(
        algo_id=algo_id,
        width=initial.width,
        states=tuple(states),
        activity=tuple(activity),
        graph=graph,
        input_digest=input_digest,
        instance_edges=instance_edges,
    )


class _RecordingContext(NodeContext):
    """NodeContext that also logs (source, slot, value) per read; test support."""

    __slots__ = ("log",)

    def __init__(self, state: MachineState, graph: InterconnectionGraph, pid: int) -> None:
        super().__init__(state, graph, pid)
        self.log: list[tuple[int, int, Cell]] = []

    def read(self, j: int, slot: int) -> Cell:
        cell = super().read(j, slot)
        self.log.append((j, slot, cell))
        return cell

    def read_scalar(self, j: int, slot: int) -> float:
        cell = self.read(j, slot)
        if type(cell) is float:
            return cell
        _bad_cell(cell, "scalar")


def probe_step_reads(
    state: MachineState,
    step_fn: StepFn,
    graph: InterconnectionGraph,
    candidates: Iterable[int] | None = None,
) -> dict[int, list[tuple[int, int, Cell]]]:
    """Re-run one step capturing, per active node, every neighbor read.

    Supports the active-edge soundness check: perturbing the source of a
    recorded edge must be able to change the target's inputs, perturbing any
    other defined cell must not.
    """
    width = len(state.local)
    pids = range(width) if candidates is None else sorted(set(candidates))
    reads: dict[int, list[tuple[int, int, Cell]]] = {}
    for pid in pids:
        ctx = _RecordingContext(state, graph, pid)
        if step_fn(ctx) is not None:
            reads[pid] = ctx.log
    return reads


def operated_edge_count(trace: Trace) -> int:
    """Edge count of the operated graph: the instance's directed edges when
    the trace carries them, otherwise the interconnection edges (self loops
    are kept out of the denominator either way)."""
    if trace.instance_edges is not None:
        return len(trace.instance_edges)
    return len(trace.graph.edges)


def mapped_edge_count(trace: Trace, record: ActivityRecord) -> int:
    """Active edges of one layer, counted against the operated graph.

    Plain tasks count the recorded channels directly (self loops included
    when an algorithm declared them).  Traces tied to a directed instance
    fold each channel onto the instance edge it traverses, so an edge used
    in both directions in one layer counts once and a(t) <= m holds.
    """
    if trace.instance_edges is None:
        return len(record.active_edges)
    edges = trace.instance_edges
    used = set()
    for u, v in record.active_edges:
        if (u, v) in edges:
            used.add((u, v))
        elif (v, u) in edges:
            used.add((v, u))
    return len(used)


def stable_digest(payload: object) -> str:
    """Deterministic short digest of a JSON-representable input description."""
    text = json.dumps(payload, sort_keys=True, default=repr)
    return hashlib.blake2b(text.encode("utf-8"), digest_size=8).hexdigest()
