"""Directed graph instances and a machine-independent SCC reference."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Digraph:
    """Directed graph on nodes 0..n-1; instances carry no self loops."""

    n: int
    edges: frozenset[tuple[int, int]]
    _out: dict[int, tuple[int, ...]] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )
    _in: dict[int, tuple[int, ...]] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("digraph needs at least one node")
        out: dict[int, list[int]] = {u: [] for u in range(self.n)}
        inc: dict[int, list[int]] = {u: [] for u in range(self.n)}
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self loop at node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
            out[u].append(v)
            inc[v].append(u)
        object.__setattr__(self, "_out", {u: tuple(sorted(vs)) for u, vs in out.items()})
        object.__setattr__(self, "_in", {u: tuple(sorted(vs)) for u, vs in inc.items()})

    @property
    def m(self) -> int:
        return len(self.edges)

    def out_neighbors(self, u: int) -> tuple[int, ...]:
        return self._out[u]

    def in_neighbors(self, u: int) -> tuple[int, ...]:
        return self._in[u]

    def reversed(self) -> "Digraph":
        return Digraph(self.n, frozenset((v, u) for u, v in self.edges))

    def undirected(self) -> "Digraph":
        sym = frozenset((u, v) for u, v in self.edges) | frozenset(
            (v, u) for u, v in self.edges
        )
        return Digraph(self.n, sym)


def tarjan_scc(g: Digraph) -> list[frozenset[int]]:
    """Strongly connected components via iterative Tarjan.

    Reference oracle: independent of the machine substrate, usable to check
    both machine-hosted SCC algorithms.
    """
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    counter = 0
    components: list[frozenset[int]] = []

    for root in range(g.n):
        if root in index:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            node, ptr = work.pop()
            if ptr == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            out = g.out_neighbors(node)
            advanced = False
            while ptr < len(out):
                succ = out[ptr]
                ptr += 1
                if succ not in index:
                    work.append((node, ptr))
                    work.append((succ, 0))
                    advanced = True
                    break
                if succ in on_stack:
                    low[node] = min(low[node], index[succ])
            if advanced:
                continue
            if low[node] == index[node]:
                comp = set()
                while True:
                    top = stack.pop()
                    on_stack.discard(top)
                    comp.add(top)
                    if top == node:
                        break
                components.append(frozenset(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return components


def partition_key(components: list[frozenset[int]]) -> frozenset[frozenset[int]]:
    """Order-insensitive view of a component list, for equality checks."""
    return frozenset(components)


def pointers_to_partition(scc_ptr: tuple[int, ...]) -> frozenset[frozenset[int]]:
    groups: dict[int, set[int]] = {}
    for node, rep in enumerate(scc_ptr):
        groups.setdefault(rep, set()).add(node)
    return frozenset(frozenset(s) for s in groups.values())
