"""Directed graphs with loops, MBAN validity checks and the ``mban`` text format.

A graph is stored by in-neighbourhoods: ``in_neighbors[v]`` is the strictly
ascending tuple of vertices ``u`` with an arc ``u -> v``.  Vertex ``v`` may list
itself (a loop).  Parallel arcs are not representable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import GraphFormatError


@dataclass(frozen=True)
class DiGraph:
    """Immutable simple digraph with loops on vertices ``0..n-1``."""

    in_neighbors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.in_neighbors)
        fixed = []
        for v, nbrs in enumerate(self.in_neighbors):
            nbrs = tuple(int(u) for u in nbrs)
            for a, b in zip(nbrs, nbrs[1:]):
                if a >= b:
                    raise ValueError(f"in-neighbours of {v} are not strictly ascending: {nbrs}")
            if nbrs and not (0 <= nbrs[0] and nbrs[-1] < n):
                raise ValueError(f"in-neighbour of {v} out of range [0, {n}): {nbrs}")
            fixed.append(nbrs)
        object.__setattr__(self, "in_neighbors", tuple(fixed))

    @classmethod
    def from_lists(cls, lists: Iterable[Iterable[int]]) -> "DiGraph":
        """Build from arbitrary in-neighbour iterables (sorted, duplicates rejected)."""
        out = []
        for v, nbrs in enumerate(lists):
            nbrs = list(nbrs)
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"duplicate in-neighbour for vertex {v}")
            out.append(tuple(sorted(nbrs)))
        return cls(tuple(out))

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "DiGraph":
        """Build from ``(source, target)`` pairs; repeated arcs are merged."""
        sets: list[set[int]] = [set() for _ in range(n)]
        for u, v in arcs:
            sets[v].add(u)
        return cls(tuple(tuple(sorted(s)) for s in sets))

    @property
    def n(self) -> int:
        return len(self.in_neighbors)

    def __len__(self) -> int:
        return len(self.in_neighbors)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """In-neighbourhoods as bitmasks (bit ``u`` set iff ``u -> v``)."""
        return tuple(sum(1 << u for u in nbrs) for nbrs in self.in_neighbors)

    @cached_property
    def indegrees(self) -> tuple[int, ...]:
        return tuple(len(nbrs) for nbrs in self.in_neighbors)

    @cached_property
    def out_neighbors(self) -> tuple[tuple[int, ...], ...]:
        outs: list[list[int]] = [[] for _ in range(self.n)]
        for v, nbrs in enumerate(self.in_neighbors):
            for u in nbrs:
                outs[u].append(v)
        return tuple(tuple(o) for o in outs)

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for v, nbrs in enumerate(self.in_neighbors) for u in nbrs]

    def is_valid_mban(self) -> bool:
        """True when every in-degree is odd (hence positive)."""
        return all(d % 2 == 1 for d in self.indegrees)


@dataclass(frozen=True)
class ValidationReport:
    indegrees_all_odd: bool
    indegrees_all_positive: bool
    strongly_connected: bool
    vertex_count_odd: bool
    offending_vertices: tuple[int, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return (
            self.indegrees_all_odd
            and self.indegrees_all_positive
            and self.strongly_connected
            and self.vertex_count_odd
        )


def strongly_connected_components(g: DiGraph) -> list[list[int]]:
    """Tarjan's algorithm, iterative; components in reverse topological order."""
    n = g.n
    succ = g.out_neighbors
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def is_strongly_connected(g: DiGraph) -> bool:
    return g.n == 0 or len(strongly_connected_components(g)) == 1


def validate_mban(g: DiGraph) -> ValidationReport:
    """Check the structural conditions an MBAN solving the DCT must meet.

    The report is advisory; nothing here raises.  ``offending_vertices`` lists
    vertices with even or zero in-degree and, when the graph is not strongly
    connected, every vertex outside the component of vertex 0.
    """
    bad_degree = [v for v, d in enumerate(g.indegrees) if d % 2 == 0]
    comps = strongly_connected_components(g)
    strongly = len(comps) <= 1
    offending = set(bad_degree)
    if not strongly:
        home = next(c for c in comps if 0 in c)
        offending.update(v for v in range(g.n) if v not in home)
    return ValidationReport(
        indegrees_all_odd=not bad_degree,
        indegrees_all_positive=all(d > 0 for d in g.indegrees),
        strongly_connected=strongly,
        vertex_count_odd=g.n % 2 == 1,
        offending_vertices=tuple(sorted(offending)),
    )


# -- text format -------------------------------------------------------------


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_graph(text: str) -> DiGraph:
    """Parse the ``mban <n>`` format (one ``v: u1 u2 ...`` line per vertex)."""
    n = None
    lists: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        if n is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "mban" or not parts[1].isdigit():
                raise GraphFormatError(f"expected header 'mban <n>', got {raw!r}", lineno)
            n = int(parts[1])
            continue
        head, sep, tail = line.partition(":")
        if not sep or not head.strip().isdigit():
            raise GraphFormatError(f"expected '<v>: <in-neighbours>', got {raw!r}", lineno)
        v = int(head)
        if v != len(lists):
            raise GraphFormatError(f"vertex {v} out of order (expected {len(lists)})", lineno)
        if v >= n:
            raise GraphFormatError(f"vertex {v} out of range [0, {n})", lineno)
        try:
            nbrs = [int(tok) for tok in tail.split()]
        except ValueError:
            raise GraphFormatError(f"non-integer in-neighbour in {raw!r}", lineno) from None
        for u in nbrs:
            if not 0 <= u < n:
                raise GraphFormatError(f"in-neighbour {u} out of range [0, {n})", lineno)
        if len(set(nbrs)) != len(nbrs):
            raise GraphFormatError(f"duplicate in-neighbour for vertex {v}", lineno)
        if nbrs != sorted(nbrs):
            raise GraphFormatError(f"in-neighbours of {v} not ascending", lineno)
        lists.append(tuple(nbrs))
    if n is None:
        raise GraphFormatError("missing 'mban <n>' header")
    if len(lists) != n:
        raise GraphFormatError(f"expected {n} vertex lines, found {len(lists)}")
    return DiGraph(tuple(lists))


def format_graph(g: DiGraph) -> str:
    lines = [f"mban {g.n}"]
    for v, nbrs in enumerate(g.in_neighbors):
        lines.append(f"{v}: " + " ".join(map(str, nbrs)) if nbrs else f"{v}:")
    return "\n".join(lines) + "\n"


# -- a few standard graphs used throughout -----------------------------------


def clique_with_loops(n: int) -> DiGraph:
    return DiGraph(tuple(tuple(range(n)) for _ in range(n)))


def rotation(n: int) -> DiGraph:
    """Directed cycle ``v-1 -> v``: every vertex copies its predecessor."""
    return DiGraph(tuple(((v - 1) % n,) for v in range(n)))


def hub(n: int, h: int = 0) -> DiGraph:
    """Every vertex (``h`` included) has the single in-neighbour ``h``."""
    return DiGraph(tuple((h,) for _ in range(n)))


def subset_mask(members: Iterable[int]) -> int:
    mask = 0
    for v in members:
        mask |= 1 << v
    return mask


def mask_members(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def undirected_neighbors(n: int, edges: Sequence[tuple[int, int]]) -> list[set[int]]:
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop {u} in undirected graph")
        nbrs[u].add(v)
        nbrs[v].add(u)
    return nbrs


def parse_edge_list(text: str) -> tuple[int, list[tuple[int, int]]]:
    """Parse an undirected graph: header ``graph <n>`` then ``u v`` lines."""
    n = None
    edges: list[tuple[int, int]] = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "graph" or not parts[1].isdigit():
                raise GraphFormatError(f"expected header 'graph <n>', got {raw!r}", lineno)
            n = int(parts[1])
            continue
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphFormatError(f"expected 'u v', got {raw!r}", lineno)
        u, v = int(parts[0]), int(parts[1])
        if not (u < n and v < n) or u == v:
            raise GraphFormatError(f"bad edge {u} {v}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {u} {v}", lineno)
        seen.add(key)
        edges.append(key)
    if n is None:
        raise GraphFormatError("missing 'graph <n>' header")
    return n, edges


def format_edge_list(n: int, edges: Sequence[tuple[int, int]]) -> str:
    return "\n".join([f"graph {n}"] + [f"{u} {v}" for u, v in edges]) + "\n"
