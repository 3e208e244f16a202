"""Finite simple graphs on dense integer vertices, generators, and metrics."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union


class GraphError(ValueError):
    pass


class EdgeListParseError(GraphError):
    def __init__(self, message: str, line_no: Optional[int] = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with sorted adjacency tuples.

    Instances are immutable; BFS results are memoised per source.
    """

    vertex_count: int
    adjacency: Tuple[Tuple[int, ...], ...]
    _dist: Dict[int, Tuple[Optional[int], ...]] = field(
        default_factory=dict, init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        if self.vertex_count != len(self.adjacency):
            raise GraphError("adjacency length must equal vertex_count")
        for u, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise GraphError(f"adjacency of {u} must be sorted without duplicates")
            for v in nbrs:
                if v == u:
                    raise GraphError(f"self-loop at {u}")
                if not 0 <= v < self.vertex_count:
                    raise GraphError(f"neighbor {v} of {u} out of range")
                if u not in self.adjacency[v]:
                    raise GraphError(f"edge ({u},{v}) is not symmetric")

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def edges(self) -> List[Tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, lexicographically sorted."""
        return [(u, v) for u in range(self.vertex_count) for v in self.adjacency[u] if u < v]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def distance(self, u: int, v: int) -> Optional[int]:
        """Shortest-path length, or ``None`` when ``v`` is unreachable from ``u``."""
        return distances_from(self, u)[v]

    def regular_degree(self) -> Optional[int]:
        degrees = {len(a) for a in self.adjacency}
        return degrees.pop() if len(degrees) == 1 else None


def from_edge_list(pairs: Iterable[Tuple[int, int]], vertex_count: Optional[int] = None) -> Graph:
    pairs = [(int(u), int(v)) for u, v in pairs]
    for u, v in pairs:
        if u < 0 or v < 0:
            raise GraphError(f"negative vertex index in ({u},{v})")
        if u == v:
            raise GraphError(f"self-loop ({u},{u})")
    top = 1 + max((max(u, v) for u, v in pairs), default=-1)
    if vertex_count is None:
        vertex_count = top
    elif top > vertex_count:
        raise GraphError(f"vertex index {top - 1} >= declared vertex count {vertex_count}")
    adj: List[set] = [set() for _ in range(vertex_count)]
    for u, v in pairs:
        adj[u].add(v)
        adj[v].add(u)
    return Graph(vertex_count, tuple(tuple(sorted(a)) for a in adj))


def distances_from(g: Graph, source: int) -> Tuple[Optional[int], ...]:
    """BFS distances from ``source``; unreachable vertices map to ``None``."""
    if not 0 <= source < g.vertex_count:
        raise GraphError(f"source {source} out of range")
    cached = g._dist.get(source)
    if cached is not None:
        return cached
    dist: List[Optional[int]] = [None] * g.vertex_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] is None:
                dist[w] = dist[u] + 1
                queue.append(w)
    out = tuple(dist)
    g._dist[source] = out
    return out


def girth(g: Graph) -> Optional[int]:
    """Length of a shortest cycle, ``None`` for forests."""
    best = None
    for root in range(g.vertex_count):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] + 1 >= best:
                break
            for w in g.adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    length = dist[u] + dist[w] + 1
                    if best is None or length < best:
                        best = length
    return best


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """``g x h`` with vertex ``(a, b)`` encoded as ``a * |V(h)| + b``."""
    if g.vertex_count == 0 or h.vertex_count == 0:
        raise GraphError("cartesian product needs nonempty factors")
    nh = h.vertex_count
    pairs = []
    for a in range(g.vertex_count):
        for b, b2 in h.edges():
            pairs.append((a * nh + b, a * nh + b2))
    for a, a2 in g.edges():
        for b in range(nh):
            pairs.append((a * nh + b, a2 * nh + b))
    return from_edge_list(pairs, g.vertex_count * nh)


# -- generators ---------------------------------------------------------------

def path(n: int) -> Graph:
    _at_least("path", n, 1)
    return from_edge_list([(i, i + 1) for i in range(n - 1)], n)


def cycle(n: int) -> Graph:
    _at_least("cycle", n, 3)
    return from_edge_list([(i, (i + 1) % n) for i in range(n)], n)


def complete(n: int) -> Graph:
    _at_least("complete", n, 3)
    return from_edge_list(itertools.combinations(range(n), 2), n)


def star(n: int) -> Graph:
    """Center 0 joined to leaves ``1..n``."""
    _at_least("star", n, 3)
    return from_edge_list([(0, i) for i in range(1, n + 1)], n + 1)


def hypercube(d: int) -> Graph:
    _at_least("hypercube", d, 1)
    n = 1 << d
    return from_edge_list([(v, v ^ (1 << b)) for v in range(n) for b in range(d) if v < v ^ (1 << b)], n)


def generalized_petersen(n: int, k: int) -> Graph:
    outer = [(i, (i + 1) % n) for i in range(n)]
    spokes = [(i, n + i) for i in range(n)]
    inner = [(n + i, n + (i + k) % n) for i in range(n)]
    return from_edge_list(outer + spokes + inner, 2 * n)


def petersen() -> Graph:
    return generalized_petersen(5, 2)


def dodecahedral() -> Graph:
    # GP(10, 2) is the dodecahedron skeleton
    return generalized_petersen(10, 2)


FAMILIES = {
    "path": path,
    "cycle": cycle,
    "complete": complete,
    "star": star,
    "hypercube": hypercube,
    "petersen": petersen,
    "dodecahedral": dodecahedral,
}
_NULLARY = {"petersen", "dodecahedral"}


def generate(family: str, param: Optional[int] = None) -> Graph:
    if family not in FAMILIES:
        raise GraphError(f"unknown graph family {family!r}")
    if family in _NULLARY:
        if param is not None:
            raise GraphError(f"{family} takes no parameter")
        return FAMILIES[family]()
    if param is None:
        raise GraphError(f"{family} needs an integer parameter")
    return FAMILIES[family](param)


def _at_least(name: str, value: int, minimum: int) -> None:
    if not isinstance(value, int) or value < minimum:
        raise GraphError(f"{name} parameter must be an integer >= {minimum}, got {value!r}")


def from_spec(spec: str) -> Graph:
    """Build a graph from ``cycle:5``, ``petersen``, ``product:cycle:3,cycle:4``."""
    spec = spec.strip()
    if spec.startswith("product:"):
        parts = spec[len("product:"):].split(",")
        if len(parts) < 2:
            raise GraphError(f"product needs at least two factors: {spec!r}")
        out = from_spec(parts[0])
        for part in parts[1:]:
            out = cartesian_product(out, from_spec(part))
        return out
    family, sep, arg = spec.partition(":")
    if not sep:
        return generate(family)
    try:
        value = int(arg)
    except ValueError:
        raise GraphError(f"bad parameter {arg!r} in graph spec {spec!r}") from None
    return generate(family, value)


# -- edge-list files ----------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    declared = None
    pairs = []
    seen_edge = False
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "vertices":
            if seen_edge or declared is not None:
                raise EdgeListParseError("'vertices' directive must come first", no)
            if len(tokens) != 2:
                raise EdgeListParseError("expected 'vertices N'", no)
            try:
                declared = int(tokens[1])
            except ValueError:
                raise EdgeListParseError(f"bad vertex count {tokens[1]!r}", no) from None
            if declared < 0:
                raise EdgeListParseError("vertex count must be nonnegative", no)
            continue
        if len(tokens) != 2:
            raise EdgeListParseError(f"expected 'u v', got {line!r}", no)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListParseError(f"non-integer vertex in {line!r}", no) from None
        if u < 0 or v < 0:
            raise EdgeListParseError(f"negative vertex in {line!r}", no)
        if u == v:
            raise EdgeListParseError(f"self-loop {u} {v}", no)
        seen_edge = True
        pairs.append((u, v))
    try:
        return from_edge_list(pairs, declared)
    except GraphError as exc:
        raise EdgeListParseError(str(exc)) from None


def format_edge_list(g: Graph) -> str:
    lines = [f"vertices {g.vertex_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_edge_list(path: Union[str, Path]) -> Graph:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"))


def write_edge_list(g: Graph, path: Union[str, Path]) -> None:
    Path(path).write_text(format_edge_list(g), encoding="utf-8")
