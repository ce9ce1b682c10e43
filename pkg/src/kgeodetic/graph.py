"""Undirected multigraphs and the geodetic machinery built on them.

Vertices are the integers ``0..n-1``; ``labels[i]`` carries the caller's
identifier for vertex ``i``. Edges are unordered pairs stored as ``(i, j)``
with ``i <= j``. Loops and parallel edges are allowed so that smoothing can
be closed over the type, but every threshold graph is simple.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import DisconnectedGraph, NonSimpleGraph, SizeCapExceeded

DEFAULT_ISO_CAP = 16


@dataclass(frozen=True)
class Graph:
    labels: tuple
    edges: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(labels) < 1:
            raise ValueError("a graph needs at least one vertex")
        n = len(labels)
        edges = []
        for e in self.edges:
            u, v = (int(x) for x in e)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {e!r} references a missing vertex")
            edges.append((u, v) if u <= v else (v, u))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "edges", tuple(sorted(edges)))

    @classmethod
    def from_edges(cls, n_or_labels: int | Sequence[Hashable], edges: Iterable) -> "Graph":
        labels = tuple(range(n_or_labels)) if isinstance(n_or_labels, int) else tuple(n_or_labels)
        return cls(labels, tuple(edges))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def simple(self) -> bool:
        return all(u != v for u, v in self.edges) and len(set(self.edges)) == len(self.edges)

    @cached_property
    def multiplicity(self) -> np.ndarray:
        """n x n edge-multiplicity matrix; the diagonal counts loops."""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] += 1
            if u != v:
                a[v, u] += 1
        return a

    @cached_property
    def neighbors(self) -> tuple:
        nb = [set() for _ in range(self.n)]
        for u, v in self.edges:
            if u != v:
                nb[u].add(v)
                nb[v].add(u)
        return tuple(frozenset(s) for s in nb)

    @cached_property
    def degrees(self) -> tuple:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in self.neighbors[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.n

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for s in range(self.n):
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            stack = [s]
            while stack:
                u = stack.pop()
                for v in self.neighbors[u]:
                    if v not in seen:
                        seen.add(v)
                        comp.append(v)
                        stack.append(v)
            comps.append(sorted(comp))
        return comps

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph, vertices renumbered in increasing order."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(tuple(self.labels[v] for v in keep), tuple(edges))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Vertex ``i`` becomes ``perm[i]``; labels travel with their vertices."""
        labels = [None] * self.n
        for i, p in enumerate(perm):
            labels[p] = self.labels[i]
        return Graph(tuple(labels), tuple((perm[u], perm[v]) for u, v in self.edges))

    def to_json(self) -> dict:
        return {"vertices": list(self.labels), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj: dict | str) -> "Graph":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(tuple(obj["vertices"]), tuple(tuple(e) for e in obj["edges"]))

    def to_dot(self, groups: dict[int, int] | None = None, name: str = "G") -> str:
        """Undirected DOT text. ``groups`` maps vertex -> cluster index for colouring."""
        lines = [f"graph {name} {{"]
        for v, label in enumerate(self.labels):
            attrs = [f'label="{_dot_escape(label)}"']
            if groups is not None and v in groups:
                colour = _PALETTE[groups[v] % len(_PALETTE)]
                attrs += [f"cluster={groups[v]}", "style=filled", f'fillcolor="{colour}"']
            lines.append(f"  n{v} [{', '.join(attrs)}];")
        for u, v in self.edges:
            lines.append(f"  n{u} -- n{v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


_PALETTE = (
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
    "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f",
)


def _dot_escape(label) -> str:
    return str(label).replace("\\", "\\\\").replace('"', '\\"')


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines; a lone token declares an isolated vertex. ``#`` starts a comment."""
    index: dict[str, int] = {}
    edges = []

    def vid(tok):
        if tok not in index:
            index[tok] = len(index)
        return index[tok]

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) == 1:
            vid(toks[0])
        elif len(toks) == 2:
            edges.append((vid(toks[0]), vid(toks[1])))
        else:
            raise ValueError(f"line {lineno}: expected 'u v', got {raw!r}")
    if not index:
        raise ValueError("edge list is empty")
    return Graph(tuple(index), tuple(edges))


# -- constructors ---------------------------------------------------------


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("simple cycles need n >= 3")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    off = g1.n
    return Graph(
        tuple(("a", x) for x in g1.labels) + tuple(("b", x) for x in g2.labels),
        g1.edges + tuple((u + off, v + off) for u, v in g2.edges),
    )


def subdivide(g: Graph, edge_index: int, times: int = 1) -> Graph:
    """Replace edge ``g.edges[edge_index]`` by a path through ``times`` new vertices."""
    if times <= 0:
        return g
    u, v = g.edges[edge_index]
    rest = list(g.edges[:edge_index] + g.edges[edge_index + 1 :])
    new = list(range(g.n, g.n + times))
    chain = [u, *new, v]
    rest += list(zip(chain, chain[1:]))
    labels = g.labels + tuple(("sub", g.n + i) for i in range(times))
    return Graph(labels, tuple(rest))


def subdivide_edges(g: Graph, counts: Sequence[int]) -> Graph:
    """Subdivide edge ``i`` of ``g`` ``counts[i]`` times (indices refer to ``g.edges``)."""
    if len(counts) != g.m:
        raise ValueError("one subdivision count per edge required")
    edges = []
    labels = list(g.labels)
    for (u, v), c in zip(g.edges, counts):
        chain = [u]
        for _ in range(c):
            labels.append(("sub", len(labels)))
            chain.append(len(labels) - 1)
        chain.append(v)
        edges += list(zip(chain, chain[1:]))
    return Graph(tuple(labels), tuple(edges))


# -- shortest paths and geodeticity ---------------------------------------


@dataclass(frozen=True)
class PathCountTable:
    dist: np.ndarray
    count: np.ndarray  # dtype=object: exact Python ints


@dataclass(frozen=True)
class MooreCertificate:
    degree: int
    diameter: int
    order: int

    def to_json(self) -> dict:
        return {"k": self.degree, "d": self.diameter, "n": self.order}


def _require_simple(g: Graph) -> None:
    if not g.simple:
        raise NonSimpleGraph("operation requires a graph without loops or parallel edges")


def _require_connected(g: Graph) -> None:
    if not g.is_connected():
        raise DisconnectedGraph(f"graph with {g.n} vertices is not connected")


def _bfs_counts(nbrs, source: int):
    n = len(nbrs)
    dist = [-1] * n
    count = [0] * n
    dist[source] = 0
    count[source] = 1
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in nbrs[u]:
            if dist[v] < 0:
                dist[v] = du
                queue.append(v)
            if dist[v] == du:
                count[v] += count[u]
    return dist, count


def path_count_table(g: Graph) -> PathCountTable:
    """Hop distances and numbers of distinct shortest paths for every vertex pair."""
    _require_simple(g)
    _require_connected(g)
    dist = np.zeros((g.n, g.n), dtype=np.int64)
    count = np.empty((g.n, g.n), dtype=object)
    for s in range(g.n):
        d, c = _bfs_counts(g.neighbors, s)
        dist[s] = d
        count[s] = c
    return PathCountTable(dist, count)


def geodetic_index(g: Graph) -> int:
    """Largest number of shortest paths joining any vertex pair (1 for geodetic graphs)."""
    table = path_count_table(g)
    return int(max(table.count.flat))


def is_geodetic(g: Graph) -> bool:
    return geodetic_index(g) == 1


def is_k_geodetic(g: Graph, k: int) -> bool:
    return geodetic_index(g) <= k


def diameter(g: Graph) -> int:
    _require_connected(g)
    best = 0
    for s in range(g.n):
        d, _ = _bfs_counts(g.neighbors, s)
        best = max(best, max(d))
    return best


def girth(g: Graph) -> float:
    """Length of a shortest cycle, ``math.inf`` for forests."""
    if any(u == v for u, v in g.edges):
        return 1
    if not g.simple:
        return 2
    best = float("inf")
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] >= best:
                break
            for v in g.neighbors[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif v != parent[u]:
                    best = min(best, dist[u] + dist[v] + 1)
    return best if best == float("inf") else int(best)


def moore_order(k: int, d: int) -> int:
    return 1 + k * sum((k - 1) ** i for i in range(d))


def moore_certificate(g: Graph) -> MooreCertificate | None:
    """Certificate (k, d, n) when g is a k-regular Moore graph of diameter d, else None."""
    _require_simple(g)
    _require_connected(g)
    if g.n < 2:
        return None
    degs = set(g.degrees)
    if len(degs) != 1:
        return None
    k = degs.pop()
    d = diameter(g)
    if g.n != moore_order(k, d):
        return None
    if d > 1 and girth(g) != 2 * d + 1:
        return None
    return MooreCertificate(k, d, g.n)


# -- homeomorphism --------------------------------------------------------


def smooth(g: Graph) -> Graph:
    """Topological reduction: suppress loopless degree-2 vertices until none remain.

    Smoothing never changes another vertex's degree and only ever adds loops, so a
    single pass in index order reaches the fixed point. Surviving vertices keep
    their labels.
    """
    adj = [Counter() for _ in range(g.n)]
    for u, v in g.edges:
        adj[u][v] += 1
        if u != v:
            adj[v][u] += 1
    alive = [True] * g.n
    for v in range(g.n):
        nb = adj[v]
        if nb[v] or sum(nb.values()) != 2:
            continue
        a, b = nb.elements()
        adj[a][v] -= 1
        adj[b][v] -= 1
        alive[v] = False
        adj[v] = Counter()
        adj[a][b] += 1
        if a != b:
            adj[b][a] += 1
    keep = [v for v in range(g.n) if alive[v]]
    index = {v: i for i, v in enumerate(keep)}
    edges = []
    for u in keep:
        for v, mult in adj[u].items():
            if mult > 0 and v >= u:
                edges += [(index[u], index[v])] * mult
    return Graph(tuple(g.labels[v] for v in keep), tuple(edges))


def is_cycle_reduction(r: Graph) -> bool:
    """True for the reduction of a cycle: one vertex carrying one loop."""
    return r.n == 1 and r.edges == ((0, 0),)


def _refine_colours(mats: list[np.ndarray]) -> list[list[int]]:
    """Joint colour refinement over several multigraphs so colours are comparable."""
    colours = [[(int(a[v].sum() + a[v, v]), int(a[v, v])) for v in range(len(a))] for a in mats]
    n_classes = -1
    while True:
        sigs = []
        for a, col in zip(mats, colours):
            sig = []
            for v in range(len(a)):
                nb = sorted((col[w], int(a[v, w])) for w in np.flatnonzero(a[v]) if w != v)
                sig.append((col[v], tuple(nb)))
            sigs.append(sig)
        palette = {s: i for i, s in enumerate(sorted({s for sig in sigs for s in sig}))}
        colours = [[palette[s] for s in sig] for sig in sigs]
        if len(palette) == n_classes:
            return colours
        n_classes = len(palette)


def is_isomorphic(g1: Graph, g2: Graph, cap: int = DEFAULT_ISO_CAP) -> bool:
    """Exact isomorphism test for small multigraphs (loops and multiplicities must match).

    Colour refinement prunes, backtracking decides. Graphs above ``cap`` vertices are
    refused rather than answered heuristically.
    """
    if g1.n > cap or g2.n > cap:
        raise SizeCapExceeded(f"isomorphism search capped at {cap} vertices")
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if sorted(g1.degrees) != sorted(g2.degrees):
        return False
    a1, a2 = g1.multiplicity, g2.multiplicity
    c1, c2 = _refine_colours([a1, a2])
    if sorted(c1) != sorted(c2):
        return False

    n = g1.n
    class_size = Counter(c1)
    # rarest colour first, then grow along edges so each step is well constrained
    order: list[int] = []
    placed = set()
    while len(order) < n:
        frontier = [v for v in range(n) if v not in placed and any(a1[v, w] for w in placed)]
        pool = frontier or [v for v in range(n) if v not in placed]
        v = min(pool, key=lambda x: (class_size[c1[x]], -g1.degrees[x], x))
        order.append(v)
        placed.add(v)

    by_colour: dict[int, list[int]] = {}
    for v in range(n):
        by_colour.setdefault(c2[v], []).append(v)
    mapping = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        u = order[i]
        for v in by_colour.get(c1[u], ()):
            if used[v] or a1[u, u] != a2[v, v]:
                continue
            if all(a1[u, order[j]] == a2[v, mapping[order[j]]] for j in range(i)):
                mapping[u] = v
                used[v] = True
                if extend(i + 1):
                    return True
                used[v] = False
                mapping[u] = -1
        return False

    return extend(0)


def homeomorphic_to_complete(g: Graph) -> int | None:
    """n when g reduces to K_n with n >= 3, else None (cycles and trees included)."""
    if not g.is_connected():
        return None
    r = smooth(g)
    if not r.simple or r.n < 3:
        return None
    if r.m == r.n * (r.n - 1) // 2:
        return r.n
    return None


CYCLE_MOORE = MooreCertificate(2, 2, 5)


def homeomorphic_to_moore(g: Graph) -> MooreCertificate | None:
    """Moore certificate of g's topological reduction, if it is a Moore graph.

    Cycles reduce to a looped vertex; a cycle on at least five vertices is an
    expansion of C_5 and is reported with C_5's certificate.
    """
    if not g.is_connected():
        return None
    r = smooth(g)
    if is_cycle_reduction(r):
        return CYCLE_MOORE if g.n >= 5 else None
    if not r.simple or r.n < 3:
        return None
    return moore_certificate(r)


def is_degenerate_reduction(g: Graph) -> bool:
    """Connected graphs whose reduction has fewer than three vertices and is not a cycle."""
    r = smooth(g)
    return r.n < 3 and not is_cycle_reduction(r)
