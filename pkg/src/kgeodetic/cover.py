"""Clique covers of threshold graphs and the clusterings derived from them.

A cover is scored by summing, over its cliques, the clique's total edge
weight divided by its vertex count. Two feasibility regimes are supported:

``edge-disjoint``
    cliques share no edge and together contain every edge of the graph.
``vertex-disjoint``
    cliques share no vertex; edges between cliques may stay uncovered, but no
    edge may join two vertices that are both left out of the cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Mapping, Sequence

import numpy as np

from .errors import (
    CliqueCountCapExceeded,
    DisconnectedCluster,
    ExactCapExceeded,
    MissingWeight,
    NonSimpleGraph,
)
from .graph import (
    Graph,
    MooreCertificate,
    diameter,
    geodetic_index,
    homeomorphic_to_complete,
    homeomorphic_to_moore,
    is_degenerate_reduction,
    moore_certificate,
)
from .matrices import (
    CorrelationMatrix,
    DistanceMatrix,
    ThresholdConfig,
    threshold_distance,
)

Clique = tuple  # sorted vertex indices, length >= 2
Disjointness = Literal["edge-disjoint", "vertex-disjoint"]

DEFAULT_EDGE_CAP = 24
DEFAULT_CLIQUE_CAP = 10**6


@dataclass(frozen=True)
class WeightFunction:
    """Edge weights for the cover functional.

    ``unit`` gives every edge weight 1. ``similarity`` derives weights from the
    source matrix (``delta - d`` for distances, ``|r|`` for correlations) once
    bound with :meth:`bind`. ``custom`` uses ``table`` as given.
    """

    kind: Literal["unit", "similarity", "custom"] = "unit"
    table: Mapping[tuple[int, int], float] | None = None

    def __post_init__(self):
        if self.kind not in ("unit", "similarity", "custom"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.table is not None:
            norm = {}
            for (u, v), w in self.table.items():
                w = float(w)
                if not math.isfinite(w):
                    raise ValueError(f"weight of edge {(u, v)} is not finite")
                norm[(u, v) if u <= v else (v, u)] = w
            object.__setattr__(self, "table", norm)

    @classmethod
    def custom(cls, table: Mapping[tuple[int, int], float]) -> "WeightFunction":
        return cls("custom", table)

    def bind(self, source: DistanceMatrix | CorrelationMatrix, cfg: ThresholdConfig) -> "WeightFunction":
        if self.kind != "similarity" or self.table is not None:
            return self
        a = source.entries
        iu, ju = np.triu_indices(a.shape[0], k=1)
        if cfg.mode == "distance":
            vals = cfg.delta - a[iu, ju]
        else:
            vals = np.abs(a[iu, ju])
        return WeightFunction("similarity", dict(zip(zip(iu.tolist(), ju.tolist()), vals.tolist())))

    def weight(self, u: int, v: int) -> float:
        if self.kind == "unit":
            return 1.0
        if self.table is None:
            raise MissingWeight("similarity weights must be bound to a matrix before use")
        key = (u, v) if u <= v else (v, u)
        try:
            return self.table[key]
        except KeyError:
            raise MissingWeight(f"no weight for edge {key}") from None

    def clique_weight(self, clique: Sequence[int]) -> float:
        return math.fsum(self.weight(clique[i], clique[j])
                         for i in range(len(clique)) for j in range(i + 1, len(clique)))


@dataclass(frozen=True)
class Cover:
    cliques: tuple
    disjointness: str
    value: float
    uncovered_edges: tuple = ()
    method: str = "exact"

    def vertices(self) -> set[int]:
        return {v for c in self.cliques for v in c}


@dataclass(frozen=True)
class StructureReport:
    members: tuple
    order: int
    size: int
    geodetic_index: int
    diameter: int
    is_complete: bool
    moore_certificate: MooreCertificate | None
    homeomorphic_to_complete: int | None
    homeomorphic_to_moore: MooreCertificate | None
    degenerate: bool

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "size": self.size,
            "geodetic_index": self.geodetic_index,
            "diameter": self.diameter,
            "complete": self.is_complete,
            "moore": self.moore_certificate.to_json() if self.moore_certificate else None,
            "homeomorphic_to_complete": self.homeomorphic_to_complete,
            "homeomorphic_to_moore": (
                self.homeomorphic_to_moore.to_json() if self.homeomorphic_to_moore else None
            ),
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True)
class ClusterSystem:
    clusters: tuple
    centers: tuple
    level: float
    cover: Cover
    graph: Graph = field(repr=False)

    def labelled(self) -> list[list]:
        return [[self.graph.labels[v] for v in c] for c in self.clusters]


def cover_value(cover: Cover | Sequence[Sequence[int]], w: WeightFunction) -> float:
    """Sum over cliques of total edge weight divided by clique order."""
    cliques = cover.cliques if isinstance(cover, Cover) else cover
    return math.fsum(w.clique_weight(c) / len(c) for c in cliques)


def _canonical(cliques) -> tuple:
    return tuple(sorted(tuple(sorted(c)) for c in cliques))


# -- maximal cliques --------------------------------------------------------


def maximal_cliques(g: Graph, cap: int = DEFAULT_CLIQUE_CAP) -> list[Clique]:
    """All maximal cliques with at least two vertices, sorted.

    Bron-Kerbosch with Tomita pivoting; raises once more than ``cap`` cliques
    have been found.
    """
    if not g.simple:
        raise NonSimpleGraph("clique enumeration requires a simple graph")
    nbrs = g.neighbors
    out: list[Clique] = []

    def expand(r: list[int], p: set[int], x: set[int]) -> None:
        if not p and not x:
            if len(r) >= 2:
                out.append(tuple(sorted(r)))
                if len(out) > cap:
                    raise CliqueCountCapExceeded(f"more than {cap} maximal cliques")
            return
        pivot = max(p | x, key=lambda u: (len(p & nbrs[u]), -u))
        for v in sorted(p - nbrs[pivot]):
            expand(r + [v], p & nbrs[v], x & nbrs[v])
            p.discard(v)
            x.add(v)

    expand([], set(range(g.n)), set())
    return sorted(out)


# -- exact search -----------------------------------------------------------


class _Incumbent:
    """Best value seen so far plus its tie set; ties are values within ``tol``."""

    def __init__(self, keep_all: bool):
        self.value = -math.inf
        self.best: tuple | None = None
        self.ties: list[tuple] = []
        self.keep_all = keep_all

    def tol(self) -> float:
        return 1e-9 * max(1.0, abs(self.value)) if math.isfinite(self.value) else 0.0

    def offer(self, value: float, cliques) -> None:
        cover = _canonical(cliques)
        if value > self.value + self.tol():
            self.value = value
            self.best = cover
            self.ties = [cover]
        elif value >= self.value - self.tol():
            if cover < self.best:
                self.best = cover
            if self.keep_all:
                self.ties.append(cover)

    def hopeless(self, upper_bound: float) -> bool:
        return upper_bound < self.value - self.tol()


def _cliques_through(base: list[int], cands: list[int], adj) -> list[list[int]]:
    """Every clique formed by ``base`` plus a subset of ``cands`` (all mutually adjacent)."""
    out = []

    def grow(chosen: list[int], pool: list[int]) -> None:
        out.append(base + chosen)
        for i, v in enumerate(pool):
            grow(chosen + [v], [u for u in pool[i + 1 :] if u in adj[v]])

    grow([], cands)
    return out


def _search_edge_disjoint(g: Graph, w: WeightFunction, inc: _Incumbent) -> None:
    wt = {e: w.weight(*e) for e in g.edges}
    n = g.n
    # per-edge ceiling on what it can still contribute to the functional
    ceiling = {e: (x / 2 if x >= 0 else x / max(n, 2)) for e, x in wt.items()}
    adj = [set(s) for s in g.neighbors]
    uncovered = set(g.edges)
    chosen: list[list[int]] = []

    def rec(value: float, rest: float) -> None:
        if inc.hopeless(value + rest):
            return
        if not uncovered:
            inc.offer(value, chosen)
            return
        u, v = min(uncovered)
        common = sorted(adj[u] & adj[v])
        options = _cliques_through([u, v], common, adj)
        for clique in options:
            pairs = [(a, b) if a < b else (b, a)
                     for i, a in enumerate(clique) for b in clique[i + 1 :]]
            gain = math.fsum(wt[p] for p in pairs) / len(clique)
            drop = math.fsum(ceiling[p] for p in pairs)
            for a, b in pairs:
                adj[a].discard(b)
                adj[b].discard(a)
                uncovered.discard((a, b))
            chosen.append(sorted(clique))
            rec(value + gain, rest - drop)
            chosen.pop()
            for a, b in pairs:
                adj[a].add(b)
                adj[b].add(a)
                uncovered.add((a, b))

    rec(0.0, math.fsum(ceiling.values()))


def _search_vertex_disjoint(g: Graph, w: WeightFunction, inc: _Incumbent) -> None:
    wt = {e: w.weight(*e) for e in g.edges}
    nbrs = g.neighbors
    n = g.n
    state = [0] * n  # 0 undecided, 1 in a clique, 2 left out
    chosen: list[list[int]] = []

    def pair_w(a: int, b: int) -> float:
        return wt[(a, b) if a < b else (b, a)]

    def ceiling() -> float:
        total = 0.0
        for v in range(n):
            if state[v] == 0:
                best = max((pair_w(v, u) for u in nbrs[v] if state[u] == 0), default=0.0)
                total += max(best, 0.0) / 2
        return total

    def rec(i: int, value: float) -> None:
        while i < n and state[i] != 0:
            i += 1
        if i == n:
            inc.offer(value, chosen)
            return
        if inc.hopeless(value + ceiling()):
            return
        v = i
        open_nbrs = sorted(u for u in nbrs[v] if state[u] == 0)
        for clique in _cliques_through([v], open_nbrs, nbrs)[1:]:
            for x in clique:
                state[x] = 1
            chosen.append(sorted(clique))
            rec(i + 1, value + w.clique_weight(sorted(clique)) / len(clique))
            chosen.pop()
            for x in clique:
                state[x] = 0
        if all(state[u] != 2 for u in nbrs[v]):
            state[v] = 2
            rec(i + 1, value)
            state[v] = 0

    rec(0, 0.0)


def _uncovered(g: Graph, cliques) -> tuple:
    inside = set()
    for c in cliques:
        for i, a in enumerate(c):
            for b in c[i + 1 :]:
                inside.add((a, b))
    return tuple(e for e in g.edges if e not in inside)


def _exact(g: Graph, w: WeightFunction, mode: Disjointness, edge_cap: int, keep_all: bool) -> _Incumbent:
    if not g.simple:
        raise NonSimpleGraph("covers are defined on simple graphs")
    if mode not in ("edge-disjoint", "vertex-disjoint"):
        raise ValueError(f"unknown disjointness mode {mode!r}")
    if g.m > edge_cap:
        raise ExactCapExceeded(f"exact cover search is capped at {edge_cap} edges, graph has {g.m}")
    inc = _Incumbent(keep_all)
    if mode == "edge-disjoint":
        _search_edge_disjoint(g, w, inc)
    else:
        _search_vertex_disjoint(g, w, inc)
    return inc


def exact_best_cover(
    g: Graph, w: WeightFunction, mode: Disjointness = "edge-disjoint", edge_cap: int = DEFAULT_EDGE_CAP
) -> Cover:
    """Globally optimal cover; among optima the lexicographically least clique list."""
    inc = _exact(g, w, mode, edge_cap, keep_all=False)
    cliques = inc.best
    return Cover(cliques, mode, cover_value(cliques, w), _uncovered(g, cliques), "exact")


def optimal_covers(
    g: Graph, w: WeightFunction, mode: Disjointness = "edge-disjoint", edge_cap: int = DEFAULT_EDGE_CAP
) -> list[tuple]:
    """Every optimal cover (values equal within 1e-9 relative), sorted."""
    inc = _exact(g, w, mode, edge_cap, keep_all=True)
    return sorted(set(inc.ties))


def greedy_cover(g: Graph, w: WeightFunction, mode: Disjointness = "edge-disjoint") -> Cover:
    """Repeatedly take the residual maximal clique with the largest contribution."""
    if not g.simple:
        raise NonSimpleGraph("covers are defined on simple graphs")
    if mode not in ("edge-disjoint", "vertex-disjoint"):
        raise ValueError(f"unknown disjointness mode {mode!r}")
    edges = set(g.edges)
    used_vertices: set[int] = set()
    cliques = []
    while edges:
        residual = Graph(g.labels, tuple(sorted(edges)))
        best = min(maximal_cliques(residual), key=lambda c: (-w.clique_weight(c) / len(c), c))
        cliques.append(best)
        if mode == "edge-disjoint":
            edges -= {(a, b) for i, a in enumerate(best) for b in best[i + 1 :]}
        else:
            used_vertices.update(best)
            edges = {e for e in edges if e[0] not in used_vertices and e[1] not in used_vertices}
    cliques = _canonical(cliques)
    return Cover(cliques, mode, cover_value(cliques, w), _uncovered(g, cliques), "greedy")


def best_cover(
    g: Graph, w: WeightFunction, mode: Disjointness = "edge-disjoint", edge_cap: int = DEFAULT_EDGE_CAP
) -> Cover:
    """Exact search within the edge cap, greedy beyond it."""
    if g.m <= edge_cap:
        return exact_best_cover(g, w, mode, edge_cap)
    return greedy_cover(g, w, mode)


# -- clusters ---------------------------------------------------------------


def condensation_center(cluster, d: DistanceMatrix) -> int:
    """Member with the smallest mean distance to the other members; ties to the lowest index."""
    members = sorted(cluster)
    if not members:
        raise ValueError("cluster is empty")
    if len(members) == 1:
        return members[0]
    sub = d.entries[np.ix_(members, members)]
    means = sub.sum(axis=1) / (len(members) - 1)
    tol = 1e-12 * max(1.0, float(means.max()))
    lowest = means.min()
    return next(v for v, m in zip(members, means) if m <= lowest + tol)


def partition_from_cover(n: int, cover: Cover) -> list[tuple]:
    covered = cover.vertices()
    parts = [tuple(c) for c in cover.cliques] + [(v,) for v in range(n) if v not in covered]
    return sorted(parts)


def base_cluster_system(
    d: DistanceMatrix,
    cfg: ThresholdConfig,
    w: WeightFunction | None = None,
    edge_cap: int = DEFAULT_EDGE_CAP,
) -> ClusterSystem:
    """Partition of the objects induced by the best vertex-disjoint cover of the threshold graph."""
    if cfg.mode != "distance":
        raise ValueError("base cluster systems are built from distance thresholds")
    w = (w or WeightFunction()).bind(d, cfg)
    g = threshold_distance(d, cfg)
    cover = best_cover(g, w, "vertex-disjoint", edge_cap)
    clusters = partition_from_cover(g.n, cover)
    centers = tuple(condensation_center(c, d) for c in clusters)
    return ClusterSystem(tuple(clusters), centers, cfg.delta, cover, g)


def classify_cluster_structure(cluster, g: Graph) -> StructureReport:
    """Geodetic and homeomorphism profile of the subgraph a cluster induces."""
    members = tuple(sorted(cluster))
    if not members:
        raise ValueError("cluster is empty")
    h = g.induced(members)
    if not h.is_connected():
        raise DisconnectedCluster(f"cluster {list(members)} does not induce a connected subgraph")
    return StructureReport(
        members=members,
        order=h.n,
        size=h.m,
        geodetic_index=geodetic_index(h),
        diameter=diameter(h),
        is_complete=h.m == h.n * (h.n - 1) // 2,
        moore_certificate=moore_certificate(h),
        homeomorphic_to_complete=homeomorphic_to_complete(h),
        homeomorphic_to_moore=homeomorphic_to_moore(h),
        degenerate=is_degenerate_reduction(h),
    )
