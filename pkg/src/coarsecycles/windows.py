"""Finite windows of infinite, uniformly locally finite graph families.

A window is the ball of a given radius around a seed vertex, taken inside an
infinite graph described by a neighbour oracle.  Vertices whose infinite-graph
neighbourhood is not fully contained in the window are marked as boundary
vertices; everything at distance >= margin from them is the inner region on
which chain conditions are imposed.

Every vertex id is a tuple of ints, so ids from any family compare
lexicographically and all tie-breaking in the package is deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

Vertex = tuple
Edge = tuple

INFINITE_FAMILIES = (
    "grid2d",
    "cayley_free",
    "biinfinite_line",
    "biinfinite_comb",
    "ladder",
    "regular3_tree",
    "trivalent_tree",
)
FINITE_FAMILIES = ("cycle", "growing_circuit_chain")


class UnknownFamilyError(ValueError):
    """Raised when a FamilySpec names a family this module does not know."""


class WindowError(ValueError):
    """Raised for invalid window construction parameters."""


def canonical_edge(u: Vertex, v: Vertex) -> Edge:
    """Unordered edge key: endpoints sorted lexicographically."""
    if u == v:
        raise ValueError("degenerate edge {!r}".format(u))
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class FamilySpec:
    """Descriptor of a graph family plus its parameters.

    Use the classmethod constructors; `params` is a sorted tuple of
    (key, value) pairs so the spec is hashable and reportable.
    """

    name: str
    params: tuple = ()

    def get(self, key, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default

    def describe(self) -> str:
        inner = ", ".join("{}={}".format(k, v) for k, v in self.params)
        return "{}({})".format(self.name, inner)

    @classmethod
    def grid2d(cls, triangulated: bool = False) -> "FamilySpec":
        return cls("grid2d", (("triangulated", bool(triangulated)),))

    @classmethod
    def cayley_free(cls, k: int) -> "FamilySpec":
        if k < 1:
            raise WindowError("free group rank must be >= 1")
        return cls("cayley_free", (("k", int(k)),))

    @classmethod
    def biinfinite_line(cls) -> "FamilySpec":
        return cls("biinfinite_line")

    @classmethod
    def biinfinite_comb(cls) -> "FamilySpec":
        return cls("biinfinite_comb")

    @classmethod
    def ladder(cls) -> "FamilySpec":
        return cls("ladder")

    @classmethod
    def cycle(cls, n: int) -> "FamilySpec":
        if n < 3:
            raise WindowError("cycle length must be >= 3")
        return cls("cycle", (("n", int(n)),))

    @classmethod
    def growing_circuit_chain(cls, lengths: Iterable[int]) -> "FamilySpec":
        lengths = tuple(int(l) for l in lengths)
        if not lengths or any(l < 3 for l in lengths):
            raise WindowError("need at least one circuit, each of length >= 3")
        return cls("growing_circuit_chain", (("lengths", lengths),))

    @classmethod
    def regular3_tree(cls) -> "FamilySpec":
        return cls("regular3_tree")

    @classmethod
    def trivalent_tree(cls, tree_spec) -> "FamilySpec":
        # tree_spec is a trees.TreeSpec; stored by its level tuple to stay hashable
        return cls("trivalent_tree", (("levels", tree_spec.levels),))


class GraphWindow:
    """Immutable finite graph with boundary marking and distance helpers.

    Do not mutate after construction; all package operations treat windows
    as values.  Caches (distances, boundary distances) are internal.
    """

    def __init__(
        self,
        vertices: Iterable[Vertex],
        edges: Iterable[Edge],
        boundary_vertices: Iterable[Vertex],
        inner_radius: int,
        family_tag: str,
        degree_bound: int,
        seed_vertex: Vertex,
    ):
        self.vertices = tuple(sorted(set(vertices)))
        self.vertex_set = frozenset(self.vertices)
        self.edges = tuple(sorted(canonical_edge(*e) for e in set(edges)))
        self.edge_set = frozenset(self.edges)
        self.boundary_vertices = frozenset(boundary_vertices)
        self.inner_radius = inner_radius
        self.family_tag = family_tag
        self.degree_bound = degree_bound
        self.seed_vertex = seed_vertex
        adj: dict = {v: [] for v in self.vertices}
        for u, v in self.edges:
            if u not in adj or v not in adj:
                raise WindowError("edge endpoint outside vertex set")
            adj[u].append(v)
            adj[v].append(u)
        self.adj = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        bad = [v for v, ns in self.adj.items() if len(ns) > degree_bound]
        if bad:
            raise WindowError("degree bound {} violated at {!r}".format(degree_bound, bad[0]))
        self._dist_cache: dict = {}
        self._boundary_dist: Optional[dict] = None

    # -- basic accessors -------------------------------------------------

    def __len__(self) -> int:
        return len(self.vertices)

    def neighbors(self, v: Vertex) -> tuple:
        return self.adj[v]

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return canonical_edge(u, v) in self.edge_set

    # -- metric ----------------------------------------------------------

    def _bfs(self, source: Vertex) -> dict:
        if source in self._dist_cache:
            return self._dist_cache[source]
        dist = {source: 0}
        q = deque([source])
        while q:
            u = q.popleft()
            for w in self.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    q.append(w)
        self._dist_cache[source] = dist
        return dist

    def distance(self, u: Vertex, v: Vertex) -> Optional[int]:
        """Graph distance inside the window; None when unreachable."""
        if u not in self.vertex_set or v not in self.vertex_set:
            raise WindowError("vertex not in window")
        return self._bfs(u).get(v)

    def ball(self, center: Vertex, radius: int) -> frozenset:
        dist = self._bfs(center)
        return frozenset(v for v, d in dist.items() if d <= radius)

    def dist_to_boundary(self, v: Vertex):
        """Distance to the nearest boundary vertex; inf for boundaryless windows."""
        if self._boundary_dist is None:
            dist = {b: 0 for b in self.boundary_vertices}
            q = deque(sorted(self.boundary_vertices))
            while q:
                u = q.popleft()
                for w in self.adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        q.append(w)
            self._boundary_dist = dist
        return self._boundary_dist.get(v, float("inf"))

    def is_inner(self, v: Vertex, margin: int = 1) -> bool:
        """True when v is at distance >= max(margin, 1) from the boundary."""
        return self.dist_to_boundary(v) >= max(margin, 1)

    def inner_vertices(self, margin: int = 1) -> tuple:
        return tuple(v for v in self.vertices if self.is_inner(v, margin))

    # -- subsets ---------------------------------------------------------

    def edge_boundary(self, subset: Iterable[Vertex]) -> tuple:
        """Edges with exactly one endpoint in the subset, sorted."""
        s = set(subset)
        return tuple(e for e in self.edges if (e[0] in s) != (e[1] in s))

    def components(self, removed: Iterable[Vertex] = ()) -> tuple:
        """Connected components of the window minus `removed`, sorted by min vertex."""
        removed = set(removed)
        seen: set = set(removed)
        comps = []
        for start in self.vertices:
            if start in seen:
                continue
            comp = {start}
            q = deque([start])
            seen.add(start)
            while q:
                u = q.popleft()
                for w in self.adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.add(w)
                        q.append(w)
            comps.append(frozenset(comp))
        return tuple(sorted(comps, key=lambda c: min(c)))


# -- family neighbour oracles -------------------------------------------


def _neighbors_fn(spec: FamilySpec) -> Callable[[Vertex], tuple]:
    name = spec.name
    if name == "grid2d":
        triangulated = spec.get("triangulated", False)

        def neigh(v):
            x, y = v
            out = [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)]
            if triangulated:
                out += [(x + 1, y + 1), (x - 1, y - 1)]
            return tuple(out)

        return neigh
    if name == "cayley_free":
        k = spec.get("k")

        def neigh(v):
            out = []
            for g in range(1, k + 1):
                for s in (g, -g):
                    if v and v[-1] == -s:
                        out.append(v[:-1])
                    else:
                        out.append(v + (s,))
            return tuple(out)

        return neigh
    if name == "biinfinite_line":
        return lambda v: ((v[0] - 1,), (v[0] + 1,))
    if name == "biinfinite_comb":

        def neigh(v):
            x, y = v
            if y == 0:
                return ((x - 1, 0), (x + 1, 0), (x, 1))
            return ((x, y - 1), (x, y + 1))

        return neigh
    if name == "ladder":

        def neigh(v):
            x, y = v
            return ((x - 1, y), (x + 1, y), (x, 1 - y))

        return neigh
    if name == "cycle":
        n = spec.get("n")

        def neigh(v):
            i = v[0]
            return (((i - 1) % n,), ((i + 1) % n,))

        return neigh
    if name == "growing_circuit_chain":
        lengths = spec.get("lengths")

        def neigh(v):
            i, j = v
            l = lengths[i]
            out = [(i, (j - 1) % l), (i, (j + 1) % l)]
            if j == l // 2 and i + 1 < len(lengths):
                out.append((i + 1, 0))
            if j == 0 and i > 0:
                out.append((i - 1, lengths[i - 1] // 2))
            return tuple(sorted(set(out) - {v}))

        return neigh
    if name == "regular3_tree":

        def neigh(v):
            if v == ():
                return ((0,), (1,), (2,))
            return tuple(sorted([v[:-1], v + (0,), v + (1,)]))

        return neigh
    raise UnknownFamilyError("no neighbour oracle for family {!r}".format(name))


_DEGREE_BOUNDS = {
    "grid2d": lambda s: 6 if s.get("triangulated") else 4,
    "cayley_free": lambda s: 2 * s.get("k"),
    "biinfinite_line": lambda s: 2,
    "biinfinite_comb": lambda s: 3,
    "ladder": lambda s: 3,
    "cycle": lambda s: 2,
    "growing_circuit_chain": lambda s: 3,
    "regular3_tree": lambda s: 3,
    "trivalent_tree": lambda s: 3,
}

_DEFAULT_SEEDS = {
    "grid2d": (0, 0),
    "cayley_free": (),
    "biinfinite_line": (0,),
    "biinfinite_comb": (0, 0),
    "ladder": (0, 0),
    "cycle": (0,),
    "growing_circuit_chain": (0, 0),
    "regular3_tree": (),
}


def degree_bound(spec: FamilySpec) -> int:
    try:
        return _DEGREE_BOUNDS[spec.name](spec)
    except KeyError:
        raise UnknownFamilyError("unknown family {!r}".format(spec.name))


def build_window(spec: FamilySpec, radius: int, center: Vertex = None) -> GraphWindow:
    """Ball of the given radius around `center` in the family, with boundary marks.

    The window contains exactly the vertices at graph distance <= radius from
    the seed; a vertex is boundary when some infinite-family neighbour of it
    lies outside the window.
    """
    if radius < 0:
        raise WindowError("radius must be >= 0")
    if spec.name == "trivalent_tree":
        from .trees import TreeSpec, build_tree

        tree_spec = TreeSpec(spec.get("levels"))
        return build_tree(tree_spec, ray_len=radius)
    neigh = _neighbors_fn(spec)
    if center is None:
        center = _DEFAULT_SEEDS[spec.name]
    dist = {center: 0}
    order = [center]
    q = deque([center])
    while q:
        u = q.popleft()
        if dist[u] == radius:
            continue
        for w in sorted(neigh(u)):
            if w not in dist:
                dist[w] = dist[u] + 1
                order.append(w)
                q.append(w)
    vertex_set = set(order)
    edges = set()
    boundary = set()
    for u in order:
        for w in neigh(u):
            if w in vertex_set:
                edges.add(canonical_edge(u, w))
            else:
                boundary.add(u)
    return GraphWindow(
        vertices=vertex_set,
        edges=edges,
        boundary_vertices=boundary,
        inner_radius=radius,
        family_tag=spec.describe(),
        degree_bound=degree_bound(spec),
        seed_vertex=center,
    )


def window_from_edges(
    edges: Iterable[tuple],
    boundary_vertices: Iterable[Vertex] = (),
    family_tag: str = "explicit",
    seed_vertex: Vertex = None,
) -> GraphWindow:
    """Window built directly from an edge list; useful for small test graphs."""
    edges = [canonical_edge(*e) for e in edges]
    vertices = sorted({v for e in edges for v in e})
    if not vertices:
        raise WindowError("empty edge list")
    deg: dict = {}
    for u, v in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    return GraphWindow(
        vertices=vertices,
        edges=edges,
        boundary_vertices=boundary_vertices,
        inner_radius=0,
        family_tag=family_tag,
        degree_bound=max(deg.values()),
        seed_vertex=seed_vertex if seed_vertex is not None else vertices[0],
    )


def is_tree_window(w: GraphWindow) -> bool:
    return len(w.components()) == 1 and len(w.edges) == len(w.vertices) - 1


def star_to_comb(w: GraphWindow):
    """Compress high-degree tree vertices into comb paths of degree <= 3.

    Each vertex of degree d > 3 becomes a path of d - 2 fresh vertices; the
    original incident edges attach one per interior path vertex and two at
    each extremity.  Returns (new_window, mapping) where mapping sends each
    original vertex to the tuple of vertices replacing it.  Distances between
    original vertices grow by at most max(0, d - 3) per traversed vertex.
    """
    if not is_tree_window(w):
        raise WindowError("star_to_comb expects a tree window")
    index = {v: i for i, v in enumerate(w.vertices)}
    mapping = {}
    for v in w.vertices:
        d = len(w.adj[v])
        n_parts = max(1, d - 2)
        mapping[v] = tuple((index[v], k) for k in range(n_parts))
    # slot assignment: neighbour j of v (in sorted order) attaches to which part
    def slot(v, j):
        parts = mapping[v]
        if len(parts) == 1:
            return parts[0]
        # two neighbours at the first part, one per middle, two at the last
        if j <= 1:
            return parts[0]
        if j >= len(w.adj[v]) - 2:
            return parts[-1]
        return parts[j - 1]

    new_edges = []
    for v in w.vertices:
        parts = mapping[v]
        for a, b in zip(parts, parts[1:]):
            new_edges.append((a, b))
    for u, v in w.edges:
        ju = w.adj[u].index(v)
        jv = w.adj[v].index(u)
        new_edges.append((slot(u, ju), slot(v, jv)))
    new_boundary = {p for v in w.boundary_vertices for p in mapping[v]}
    out = window_from_edges(
        new_edges,
        boundary_vertices=new_boundary,
        family_tag=w.family_tag + "+comb",
        seed_vertex=mapping[w.seed_vertex][0],
    )
    if max(len(out.adj[v]) for v in out.vertices) > 3:
        raise WindowError("comb compression failed to reach degree 3")
    return out, mapping
