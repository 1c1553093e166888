"""Rips thickenings of graph windows and the circuit / 2-chain translations.

R_r has a virtual edge for every vertex pair at graph distance <= r and a
virtual triangle for every triple with pairwise distances <= r.  A fixed
shortest path is chosen per virtual edge (lexicographic tie-break), with
path(v, u) the exact reverse of path(u, v); every translation below routes
through this table, so results are deterministic.
"""

from __future__ import annotations

from collections import deque
from math import ceil
from typing import Dict, Iterable, List, Optional, Tuple

from .chains import Chain, Z, Z2, edge_chain_of_path
from .windows import GraphWindow, canonical_edge


class RipsError(ValueError):
    pass


class RipsComplex:
    """Window thickened at a fixed radius, with its shortest-path table."""

    def __init__(self, window: GraphWindow, radius: int):
        if radius < 1:
            raise RipsError("Rips radius must be >= 1")
        self.window = window
        self.radius = radius
        # truncated BFS from every vertex: dist[u][v] = d(u, v) when <= radius
        self.dist: Dict[tuple, dict] = {}
        for u in window.vertices:
            d = {u: 0}
            q = deque([u])
            while q:
                x = q.popleft()
                if d[x] == radius:
                    continue
                for y in window.adj[x]:
                    if y not in d:
                        d[y] = d[x] + 1
                        q.append(y)
            self.dist[u] = d
        self.virtual_edges: Tuple[tuple, ...] = tuple(
            sorted(
                (u, v)
                for u in window.vertices
                for v, dv in self.dist[u].items()
                if u < v and dv >= 1
            )
        )
        self.virtual_edge_set = frozenset(self.virtual_edges)
        self._paths: Dict[tuple, tuple] = {}
        self._triangles: Optional[tuple] = None

    # -- virtual simplices ----------------------------------------------

    def has_virtual_edge(self, u: tuple, v: tuple) -> bool:
        return canonical_edge(u, v) in self.virtual_edge_set

    def has_virtual_triangle(self, a: tuple, b: tuple, c: tuple) -> bool:
        return (
            self.dist[a].get(b, None) is not None
            and self.dist[b].get(c, None) is not None
            and self.dist[a].get(c, None) is not None
            and len({a, b, c}) == 3
        )

    @property
    def virtual_triangles(self) -> tuple:
        """All canonical triples with pairwise distance <= radius (computed lazily)."""
        if self._triangles is None:
            tris = []
            for u in self.window.vertices:
                near = sorted(v for v in self.dist[u] if v > u)
                for i, a in enumerate(near):
                    da = self.dist[a]
                    for b in near[i + 1 :]:
                        if b in da:
                            tris.append((u, a, b))
            self._triangles = tuple(sorted(tris))
        return self._triangles

    # -- canonical shortest paths ---------------------------------------

    def path(self, u: tuple, v: tuple) -> tuple:
        """The fixed shortest path from u to v as a vertex tuple.

        For u < v the path is the lexicographically least shortest path;
        path(v, u) is its reverse.
        """
        if u == v:
            return (u,)
        key = canonical_edge(u, v)
        if key not in self.virtual_edge_set:
            raise RipsError("no virtual edge {!r}".format(key))
        if key not in self._paths:
            a, b = key
            target_dist = self.dist[b]
            cur = a
            path = [a]
            while cur != b:
                step = target_dist[cur] - 1
                nxt = min(w for w in self.window.adj[cur] if target_dist.get(w) == step)
                path.append(nxt)
                cur = nxt
            self._paths[key] = tuple(path)
        p = self._paths[key]
        return p if (u, v) == key else tuple(reversed(p))


def build_rips(window: GraphWindow, radius: int) -> RipsComplex:
    return RipsComplex(window, radius)


# -- circuits to 2-chains -----------------------------------------------


def fan_radius(length: int) -> int:
    """Rips radius at which the fan triangulation of an s-circuit lives."""
    return ceil(length / 2)


def triangulate_circuit(circuit: Iterable[tuple], ring: str = Z) -> Chain:
    """Fan 2-chain over a circuit (v1..vs): sum of triangles (v1, vi, vi+1).

    Its boundary is exactly the circuit's edge chain; all fan triangles have
    pairwise vertex distances <= ceil(s/2), so the chain lives in the Rips
    complex at that radius.
    """
    verts = list(circuit)
    if len(verts) < 3:
        raise RipsError("circuit must have at least 3 vertices")
    if len(set(verts)) != len(verts):
        raise RipsError("circuit vertices must be distinct")
    out = Chain(2, ring)
    v1 = verts[0]
    for i in range(1, len(verts) - 1):
        out.add_term((v1, verts[i], verts[i + 1]), 1)
    return out


def circuits_from_2chain(g: Chain, rips: RipsComplex) -> List[tuple]:
    """Replace each virtual triangle by its closed path-table walk.

    Returns [(walk_vertices, coefficient)] where each walk is the closed
    sequence path(u,v) path(v,w) path(w,u) of length <= 3 * radius.  When the
    boundary of g is a chain on genuine edges, the edge chains of the walks,
    weighted by their coefficients, sum exactly to that boundary.
    """
    if g.degree != 2:
        raise RipsError("expected a degree-2 chain")
    out = []
    for (a, b, c), coeff in g.terms():
        if not rips.has_virtual_triangle(a, b, c):
            raise RipsError("triangle {!r} not in Rips complex".format((a, b, c)))
        walk = (
            rips.path(a, b)[:-1] + rips.path(b, c)[:-1] + rips.path(c, a)[:-1]
        )
        if len(walk) > 3 * rips.radius:
            raise RipsError("walk longer than 3r; path table corrupted")
        out.append((walk + (a,), coeff))
    return out


def walks_edge_sum(walks: Iterable[tuple], ring: str = Z) -> Chain:
    """Signed sum of the edge chains of closed walks with coefficients."""
    out = Chain(1, ring)
    for walk, coeff in walks:
        out = out + edge_chain_of_path(walk, ring).scale(coeff)
    return out


# -- virtual edges back to genuine edges --------------------------------


def _fan_over_path(path: tuple, ring: str) -> Chain:
    """2-chain with boundary (edge chain of path) - (endpoints virtual edge)."""
    out = Chain(2, ring)
    v0 = path[0]
    for i in range(1, len(path) - 1):
        out.add_term((v0, path[i], path[i + 1]), 1)
    return out


def trace_virtual_edges(f: Chain, rips: RipsComplex):
    """Push a chain on virtual edges down to genuine edges along fixed paths.

    Returns (traced, witness): traced is the degree-1 chain obtained by
    replacing every virtual edge with its fixed shortest path, and witness is
    a degree-2 chain on the Rips complex with boundary(witness) = f - traced.
    """
    if f.degree != 1:
        raise RipsError("expected a degree-1 chain")
    traced = Chain(1, f.ring)
    witness = Chain(2, f.ring)
    for (u, v), coeff in f.terms():
        if (u, v) not in rips.virtual_edge_set:
            raise RipsError("{!r} is not a virtual edge of this complex".format((u, v)))
        p = rips.path(u, v)
        traced = traced + edge_chain_of_path(p, f.ring).scale(coeff)
        # boundary(fan) = traced_part - virtual_edge, so subtract to flip sign
        witness = witness - _fan_over_path(p, f.ring).scale(coeff)
    return traced, witness
