"""Pseudo-end analysis: separator partitions, branching trees, tree pushes.

A window approximates the ends of an infinite graph by the components left
after deleting a finite connected core: the components that reach the window
boundary stand in for ends, the rest are finite noise.  Growing the core ball
by ball yields a canonical subtree with one branch per pseudo-end and a
separator sequence realizing the branch/component bijection at every stage.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .chains import Chain, Z2, defect, is_cycle
from .flows import decompose_flow
from .windows import GraphWindow, canonical_edge


class EndError(ValueError):
    pass


@dataclass(frozen=True)
class EndPartition:
    """Components of a window minus a core, split by boundary contact."""

    core: frozenset
    pseudo_ends: tuple        # components reaching the window boundary
    finite_components: tuple  # components fully inside

    @property
    def count(self) -> int:
        return len(self.pseudo_ends)

    def component_of(self, v: tuple) -> Optional[frozenset]:
        for comp in self.pseudo_ends + self.finite_components:
            if v in comp:
                return comp
        return None


def end_partition(window: GraphWindow, core) -> EndPartition:
    """Split window minus core into boundary-reaching and finite components.

    The core must be connected and stay clear of the window boundary, so
    that the split reflects the family beyond the window rather than an
    artifact of truncation.
    """
    core = frozenset(core)
    if not core:
        raise EndError("core must be nonempty")
    if not core <= window.vertex_set:
        raise EndError("core leaves the window")
    if any(window.dist_to_boundary(v) == 0 for v in core):
        raise EndError("core touches the window boundary")
    seen = set()
    start = min(core)
    stack = [start]
    seen.add(start)
    while stack:
        u = stack.pop()
        for v in window.adj[u]:
            if v in core and v not in seen:
                seen.add(v)
                stack.append(v)
    if seen != core:
        raise EndError("core is not connected")
    pseudo: List[frozenset] = []
    finite: List[frozenset] = []
    for comp in window.components(removed=core):
        if any(v in window.boundary_vertices for v in comp):
            pseudo.append(comp)
        else:
            finite.append(comp)
    return EndPartition(core=core, pseudo_ends=tuple(pseudo), finite_components=tuple(finite))


@dataclass
class EndTree:
    """Subtree with one branch per pseudo-end plus its separator sequence.

    `separators` are the cores (growing balls around the window seed); the
    tree has exactly one edge crossing out of each separator per pseudo-end
    visible at that separator, which `check_bijection` re-verifies.
    """

    window: GraphWindow
    root: tuple
    edges: frozenset
    separators: tuple
    tips: tuple  # outermost tree vertices, one inside each final pseudo-end

    @property
    def vertices(self) -> frozenset:
        vs = {v for e in self.edges for v in e} | {self.root}
        return frozenset(vs)

    def adjacency(self) -> Dict[tuple, tuple]:
        adj: Dict[tuple, List[tuple]] = {}
        for u, v in self.edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        adj.setdefault(self.root, [])
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def path_between(self, a: tuple, b: tuple) -> List[tuple]:
        """Unique tree path from a to b."""
        adj = self.adjacency()
        prev = {a: None}
        q = deque([a])
        while q:
            u = q.popleft()
            if u == b:
                break
            for v in adj[u]:
                if v not in prev:
                    prev[v] = u
                    q.append(v)
        if b not in prev:
            raise EndError("vertices lie in different tree components")
        path = [b]
        while path[-1] != a:
            path.append(prev[path[-1]])
        path.reverse()
        return path

    def check_bijection(self) -> None:
        """Re-verify one crossing tree edge per pseudo-end at each separator."""
        for K in self.separators:
            part = end_partition(self.window, K)
            crossing: Dict[frozenset, List[tuple]] = {c: [] for c in part.pseudo_ends}
            for e in sorted(self.edges):
                u, v = e
                if (u in K) == (v in K):
                    continue
                out = v if u in K else u
                comp = part.component_of(out)
                if comp is None or comp not in crossing:
                    raise EndError(
                        "tree edge {} exits into a finite component".format(e)
                    )
                crossing[comp].append(e)
            bad = [c for c, es in crossing.items() if len(es) != 1]
            if bad:
                raise EndError(
                    "separator of size {} sees {} mismatched components".format(
                        len(K), len(bad)
                    )
                )


def _ball_levels(window: GraphWindow, seed: tuple) -> List[frozenset]:
    """Balls around the seed usable as separators.

    The largest boundary-free ball is dropped: what remains outside it can
    be a single sparse shell that shatters into singleton components, which
    says nothing about the family beyond the window.
    """
    levels = []
    r = 0
    while True:
        ball = window.ball(seed, r)
        if any(window.dist_to_boundary(v) == 0 for v in ball):
            break
        levels.append(frozenset(ball))
        r += 1
    return levels[:-1] if len(levels) > 1 else levels


def end_defining_tree(window: GraphWindow) -> EndTree:
    """Grow a subtree whose branches track the pseudo-end structure.

    Starting from the seed, the core ball grows one radius at a time.  Each
    branch tip owns one current pseudo-end; when that component splits at
    the next radius, the tip sprouts one path per surviving part, routed
    inside the annulus slice of its component (breadth-first, lexicographic
    tie-break, so no cycle ever forms and no stray separator crossings
    appear).  The separator bijection is checked before returning.
    """
    if len(window.components(frozenset())) != 1:
        raise EndError("window is disconnected")
    seed = window.seed_vertex
    if seed is None or seed not in window.vertex_set:
        raise EndError("window has no usable seed vertex")
    if window.dist_to_boundary(seed) == 0:
        raise EndError("seed sits on the window boundary")
    levels = _ball_levels(window, seed)
    if not levels:
        raise EndError("no boundary-free ball around the seed")
    parts = [end_partition(window, K) for K in levels]
    if parts[0].count == 0:
        raise EndError("window has no pseudo-ends to track")
    # the published separator sequence starts where the complement first
    # splits; a one-component window keeps the full ball sequence (its tree
    # is a single ray and any start radius serves)
    first = 0
    for i, part in enumerate(parts):
        if part.count >= 2:
            first = i
            break
    separators = levels[first:]
    parts = parts[first:]

    part0 = parts[0]
    K0 = separators[0]
    tree_edges: set = set()
    # breadth-first tree of the initial ball, for seed-to-sphere geodesics
    prev: Dict[tuple, Optional[tuple]] = {seed: None}
    q = deque([seed])
    while q:
        u = q.popleft()
        for v in sorted(window.adj[u]):
            if v in K0 and v not in prev:
                prev[v] = u
                q.append(v)
    # active branch tips: pseudo-end component -> tree vertex inside it
    tips: List[Tuple[frozenset, tuple]] = []
    for comp in part0.pseudo_ends:
        best = None
        for a in sorted(prev):
            for b in sorted(window.adj[a]):
                if b in comp:
                    best = (a, b)
                    break
            if best:
                break
        if best is None:
            raise EndError("pseudo-end not adjacent to the initial ball")
        a, b = best
        cur = a
        while cur != seed:
            tree_edges.add(canonical_edge(cur, prev[cur]))
            cur = prev[cur]
        tree_edges.add(canonical_edge(a, b))
        tips.append((comp, b))

    for K, part in zip(separators[1:], parts[1:]):
        new_tips: List[Tuple[frozenset, tuple]] = []
        for comp, tip in tips:
            # annulus slice of this component: inside the new core
            slice_ = {v for v in comp if v in K}
            reach = {tip: 0}
            q = deque([tip])
            while q:
                u = q.popleft()
                for v in window.adj[u]:
                    if v in slice_ and v not in reach:
                        reach[v] = reach[u] + 1
                        q.append(v)
            for sub in part.pseudo_ends:
                if not sub <= comp:
                    continue
                best = None
                for a in sorted(reach):
                    for b in sorted(window.adj[a]):
                        if b in sub:
                            key = (reach[a], a, b)
                            if best is None or key < best:
                                best = key
                if best is None:
                    raise EndError(
                        "pseudo-end unreachable through its annulus slice"
                    )
                _, a, b = best
                # walk the breadth-first tree back from a to the old tip
                cur = a
                while cur != tip:
                    nxt = min(
                        v for v in window.adj[cur]
                        if v in reach and reach[v] == reach[cur] - 1
                    )
                    tree_edges.add(canonical_edge(cur, nxt))
                    cur = nxt
                tree_edges.add(canonical_edge(a, b))
                new_tips.append((sub, b))
        tips = new_tips

    # run each branch out to the window boundary inside its component, so
    # branches are genuine boundary-to-boundary rays and a cycle can live
    # entirely on the tree
    leaves: List[tuple] = []
    for comp, tip in tips:
        if tip in window.boundary_vertices:
            leaves.append(tip)
            continue
        prev2: Dict[tuple, Optional[tuple]] = {tip: None}
        q = deque([tip])
        leaf = None
        while q:
            u = q.popleft()
            if u in window.boundary_vertices:
                leaf = u
                break
            for v in sorted(window.adj[u]):
                if v in comp and v not in prev2:
                    prev2[v] = u
                    q.append(v)
        if leaf is None:
            raise EndError("pseudo-end lost contact with the window boundary")
        cur = leaf
        while cur != tip:
            tree_edges.add(canonical_edge(cur, prev2[cur]))
            cur = prev2[cur]
        leaves.append(leaf)

    tree = EndTree(
        window=window,
        root=seed,
        edges=frozenset(tree_edges),
        separators=tuple(separators),
        tips=tuple(leaves),
    )
    tree.check_bijection()
    return tree


# -- pushing cycles onto the tree ---------------------------------------


@dataclass(frozen=True)
class PushToTreeResult:
    circuits: tuple   # vertex tuples of the correcting circuits
    residue: Chain    # f minus the circuit sum
    core: frozenset   # region on which the residue is tree-supported


def push_to_tree_z2(f: Chain, tree: EndTree) -> PushToTreeResult:
    """Correct a mod-2 cycle by circuits until it lies on the tree.

    The cycle splits into edge-disjoint circuits and boundary-to-boundary
    paths.  Circuits go straight into the correcting set.  Each path is
    closed up against its parallel tree route: connectors from the path's
    endpoints to the tree's branch tips run entirely inside the outermost
    pseudo-end components, so inside the final separator the corrected
    cycle only retains tree edges.
    """
    window = tree.window
    if f.ring != Z2 or f.degree != 1:
        raise EndError("push expects a mod-2 edge chain")
    if not is_cycle(f, window):
        raise EndError("chain has defects away from the window boundary")
    K = tree.separators[-1]
    part = end_partition(window, K)
    tree_vs = tree.vertices
    branch_of: Dict[frozenset, frozenset] = {}
    for comp in part.pseudo_ends:
        hold = comp & tree_vs
        if hold:
            branch_of[comp] = hold

    def connector(v: tuple, comp: frozenset) -> List[tuple]:
        """Path inside comp from v to the nearest tree vertex there."""
        targets = branch_of[comp]
        prev = {v: None}
        q = deque([v])
        hit = v if v in targets else None
        while q and hit is None:
            u = q.popleft()
            for x in sorted(window.adj[u]):
                if x in comp and x not in prev:
                    prev[x] = u
                    if x in targets:
                        hit = x
                        break
                    q.append(x)
        if hit is None:
            raise EndError("endpoint cannot reach the tree branch in its component")
        path = [hit]
        while path[-1] != v:
            path.append(prev[path[-1]])
        path.reverse()
        return path

    dec = decompose_flow(f, window)
    circuits: List[tuple] = []
    residue = f.copy()
    for piece, _mult in dec.pieces:
        if piece.kind == "circuit":
            circuits.append(piece.vertices)
            for e, c in piece.chain(Z2).terms():
                residue.add_term(e, c)
            continue
        edges = set(piece.edge_keys())
        if edges <= tree.edges:
            continue
        a, b = piece.vertices[0], piece.vertices[-1]
        comp_a = part.component_of(a)
        comp_b = part.component_of(b)
        if comp_a not in branch_of or comp_b not in branch_of:
            raise EndError("path endpoint outside every tracked pseudo-end")
        conn_a = connector(a, comp_a)
        conn_b = connector(b, comp_b)
        closure = piece.chain(Z2)
        for path in (conn_a, conn_b):
            for u, v in zip(path, path[1:]):
                closure.add_term((u, v), 1)
        tpath = tree.path_between(conn_a[-1], conn_b[-1])
        for u, v in zip(tpath, tpath[1:]):
            closure.add_term((u, v), 1)
        if not defect(closure, window).is_zero():
            raise EndError("closed correction failed to cancel defects")
        sub = decompose_flow(closure, window)
        for cpiece, _m in sub.pieces:
            if cpiece.kind != "circuit":
                raise EndError("correction decomposed into a non-circuit")
            circuits.append(cpiece.vertices)
        for e, c in closure.terms():
            residue.add_term(e, c)
    for e, _c in residue.terms():
        if e[0] in K and e[1] in K and e not in tree.edges:
            raise EndError("residue keeps a non-tree edge {} in the core".format(e))
    return PushToTreeResult(circuits=tuple(circuits), residue=residue, core=K)
