"""Decomposition of window flows into circuits and boundary-to-boundary paths.

A degree-1 chain that is a cycle on the inner region decomposes into
vertex-simple circuits and window bips (paths whose endpoints both lie on
the window boundary), found by deterministic greedy path-following with
lexicographic tie-breaks.  The module also provides layered circuit packing,
the Z/2 -> Z lift, dominated-flow completion, and finite defect repair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .chains import (
    Chain,
    Z,
    Z2,
    ChainError,
    circuit_chain,
    defect,
    edge_chain_of_path,
    is_cycle,
)
from .maxflow import route_units
from .windows import GraphWindow, canonical_edge


class FlowError(ValueError):
    pass


@dataclass(frozen=True)
class PathPiece:
    """One decomposition piece: a circuit or a boundary-to-boundary path.

    `vertices` lists the walk in traversal order; circuits do not repeat the
    first vertex at the end.
    """

    kind: str  # "circuit" or "window_bip"
    vertices: tuple

    def chain(self, ring: str = Z) -> Chain:
        if self.kind == "circuit":
            return circuit_chain(self.vertices, ring)
        return edge_chain_of_path(self.vertices, ring)

    def edge_keys(self) -> frozenset:
        verts = list(self.vertices)
        if self.kind == "circuit":
            verts = verts + [verts[0]]
        return frozenset(canonical_edge(u, v) for u, v in zip(verts, verts[1:]))

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass
class Decomposition:
    pieces: List[Tuple[PathPiece, int]]
    ring: str

    def edge_sum(self) -> Chain:
        out = Chain(1, self.ring)
        for piece, coeff in self.pieces:
            out = out + piece.chain(self.ring).scale(coeff)
        return out

    def circuits(self) -> List[Tuple[PathPiece, int]]:
        return [(p, c) for p, c in self.pieces if p.kind == "circuit"]

    def window_bips(self) -> List[Tuple[PathPiece, int]]:
        return [(p, c) for p, c in self.pieces if p.kind == "window_bip"]

    def cover_bound(self) -> int:
        """Max over edges of the number of pieces covering that edge."""
        count: Dict[tuple, int] = {}
        for piece, _ in self.pieces:
            for e in piece.edge_keys():
                count[e] = count.get(e, 0) + 1
        return max(count.values(), default=0)


def _directed(flow: Dict[tuple, int], tail, head) -> int:
    if tail < head:
        return flow.get((tail, head), 0)
    return -flow.get((head, tail), 0)


def _push(flow: Dict[tuple, int], tail, head, amount: int) -> None:
    key = canonical_edge(tail, head)
    delta = amount if tail < head else -amount
    new = flow.get(key, 0) + delta
    if new:
        flow[key] = new
    else:
        flow.pop(key, None)


def _out_neighbors(window: GraphWindow, flow: Dict[tuple, int], v) -> list:
    return [w for w in window.adj[v] if _directed(flow, v, w) > 0]


def _net_defect(window: GraphWindow, flow: Dict[tuple, int], v) -> int:
    """Inflow minus outflow at v (boundary coefficient of the chain)."""
    total = 0
    for w in window.adj[v]:
        total += _directed(flow, w, v)
    return total


def _extract_min(flow, walk_edges) -> int:
    return min(_directed(flow, u, v) for u, v in walk_edges)


def _walk_forward_z(window, flow, start, stop_at_defect):
    """Follow positive flow from `start`, peeling loops; return pieces + path.

    Loops met along the way are extracted immediately as circuits; the walk
    ends when the current vertex has no outgoing flow.
    """
    pieces = []
    stack = [start]
    pos = {start: 0}
    while True:
        cur = stack[-1]
        outs = _out_neighbors(window, flow, cur)
        if not outs:
            return pieces, stack
        nxt = min(outs)
        if nxt in pos:
            cycle = stack[pos[nxt] :]
            edges = list(zip(cycle, cycle[1:] + [nxt]))
            m = _extract_min(flow, edges)
            for u, v in edges:
                _push(flow, u, v, -m)
            pieces.append((PathPiece("circuit", tuple(cycle)), m))
            del stack[pos[nxt] + 1 :]
            for v in list(pos):
                if pos[v] > pos[nxt]:
                    del pos[v]
        else:
            pos[nxt] = len(stack)
            stack.append(nxt)


def decompose_flow(f: Chain, window: GraphWindow) -> Decomposition:
    """Greedy canonical decomposition into circuits and window bips.

    Every piece is vertex-simple and therefore edge-injective; the sum of the
    piece chains (with their multiplicities) reproduces f exactly.
    """
    if f.degree != 1:
        raise FlowError("expected a degree-1 chain")
    if not is_cycle(f, window):
        raise FlowError("chain has defects away from the window boundary")
    if f.ring == Z2:
        return _decompose_z2(f, window)
    flow: Dict[tuple, int] = {key: c for key, c in f.terms()}
    pieces: List[Tuple[PathPiece, int]] = []
    # peel source-to-sink paths until no defects remain
    while True:
        sources = sorted(
            v for v in window.vertices if _net_defect(window, flow, v) < 0
        )
        if not sources:
            break
        loop_pieces, path = _walk_forward_z(window, flow, sources[0], True)
        pieces.extend(loop_pieces)
        if len(path) > 1:
            edges = list(zip(path, path[1:]))
            m = min(_extract_min(flow, edges), -_net_defect(window, flow, path[0]))
            m = min(m, _net_defect(window, flow, path[-1]))
            for u, v in edges:
                _push(flow, u, v, -m)
            pieces.append((PathPiece("window_bip", tuple(path)), m))
    # what is left is balanced everywhere: peel circuits
    while flow:
        start_edge = min(flow)
        tail, head = start_edge
        if flow[start_edge] < 0:
            tail, head = head, tail
        loop_pieces, path = _walk_forward_z(window, flow, tail, False)
        pieces.extend(loop_pieces)
        if len(path) > 1:
            raise FlowError("leftover open path in a balanced flow")
    return Decomposition(pieces=pieces, ring=Z)


def _decompose_z2(f: Chain, window: GraphWindow) -> Decomposition:
    support = {key for key, _ in f.terms()}
    adj: Dict[tuple, set] = {}
    for u, v in support:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)

    def consume(u, v):
        support.discard(canonical_edge(u, v))
        adj[u].discard(v)
        adj[v].discard(u)

    pieces: List[Tuple[PathPiece, int]] = []

    def walk_from(start):
        stack = [start]
        pos = {start: 0}
        while True:
            cur = stack[-1]
            avail = sorted(adj.get(cur, ()))
            if not avail:
                return stack
            nxt = avail[0]
            consume(cur, nxt)
            if nxt in pos:
                cycle = stack[pos[nxt] :]
                pieces.append((PathPiece("circuit", tuple(cycle)), 1))
                del stack[pos[nxt] + 1 :]
                for v in list(pos):
                    if pos[v] > pos[nxt]:
                        del pos[v]
            else:
                pos[nxt] = len(stack)
                stack.append(nxt)

    while True:
        odd = sorted(v for v in adj if len(adj[v]) % 2 == 1)
        if not odd:
            break
        path = walk_from(odd[0])
        if len(path) > 1:
            pieces.append((PathPiece("window_bip", tuple(path)), 1))
    while True:
        live = sorted(v for v in adj if adj[v])
        if not live:
            break
        path = walk_from(live[0])
        if len(path) > 1:
            raise FlowError("leftover open path in an even-degree support")
    return Decomposition(pieces=pieces, ring=Z2)


def layered_circuit_decomposition(circuits: Sequence[tuple]) -> List[List[int]]:
    """Partition circuit indices into layers of pairwise vertex-disjoint circuits.

    Greedy: each layer is the maximal set, in input order, of circuits disjoint
    from those already chosen for the layer.  With K the largest number of
    other circuits (with multiplicity) meeting any one circuit, at most K + 1
    layers are produced.
    """
    vertex_sets = [frozenset(c) for c in circuits]
    remaining = list(range(len(circuits)))
    layers: List[List[int]] = []
    while remaining:
        layer: List[int] = []
        used: set = set()
        rest: List[int] = []
        for idx in remaining:
            if vertex_sets[idx] & used:
                rest.append(idx)
            else:
                layer.append(idx)
                used |= vertex_sets[idx]
        layers.append(layer)
        remaining = rest
    return layers


def lift_z2_to_z(f: Chain, window: GraphWindow) -> Chain:
    """Integral lift of a Z/2 cycle with sup norm <= 1.

    The support decomposes into edge-disjoint circuits and window bips; each
    piece is oriented along its traversal and summed with coefficient one.
    """
    if f.ring != Z2:
        raise FlowError("lift expects a Z/2 chain")
    dec = decompose_flow(f, window)
    out = Chain(1, Z)
    for piece, _ in dec.pieces:
        out = out + piece.chain(Z)
    if out.reduce_mod2() != f:
        raise FlowError("lift does not reduce back to the input")
    return out


# -- dominated-flow completion ------------------------------------------


def dominates(phi: Chain, r: Chain) -> bool:
    """Edge-wise domination: r agrees in sign with phi and is no larger."""
    for key, coeff in r.terms():
        target = phi.get(key)
        if coeff * target < 0 or abs(coeff) > abs(target):
            return False
    return True


def extend_ray(ring: str, phi: Chain, r: Chain, window: GraphWindow) -> Chain:
    """Complete a dominated partial flow to a cycle on the inner region.

    Repeatedly, at the lex-least inner vertex carrying a defect, one unit of
    flow is added in phi's direction on an incident edge with slack, which
    moves the defect one step along phi.  Terminates because the total slack
    sum(|phi - r|) drops by one per step; at termination every inner defect
    is gone, r <= result <= phi edge-wise, and boundary vertices act as sinks.
    """
    if phi.ring != ring or r.ring != ring:
        raise FlowError("ring mismatch")
    if not is_cycle(phi, window):
        raise FlowError("phi must be a cycle on the inner region")
    if ring == Z2:
        return _extend_ray_z2(phi, r, window)
    if not dominates(phi, r):
        raise FlowError("r is not dominated by phi")
    flow: Dict[tuple, int] = {key: c for key, c in r.terms()}
    phi_flow: Dict[tuple, int] = {key: c for key, c in phi.terms()}
    while True:
        bad = sorted(
            v
            for v in window.inner_vertices()
            if _net_defect(window, flow, v) != 0
        )
        if not bad:
            break
        v = bad[0]
        s = _net_defect(window, flow, v)
        if s > 0:
            # excess inflow: add a unit on an under-used outgoing phi edge
            cands = [
                w
                for w in window.adj[v]
                if _directed(phi_flow, v, w) > _directed(flow, v, w)
                and _directed(phi_flow, v, w) > 0
            ]
            if not cands:
                raise FlowError("stuck at an inner defect; phi not a cycle?")
            _push(flow, v, min(cands), 1)
        else:
            cands = [
                w
                for w in window.adj[v]
                if _directed(phi_flow, w, v) > _directed(flow, w, v)
                and _directed(phi_flow, w, v) > 0
            ]
            if not cands:
                raise FlowError("stuck at an inner defect; phi not a cycle?")
            _push(flow, min(cands), v, 1)
    out = Chain(1, Z, [(key, c) for key, c in sorted(flow.items())])
    if not dominates(phi, out):
        raise FlowError("completion escaped the dominating flow")
    return out


def _extend_ray_z2(phi: Chain, r: Chain, window: GraphWindow) -> Chain:
    support = {key for key, _ in phi.terms()}
    cur = {key for key, _ in r.terms()}
    if not cur <= support:
        raise FlowError("r is not dominated by phi")
    while True:
        chain = Chain(1, Z2, [(key, 1) for key in sorted(cur)])
        bad = sorted(
            key[0]
            for key, _ in defect(chain, window).terms()
        )
        if not bad:
            return chain
        v = bad[0]
        free = sorted(
            e for e in support - cur if v in e
        )
        if not free:
            raise FlowError("stuck at an inner defect; phi not a cycle?")
        cur.add(free[0])


# -- finite defect repair -----------------------------------------------


def finite_extension(window: GraphWindow, region: frozenset, f: Chain) -> Chain:
    """Extend a chain on a region to a cycle by routing defects outside it.

    Preconditions: f is supported on edges inside `region`, its defects sit on
    vertices of the region adjacent to the complement and sum to zero, the
    region stays clear of the window boundary, and exactly one pseudo-end
    (boundary-touching component) remains outside the region.  Positive and
    negative defects are paired and connected by edge-disjoint paths outside
    the region via a unit-capacity-style flow, which realises the crossing
    re-pairing of overlapping repair paths; the result agrees with f on the
    region and is a cycle on the inner region.
    """
    region = frozenset(region)
    if f.degree != 1:
        raise FlowError("expected a degree-1 chain")
    for (u, v), _ in f.terms():
        if u not in region or v not in region:
            raise FlowError("chain not supported inside the region")
    if any(v in window.boundary_vertices for v in region):
        raise FlowError("region touches the window boundary")
    comps = window.components(removed=region)
    outside = [c for c in comps if c & window.boundary_vertices]
    if len(outside) != 1:
        raise FlowError(
            "expected one pseudo-end outside the region, found {}".format(len(outside))
        )
    rim = {
        v for v in region if any(w not in region for w in window.adj[v])
    }
    defects = {}
    for (v,), coeff in f.boundary().terms():
        if v not in rim:
            raise FlowError("defect at {!r} away from the region rim".format(v))
        defects[v] = coeff
    if f.ring == Z2:
        if len(defects) % 2:
            raise FlowError("odd number of mod-2 defects")
    elif sum(defects.values()) != 0:
        raise FlowError("defects do not sum to zero")
    if not defects:
        return f.copy()
    exterior = set(window.vertices) - region
    allowed = exterior | set(defects)
    if f.ring == Z2:
        # any pairing of the odd vertices works mod 2; repair paths through a
        # shared edge cancel there, so capacities just need to be generous
        verts = sorted(defects)
        supplies = [(v, 1) for v in verts[0::2]]
        demands = [(v, 1) for v in verts[1::2]]
        cap = len(verts)
    else:
        cap = max(1, f.sup_norm())
        supplies = [(v, c) for v, c in sorted(defects.items()) if c > 0]
        demands = [(v, -c) for v, c in sorted(defects.items()) if c < 0]
    arcs = [
        (u, v, cap)
        for u, v in window.edges
        if u in allowed and v in allowed and not (u in region and v in region)
    ]
    need = sum(c for _, c in supplies)
    value, net = route_units(supplies, demands, arcs)
    if value != need:
        raise FlowError("exterior too small to repair the defects")
    out = f.copy()
    for (u, v), signed in sorted(net.items()):
        out.add_term((u, v), signed if f.ring == Z else signed % 2)
    if not is_cycle(out, window):
        raise FlowError("repair failed to close the chain")
    return out
