"""Small deterministic Dinic max-flow on hashable nodes.

Used for defect repair (finite extensions) and for routing unit flows from a
vertex set to the window boundary.  Arcs are added in sorted order, so the
resulting flow is deterministic.
"""

from __future__ import annotations

from collections import deque
from typing import Dict, Hashable, Iterable, List, Tuple

SOURCE = ("__source__",)
SINK = ("__sink__",)


class FlowNetwork:
    def __init__(self):
        self.adj: Dict[Hashable, List[int]] = {}
        # arcs stored as parallel lists: to, cap, flow; arc i ^ 1 is the reverse
        self.to: List[Hashable] = []
        self.cap: List[int] = []

    def _ensure(self, v):
        if v not in self.adj:
            self.adj[v] = []

    def add_arc(self, u, v, cap: int) -> None:
        self._ensure(u)
        self._ensure(v)
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s=SOURCE, t=SINK) -> int:
        self._ensure(s)
        self._ensure(t)
        total = 0
        while True:
            level = {s: 0}
            q = deque([s])
            while q:
                u = q.popleft()
                for i in self.adj[u]:
                    if self.cap[i] > 0 and self.to[i] not in level:
                        level[self.to[i]] = level[u] + 1
                        q.append(self.to[i])
            if t not in level:
                return total
            it = {u: 0 for u in self.adj}

            def dfs(u, pushed):
                if u == t:
                    return pushed
                while it[u] < len(self.adj[u]):
                    i = self.adj[u][it[u]]
                    v = self.to[i]
                    if self.cap[i] > 0 and level.get(v) == level[u] + 1:
                        got = dfs(v, min(pushed, self.cap[i]))
                        if got:
                            self.cap[i] -= got
                            self.cap[i ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                pushed = dfs(s, 1 << 60)
                if not pushed:
                    break
                total += pushed


def route_units(
    supplies: Iterable[Tuple[Hashable, int]],
    demands: Iterable[Tuple[Hashable, int]],
    arcs: Iterable[Tuple[Hashable, Hashable, int]],
):
    """Route supply units to demand nodes over capacitated symmetric arcs.

    Returns (routed_value, net_flow) where net_flow maps directed node pairs
    (u, v) with u < v to the signed flow from u to v.
    """
    net = FlowNetwork()
    total_supply = 0
    for v, amount in sorted(supplies):
        net.add_arc(SOURCE, v, amount)
        total_supply += amount
    for v, amount in sorted(demands):
        net.add_arc(v, SINK, amount)
    arc_index = {}
    for u, v, cap in sorted(arcs):
        arc_index[(u, v)] = len(net.to)
        net.add_arc(u, v, cap)
        arc_index[(v, u)] = len(net.to)
        net.add_arc(v, u, cap)
    value = net.max_flow()
    flow: Dict[tuple, int] = {}
    for (u, v), i in arc_index.items():
        if u < v:
            # flow pushed on arc i shows up as residual on the reverse arc i ^ 1
            fwd = net.cap[i ^ 1]
            bwd = net.cap[arc_index[(v, u)] ^ 1]
            signed = fwd - bwd
            if signed:
                flow[(u, v)] = signed
    return value, flow
