"""GF(2) cycle space of a window: circuit enumeration and filtered bases.

Cycle vectors are int bitmasks over the lexicographic edge order, which keeps
Gaussian elimination exact and fast.  Bases are built greedily from circuits
sorted by (length, edge set), so the prefix spanned by circuits of length at
most L is itself a basis of the subspace they generate: the filtration by
circuit length comes for free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .chains import Chain, Z2
from .windows import GraphWindow, canonical_edge


class CircuitCapExceeded(RuntimeError):
    """Raised when circuit enumeration would exceed the configured cap."""

    def __init__(self, cap: int, partial: list):
        super().__init__("circuit enumeration cap {} exceeded".format(cap))
        self.cap = cap
        self.partial = partial


def edge_order(window: GraphWindow) -> Dict[tuple, int]:
    return {e: i for i, e in enumerate(window.edges)}


def edges_to_mask(edges: Iterable[tuple], order: Dict[tuple, int]) -> int:
    mask = 0
    for e in edges:
        mask |= 1 << order[e]
    return mask


def mask_to_edges(mask: int, window: GraphWindow) -> List[tuple]:
    return [e for i, e in enumerate(window.edges) if mask >> i & 1]


def mask_to_chain(mask: int, window: GraphWindow) -> Chain:
    return Chain(1, Z2, [(e, 1) for e in mask_to_edges(mask, window)])


def chain_to_mask(c: Chain, order: Dict[tuple, int]) -> int:
    if c.ring != Z2:
        c = c.reduce_mod2()
    return edges_to_mask((key for key, _ in c.terms()), order)


def circuit_mask(circuit: Sequence[tuple], order: Dict[tuple, int]) -> int:
    closed = list(circuit) + [circuit[0]]
    return edges_to_mask(
        (canonical_edge(u, v) for u, v in zip(closed, closed[1:])), order
    )


def enumerate_simple_circuits(
    window: GraphWindow,
    max_length: int,
    cap: int = 10 ** 6,
    roots: Optional[Iterable[tuple]] = None,
) -> List[tuple]:
    """All simple circuits of length <= max_length, canonically oriented.

    Each circuit is reported once, as the vertex tuple starting at its least
    vertex with the smaller of the two traversal directions.  `roots` limits
    the output to circuits whose least vertex is in the given set.  Raises
    CircuitCapExceeded (carrying the partial list) past `cap` circuits.
    """
    out: List[tuple] = []
    root_set = None if roots is None else set(roots)
    dist_cache: Dict[tuple, Dict[tuple, int]] = {}

    def dist_from(s):
        if s not in dist_cache:
            # truncated BFS: only distances < max_length matter for pruning
            d = {s: 0}
            frontier = [s]
            while frontier:
                nxt = []
                for u in frontier:
                    for v in window.adj[u]:
                        if v not in d:
                            d[v] = d[u] + 1
                            if d[v] < max_length:
                                nxt.append(v)
                frontier = nxt
            dist_cache[s] = d
        return dist_cache[s]

    for start in window.vertices:
        if root_set is not None and start not in root_set:
            continue
        ds = dist_from(start)
        path = [start]
        on_path = {start}

        def extend():
            cur = path[-1]
            for v in window.adj[cur]:
                if v < start:
                    continue
                if v == start:
                    if len(path) >= 3 and path[1] < path[-1]:
                        out.append(tuple(path))
                        if len(out) > cap:
                            raise CircuitCapExceeded(cap, out[:cap])
                    continue
                if v in on_path:
                    continue
                # after appending v the path has len(path) edges and still
                # needs back more to close up at start
                back = ds.get(v)
                if back is None or len(path) + back > max_length:
                    continue
                path.append(v)
                on_path.add(v)
                extend()
                path.pop()
                on_path.discard(v)

        extend()
    return out


@dataclass
class FilteredCycleBasis:
    """Independent circuit family ordered by circuit length.

    `circuits` holds the chosen circuits, `masks` their raw edge bitmasks,
    `lengths` the circuit lengths in the same (non-decreasing) order.  Any
    length prefix of the lists is again a basis of the shorter-circuit span.
    """

    window: Optional[GraphWindow]
    order: Dict[tuple, int]
    circuits: List[tuple]
    masks: List[int]
    lengths: List[int]

    def dimension(self) -> int:
        return len(self.masks)

    def dimension_at(self, max_length: int) -> int:
        return sum(1 for L in self.lengths if L <= max_length)

    def prefix_by_length(self, max_length: int) -> "FilteredCycleBasis":
        k = self.dimension_at(max_length)
        return FilteredCycleBasis(
            window=self.window,
            order=self.order,
            circuits=self.circuits[:k],
            masks=self.masks[:k],
            lengths=self.lengths[:k],
        )

    def _echelon(self) -> List[Tuple[int, int]]:
        """Rows (reduced mask, combo) sorted by leading bit.

        `combo` is a bitmask over basis indices whose raw masks XOR to the
        row, so membership reductions translate back to original circuits.
        """
        cached = getattr(self, "_rows", None)
        if cached is not None and len(cached) == len(self.masks):
            return cached
        rows: List[Tuple[int, int]] = []
        for idx, mask in enumerate(self.masks):
            m, combo = mask, 1 << idx
            for r, c in rows:
                if m & (r & -r):
                    m ^= r
                    combo ^= c
            if m == 0:
                raise ValueError("basis circuits are not independent")
            rows.append((m, combo))
            rows.sort(key=lambda t: t[0] & -t[0])
        self._rows = rows
        return rows

    def reduce(self, mask: int) -> Tuple[int, int]:
        """Residue of mask against the basis plus the combo used."""
        m = mask
        combo = 0
        for r, c in self._echelon():
            if m & (r & -r):
                m ^= r
                combo ^= c
        return m, combo

    def contains(self, mask: int) -> bool:
        residue, _ = self.reduce(mask)
        return residue == 0

    def coefficients(self, mask: int) -> Optional[List[int]]:
        """Indices of basis circuits XOR-ing to mask, or None if outside."""
        residue, combo = self.reduce(mask)
        if residue != 0:
            return None
        return [i for i in range(len(self.masks)) if combo >> i & 1]


def circuit_sort_key(circuit: tuple, order: Dict[tuple, int]):
    return (len(circuit), sorted(order[e] for e in _circuit_edges(circuit)))


def _circuit_edges(circuit: Sequence[tuple]) -> List[tuple]:
    closed = list(circuit) + [circuit[0]]
    return [canonical_edge(u, v) for u, v in zip(closed, closed[1:])]


def gaussian_leading_basis(
    circuits: Sequence[tuple],
    order: Dict[tuple, int],
    window: Optional[GraphWindow] = None,
) -> FilteredCycleBasis:
    """Independent subfamily of the circuits, scanned in the given order.

    Each circuit is reduced against the rows kept so far by cancelling
    leading bits; it is kept iff something survives.  Callers wanting the
    length filtration must pass the circuits sorted by length already (see
    greedy_circuit_basis); the scan itself preserves whatever order it gets.
    """
    kept: List[tuple] = []
    masks: List[int] = []
    lengths: List[int] = []
    echelon: List[int] = []
    for circ in circuits:
        mask = circuit_mask(circ, order)
        m = mask
        for r in echelon:
            if m & (r & -r):
                m ^= r
        if m == 0:
            continue
        echelon.append(m)
        echelon.sort(key=lambda r: r & -r)
        kept.append(circ)
        masks.append(mask)
        lengths.append(len(circ))
    return FilteredCycleBasis(
        window=window, order=order, circuits=kept, masks=masks, lengths=lengths
    )


def greedy_circuit_basis(
    window: GraphWindow,
    circuits: Sequence[tuple],
) -> FilteredCycleBasis:
    """Independent subfamily of the given circuits, greedily in length order.

    Circuits are scanned sorted by (length, lex edge set); one is kept iff it
    is independent from those already kept.  The kept list restricted to any
    length prefix is then a maximal independent family among the input
    circuits of that length, which realises the length filtration.
    """
    order = edge_order(window)
    ranked = sorted(circuits, key=lambda c: circuit_sort_key(c, order))
    return gaussian_leading_basis(ranked, order, window)


def membership(
    f, basis: FilteredCycleBasis, max_length: Optional[int] = None
) -> Tuple[bool, Optional[List[int]]]:
    """Whether f lies in the span of basis circuits of length <= max_length.

    f may be an edge chain (reduced mod 2 first) or a raw edge bitmask.  On
    success the second component lists the indices of the basis circuits
    whose sum is f, indexed into the full basis.
    """
    sub = basis if max_length is None else basis.prefix_by_length(max_length)
    mask = chain_to_mask(f, basis.order) if isinstance(f, Chain) else int(f)
    coeffs = sub.coefficients(mask)
    return coeffs is not None, coeffs


def cycle_space_dimension(window: GraphWindow) -> int:
    """|E| - |V| + number of connected components."""
    comps = window.components(removed=frozenset())
    return len(window.edges) - len(window.vertices) + len(comps)


def full_cycle_basis(
    window: GraphWindow, max_length: Optional[int] = None, cap: int = 10 ** 6
) -> FilteredCycleBasis:
    """Length-filtered basis of the whole cycle space (when max_length allows).

    With max_length None, circuit enumeration runs up to |V|, so the basis is
    complete; a smaller bound gives the basis of the span of short circuits.
    """
    bound = len(window.vertices) if max_length is None else max_length
    circuits = enumerate_simple_circuits(window, bound, cap=cap)
    return greedy_circuit_basis(window, circuits)


# -- interior circuit growth profile ------------------------------------


@dataclass
class CircuitProfile:
    family_tag: str
    window_radii: List[int]
    max_length: int
    dims: Dict[int, Dict[int, int]]  # window radius -> circuit length -> dim
    last_growth: Dict[int, int]
    verdict: str
    annotations: List[str] = field(default_factory=list)

    def to_jsonable(self) -> dict:
        return {
            "family": self.family_tag,
            "window_radii": list(self.window_radii),
            "max_length": self.max_length,
            "dims": {
                str(rho): {str(L): d for L, d in sorted(table.items())}
                for rho, table in sorted(self.dims.items())
            },
            "last_growth": {str(rho): g for rho, g in sorted(self.last_growth.items())},
            "verdict": self.verdict,
            "annotations": list(self.annotations),
        }


def interior_circuits(
    window: GraphWindow,
    max_length: int,
    margin: int = 1,
    cap: int = 10 ** 6,
) -> List[tuple]:
    """Simple circuits all of whose vertices are inner at the given margin."""
    inner = set(window.inner_vertices(margin))
    circuits = enumerate_simple_circuits(window, max_length, cap=cap)
    return [c for c in circuits if all(v in inner for v in c)]


def circuit_profile_over_windows(
    build,
    window_radii: Sequence[int],
    max_length: int,
    margin: int = 1,
    cap: int = 10 ** 6,
) -> CircuitProfile:
    """Track the span of short interior circuits across growing windows.

    `build` maps a window radius to a GraphWindow.  For each radius rho the
    profile records dim of the span of interior circuits of length <= L for
    L in 3..max_length, and the largest L at which the dimension still grew.
    If that growth point agrees on the two largest windows and sits strictly
    below max_length, the span has stabilised there; otherwise circuits keep
    appearing up to the probed bound.
    """
    window_radii = sorted(window_radii)
    if len(window_radii) < 2:
        raise ValueError("need at least two window radii to compare")
    dims: Dict[int, Dict[int, int]] = {}
    last_growth: Dict[int, int] = {}
    annotations: List[str] = []
    family_tag = ""
    for rho in window_radii:
        window = build(rho)
        family_tag = window.family_tag
        try:
            circuits = interior_circuits(window, max_length, margin, cap)
        except CircuitCapExceeded as exc:
            circuits = exc.partial
            annotations.append(
                "radius {}: enumeration capped at {} circuits".format(rho, exc.cap)
            )
        basis = greedy_circuit_basis(window, circuits)
        table = {L: basis.dimension_at(L) for L in range(3, max_length + 1)}
        dims[rho] = table
        growth = 0
        prev = 0
        for L in range(3, max_length + 1):
            if table[L] > prev:
                growth = L
            prev = table[L]
        last_growth[rho] = growth
    top_two = window_radii[-2:]
    g1, g2 = last_growth[top_two[0]], last_growth[top_two[1]]
    if g1 == g2 and g2 < max_length:
        r0 = max(3, g2)
        verdict = "stabilized at {}".format(r0)
    else:
        verdict = "large circuits up to {}".format(max_length)
    return CircuitProfile(
        family_tag=family_tag,
        window_radii=list(window_radii),
        max_length=max_length,
        dims=dims,
        last_growth=last_growth,
        verdict=verdict,
        annotations=annotations,
    )


def large_circuit_profile(
    spec,
    max_length: int,
    window_radius: int,
    margin: int = 1,
    cap: int = 10 ** 6,
) -> CircuitProfile:
    """Circuit growth profile for a graph family at the given window radius.

    Compares the interior circuit span at window_radius against the window
    two steps smaller, so the verdict can tell genuinely new long circuits
    from ones that merely crossed the window boundary.
    """
    from .windows import build_window

    if window_radius < 4:
        raise ValueError("window_radius must be >= 4 to compare two windows")
    radii = [window_radius - 2, window_radius]
    return circuit_profile_over_windows(
        lambda rho: build_window(spec, rho), radii, max_length, margin, cap
    )
