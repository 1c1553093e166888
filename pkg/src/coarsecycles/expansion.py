"""Isoperimetry and local filling probes on graph windows.

Three questions about a window, all answered with certificates:

* how small can the edge boundary of a vertex set be relative to its size
  (Cheeger quotients, exact by enumeration or bounded heuristically),
* can a prescribed unit of 0-dimensional defect on a vertex set be drained
  to the window boundary by an integer edge flow of small sup norm,
* can a prescribed 1-chain on a region be realised as the boundary of a
  2-chain on virtual triangles, and at what coefficient cost.

Every certificate returned here is re-verified against its defining
equation before it is handed back; heuristic answers are labelled.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .chains import Chain, Z, Z2, edge_chain_of_path, zero
from .cyclespace import (
    enumerate_simple_circuits,
    greedy_circuit_basis,
    membership,
)
from .flows import FlowError, decompose_flow, finite_extension
from .maxflow import route_units
from .rips import RipsComplex
from .windows import GraphWindow, canonical_edge


class ExpansionError(ValueError):
    pass


# -- Cheeger quotients ---------------------------------------------------


def _bit_vertices(window: GraphWindow):
    verts = list(window.vertices)
    index = {v: i for i, v in enumerate(verts)}
    nb = [0] * len(verts)
    for u, v in window.edges:
        nb[index[u]] |= 1 << index[v]
        nb[index[v]] |= 1 << index[u]
    return verts, nb


def _popcount(x: int) -> int:
    return bin(x).count("1")


def cheeger(window: GraphWindow, mode: str = "exact"):
    """Smallest |edge boundary| / |U| over nonempty U with |U| <= |V|/2.

    Exact mode enumerates all subsets (|V| <= 24 required) and returns the
    true minimum with a first-in-enumeration-order optimal witness.
    Heuristic mode returns the best of a seed-centred ball sweep and a
    greedy exchange refinement; that value is only an upper bound.
    Returns (Fraction, frozenset witness).
    """
    n = len(window)
    if n == 0:
        raise ExpansionError("empty window")
    if mode == "exact":
        if n > 24:
            raise ExpansionError("exact mode is limited to 24 vertices")
        verts, nb = _bit_vertices(window)
        half = n // 2
        best = None
        best_mask = 0
        for mask in range(1, 1 << n):
            size = _popcount(mask)
            if size > half:
                continue
            cut = 0
            m = mask
            while m:
                low = m & -m
                cut += _popcount(nb[low.bit_length() - 1] & ~mask)
                m ^= low
            ratio = Fraction(cut, size)
            if best is None or ratio < best:
                best = ratio
                best_mask = mask
        witness = frozenset(
            verts[i] for i in range(n) if best_mask >> i & 1
        )
        return best, witness
    if mode != "heuristic":
        raise ExpansionError("mode must be exact or heuristic")
    half = n // 2
    candidates = []
    seen = set()
    for r, (size, cut) in ball_ratio_sweep(window):
        ball = window.ball(window.seed_vertex, r)
        if len(ball) <= half and ball not in seen:
            candidates.append(ball)
            seen.add(ball)
    if not candidates:
        candidates.append(frozenset([min(window.vertices)]))
    best = None
    best_set = None
    for start in candidates:
        cur = set(start)
        ratio = Fraction(len(window.edge_boundary(cur)), len(cur))
        improved = True
        while improved:
            improved = False
            moves = []
            if len(cur) > 1:
                moves += [("drop", v) for v in sorted(cur)]
            if len(cur) < half:
                fringe = sorted(
                    {w for v in cur for w in window.adj[v]} - cur
                )
                moves += [("add", w) for w in fringe]
            for kind, v in moves:
                trial = cur - {v} if kind == "drop" else cur | {v}
                tr = Fraction(len(window.edge_boundary(trial)), len(trial))
                if tr < ratio:
                    cur, ratio, improved = trial, tr, True
                    break
        if best is None or ratio < best:
            best, best_set = ratio, frozenset(cur)
    return best, best_set


def ball_ratio_sweep(window: GraphWindow) -> List[Tuple[int, Tuple[int, int]]]:
    """(radius, (|ball|, |edge boundary|)) for seed balls up to half the window."""
    out = []
    half = max(1, len(window) // 2)
    r = 0
    while True:
        ball = window.ball(window.seed_vertex, r)
        if len(ball) > half:
            break
        out.append((r, (len(ball), len(window.edge_boundary(ball)))))
        if len(ball) == len(window):
            break
        r += 1
    return out


def anchored_expansion(window: GraphWindow) -> Optional[Tuple[Fraction, frozenset]]:
    """Exact min of |edge boundary| / |U| over nonempty interior U, any size.

    Vertex sets are drawn from the non-boundary vertices only, so the window
    boundary acts as an inexhaustible sink; this is the right lower-bound
    notion for draining defects out of the window.  Returns None when the
    interior has more than 14 vertices (enumeration too large) or is empty.
    """
    interior = sorted(set(window.vertices) - window.boundary_vertices)
    n = len(interior)
    if n == 0 or n > 14:
        return None
    index = {v: i for i, v in enumerate(interior)}
    nb_in = [0] * n
    deg = [len(window.adj[v]) for v in interior]
    for u, v in window.edges:
        if u in index and v in index:
            nb_in[index[u]] |= 1 << index[v]
            nb_in[index[v]] |= 1 << index[u]
    best = None
    best_mask = 0
    for mask in range(1, 1 << n):
        cut = 0
        size = 0
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            cut += deg[i] - _popcount(nb_in[i] & mask)
            size += 1
            m ^= low
        ratio = Fraction(cut, size)
        if best is None or ratio < best:
            best = ratio
            best_mask = mask
    return best, frozenset(interior[i] for i in range(n) if best_mask >> i & 1)


# -- unit-defect drainage witnesses --------------------------------------


def h0_expansion_witness(
    window: GraphWindow,
    U: Iterable[tuple],
    W: Iterable[tuple],
    eps,
) -> Chain:
    """Integer edge chain g with boundary +1 on each vertex of W, 0 elsewhere on U.

    eps must be a positive lower bound on the window's boundary-anchored
    expansion (checked exactly when the interior is small enough); the
    defect units are drained to the window boundary by a max-flow over
    edges capped at ceil(1/eps), which bounds the sup norm of g by that cap.
    """
    U = frozenset(U)
    W = frozenset(W)
    if not W <= U:
        raise ExpansionError("W must be contained in U")
    if U & window.boundary_vertices:
        raise ExpansionError("U must avoid the window boundary")
    eps = Fraction(eps)
    if eps <= 0:
        raise ExpansionError("eps must be positive")
    known = anchored_expansion(window)
    if known is not None and eps > known[0]:
        raise ExpansionError(
            "eps {} exceeds the window's anchored expansion {}".format(eps, known[0])
        )
    if not W:
        return zero(1, Z)
    cap = ceil(1 / eps)
    supplies = [(w, 1) for w in sorted(W)]
    demands = [(b, len(W)) for b in sorted(window.boundary_vertices)]
    if not demands:
        raise ExpansionError("window has no boundary to drain into")
    arcs = [(u, v, cap) for u, v in window.edges]
    value, net = route_units(supplies, demands, arcs)
    if value != len(W):
        raise ExpansionError("window boundary unreachable at this capacity")
    g = Chain(1, Z)
    for (u, v), signed in sorted(net.items()):
        g.add_term((u, v), -signed)
    if g.sup_norm() > cap:
        raise ExpansionError("flow escaped its own capacity")
    got = g.boundary().restrict(lambda key: key[0] in U)
    want = Chain(0, Z, [((w,), 1) for w in sorted(W)])
    if got != want:
        raise ExpansionError("drainage left a defect inside U")
    return g


# -- GF(2) linear filling ------------------------------------------------


def _solve_gf2(rows: Sequence[int], rhs: Sequence[int], nvars: int):
    """Solve the GF(2) system; returns (particular, nullspace basis) or (None, [])."""
    pivots: Dict[int, Tuple[int, int]] = {}
    for mask, b in zip(rows, rhs):
        cur, bit = mask, b & 1
        while cur:
            col = (cur & -cur).bit_length() - 1
            if col in pivots:
                pm, pb = pivots[col]
                cur ^= pm
                bit ^= pb
            else:
                pivots[col] = (cur, bit)
                break
        else:
            if bit:
                return None, []
    x = 0
    for col in sorted(pivots, reverse=True):
        pm, pb = pivots[col]
        if (_popcount(pm & x) & 1) ^ pb:
            x |= 1 << col
    basis = []
    for free in range(nvars):
        if free in pivots:
            continue
        v = 1 << free
        for col in sorted(pivots, reverse=True):
            pm, _ = pivots[col]
            if _popcount(pm & v) & 1:
                v |= 1 << col
        basis.append(v)
    return x, basis


def _min_support_gf2(particular: int, basis: List[int], enum_cap: int = 16):
    """Smallest-support solution in particular + span(basis).

    Exhaustive over the span when its dimension is at most enum_cap
    (ties broken toward the numerically smallest mask), greedy single-vector
    descent otherwise.  Returns (mask, exact flag).
    """
    d = len(basis)
    if d == 0:
        return particular, True
    if d <= enum_cap:
        span = [0] * (1 << d)
        for i, b in enumerate(basis):
            step = 1 << i
            for m in range(step):
                span[step + m] = span[m] ^ b
        best = particular
        bestw = _popcount(best)
        for s in span[1:]:
            y = particular ^ s
            w = _popcount(y)
            if w < bestw or (w == bestw and y < best):
                best, bestw = y, w
        return best, True
    cur = particular
    curw = _popcount(cur)
    improved = True
    while improved:
        improved = False
        for b in basis:
            y = cur ^ b
            w = _popcount(y)
            if w < curw:
                cur, curw, improved = y, w, True
    return cur, False


# -- triangle filling probes ---------------------------------------------


@dataclass(frozen=True)
class ProbeResult:
    """Outcome of one local filling instance.

    feasible is True/False when decided, None when the search hit a cap
    without a verdict; norm and chain are present only on success; exact
    marks whether the reported norm is the true optimum.
    """

    feasible: Optional[bool]
    norm: Optional[int]
    chain: Optional[Chain]
    exact: bool
    detail: str

    def __iter__(self):
        return iter((self.feasible, self.norm, self.chain))


def _region_edges(rips: RipsComplex, U: frozenset) -> List[tuple]:
    return [e for e in rips.virtual_edges if e[0] in U and e[1] in U]


def _region_rim(rips: RipsComplex, U: frozenset) -> frozenset:
    return frozenset(
        v for v in U if any(w not in U for w in rips.dist[v] if w != v)
    )


def _check_probe_input(rips: RipsComplex, U: frozenset, f: Chain, ring: str):
    if f.degree != 1:
        raise ExpansionError("expected a degree-1 chain")
    if f.ring != ring:
        raise ExpansionError("chain ring does not match the requested ring")
    for (u, v), _ in f.terms():
        if u not in U or v not in U:
            raise ExpansionError("chain supported outside the region")
        if (u, v) not in rips.virtual_edge_set:
            raise ExpansionError("chain uses a pair beyond the thickening radius")
    rim = _region_rim(rips, U)
    for (v,), _ in f.boundary().terms():
        if v not in rim:
            raise ExpansionError(
                "defect at {!r} away from the region rim".format(v)
            )


def _verify_filling(
    rips: RipsComplex, U: frozenset, f: Chain, g: Chain
) -> None:
    inside = set(_region_edges(rips, U))
    got = g.boundary().restrict(lambda key: key in inside)
    want = f.restrict(lambda key: key in inside)
    if got != want:
        raise ExpansionError("filling fails its defining equation")


class _SearchBudgetExceeded(Exception):
    pass


def h1_expansion_probe(
    rips: RipsComplex,
    U: Iterable[tuple],
    f: Chain,
    ring: str,
    enum_cap: int = 16,
    z_coeff_cap: int = 3,
    z_node_budget: int = 400000,
) -> ProbeResult:
    """Search for a 2-chain g on virtual triangles with boundary f on U.

    The constraint is equality on every virtual edge inside U.  Over Z/2 the
    system is solved exactly and the support size is minimised (exhaustively
    when the solution space is small, else greedily, labelled).  Over Z the
    coefficient box |g| <= c is swept upward, exact for small instances.
    """
    U = frozenset(U)
    _check_probe_input(rips, U, f, ring)
    if f.is_zero():
        return ProbeResult(True, 0, zero(2, ring), True, "zero input")
    edges = _region_edges(rips, U)
    edge_index = {e: i for i, e in enumerate(edges)}
    tris = []
    cols: List[List[Tuple[int, int]]] = []
    for t in rips.virtual_triangles:
        a, b, c = t
        touched = [
            (edge_index[e], s)
            for e, s in (((a, b), 1), ((a, c), -1), ((b, c), 1))
            if e in edge_index
        ]
        if touched:
            tris.append(t)
            cols.append(touched)
    if not tris:
        return ProbeResult(False, None, None, True, "no triangles meet the region")
    if ring == Z2:
        rows = [0] * len(edges)
        for j, touched in enumerate(cols):
            for i, _ in touched:
                rows[i] |= 1 << j
        rhs = [f.get(e) & 1 for e in edges]
        particular, nullbasis = _solve_gf2(rows, rhs, len(tris))
        if particular is None:
            return ProbeResult(False, None, None, True, "linear system inconsistent")
        mask, exact = _min_support_gf2(particular, nullbasis, enum_cap)
        g = Chain(2, Z2, [(tris[j], 1) for j in range(len(tris)) if mask >> j & 1])
        _verify_filling(rips, U, f, g)
        detail = (
            "support minimised over the full solution span"
            if exact
            else "greedy support descent from a particular solution"
        )
        return ProbeResult(True, len(g), g, exact, detail)
    if ring != Z:
        raise ExpansionError("unknown ring {!r}".format(ring))
    mod2 = h1_expansion_probe(
        rips, U, f.reduce_mod2(), Z2, enum_cap=enum_cap
    )
    if mod2.feasible is False:
        return ProbeResult(False, None, None, True, "no filling even modulo two")
    # depth-first box search; variables ordered so constraints complete early
    var_order = sorted(
        range(len(tris)), key=lambda j: (min(i for i, _ in cols[j]), tris[j])
    )
    per_var = [cols[j] for j in var_order]
    targets = [f.get(e) for e in edges]
    remaining = [0] * len(edges)
    for touched in per_var:
        for i, _ in touched:
            remaining[i] += 1
    base_remaining = list(remaining)
    sums = [0] * len(edges)
    assign = [0] * len(per_var)
    budget = [z_node_budget]

    def dfs(j: int, cmax: int) -> bool:
        budget[0] -= 1
        if budget[0] < 0:
            raise _SearchBudgetExceeded
        if j == len(per_var):
            return all(sums[i] == targets[i] for i in range(len(edges)))
        values = [0]
        for a in range(1, cmax + 1):
            values += [a, -a]
        for val in values:
            assign[j] = val
            ok = True
            for i, s in per_var[j]:
                sums[i] += val * s
                remaining[i] -= 1
                if abs(targets[i] - sums[i]) > remaining[i] * cmax:
                    ok = False
            if ok and dfs(j + 1, cmax):
                return True
            for i, s in per_var[j]:
                sums[i] -= val * s
                remaining[i] += 1
        assign[j] = 0
        return False

    top = max(z_coeff_cap, f.sup_norm())
    for cmax in range(1, top + 1):
        remaining[:] = base_remaining
        sums[:] = [0] * len(edges)
        try:
            found = dfs(0, cmax)
        except _SearchBudgetExceeded:
            return ProbeResult(
                None, None, None, False,
                "integer search aborted at the node budget",
            )
        if found:
            g = Chain(
                2, Z,
                [
                    (tris[var_order[j]], assign[j])
                    for j in range(len(per_var))
                    if assign[j]
                ],
            )
            _verify_filling(rips, U, f, g)
            return ProbeResult(True, cmax, g, True, "box search, first feasible cap")
    return ProbeResult(
        None, None, None, False,
        "no filling with coefficients up to {}".format(top),
    )


def z2_norm_sweep(
    window: GraphWindow,
    U: Iterable[tuple],
    f: Chain,
    radii: Sequence[int],
    enum_cap: int = 16,
) -> List[dict]:
    """Z/2 probe at each thickening radius, carrying certificates upward.

    A filling found at one radius stays valid at every larger one (its
    triangles persist and the new constraint edges are beyond its reach), so
    each row reports the best certificate seen so far; the reported norms
    are therefore non-increasing in the radius.  Rows echo feasibility,
    support norm, exactness, and the source of the certificate.
    """
    from .rips import build_rips

    U = frozenset(U)
    rows = []
    best: Optional[Chain] = None
    best_norm: Optional[int] = None
    best_exact = False
    for rho in sorted(set(int(r) for r in radii)):
        rips = build_rips(window, rho)
        res = h1_expansion_probe(rips, U, f, Z2, enum_cap=enum_cap)
        feasible, norm, chain = res.feasible, res.norm, res.chain
        exact, detail = res.exact, res.detail
        if best is not None:
            _verify_filling(rips, U, f, best)
            if norm is None or best_norm < norm:
                feasible, norm, chain = True, best_norm, best
                exact = best_exact
                detail = "carried forward from a smaller radius"
        if chain is not None and (best_norm is None or norm < best_norm):
            best, best_norm, best_exact = chain, norm, exact
        rows.append(
            {
                "radius": rho,
                "feasible": feasible,
                "norm": norm,
                "exact": exact,
                "detail": detail,
            }
        )
    return rows


# -- boundary-extensibility filter ---------------------------------------


def pure_filter(
    rips: RipsComplex,
    U: Iterable[tuple],
    f: Chain,
    window: GraphWindow,
    circuit_cap: int = 200000,
) -> bool:
    """Does f extend beyond U to a chain that bounds in this thickening?

    The canonical extension closes f's rim defects through the exterior.
    Over Z/2 the extension is tested for membership in the span of virtual
    triangle boundaries.  Over Z it is decomposed into circuits, each of
    which must lie in the span of circuits short enough (three times the
    thickening radius) to bound here; a non-circuit piece fails outright.
    """
    U = frozenset(U)
    if window is not rips.window and (
        window.vertices != rips.window.vertices or window.edges != rips.window.edges
    ):
        raise ExpansionError("window does not match the thickened complex")
    if f.degree != 1:
        raise ExpansionError("expected a degree-1 chain")
    for (u, v), _ in f.terms():
        if u not in U or v not in U:
            raise ExpansionError("chain supported outside the region")
        if not window.has_edge(u, v):
            raise ExpansionError("filter input must live on window edges")
    if f.is_zero():
        return True
    fhat = finite_extension(window, U, f)
    if f.ring == Z2:
        edges = list(rips.virtual_edges)
        edge_index = {e: i for i, e in enumerate(edges)}
        rows = [0] * len(edges)
        for j, (a, b, c) in enumerate(rips.virtual_triangles):
            for e in ((a, b), (a, c), (b, c)):
                rows[edge_index[e]] |= 1 << j
        rhs = [fhat.get(e) & 1 for e in edges]
        particular, _ = _solve_gf2(rows, rhs, len(rips.virtual_triangles))
        return particular is not None
    dec = decompose_flow(fhat, window)
    if any(piece.kind != "circuit" for piece, _ in dec.pieces):
        return False
    bound = 3 * rips.radius
    circuits = enumerate_simple_circuits(window, bound, cap=circuit_cap)
    basis = greedy_circuit_basis(window, circuits)
    for piece, _ in dec.pieces:
        inside, _ = membership(piece.chain(Z2), basis)
        if not inside:
            return False
    return True


# -- three-phenomenon verdict --------------------------------------------


def _canonical_probe_cycle(
    window: GraphWindow, U: frozenset, max_length: int
) -> Chain:
    """Shortest lex-least simple circuit inside U, as a Z/2 edge chain; 0 if none."""
    circuits = enumerate_simple_circuits(window, max_length, cap=100000, roots=U)
    inside = [c for c in circuits if all(v in U for v in c)]
    if not inside:
        return zero(1, Z2)
    best = min(inside, key=lambda c: (len(c), c))
    return edge_chain_of_path(list(best) + [best[0]], Z2).reduce_mod2()


def triad_report(spec, radii: Sequence[int], probes: Optional[dict] = None) -> dict:
    """Evidence tables for the three sources of nonvanishing first homology.

    Gathers, per window radius: pseudo-end counts around a fixed small core;
    a circuit growth profile at the largest radius; and filling probes for a
    fixed short cycle at each thickening radius.  The verdict reports the
    first phenomenon with positive evidence, in the order ends, large
    circuits, non-expansion; growing minimal filling norms (or outright
    infeasibility) across at least three window radii count as
    non-expansion evidence.
    """
    from .ends import EndError, end_partition
    from .cyclespace import large_circuit_profile
    from .rips import build_rips
    from .windows import build_window

    probes = dict(probes or {})
    rips_radii = list(probes.get("rips_radii", (1, 2)))
    probe_radius = int(probes.get("probe_radius", 2))
    max_length = int(probes.get("max_length", 12))
    circuit_cap = int(probes.get("circuit_cap", 200000))
    radii = sorted(set(int(r) for r in radii))
    if not radii:
        raise ExpansionError("need at least one window radius")

    windows = {r: build_window(spec, r) for r in radii}

    end_counts: Dict[int, Optional[int]] = {}
    for r, w in windows.items():
        try:
            core = w.ball(w.seed_vertex, 1)
            end_counts[r] = end_partition(w, core).count
        except EndError:
            end_counts[r] = None
    seen_counts = [c for c in end_counts.values() if c is not None]
    ends_evidence = bool(seen_counts) and min(seen_counts) >= 2

    profile = large_circuit_profile(
        spec, max_length, max(radii), cap=circuit_cap
    )
    large_evidence = profile.verdict.startswith("large circuits")

    expansion_rows: Dict[int, Dict[int, dict]] = {}
    expansion_flags: Dict[int, bool] = {}
    for rho in rips_radii:
        rows: Dict[int, dict] = {}
        for r in radii:
            w = windows[r]
            rips = build_rips(w, rho)
            U = w.ball(w.seed_vertex, probe_radius)
            fprobe = _canonical_probe_cycle(w, U, 2 * probe_radius + 2)
            res = h1_expansion_probe(rips, U, fprobe, Z2)
            rows[r] = {
                "input_edges": len(fprobe),
                "feasible": res.feasible,
                "norm": res.norm,
                "exact": res.exact,
                "detail": res.detail,
            }
        states = [rows[r] for r in radii]
        nonzero = [s for s in states if s["input_edges"]]
        all_infeasible = bool(nonzero) and all(
            s["feasible"] is False for s in nonzero
        )
        norms = [s["norm"] for s in states if s["feasible"]]
        growing = (
            len(norms) >= 3
            and len(norms) == len(states)
            and all(a < b for a, b in zip(norms, norms[1:]))
        )
        expansion_rows[rho] = rows
        expansion_flags[rho] = all_infeasible or growing
    expansion_evidence = any(expansion_flags.values())

    if ends_evidence:
        verdict = "ends >= 2"
    elif large_evidence:
        verdict = "large circuits"
    elif expansion_evidence:
        verdict = "non-expansion evidence"
    else:
        verdict = "no phenomenon detected"

    return {
        "schema": "triad/1",
        "family": spec.describe(),
        "window_radii": radii,
        "ends": {
            "counts": {str(r): end_counts[r] for r in radii},
            "evidence": ends_evidence,
        },
        "large_circuits": {
            "profile": profile.to_jsonable(),
            "evidence": large_evidence,
        },
        "expansion": {
            "rips_radii": rips_radii,
            "tables": {
                str(rho): {str(r): expansion_rows[rho][r] for r in radii}
                for rho in rips_radii
            },
            "evidence_by_radius": {
                str(rho): expansion_flags[rho] for rho in rips_radii
            },
            "evidence": expansion_evidence,
        },
        "verdict": verdict,
    }
