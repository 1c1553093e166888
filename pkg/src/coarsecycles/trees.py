"""Trivalent tree windows and coefficient recovery over boundary paths.

A tree window is grown from a spine (a line segment) by gluing rays at
branch vertices, level by level; every ray is truncated at a common length
and its tip is a window boundary vertex.  The module builds a structured
family of boundary-to-boundary paths through the tree, one construction
stage per ray level, and recovers the coefficients of any cycle as a
bounded assignment over that family by a designated-edge recursion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .chains import Chain, Z, Z2
from .windows import GraphWindow, canonical_edge


class TreeError(ValueError):
    pass


class BipBasisError(RuntimeError):
    """A structural property of a constructed path basis failed to hold."""


@dataclass(frozen=True)
class TreeSpec:
    """Branch layout of a trivalent tree grown from a bi-infinite spine.

    `levels[0]` lists the spine positions carrying a branch (nonzero ints,
    strictly ascending).  `levels[j]` for j >= 1 holds one ascending list of
    positive branch positions per ray of level j, in ray creation order.
    Rays of level j + 1 are created by walking the level-j rays in creation
    order; creation order at level 1 follows the sorted spine positions.
    """

    levels: tuple = ()

    def __post_init__(self):
        canon = []
        for j, raw in enumerate(self.levels):
            if j == 0:
                row = tuple(int(p) for p in raw)
                if any(p == 0 for p in row):
                    raise TreeError("spine branch positions must be nonzero")
                if list(row) != sorted(set(row)):
                    raise TreeError("spine branch positions must be ascending and distinct")
            else:
                row = tuple(tuple(int(p) for p in sub) for sub in raw)
                for sub in row:
                    if any(p < 1 for p in sub):
                        raise TreeError("ray branch positions must be >= 1")
                    if list(sub) != sorted(set(sub)):
                        raise TreeError("ray branch positions must be ascending and distinct")
            canon.append(row)
        # each level must carry one entry per ray of that level
        count = len(canon[0]) if canon else 0
        for j in range(1, len(canon)):
            if len(canon[j]) != count:
                raise TreeError(
                    "level {} needs {} branch lists, got {}".format(j, count, len(canon[j]))
                )
            count = sum(len(sub) for sub in canon[j])
        object.__setattr__(self, "levels", tuple(canon))

    @classmethod
    def comb(cls, n_teeth: int) -> "TreeSpec":
        """Spine with one ray at each of the positions 1..n_teeth."""
        if n_teeth < 1:
            raise TreeError("need at least one tooth")
        return cls((tuple(range(1, n_teeth + 1)),))

    def max_depth(self) -> int:
        """Number of ray levels above the spine."""
        return len(self.levels)


@dataclass(frozen=True)
class Ray:
    rid: int
    depth: int
    parent: Optional[int]
    attach: Optional[tuple]
    branch_positions: tuple = ()


def _expand_rays(spec: TreeSpec, depth: int) -> List[Ray]:
    """Ray table for the construction truncated to the given level count.

    Level-d rays exist when d <= depth - 1; a ray keeps its branch positions
    only when its children are part of the truncated construction.
    """
    levels = spec.levels
    spine_branches = levels[0] if (levels and depth >= 2) else ()
    rays = [Ray(0, 0, None, None, tuple(spine_branches))]
    current = [rays[0]]
    next_rid = 1
    for d in range(1, depth):
        created: List[Ray] = []
        made = 0
        for parent in current:
            for pos in parent.branch_positions:
                own: tuple = ()
                if d + 1 <= depth - 1 and d < len(levels):
                    own = levels[d][made]
                attach = (0, pos) if parent.rid == 0 else (parent.rid, pos)
                created.append(Ray(next_rid, d, parent.rid, attach, own))
                next_rid += 1
                made += 1
        rays.extend(created)
        current = created
    return rays


def build_tree(spec: TreeSpec, depth: Optional[int] = None, ray_len: Optional[int] = None) -> GraphWindow:
    """Tree window: spine of half-length ray_len plus rays of length ray_len.

    `depth` counts construction levels (1 = bare spine); None builds all the
    levels the spec defines.  Ray tips and the two spine ends are boundary.
    """
    if ray_len is None:
        raise TreeError("ray_len is required")
    if ray_len < 1:
        raise TreeError("ray_len must be >= 1")
    if depth is None:
        depth = spec.max_depth() + 1
    if depth < 1:
        raise TreeError("depth must be >= 1")
    rays = _expand_rays(spec, depth)
    edges = []
    for z in range(-ray_len, ray_len):
        edges.append(canonical_edge((0, z), (0, z + 1)))
    for ray in rays[1:]:
        if ray.parent == 0:
            if abs(ray.attach[1]) > ray_len - 1:
                raise TreeError("branch at {} falls outside the spine".format(ray.attach))
        elif not 1 <= ray.attach[1] <= ray_len - 1:
            raise TreeError("branch at {} falls outside its ray".format(ray.attach))
        edges.append(canonical_edge(ray.attach, (ray.rid, 1)))
        for i in range(1, ray_len):
            edges.append(canonical_edge((ray.rid, i), (ray.rid, i + 1)))
    vertices = {v for e in edges for v in e}
    boundary = {(0, -ray_len), (0, ray_len)}
    boundary.update((ray.rid, ray_len) for ray in rays[1:])
    return GraphWindow(
        vertices=vertices,
        edges=edges,
        boundary_vertices=boundary,
        inner_radius=ray_len,
        family_tag="trivalent_tree",
        degree_bound=3,
        seed_vertex=(0, 0),
    )


# -- path family over the tree ------------------------------------------


@dataclass(frozen=True)
class Bip:
    """One boundary-to-boundary path, tagged with its construction stage."""

    index: int
    stage: int
    vertices: tuple


def _descend(rays: Sequence[Ray], rid: int, ray_len: int) -> List[tuple]:
    return [(rid, i) for i in range(ray_len, 0, -1)] + [rays[rid].attach]


def _ascend(rays: Sequence[Ray], rid: int, ray_len: int) -> List[tuple]:
    return [rays[rid].attach] + [(rid, i) for i in range(1, ray_len + 1)]


def _spine_point(pos: int) -> tuple:
    return (0, pos)


def _group_bips(rays, ray_len, parent_rid, kids, tip_vertex, point_of):
    """Paths for one parent line: consecutive pairs plus a final run to the tip.

    `kids` is the ordered list of (position, child rid) for this parent side;
    `point_of` maps a parent position to its vertex.
    """
    paths = []
    if not kids:
        return paths
    for i in range(len(kids) - 1):
        (p_lo, c_lo), (p_hi, c_hi) = kids[i], kids[i + 1]
        sgn = 1 if p_hi > p_lo else -1
        path = _descend(rays, c_lo, ray_len)
        path += [point_of(q) for q in range(p_lo + sgn, p_hi + sgn, sgn)]
        path += _ascend(rays, c_hi, ray_len)[1:]
        paths.append(path)
    p_last, c_last = kids[-1]
    tip_pos = tip_vertex[1]
    sgn = 1 if tip_pos > p_last else -1
    path = _descend(rays, c_last, ray_len)
    path += [point_of(q) for q in range(p_last + sgn, tip_pos + sgn, sgn)]
    paths.append(path)
    return paths


def _generate_bips(rays: Sequence[Ray], ray_len: int) -> List[Bip]:
    children: Dict[int, List[Tuple[int, int]]] = {r.rid: [] for r in rays}
    for ray in rays[1:]:
        children[ray.parent].append((ray.attach[1], ray.rid))
    bips: List[Bip] = []
    spine = tuple(_spine_point(z) for z in range(-ray_len, ray_len + 1))
    bips.append(Bip(0, 1, spine))
    max_depth = max(r.depth for r in rays)
    for stage in range(2, max_depth + 2):
        for parent in rays:
            if parent.depth != stage - 2:
                continue
            if parent.rid == 0:
                neg = sorted(
                    ((p, c) for p, c in children[0] if p < 0), key=lambda t: -t[0]
                )
                pos = sorted((p, c) for p, c in children[0] if p > 0)
                halves = [
                    (neg, _spine_point(-ray_len)),
                    (pos, _spine_point(ray_len)),
                ]
                for kids, tip in halves:
                    for path in _group_bips(rays, ray_len, 0, kids, tip, _spine_point):
                        bips.append(Bip(len(bips), stage, tuple(path)))
            else:
                kids = sorted(children[parent.rid])
                tip = (parent.rid, ray_len)
                point = lambda q, r=parent: r.attach if q == 0 else (r.rid, q)
                for path in _group_bips(rays, ray_len, parent.rid, kids, tip, point):
                    bips.append(Bip(len(bips), stage, tuple(path)))
    return bips


class BipBasis:
    """Staged family of boundary paths with its order and edge bookkeeping.

    `covers` maps each covered edge to the indices of paths running over it;
    after `well_order`, `last_map` sends an edge to the path that owns it
    (the latest cover in the total order) and `fibers` inverts that map.
    """

    def __init__(self, window: GraphWindow, spec: TreeSpec, depth: int,
                 ray_len: int, rays: Sequence[Ray], bips: Sequence[Bip]):
        self.window = window
        self.spec = spec
        self.depth = depth
        self.ray_len = ray_len
        self.rays = tuple(rays)
        self.bips = tuple(bips)
        self.edge_dirs: List[Dict[tuple, int]] = []
        for b in self.bips:
            dirs: Dict[tuple, int] = {}
            for u, v in zip(b.vertices, b.vertices[1:]):
                e = canonical_edge(u, v)
                if e in dirs:
                    raise BipBasisError("path {} repeats an edge".format(b.index))
                if not window.has_edge(*e):
                    raise BipBasisError("path {} leaves the window".format(b.index))
                dirs[e] = 1 if (u, v) == e else -1
            self.edge_dirs.append(dirs)
        covers: Dict[tuple, List[int]] = {}
        for b in self.bips:
            for e in self.edge_dirs[b.index]:
                covers.setdefault(e, []).append(b.index)
        self.covers = {e: tuple(ix) for e, ix in covers.items()}
        preds: List[set] = [set() for _ in self.bips]
        for e, ix in self.covers.items():
            for i in ix:
                for j in ix:
                    if self.bips[i].stage + 1 == self.bips[j].stage:
                        preds[j].add(i)
        self.preds = tuple(frozenset(s) for s in preds)
        self.total_order: tuple = ()
        self.rank: Dict[int, int] = {}
        self.last_map: Dict[tuple, int] = {}
        self.fibers: Dict[int, tuple] = {}
        self.designated: Dict[int, tuple] = {}

    def __len__(self) -> int:
        return len(self.bips)

    def chain(self, index: int, ring: str = Z) -> Chain:
        dirs = self.edge_dirs[index]
        if ring == Z2:
            return Chain(1, Z2, [(e, 1) for e in sorted(dirs)])
        return Chain(1, Z, [(e, d) for e, d in sorted(dirs.items())])

    def pred_closure(self, index: int) -> frozenset:
        seen: set = set()
        stack = [index]
        while stack:
            for q in self.preds[stack.pop()]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return frozenset(seen)

    def edge_depth(self, e: tuple) -> int:
        """Level of the ray an edge belongs to (attachment edges included)."""
        rid = max(e[0][0], e[1][0])
        return self.rays[rid].depth

    def depth_of_vertex(self, v: tuple) -> int:
        return self.rays[v[0]].depth


def diagonal_extension(classes: Sequence[Sequence[int]], preds: Sequence[frozenset]) -> List[int]:
    """Linear extension by a diagonal sweep over the given class lists.

    Visits classes 0..r in round r, emitting each class's next element when
    all its predecessors are already placed.  An antichain in one class comes
    out in input order; later classes interleave as soon as they unblock.
    """
    total = sum(len(c) for c in classes)
    emitted: List[int] = []
    placed: set = set()
    ptr = [0] * len(classes)
    rounds = 0
    while len(emitted) < total:
        progress = False
        for j in range(min(rounds, len(classes) - 1) + 1):
            cls = classes[j]
            if ptr[j] < len(cls):
                cand = cls[ptr[j]]
                if preds[cand] <= placed:
                    emitted.append(cand)
                    placed.add(cand)
                    ptr[j] += 1
                    progress = True
        if not progress and rounds >= len(classes):
            raise BipBasisError("no progress in ordering sweep; cyclic precedence?")
        rounds += 1
    return emitted


def well_order(pb: BipBasis) -> tuple:
    """Total order refining the stage precedence; installs edge ownership."""
    if pb.total_order:
        return pb.total_order
    n = len(pb.bips)
    height = [None] * n

    def h(i):
        if height[i] is None:
            height[i] = 0 if not pb.preds[i] else 1 + max(h(q) for q in pb.preds[i])
        return height[i]

    for i in range(n):
        h(i)
    classes: List[List[int]] = [[] for _ in range(max(height) + 1 if n else 0)]
    for i in range(n):
        classes[height[i]].append(i)
    order = diagonal_extension(classes, pb.preds)
    pb.total_order = tuple(order)
    pb.rank = {p: r for r, p in enumerate(order)}
    fibers: Dict[int, List[tuple]] = {i: [] for i in range(n)}
    for e, ix in pb.covers.items():
        last = max(ix, key=lambda i: pb.rank[i])
        pb.last_map[e] = last
        fibers[last].append(e)
    pb.fibers = {i: tuple(sorted(es)) for i, es in fibers.items()}
    return pb.total_order


def construct_bips(spec: TreeSpec, depth: Optional[int] = None,
                   ray_len: Optional[int] = None, check: bool = True) -> BipBasis:
    """Staged path basis for the tree window of the given depth and ray length.

    Stage 1 is the spine alone.  Each later stage adds, per ray of the
    previous level carrying branches, the paths joining consecutive child
    rays plus one final path running past the last child to the parent tip.
    With `check`, all six structural properties are verified and a failure
    raises (it would indicate a construction bug, not a bad input).
    """
    if depth is None:
        depth = spec.max_depth() + 1
    window = build_tree(spec, depth, ray_len)
    rays = _expand_rays(spec, depth)
    bips = _generate_bips(rays, ray_len)
    pb = BipBasis(window, spec, depth, ray_len, rays, bips)
    well_order(pb)
    if check:
        results = verify_bip_basis(pb)
        bad = [name for name, res in results.items() if not res["ok"]]
        if bad:
            raise BipBasisError("structure checks failed: {}".format(", ".join(bad)))
    return pb


# -- structural checks ---------------------------------------------------


def _edge_span(pb: BipBasis, max_ray_depth: int) -> set:
    return {e for e in pb.window.edges if pb.edge_depth(e) <= max_ray_depth}


def _induced_near(pb: BipBasis, max_ray_depth: int) -> set:
    """Induced edges of the closed 1-neighbourhood of the shallow-ray core."""
    core = {v for v in pb.window.vertices if pb.depth_of_vertex(v) <= max_ray_depth}
    near = set(core)
    for v in core:
        near.update(pb.window.adj[v])
    return {e for e in pb.window.edges if e[0] in near and e[1] in near}


def _find_companions(pb: BipBasis):
    """Designated recursion edge per path, with a companion edge when needed.

    For each path p we look for an owned edge e such that either nothing else
    runs over e, or some edge e2 on the older part of the tree is covered by
    exactly the other paths over e, all crossing e and e2 with a consistent
    relative direction.  The companion pins the partial sums appearing in the
    coefficient recursion to a single cycle value.
    """
    well_order(pb)
    designated: Dict[int, tuple] = {}
    failures: List[int] = []

    def edge_key(e):
        d = min(pb.window.dist_to_boundary(e[0]), pb.window.dist_to_boundary(e[1]))
        return (-d, e)

    for p in range(len(pb.bips)):
        fiber = pb.fibers.get(p, ())
        found = None
        stage = pb.bips[p].stage
        allowed = _edge_span(pb, stage - 2) | {
            e for e in pb.covers if pb.edge_depth(e) == stage - 1
            and min(pb.depth_of_vertex(e[0]), pb.depth_of_vertex(e[1])) <= stage - 2
        }
        for e in sorted(fiber, key=edge_key):
            others = [q for q in pb.covers[e] if q != p]
            if not others:
                found = (e, None)
                break
            target = frozenset(others)
            hit = None
            for e2 in sorted(allowed):
                if frozenset(pb.covers.get(e2, ())) != target:
                    continue
                rels = {
                    pb.edge_dirs[q][e] * pb.edge_dirs[q][e2] for q in others
                }
                if len(rels) == 1:
                    hit = e2
                    break
            if hit is not None:
                found = (e, hit)
                break
        if found is None:
            failures.append(p)
            if fiber:
                designated[p] = (sorted(fiber, key=edge_key)[0], None)
        else:
            designated[p] = found
    pb.designated = designated
    return designated, failures


def verify_bip_basis(pb: BipBasis) -> Dict[str, dict]:
    """Six structural checks; each result carries ok plus a short detail."""
    well_order(pb)
    results: Dict[str, dict] = {}

    worst = max((len(ix) for ix in pb.covers.values()), default=0)
    results["bounded_cover"] = {
        "ok": worst <= 3,
        "detail": "max paths over an edge: {}".format(worst),
    }

    bad_support = []
    for b in pb.bips:
        if b.stage < 2:
            continue
        span = _edge_span(pb, b.stage - 1)
        forbidden = _induced_near(pb, b.stage - 3) if b.stage >= 3 else set()
        for e in pb.edge_dirs[b.index]:
            if e not in span or e in forbidden:
                bad_support.append((b.index, e))
    results["staged_support"] = {
        "ok": not bad_support,
        "detail": "violations: {}".format(len(bad_support)),
    }

    uncovered = 0
    stages = sorted({b.stage for b in pb.bips})
    for s in stages:
        need = _edge_span(pb, s - 1)
        have = set()
        for b in pb.bips:
            if b.stage <= s:
                have.update(pb.edge_dirs[b.index])
        uncovered += len(need - have)
    results["full_coverage"] = {
        "ok": uncovered == 0,
        "detail": "uncovered edge slots: {}".format(uncovered),
    }

    empty = [i for i in range(len(pb.bips)) if not pb.fibers.get(i)]
    max_preds = max((len(pb.pred_closure(i)) for i in range(len(pb.bips))), default=0)
    results["finite_history"] = {
        "ok": not empty,
        "detail": "largest predecessor set {}; paths owning no edge: {}".format(
            max_preds, len(empty)
        ),
    }

    _, comp_failures = _find_companions(pb)
    results["companion_edges"] = {
        "ok": not comp_failures,
        "detail": "paths without a usable companion: {}".format(len(comp_failures)),
    }

    disconnected = []
    for i, fiber in pb.fibers.items():
        if len(fiber) <= 1:
            continue
        verts: Dict[tuple, List[int]] = {}
        for k, e in enumerate(fiber):
            verts.setdefault(e[0], []).append(k)
            verts.setdefault(e[1], []).append(k)
        seen = {0}
        stack = [0]
        while stack:
            k = stack.pop()
            for v in fiber[k]:
                for k2 in verts[v]:
                    if k2 not in seen:
                        seen.add(k2)
                        stack.append(k2)
        if len(seen) != len(fiber):
            disconnected.append(i)
    results["connected_fibers"] = {
        "ok": not disconnected,
        "detail": "paths with split edge sets: {}".format(len(disconnected)),
    }
    return results


# -- coefficients --------------------------------------------------------


def bips_to_cycle(f: Dict[int, int], pb: BipBasis, ring: str = Z) -> Chain:
    """Edge chain of a bounded assignment; sup norm at most three times f's."""
    acc: Dict[tuple, int] = {}
    bound = 0
    for i, coeff in f.items():
        if coeff == 0:
            continue
        bound = max(bound, abs(coeff))
        for e, d in pb.edge_dirs[i].items():
            val = coeff * d if ring == Z else coeff
            acc[e] = acc.get(e, 0) + val
    if ring == Z2:
        acc = {e: v % 2 for e, v in acc.items()}
    out = Chain(1, ring, [(e, v) for e, v in sorted(acc.items()) if v])
    if out.sup_norm() > 3 * bound:
        raise BipBasisError("cover bound violated by reconstruction")
    return out


def _edge_value(c: Chain, e: tuple) -> int:
    return c.get(e)


def tree_coefficients(c: Chain, pb: BipBasis, margin: Optional[int] = None,
                      check: bool = True) -> Dict[int, int]:
    """Coefficients over the path basis recovering the cycle c.

    Walks the total order; each path's value is read off its designated owned
    edge after subtracting the already-known paths over that edge.  The same
    computation on every other owned edge in the inner region must agree,
    which is asserted, as is the reconstruction on inner edges and the norm
    bound (twice the cycle's sup norm) when `check` is set.
    """
    ring = c.ring
    if margin is None:
        margin = max(1, pb.ray_len // 4)
    well_order(pb)
    if not pb.designated:
        _find_companions(pb)

    def inner_edge(e):
        return (
            pb.window.dist_to_boundary(e[0]) >= margin
            and pb.window.dist_to_boundary(e[1]) >= margin
        )

    def value_at(p, e, f):
        partial = 0
        for q in pb.covers[e]:
            if q == p:
                continue
            if pb.rank[q] > pb.rank[p]:
                raise BipBasisError("edge owner is not last over its edge")
            if ring == Z2:
                partial += f[q]
            else:
                partial += f[q] * pb.edge_dirs[q][e]
        if ring == Z2:
            return (_edge_value(c, e) + partial) % 2
        return pb.edge_dirs[p][e] * (_edge_value(c, e) - partial)

    f: Dict[int, int] = {}
    for p in pb.total_order:
        if p not in pb.designated:
            raise BipBasisError("path {} owns no edge; cannot recurse".format(p))
        e_star = pb.designated[p][0]
        val = value_at(p, e_star, f)
        for e in pb.fibers[p]:
            if e != e_star and inner_edge(e):
                alt = value_at(p, e, f)
                if alt != val:
                    raise BipBasisError(
                        "inconsistent values {} vs {} for path {}".format(val, alt, p)
                    )
        f[p] = val
    if check:
        if ring == Z:
            cap = 2 * c.sup_norm()
            worst = max((abs(v) for v in f.values()), default=0)
            if worst > cap:
                raise BipBasisError(
                    "coefficient norm {} exceeds twice the cycle norm {}".format(worst, cap)
                )
        rebuilt = bips_to_cycle(f, pb, ring)
        for e in pb.window.edges:
            if inner_edge(e) and _edge_value(rebuilt, e) != _edge_value(c, e):
                raise BipBasisError("reconstruction mismatch on inner edge {}".format(e))
    return f


def round_trip_report(spec: TreeSpec, depth: Optional[int] = None,
                      ray_len: int = 8, samples: int = 100, seed: int = 0,
                      ring: str = Z, coeff_bound: int = 3) -> dict:
    """Random bounded assignments pushed to cycles and recovered exactly."""
    pb = construct_bips(spec, depth, ray_len)
    checks = verify_bip_basis(pb)
    rng = random.Random(seed)
    exact = 0
    worst_ratio = Fraction(0)
    for _ in range(samples):
        if ring == Z2:
            f0 = {i: rng.randint(0, 1) for i in range(len(pb))}
        else:
            f0 = {i: rng.randint(-coeff_bound, coeff_bound) for i in range(len(pb))}
        c = bips_to_cycle(f0, pb, ring)
        f1 = tree_coefficients(c, pb)
        if f1 == f0:
            exact += 1
        if ring == Z and c.sup_norm():
            worst = max(abs(v) for v in f1.values())
            worst_ratio = max(worst_ratio, Fraction(worst, c.sup_norm()))
    return {
        "paths": len(pb),
        "samples": samples,
        "exact_round_trips": exact,
        "worst_norm_ratio": worst_ratio,
        "structure_checks": {k: v["ok"] for k, v in checks.items()},
    }


# -- the unbounded-coefficient comb --------------------------------------


def comb_counterexample_check(n_teeth: int, ray_len: Optional[int] = None) -> dict:
    """Skip-one arch family on a comb whose recovered values must grow.

    The comb carries one tooth at each spine position 1..n_teeth.  The path
    family is the spine, two left pieces reaching teeth 1 and 2, arches from
    tooth j to tooth j + 2, and two right pieces leaving teeth n-1 and n.
    For the cycle alternating +1/-1 up the teeth the linear system is exactly
    solvable but the values along each arch parity chain drift by one per
    step, so their magnitudes are unbounded in the tooth count.
    """
    if n_teeth < 4:
        raise TreeError("need at least four teeth")
    if ray_len is None:
        ray_len = n_teeth + 2
    spec = TreeSpec.comb(n_teeth)
    depth = 2
    window = build_tree(spec, depth, ray_len)
    rays = _expand_rays(spec, depth)
    L = ray_len

    def tooth_down(j):
        return [(j, i) for i in range(L, 0, -1)] + [(0, j)]

    def tooth_up(j):
        return [(0, j)] + [(j, i) for i in range(1, L + 1)]

    def spine_run(a, b):
        step = 1 if b >= a else -1
        return [(0, z) for z in range(a, b + step, step)]

    paths: List[tuple] = []
    labels: List[str] = []
    paths.append(tuple(spine_run(-L, L)))
    labels.append("spine")
    paths.append(tuple(spine_run(-L, 1)[:-1] + tooth_up(1)))
    labels.append("left_a")
    paths.append(tuple(spine_run(-L, 2)[:-1] + tooth_up(2)))
    labels.append("left_b")
    arch_of: Dict[int, int] = {}
    for j in range(1, n_teeth - 1):
        path = tooth_down(j)[:-1] + spine_run(j, j + 2)[:-1] + tooth_up(j + 2)
        arch_of[j] = len(paths)
        paths.append(tuple(path))
        labels.append("arch_{}".format(j))
    right_a = len(paths)
    paths.append(tuple(tooth_down(n_teeth - 1)[:-1] + spine_run(n_teeth - 1, L)))
    labels.append("right_a")
    right_b = len(paths)
    paths.append(tuple(tooth_down(n_teeth)[:-1] + spine_run(n_teeth, L)))
    labels.append("right_b")
    bips = [Bip(i, 1 if i == 0 else 2, p) for i, p in enumerate(paths)]
    pb = BipBasis(window, spec, depth, ray_len, rays, bips)
    well_order(pb)
    checks = verify_bip_basis(pb)

    tooth_sign = {j: 1 if j % 2 == 1 else -1 for j in range(1, n_teeth + 1)}
    terms: List[tuple] = []
    for j in range(1, n_teeth + 1):
        terms.append((canonical_edge((0, j), (j, 1)), tooth_sign[j]))
        for i in range(1, L):
            terms.append((canonical_edge((j, i), (j, i + 1)), tooth_sign[j]))
    tail = 0 if n_teeth % 2 == 0 else -1
    for z in range(-L, L):
        if 1 <= z <= n_teeth - 1:
            val = -(z % 2)
        elif z >= n_teeth:
            val = tail
        else:
            val = 0
        if val:
            terms.append((canonical_edge((0, z), (0, z + 1)), val))
    cycle = Chain(1, Z, terms)

    f = {0: 0, 1: 1, 2: -1}
    for j in range(1, n_teeth + 1):
        asc = 1 if j == 1 else 2 if j == 2 else arch_of[j - 2]
        desc = arch_of[j] if j <= n_teeth - 2 else right_a if j == n_teeth - 1 else right_b
        f[desc] = f[asc] - tooth_sign[j]
    rebuilt = bips_to_cycle(f, pb, Z)
    exact = rebuilt == cycle

    odd_chain = [f[arch_of[j]] for j in range(1, n_teeth - 1, 2)]
    even_chain = [f[arch_of[j]] for j in range(2, n_teeth - 1, 2)]
    return {
        "n_teeth": n_teeth,
        "exact": exact,
        "labels": labels,
        "values": {labels[i]: f[i] for i in sorted(f)},
        "odd_chain_magnitudes": [abs(v) for v in odd_chain],
        "even_chain_magnitudes": [abs(v) for v in even_chain],
        "max_magnitude": max(abs(v) for v in f.values()),
        "failed_checks": sorted(k for k, v in checks.items() if not v["ok"]),
    }
