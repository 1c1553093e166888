"""Full battery of end-to-end checks, one printed pass/fail line each."""

import random
import time
from fractions import Fraction
from itertools import combinations

from coarsecycles import report
from coarsecycles.chains import Chain, Z, Z2, edge_chain_of_path, is_cycle
from coarsecycles.cli import cmd_triad
from coarsecycles.config import RunConfig
from coarsecycles.cyclespace import (
    chain_to_mask,
    circuit_mask,
    circuit_profile_over_windows,
    cycle_space_dimension,
    edge_order,
    enumerate_simple_circuits,
    full_cycle_basis,
    greedy_circuit_basis,
    large_circuit_profile,
    membership,
)
from coarsecycles.ends import end_defining_tree, end_partition
from coarsecycles.expansion import (
    cheeger,
    h0_expansion_witness,
    h1_expansion_probe,
    z2_norm_sweep,
)
from coarsecycles.flows import dominates, extend_ray
from coarsecycles.rips import (
    RipsComplex,
    circuits_from_2chain,
    fan_radius,
    trace_virtual_edges,
    triangulate_circuit,
    walks_edge_sum,
)
from coarsecycles.trees import (
    TreeSpec,
    comb_counterexample_check,
    round_trip_report,
)
from coarsecycles.windows import FamilySpec, build_window, window_from_edges


def _run(number, label, body):
    try:
        body()
    except Exception:
        print("[acceptance] criterion {} FAIL: {}".format(number, label))
        raise
    print("[acceptance] criterion {} PASS: {}".format(number, label))


def test_criterion_01_chain_algebra():
    def body():
        t0 = time.monotonic()
        rng = random.Random(0)
        pool = [(i,) for i in range(12)]
        for ring in (Z, Z2):
            prev = None
            for _ in range(10000):
                c = Chain(2, ring)
                for _ in range(3):
                    key = tuple(sorted(rng.sample(pool, 3)))
                    c.add_term(key, rng.choice([-3, -2, -1, 1, 2, 3]))
                assert c.boundary().boundary().is_zero()
                if prev is not None:
                    both = prev + c
                    assert both.boundary() == prev.boundary() + c.boundary()
                if ring == Z:
                    assert (
                        c.boundary().reduce_mod2() == c.reduce_mod2().boundary()
                    )
                prev = c
        elapsed = time.monotonic() - t0
        assert elapsed < 5, "budget exceeded: {:.1f}s".format(elapsed)

    _run(1, "squared boundary, linearity, mod-2 reduction on 10^4 chains/ring", body)


def test_criterion_02_triangulation_round_trip():
    def body():
        t0 = time.monotonic()
        cases = [
            (build_window(FamilySpec.grid2d(), 3), None),
            (
                build_window(
                    FamilySpec.growing_circuit_chain(tuple(range(4, 21, 2))), 63
                ),
                None,
            ),
            (build_window(FamilySpec.regular3_tree(), 4), 0),
        ]
        total = 0
        for w, expect in cases:
            circuits = enumerate_simple_circuits(w, 20)
            if expect is not None:
                assert len(circuits) == expect
            if not circuits:
                continue
            rips = RipsComplex(w, max(fan_radius(len(c)) for c in circuits))
            for c in circuits:
                f = edge_chain_of_path(list(c) + [c[0]], Z)
                delta = triangulate_circuit(c)
                assert delta.boundary() == f
                walks = circuits_from_2chain(delta, rips)
                assert walks_edge_sum(walks, Z) == f
                total += 1
        assert total == 960 + 9
        elapsed = time.monotonic() - t0
        assert elapsed < 30, "budget exceeded: {:.1f}s".format(elapsed)

    _run(2, "exact triangulation round trip on all 969 short circuits", body)


def test_criterion_03_kernel_sandwich():
    def body():
        w = build_window(FamilySpec.grid2d(triangulated=True), 8)
        rng = random.Random(0)
        deep = sorted(v for v in w.vertices if w.dist_to_boundary(v) > 4)
        for r in (2, 3, 4):
            rips = RipsComplex(w, r)
            # short circuit sums bound inside the thickening
            for _ in range(100):
                center = rng.choice(deep)
                pool = enumerate_simple_circuits(w, 2 * r, cap=100000, roots=[center])
                picks = rng.sample(pool, min(len(pool), rng.randint(1, 4)))
                f = Chain(1, Z)
                delta = Chain(2, Z)
                for c in picks:
                    f = f + edge_chain_of_path(list(c) + [c[0]], Z)
                    delta = delta + triangulate_circuit(c)
                assert delta.boundary() == f
                for (a, b, cv), _ in delta.terms():
                    assert b in rips.dist[a] and cv in rips.dist[a] and cv in rips.dist[b]
            # cycles bounding inside the thickening split into short circuits
            for _ in range(100):
                g = Chain(2, Z)
                while len(list(g.terms())) < 3:
                    u = rng.choice(deep)
                    near = sorted(v for v in rips.dist[u] if v != u)
                    rng.shuffle(near)
                    tri = next(
                        (
                            tuple(sorted((u, a, b)))
                            for a in near
                            for b in near
                            if a < b and b in rips.dist[a]
                        ),
                        None,
                    )
                    if tri:
                        g.add_term(tri, rng.choice([-2, -1, 1, 2]))
                traced, witness = trace_virtual_edges(g.boundary(), rips)
                filler = g + witness.scale(-1)
                assert filler.boundary() == traced
                walks = circuits_from_2chain(filler, rips)
                assert all(len(vs) - 1 <= 3 * r for vs, _ in walks)
                assert walks_edge_sum(walks, Z) == traced

    _run(3, "both kernel inclusions hold on 100 samples per thickening radius", body)


def test_criterion_04_cycle_space_bases():
    def body():
        grid3 = window_from_edges(
            [((x, y), (x + 1, y)) for x in range(2) for y in range(3)]
            + [((x, y), (x, y + 1)) for x in range(3) for y in range(2)]
        )
        k4 = window_from_edges(
            [((i,), (j,)) for i, j in combinations(range(4), 2)]
        )
        hexa = build_window(FamilySpec.cycle(6), 3)
        for w in (grid3, k4, hexa, build_window(FamilySpec.ladder(), 3)):
            dim = len(w.edges) - len(w.vertices) + 1
            assert cycle_space_dimension(w) == dim
            basis = full_cycle_basis(w)
            assert basis.dimension() == dim
        # brute XOR enumeration on every instance with <= 15 circuits
        for w in (hexa, k4, grid3):
            order = edge_order(w)
            circuits = enumerate_simple_circuits(w, len(w.vertices))
            assert len(circuits) <= 15
            masks = [circuit_mask(c, order) for c in circuits]
            span = {0}
            for m in masks:
                span |= {s ^ m for s in span}
            basis = greedy_circuit_basis(w, circuits)
            assert len(span) == 2 ** basis.dimension()
            bmasks = [circuit_mask(c, order) for c in basis.circuits]
            for k in range(1, len(bmasks) + 1):
                for sub in combinations(bmasks, k):
                    acc = 0
                    for m in sub:
                        acc ^= m
                    assert acc != 0
            for c in circuits:
                ok, _ = membership(circuit_mask(c, order), basis)
                assert ok
        nested = full_cycle_basis(grid3, max_length=8)
        assert nested.dimension() == 4
        assert len(enumerate_simple_circuits(grid3, 8)) == 13
        assert nested.prefix_by_length(8).dimension() == nested.prefix_by_length(4).dimension() == 4

    _run(4, "basis sizes, XOR independence and span, nested prefix stability", body)


def test_criterion_05_large_circuit_profiles():
    def body():
        prof = circuit_profile_over_windows(
            lambda r: build_window(FamilySpec.grid2d(triangulated=True), r),
            [6, 8, 10],
            6,
        )
        assert prof.verdict == "stabilized at 3"
        chain_prof = large_circuit_profile(
            FamilySpec.growing_circuit_chain(tuple(range(4, 21, 2))), 20, 63
        )
        assert chain_prof.verdict == "large circuits up to 20"
        top = chain_prof.dims[63]
        dims = [top[L] for L in range(4, 21, 2)]
        assert dims == list(range(1, 10))
        tree_prof = large_circuit_profile(FamilySpec.regular3_tree(), 8, 5)
        assert all(d == 0 for table in tree_prof.dims.values() for d in table.values())

    _run(5, "profile verdicts: grid stabilizes, chain grows, trees vanish", body)


TREE_SPECS = [
    TreeSpec(((1,),)),
    TreeSpec.comb(3),
    TreeSpec(((-2, 1), ((1, 2), (1,)))),
    TreeSpec(((1,), ((2,),), ((1,),))),
    TreeSpec(((1,), ((1,),), ((1,),), ((1,),))),
]


def test_criterion_06_tree_isomorphism():
    def body():
        t0 = time.monotonic()
        for spec in TREE_SPECS:
            assert spec.max_depth() <= 4
            for ring in (Z, Z2):
                rr = round_trip_report(
                    spec, ray_len=6, samples=100, seed=0, ring=ring
                )
                assert rr["exact_round_trips"] == 100
                assert all(rr["structure_checks"].values())
                if ring == Z:
                    assert rr["worst_norm_ratio"] <= 2
        mags = [
            comb_counterexample_check(n)["max_magnitude"]
            for n in range(8, 17, 2)
        ]
        assert all(a < b for a, b in zip(mags, mags[1:]))
        assert all(comb_counterexample_check(n)["exact"] for n in range(8, 17, 2))
        elapsed = time.monotonic() - t0
        assert elapsed < 60, "budget exceeded: {:.1f}s".format(elapsed)

    _run(6, "exact tree round trips with ratio <= 2; comb magnitudes grow", body)


def test_criterion_07_pseudo_ends():
    def body():
        line = build_window(FamilySpec.biinfinite_line(), 5)
        assert end_partition(line, [(0,)]).count == 2
        grid = build_window(FamilySpec.grid2d(), 5)
        assert end_partition(grid, [(0, 0)]).count == 1
        tree = build_window(FamilySpec.regular3_tree(), 6)
        for k in range(1, 6):
            p = end_partition(tree, tree.ball((), k - 1))
            assert p.count == 3 * 2 ** (k - 1)
        for w in (line, grid, tree):
            end_defining_tree(w).check_bijection()

    _run(7, "end counts on line/grid/tree; separator bijection verified", body)


def test_criterion_08_ray_extension():
    def body():
        w = build_window(FamilySpec.grid2d(), 4)
        rng = random.Random(1)
        inner = sorted(v for v in w.vertices if w.dist_to_boundary(v) >= 2)
        repaired = 0
        for ring in (Z, Z2):
            done = 0
            while done < 100:
                phi = Chain(1, ring)
                for _ in range(rng.randint(1, 4)):
                    x, y = rng.choice(inner)
                    sq = edge_chain_of_path(
                        [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1), (x, y)],
                        ring,
                    )
                    if ring == Z:
                        sq = sq.scale(rng.choice([-2, -1, 1, 2]))
                    phi = phi + sq
                if phi.is_zero():
                    continue
                r = Chain(1, ring)
                for key, c in phi.terms():
                    if rng.random() < 0.6:
                        keep = rng.randint(0, abs(c))
                        if keep:
                            r.add_term(key, keep if c > 0 else -keep)
                rhat = extend_ray(ring, phi, r, w)
                assert dominates(phi, rhat)
                assert dominates(rhat, r)
                assert is_cycle(rhat, w)
                if not is_cycle(r, w):
                    repaired += 1
                    assert rhat != r
                done += 1
        assert repaired > 50

    _run(8, "dominated completions: sandwich, no inner defects, real repairs", body)


def test_criterion_09_expansion():
    def body():
        hexa = build_window(FamilySpec.cycle(6), 3)
        k4 = window_from_edges(
            [((i,), (j,)) for i, j in combinations(range(4), 2)]
        )

        def brute(win):
            best = None
            verts = sorted(win.vertex_set)
            for k in range(1, len(verts) // 2 + 1):
                for sub in combinations(verts, k):
                    U = set(sub)
                    cut = sum(1 for u, v in win.edges if (u in U) != (v in U))
                    val = Fraction(cut, len(U))
                    best = val if best is None or val < best else best
            return best

        assert cheeger(hexa)[0] == brute(hexa) == Fraction(2, 3)
        assert cheeger(k4)[0] == brute(k4) == 2

        tree = build_window(FamilySpec.regular3_tree(), 4)
        U = tree.inner_vertices(1)
        for eps in (1, Fraction(1, 2), Fraction(1, 3)):
            g = h0_expansion_witness(tree, U, [()], eps)
            assert g.sup_norm() <= -(-1 // eps)

        tri = build_window(FamilySpec.grid2d(triangulated=True), 4)
        plain = build_window(FamilySpec.grid2d(), 4)
        rips_tri = RipsComplex(tri, 1)
        rips_plain = RipsComplex(plain, 1)
        for x, y in ((0, 0), (1, 0), (-2, 1), (0, -2)):
            corners = [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)]
            sq_z = edge_chain_of_path(corners + [corners[0]], Z)
            res = h1_expansion_probe(rips_tri, corners, sq_z, Z)
            assert (res.feasible, res.norm, res.exact) == (True, 1, True)
            sq_2 = edge_chain_of_path(corners + [corners[0]], Z2)
            res2 = h1_expansion_probe(rips_plain, plain.ball((x, y), 2), sq_2, Z2)
            assert res2.feasible is False

        w5 = build_window(FamilySpec.grid2d(), 5)
        centers = sorted(v for v in w5.vertices if w5.dist_to_boundary(v) >= 3)
        count = 0
        for x, y in centers:
            for dx, dy in ((0, 0), (-1, 0), (0, -1), (-1, -1)):
                if count >= 50:
                    break
                cs = [
                    (x + dx, y + dy),
                    (x + dx + 1, y + dy),
                    (x + dx + 1, y + dy + 1),
                    (x + dx, y + dy + 1),
                ]
                f = edge_chain_of_path(cs + [cs[0]], Z2)
                rows = z2_norm_sweep(w5, w5.ball((x, y), 2), f, (1, 2, 3))
                norms = [row["norm"] for row in rows if row["feasible"]]
                assert all(a >= b for a, b in zip(norms, norms[1:]))
                count += 1
        assert count == 50

    _run(9, "Cheeger vs brute force, witness norms, fillings, monotone sweep", body)


def test_criterion_10_triad_verdicts():
    def body():
        runs = [
            (
                RunConfig(
                    FamilySpec.biinfinite_line(),
                    window_radii=(4, 6, 8),
                    rips_radii=(1,),
                    max_length=6,
                ),
                "ends >= 2",
            ),
            (
                RunConfig(
                    FamilySpec.growing_circuit_chain((4, 6, 8, 10, 12)),
                    window_radii=(8, 10, 12),
                    rips_radii=(1,),
                    max_length=12,
                ),
                "large circuits",
            ),
            (
                RunConfig(
                    FamilySpec.grid2d(triangulated=True),
                    window_radii=(4, 6, 8),
                    rips_radii=(1, 3),
                    max_length=6,
                ),
                "no phenomenon detected",
            ),
        ]
        for cfg, expected in runs:
            rep = cmd_triad(cfg)
            assert rep["sections"]["triad"]["verdict"] == expected
            again = cmd_triad(cfg)
            assert report.render(rep) == report.render(again)

    _run(10, "triad verdicts ends/large/none with byte-identical reruns", body)
