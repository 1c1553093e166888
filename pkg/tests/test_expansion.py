"""Isoperimetry, GF(2) filling solvers, probe batteries, triad verdicts."""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from coarsecycles.chains import Chain, Z, Z2, edge_chain_of_path
from coarsecycles.expansion import (
    ExpansionError,
    ProbeResult,
    _min_support_gf2,
    _solve_gf2,
    anchored_expansion,
    ball_ratio_sweep,
    cheeger,
    h0_expansion_witness,
    h1_expansion_probe,
    pure_filter,
    triad_report,
    z2_norm_sweep,
)
from coarsecycles.rips import RipsComplex
from coarsecycles.windows import FamilySpec, build_window, window_from_edges

SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)]


def square_chain(ring):
    return edge_chain_of_path(SQUARE, ring)


def brute_cheeger(window):
    verts = sorted(window.vertex_set)
    best = None
    for k in range(1, len(verts) // 2 + 1):
        for sub in combinations(verts, k):
            U = set(sub)
            cut = sum(1 for u, v in window.edges if (u in U) != (v in U))
            val = Fraction(cut, len(U))
            if best is None or val < best:
                best = val
    return best


def test_gf2_solver_frozen():
    particular, nullspace = _solve_gf2([0b011, 0b110, 0b101], [1, 0, 1], 3)
    assert particular == 1
    assert nullspace == [7]


def test_gf2_solver_infeasible():
    assert _solve_gf2([0b01, 0b01], [1, 0], 2) == (None, [])


def test_gf2_solver_against_enumeration():
    rng = random.Random(0)
    for _ in range(30):
        nvars = 4
        rows = [rng.randrange(1, 16) for _ in range(4)]
        rhs = [rng.randrange(2) for _ in range(4)]
        sols = [
            x
            for x in range(16)
            if all(bin(r & x).count("1") % 2 == b for r, b in zip(rows, rhs))
        ]
        particular, nullspace = _solve_gf2(rows, rhs, nvars)
        if not sols:
            assert particular is None
            continue
        assert particular in sols
        assert len(sols) == 2 ** len(nullspace)
        for n in nullspace:
            assert all(bin(r & n).count("1") % 2 == 0 for r in rows)


def test_min_support_exact_and_ties():
    assert _min_support_gf2(1, [7]) == (1, True)
    # 0b110 and 0b101 both have support two; the smaller mask wins
    assert _min_support_gf2(0b110, [0b011]) == (5, True)


def test_min_support_greedy_fallback():
    basis = [1 << i for i in range(2, 19)]
    mask, exact = _min_support_gf2(0b11, basis)
    assert mask == 0b11
    assert not exact


def test_cheeger_matches_enumeration():
    for spec, radius in [(FamilySpec.cycle(6), 3), (FamilySpec.ladder(), 2)]:
        w = build_window(spec, radius)
        assert cheeger(w)[0] == brute_cheeger(w)
    k4 = window_from_edges([((i,), (j,)) for i, j in combinations(range(4), 2)])
    assert cheeger(k4)[0] == brute_cheeger(k4) == 2


def test_cheeger_frozen_witness():
    val, wit = cheeger(build_window(FamilySpec.cycle(6), 3))
    assert val == Fraction(2, 3)
    assert sorted(wit) == [(0,), (1,), (2,)]
    assert cheeger(build_window(FamilySpec.biinfinite_line(), 4))[0] == Fraction(1, 4)


def test_cheeger_exact_mode_window_limit():
    with pytest.raises(ExpansionError):
        cheeger(build_window(FamilySpec.grid2d(), 5))


def test_cheeger_heuristic_upper_bounds_exact():
    for spec, radius in [(FamilySpec.cycle(8), 4), (FamilySpec.ladder(), 2)]:
        w = build_window(spec, radius)
        assert cheeger(w, mode="heuristic")[0] >= cheeger(w)[0]
    hval, hwit = cheeger(build_window(FamilySpec.grid2d(), 5), mode="heuristic")
    assert hval == Fraction(17, 30)
    assert len(hwit) == 30


def test_ball_ratio_sweep_grid():
    rows = ball_ratio_sweep(build_window(FamilySpec.grid2d(), 5))
    assert rows[:4] == [(0, (1, 4)), (1, (5, 12)), (2, (13, 20)), (3, (25, 28))]
    ratios = [Fraction(cut, size) for _, (size, cut) in rows]
    assert all(a >= b for a, b in zip(ratios, ratios[1:]))


def test_anchored_expansion_values():
    val, wit = anchored_expansion(build_window(FamilySpec.regular3_tree(), 3))
    assert val == Fraction(6, 5)
    assert len(wit) == 10
    assert anchored_expansion(build_window(FamilySpec.ladder(), 3))[0] == Fraction(2, 3)
    # interior too large for the exact enumeration
    assert anchored_expansion(build_window(FamilySpec.grid2d(), 4)) is None


def test_h0_witness_unit_norm():
    w = build_window(FamilySpec.regular3_tree(), 4)
    U = w.inner_vertices(1)
    g = h0_expansion_witness(w, U, [()], 1)
    assert g.sup_norm() == 1
    vals = {k[0]: c for k, c in g.boundary().terms()}
    assert all(vals.get(u, 0) == (1 if u == () else 0) for u in U)


def test_h0_witness_two_targets():
    w = build_window(FamilySpec.regular3_tree(), 4)
    U = w.inner_vertices(1)
    W = [(), (0,)]
    g = h0_expansion_witness(w, U, W, 1)
    assert g.sup_norm() <= 1
    vals = {k[0]: c for k, c in g.boundary().terms()}
    assert all(vals.get(u, 0) == (1 if u in W else 0) for u in U)


def test_h0_rejects_boundary_region():
    w = build_window(FamilySpec.ladder(), 3)
    with pytest.raises(ExpansionError):
        h0_expansion_witness(w, w.vertices, [(0, 0)], Fraction(1, 2))


def test_h0_rejects_eps_above_anchored():
    w = build_window(FamilySpec.ladder(), 3)
    with pytest.raises(ExpansionError):
        h0_expansion_witness(w, w.inner_vertices(1), [(0, 0)], 1)


def test_h1_triangulated_fillings():
    tri = build_window(FamilySpec.grid2d(triangulated=True), 4)
    rips = RipsComplex(tri, 1)
    U = [(0, 0), (1, 0), (1, 1), (0, 1)]
    res = h1_expansion_probe(rips, U, square_chain(Z2), Z2)
    assert (res.feasible, res.norm, res.exact) == (True, 2, True)
    resz = h1_expansion_probe(rips, U, square_chain(Z), Z)
    assert (resz.feasible, resz.norm, resz.exact) == (True, 1, True)
    # the integer filling really hits the square on the nose
    assert resz.chain.boundary().restrict(
        lambda k: k[0] in U and k[1] in U
    ).reduce_mod2().support() == square_chain(Z2).support()


def test_h1_no_triangles_means_infeasible():
    grid = build_window(FamilySpec.grid2d(), 4)
    res = h1_expansion_probe(RipsComplex(grid, 1), grid.ball((0, 0), 2), square_chain(Z2), Z2)
    assert res.feasible is False
    assert res.norm is None


def test_h1_virtual_triangles_open_up():
    grid = build_window(FamilySpec.grid2d(), 4)
    U = [(0, 0), (1, 0), (1, 1), (0, 1)]
    res = h1_expansion_probe(RipsComplex(grid, 2), U, square_chain(Z2), Z2)
    assert res.feasible
    assert res.norm == 2


def test_probe_result_unpacks():
    res = ProbeResult(True, 3, None, False, "x")
    feasible, norm, chain = res
    assert (feasible, norm, chain) == (True, 3, None)


def test_norm_sweep_monotone_with_carry():
    grid = build_window(FamilySpec.grid2d(), 4)
    U = [(0, 0), (1, 0), (1, 1), (0, 1)]
    rows = z2_norm_sweep(grid, U, square_chain(Z2), [1, 2, 3])
    assert [r["feasible"] for r in rows] == [False, True, True]
    assert [r["norm"] for r in rows] == [None, 2, 2]
    assert rows[2]["detail"] == "carried forward from a smaller radius"
    norms = [r["norm"] for r in rows if r["norm"] is not None]
    assert all(a >= b for a, b in zip(norms, norms[1:]))


def test_pure_filter_battery():
    tri = build_window(FamilySpec.grid2d(triangulated=True), 4)
    grid = build_window(FamilySpec.grid2d(), 4)
    U_tri = tri.ball((0, 0), 2)
    U_grid = grid.ball((0, 0), 2)
    for ring in (Z2, Z):
        f = square_chain(ring)
        assert pure_filter(RipsComplex(tri, 1), U_tri, f, tri)
        assert not pure_filter(RipsComplex(grid, 1), U_grid, f, grid)
        assert pure_filter(RipsComplex(grid, 2), U_grid, f, grid)


def test_triad_two_ended_line():
    rep = triad_report(FamilySpec.biinfinite_line(), (3, 4))
    assert rep["schema"] == "triad/1"
    assert rep["verdict"] == "ends >= 2"
    assert rep["ends"]["counts"] == {"3": 2, "4": 2}
    assert rep["window_radii"] == [3, 4]
