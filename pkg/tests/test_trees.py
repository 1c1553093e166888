"""Tree windows, staged path bases, coefficient recovery, comb growth."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarsecycles.chains import Z, Z2
from coarsecycles.trees import (
    BipBasisError,
    TreeError,
    TreeSpec,
    bips_to_cycle,
    build_tree,
    comb_counterexample_check,
    construct_bips,
    diagonal_extension,
    round_trip_report,
    tree_coefficients,
    verify_bip_basis,
    well_order,
)

BRANCH_SPEC = TreeSpec(((-2, 1), ((1, 2), (1,))))
DEEP_SPEC = TreeSpec(((1,), ((2,),), ((1,),)))

CHECK_NAMES = [
    "bounded_cover",
    "staged_support",
    "full_coverage",
    "finite_history",
    "companion_edges",
    "connected_fibers",
]


def test_spec_validation():
    with pytest.raises(TreeError):
        TreeSpec(((0, 1),))
    with pytest.raises(TreeError):
        TreeSpec(((2, 1),))
    with pytest.raises(TreeError):
        TreeSpec(((-1, 1), ((1,),)))
    assert TreeSpec.comb(3).levels == ((1, 2, 3),)
    assert BRANCH_SPEC.max_depth() == 2
    with pytest.raises(TreeError):
        TreeSpec.comb(0)


def test_build_tree_counts():
    w = build_tree(TreeSpec.comb(3), ray_len=4)
    assert len(w.vertices) == 21
    assert len(w.boundary_vertices) == 5
    # a tree window has no circuits
    assert len(w.edges) == len(w.vertices) - 1
    w2 = build_tree(BRANCH_SPEC, ray_len=6)
    assert (len(w2.vertices), len(w2.boundary_vertices)) == (43, 7)
    # every ray tip and both spine ends sit on the boundary
    assert all(len(w2.adj[v]) == 1 for v in w2.boundary_vertices)


def test_construct_bips_counts_and_stages():
    pb = construct_bips(TreeSpec.comb(4), ray_len=5)
    assert [(b.index, b.stage) for b in pb.bips] == [
        (0, 1), (1, 2), (2, 2), (3, 2), (4, 2)
    ]
    pb2 = construct_bips(BRANCH_SPEC, ray_len=6)
    assert len(pb2) == 6
    assert sorted({b.stage for b in pb2.bips}) == [1, 2, 3]


def test_well_order_puts_spine_first():
    pb = construct_bips(BRANCH_SPEC, ray_len=6)
    order = well_order(pb)
    assert order[0] == 0
    # precedence respected: each path comes after everything it depends on
    for r, i in enumerate(order):
        assert all(order.index(q) < r for q in pb.preds[i])


def test_diagonal_extension_antichain_keeps_input_order():
    assert diagonal_extension([[2, 0, 1]], [frozenset()] * 3) == [2, 0, 1]


def test_diagonal_extension_interleaves_when_unblocked():
    classes = [[0, 1, 2], [3]]
    preds = [frozenset(), frozenset(), frozenset(), frozenset({0})]
    assert diagonal_extension(classes, preds) == [0, 1, 3, 2]


def test_diagonal_extension_detects_cycles():
    with pytest.raises(BipBasisError):
        diagonal_extension([[0], [1]], [frozenset({1}), frozenset({0})])


@pytest.mark.parametrize("spec", [TreeSpec.comb(4), BRANCH_SPEC, DEEP_SPEC])
def test_structure_checks_pass(spec):
    pb = construct_bips(spec, ray_len=6)
    checks = verify_bip_basis(pb)
    assert sorted(checks) == sorted(CHECK_NAMES)
    assert all(v["ok"] for v in checks.values())


def test_round_trip_by_hand():
    pb = construct_bips(BRANCH_SPEC, ray_len=6)
    f = {0: 2, 3: -1}
    c = bips_to_cycle(f, pb, ring=Z)
    assert c.sup_norm() == 2
    g = tree_coefficients(c, pb)
    assert {k: v for k, v in g.items() if v} == f


def test_zero_cycle_recovers_zero():
    pb = construct_bips(BRANCH_SPEC, ray_len=6)
    c = bips_to_cycle({}, pb, ring=Z)
    assert c.is_zero()
    assert all(v == 0 for v in tree_coefficients(c, pb).values())


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=-3, max_value=3), min_size=6, max_size=6))
def test_round_trip_property(coeffs):
    pb = construct_bips(BRANCH_SPEC, ray_len=6)
    f = {i: v for i, v in enumerate(coeffs)}
    c = bips_to_cycle(f, pb, ring=Z)
    assert tree_coefficients(c, pb) == f


def test_round_trip_report_z():
    rr = round_trip_report(BRANCH_SPEC, ray_len=6, samples=25, seed=1, ring=Z)
    assert rr["exact_round_trips"] == 25
    assert rr["worst_norm_ratio"] <= 2
    assert all(rr["structure_checks"].values())


def test_round_trip_report_z2():
    rr = round_trip_report(BRANCH_SPEC, ray_len=6, samples=25, seed=1, ring=Z2)
    assert rr["exact_round_trips"] == 25


def test_comb_counterexample_frozen_values():
    cc = comb_counterexample_check(8)
    assert cc["exact"]
    assert cc["failed_checks"] == ["companion_edges", "finite_history"]
    assert cc["max_magnitude"] == 3
    assert cc["values"]["right_b"] == 3
    assert cc["values"]["spine"] == 0


def test_comb_magnitudes_grow_without_bound():
    mags = [comb_counterexample_check(n)["max_magnitude"] for n in (4, 6, 8, 10, 12)]
    assert mags == [1, 2, 3, 4, 5]
    assert all(a < b for a, b in zip(mags, mags[1:]))


def test_comb_odd_teeth_and_minimum():
    assert comb_counterexample_check(5)["max_magnitude"] == 2
    with pytest.raises(TreeError):
        comb_counterexample_check(3)
