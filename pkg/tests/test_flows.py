"""Flow decomposition, domination completion, and defect repair."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarsecycles.chains import Chain, Z, Z2, edge_chain_of_path, is_cycle
from coarsecycles.flows import (
    FlowError,
    decompose_flow,
    dominates,
    extend_ray,
    finite_extension,
    lift_z2_to_z,
)
from coarsecycles.windows import FamilySpec, build_window


def square_chain(x, y, ring=Z):
    path = [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1), (x, y)]
    return edge_chain_of_path(path, ring)


def test_single_circuit_decomposes_to_itself():
    w = build_window(FamilySpec.grid2d(), 3)
    f = square_chain(0, 0)
    dec = decompose_flow(f, w)
    assert len(dec.pieces) == 1
    piece, mult = dec.pieces[0]
    assert piece.kind == "circuit"
    assert mult == 1
    assert piece.chain(Z) + Chain(1, Z) == f or piece.chain(Z) == f or (-piece.chain(Z)) == f


def test_multiplicity_two():
    w = build_window(FamilySpec.grid2d(), 3)
    f = square_chain(0, 0).scale(2)
    dec = decompose_flow(f, w)
    total = Chain(1, Z)
    for piece, mult in dec.pieces:
        assert piece.kind == "circuit"
        total = total + piece.chain(Z).scale(mult)
    assert total == f


def test_boundary_to_boundary_path_is_a_window_bip():
    w = build_window(FamilySpec.biinfinite_line(), 3)
    f = edge_chain_of_path([(x,) for x in range(-3, 4)])
    dec = decompose_flow(f, w)
    bips = dec.window_bips()
    assert len(bips) == 1
    bip = bips[0][0]
    ends = {bip.vertices[0], bip.vertices[-1]}
    assert ends <= w.boundary_vertices


def test_mixed_flow_reassembles():
    w = build_window(FamilySpec.grid2d(), 4)
    f = square_chain(0, 0) + square_chain(-2, -2) + edge_chain_of_path(
        [(x, 2) for x in range(-2, 3)]
    )
    # path piece has inner defects only at its endpoints (-2,2), (2,2);
    # both are at distance 2 from the boundary so this is not a cycle,
    # but decompose_flow still splits the support
    dec = decompose_flow(f, w)
    total = Chain(1, Z)
    for piece, mult in dec.pieces:
        total = total + piece.chain(Z).scale(mult)
    assert total == f


def test_z2_pieces_are_edge_disjoint():
    w = build_window(FamilySpec.grid2d(), 3)
    f = (square_chain(0, 0, Z2) + square_chain(1, 0, Z2))
    dec = decompose_flow(f, w)
    seen = set()
    for piece, _ in dec.pieces:
        keys = set(piece.edge_keys())
        assert not keys & seen
        seen |= keys
    assert seen == {key for key, _ in f.terms()}


def test_lift_z2_reduces_back():
    w = build_window(FamilySpec.grid2d(), 3)
    f = square_chain(0, 0, Z2) + square_chain(-1, -1, Z2)
    lifted = lift_z2_to_z(f, w)
    assert lifted.ring == Z
    assert lifted.reduce_mod2() == f


def test_dominates_edgewise():
    phi = square_chain(0, 0)
    sub = edge_chain_of_path([(0, 0), (1, 0)])
    assert dominates(phi, sub)
    assert not dominates(phi, sub.scale(2))
    assert not dominates(phi, -sub)


def test_extend_ray_completes_a_dominated_path():
    w = build_window(FamilySpec.grid2d(), 3)
    phi = square_chain(0, 0)
    r = edge_chain_of_path([(0, 0), (1, 0), (1, 1)])
    out = extend_ray(Z, phi, r, w)
    assert dominates(phi, out)
    assert dominates(out, r)
    assert is_cycle(out, w)
    assert out == phi


def test_extend_ray_z2():
    w = build_window(FamilySpec.grid2d(), 3)
    phi = square_chain(0, 0, Z2)
    r = edge_chain_of_path([(0, 0), (1, 0)], Z2)
    out = extend_ray(Z2, phi, r, w)
    assert is_cycle(out, w)
    assert {k for k, _ in out.terms()} <= {k for k, _ in phi.terms()}


def test_extend_ray_rejects_undominated():
    w = build_window(FamilySpec.grid2d(), 3)
    phi = square_chain(0, 0)
    with pytest.raises(FlowError):
        extend_ray(Z, phi, square_chain(0, 0).scale(2), w)


def test_finite_extension_repairs_integer_defects():
    w = build_window(FamilySpec.grid2d(), 4)
    region = w.ball((0, 0), 2)
    f = edge_chain_of_path([(-2, 0), (-1, 0), (0, 0), (1, 0), (2, 0)])
    out = finite_extension(w, region, f)
    assert is_cycle(out, w)
    # agrees with f on the region
    for key, coeff in f.terms():
        assert out.get(key) == coeff


def test_finite_extension_mod2():
    w = build_window(FamilySpec.grid2d(), 4)
    region = w.ball((0, 0), 2)
    f = edge_chain_of_path([(-2, 0), (-1, 0), (0, 0), (1, 0), (2, 0)], Z2)
    out = finite_extension(w, region, f)
    assert out.ring == Z2
    assert is_cycle(out, w)


def test_finite_extension_validations():
    w = build_window(FamilySpec.grid2d(), 4)
    region = w.ball((0, 0), 2)
    outside = edge_chain_of_path([(3, 0), (3, 1)])
    with pytest.raises(FlowError):
        finite_extension(w, region, outside)
    touching = w.ball((0, 0), 4)
    with pytest.raises(FlowError):
        finite_extension(w, touching, edge_chain_of_path([(0, 0), (1, 0)]))


@st.composite
def grid_cycles(draw):
    terms = draw(
        st.lists(
            st.tuples(st.integers(-1, 1), st.integers(-1, 1), st.integers(1, 2)),
            min_size=1,
            max_size=4,
        )
    )
    f = Chain(1, Z)
    for x, y, c in terms:
        f = f + square_chain(x, y).scale(c)
    return f


@settings(max_examples=60, deadline=None)
@given(grid_cycles())
def test_decomposition_reassembles_random_cycles(f):
    w = build_window(FamilySpec.grid2d(), 4)
    dec = decompose_flow(f, w)
    total = Chain(1, Z)
    for piece, mult in dec.pieces:
        total = total + piece.chain(Z).scale(mult)
    assert total == f
