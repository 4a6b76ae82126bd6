from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import betti_numbers, cycle_rank, lattice_classes_within, tree_ball_size
from phinforge import linalg
from phinforge.building import (
    Cochain,
    TruncationBoundaryError,
    abstract_complex,
    ball,
    canonical_lattice,
    coboundary,
    coboundary_matrix,
    complex_from_json,
    cycle_graph,
    hodge_decompose,
    interior_faces,
    is_harmonic,
    lattice_type,
    neighbours,
    path_graph,
    res_gamma_is_bijective,
    res_gamma_model,
    rotation_sign,
    standard_vertex,
    vertex_distance,
)


def test_canonical_lattice_is_homothety_invariant():
    basis = [[1, 0], [3, 2]]
    key = canonical_lattice(basis, 2)
    assert canonical_lattice([[4 * x for x in r] for r in basis], 2) == key
    assert canonical_lattice([[Fraction(x, 2) for x in r] for r in basis], 2) == key
    # column operations over Z_p do not change the lattice
    assert canonical_lattice([[1, 0], [5, 2]], 2) == key


def test_standard_vertex_neighbours():
    for d, p in [(1, 2), (1, 3), (2, 2)]:
        start = standard_vertex(d)
        nb = neighbours(start, p)
        assert len(set(nb)) == len(nb)
        assert all(vertex_distance(v, p) == 1 for v in nb)
        assert lattice_type(start, p) == 0
    # the neighbours of the standard vertex of PGL(2) number p + 1
    assert len(neighbours(standard_vertex(1), 3)) == 4
    # proper non-zero subspaces of F_2^3: 7 lines + 7 planes
    assert len(neighbours(standard_vertex(2), 2)) == 14


@pytest.mark.parametrize("d,p,radius", [(1, 2, 1), (1, 3, 1), (1, 2, 2), (1, 3, 2), (2, 2, 1), (2, 3, 1), (2, 2, 2)])
def test_vertex_count_matches_hermite_enumeration(d, p, radius):
    assert len(ball(d, p, radius).vertices) == lattice_classes_within(d, p, radius)


@pytest.mark.parametrize("p,radius", [(2, 1), (3, 1), (2, 2), (3, 2), (5, 2)])
def test_tree_balls(p, radius):
    b = ball(1, p, radius)
    assert len(b.vertices) == tree_ball_size(p, radius)
    assert len(b.simplices[1]) == len(b.vertices) - 1
    assert cycle_rank(len(b.vertices), len(b.simplices[1])) == 0


def test_frozen_counts():
    assert ball(2, 2, 1).counts() == {0: 15, 1: 35, 2: 21}
    assert ball(2, 3, 1).counts() == {0: 27, 1: 78, 2: 52}
    assert ball(2, 2, 2).counts() == {0: 113, 1: 343, 2: 231}


def test_ball_is_contractible():
    assert betti_numbers(ball(2, 2, 1).simplices) == [1, 0, 0]


def test_ball_bounds():
    with pytest.raises(ValueError, match="ball bounds exceeded"):
        ball(3, 2, 1)
    with pytest.raises(ValueError, match="ball bounds exceeded"):
        ball(1, 7, 1)
    with pytest.raises(ValueError, match="not prime"):
        ball(1, 4, 1)


def test_chambers_have_one_vertex_of_each_type():
    b = ball(2, 2, 1)
    for s in b.simplices[2]:
        assert [b.types[v] for v in s] == [0, 1, 2]


@pytest.mark.parametrize("degree", [0, 1])
def test_coboundary_squares_to_zero(degree):
    b = ball(2, 2, 1)
    first = coboundary_matrix(b, degree)
    if degree + 1 < b.d:
        second = coboundary_matrix(b, degree + 1)
        assert linalg.is_zero(linalg.matmul(second, first))


def test_coboundary_overflow():
    c = Cochain.zero(cycle_graph(3), 1)
    with pytest.raises(ValueError, match="overflows"):
        coboundary(c, cycle_graph(3))


def test_rotation_sign_rule():
    assert rotation_sign((0, 1, 2), 1, 2) == 1
    assert rotation_sign((0, 1), 1, 1) == -1
    g = cycle_graph(4)
    with pytest.raises(ValueError, match="rotation sign rule"):
        Cochain.from_pointed(g, 1, {((0, 1), 0): 1, ((0, 1), 1): 1})
    c = Cochain.from_pointed(g, 1, {((0, 1), 0): 1, ((0, 1), 1): -1})
    assert c.pointed_value(g, (1, 0), 1) == [-1]


def test_star_harmonicity_on_tree():
    b = ball(1, 2, 1)
    centre = standard_vertex(1)
    edges = b.simplices[1]
    f = Cochain.from_pointed(b, 1, {(e, centre): x for e, x in zip(edges, [1, 1, -2])})
    assert is_harmonic(f, b, faces=[(centre,)])
    assert interior_faces(b) == [(centre,)]
    with pytest.raises(TruncationBoundaryError, match="restrict to interior"):
        is_harmonic(f, b)
    g = Cochain.from_pointed(b, 1, {(e, centre): x for e, x in zip(edges, [1, 1, 1])})
    assert not is_harmonic(g, b, faces=[(centre,)])


def test_harmonic_on_building_interior():
    b = ball(2, 2, 1)
    faces = interior_faces(b)
    assert faces
    assert all(len(b.cofaces(t)) == 3 for t in faces)
    assert is_harmonic(Cochain.zero(b, 2), b, faces)


@pytest.mark.parametrize("n", range(3, 9))
def test_cycle_hodge_decomposition(n):
    g = cycle_graph(n)
    dec = hodge_decompose(g)
    assert len(dec.harmonic) == 1
    assert len(dec.exact) == n - 1
    assert dec.is_direct_sum()
    assert res_gamma_is_bijective(g)


def test_cycle_with_vector_coefficients():
    g = cycle_graph(6)
    dec = hodge_decompose(g, coeff_dim=2)
    assert len(dec.harmonic) == 2 and dec.is_direct_sum()
    assert res_gamma_is_bijective(g, coeff_dim=2)


def test_res_gamma_kills_exact_cochains():
    g = cycle_graph(5)
    dmat = coboundary_matrix(g, 0)
    exact = linalg.matvec(dmat, [Fraction(k * k) for k in range(5)])
    assert not any(res_gamma_model(g, exact))


def test_path_has_no_harmonic_part():
    dec = hodge_decompose(path_graph(3))
    assert dec.harmonic == [] and dec.is_direct_sum()


def test_weighted_inner_product():
    g = cycle_graph(4)
    weights = [[Fraction(k + 1) if i == k else Fraction(0) for i in range(4)] for k in range(4)]
    dec = hodge_decompose(g, weights)
    assert len(dec.harmonic) == 1 and dec.is_direct_sum()
    with pytest.raises(ValueError, match="degenerate inner product"):
        hodge_decompose(g, [[Fraction(0)] * 4 for _ in range(4)])


def test_two_dimensional_surface_complex():
    # boundary of a tetrahedron: harmonic 2-cochains are one-dimensional
    sphere = abstract_complex(2, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    dec = hodge_decompose(sphere)
    assert len(dec.harmonic) == betti_numbers(sphere.simplices)[2] == 1
    assert dec.is_direct_sum()


def test_json_round_trip():
    g = cycle_graph(5)
    back = complex_from_json(g.to_json())
    assert back.simplices == g.simplices


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 9), st.lists(st.integers(-5, 5), min_size=9, max_size=9))
def test_decomposition_recovers_cochain(n, raw):
    g = cycle_graph(n)
    dec = hodge_decompose(g)
    vec = [Fraction(x) for x in raw[:n]]
    basis = dec.harmonic + dec.exact
    coords = linalg.solve(linalg.columns_to_matrix(basis, n), vec)
    assert coords is not None
