import math

import pytest

from hiermem.graphs import (
    CertificationError,
    Graph,
    GraphError,
    build_sparse_router_graph,
    cartesian_product,
    lattice_coord,
    make_complete,
    make_nn1,
    make_nn2,
    make_path,
    sample_expander,
    spectral_lambda,
)


def test_path_degenerate():
    g = make_path(1)
    assert g.vertex_count == 1
    assert g.edge_count == 0


def test_path_eight():
    g = make_path(8)
    assert g.vertex_count == 8
    assert g.edge_count == 7


def test_path_degree_sequence():
    g = make_path(4)
    assert sorted(g.degrees()) == [1, 1, 2, 2]


def test_nn1_r1_is_path():
    assert make_nn1(5, 1).edges == make_path(5).edges


def test_nn1_reach_covers_all():
    assert make_nn1(5, 4).edges == make_complete(5).edges


def test_nn1_edge_count():
    # gaps of 1 (5 pairs) and 2 (4 pairs)
    assert make_nn1(6, 2).edge_count == 9


@pytest.mark.parametrize("length", [1, 2, 3, 5, 9])
def test_nn1_equals_complete_when_reach_large(length):
    if length >= 2:
        assert make_nn1(length, length - 1).edges == make_complete(length).edges


def test_nn2_two_cycle():
    g = make_nn2(2, 1)
    assert g.vertex_count == 4
    assert g.edge_count == 4
    assert sorted(g.degrees()) == [2, 2, 2, 2]


def test_nn2_grid_edge_count():
    assert make_nn2(3, 1).edge_count == 12


def test_nn2_reach2_has_diagonals():
    g = make_nn2(3, 2)
    assert g.has_edge(0, 4)  # (0,0)-(1,1), distance sqrt(2)


def test_nn2_coords_present():
    g = make_nn2(3, 1)
    assert g.coords is not None
    for v in range(9):
        assert g.coords[v] == lattice_coord(v, 3)


def test_complete_counts():
    assert make_complete(1).edge_count == 0
    assert make_complete(4).edge_count == 6
    assert make_complete(10).edge_count == math.comb(10, 2)


def test_cartesian_product_matches_nn2():
    p = make_path(4)
    prod = cartesian_product(p, p)
    assert prod.edges == make_nn2(4, 1).edges


def test_cartesian_product_k2_square():
    k2 = make_complete(2)
    sq = cartesian_product(k2, k2)
    assert sq.edge_count == 4
    assert sorted(sq.degrees()) == [2, 2, 2, 2]


def test_cartesian_product_edge_count_formula():
    g1, g2 = make_path(3), make_path(2)
    prod = cartesian_product(g1, g2)
    assert prod.edge_count == 7
    assert (
        prod.edge_count
        == g1.edge_count * g2.vertex_count + g2.edge_count * g1.vertex_count
    )


def test_cartesian_product_commutative_edge_count():
    g1, g2 = make_nn1(4, 2), make_path(3)
    assert cartesian_product(g1, g2).edge_count == cartesian_product(g2, g1).edge_count


def test_spectral_lambda_k4():
    assert spectral_lambda(make_complete(4)) == pytest.approx(1.0, abs=1e-8)


def test_spectral_lambda_four_cycle():
    assert spectral_lambda(make_nn2(2, 1)) == pytest.approx(2.0, abs=1e-8)


def test_spectral_lambda_k2():
    assert spectral_lambda(make_path(2)) == pytest.approx(1.0, abs=1e-8)


def test_spectral_lambda_rejects_irregular():
    with pytest.raises(GraphError):
        spectral_lambda(make_path(3))


def test_sample_expander_32():
    g, cert = sample_expander(32, 4, 0.5, seed=1)
    assert g.vertex_count == 32
    assert all(d == 4 for d in g.degrees())
    # recompute the certificate independently
    lam = spectral_lambda(g)
    assert lam == pytest.approx(cert.lam, abs=1e-8)
    assert lam <= 2 * math.sqrt(3) + 0.5


def test_sample_expander_m6_is_octahedron():
    g, cert = sample_expander(6, 4, 0.5, seed=3)
    # the unique 4-regular graph on 6 vertices: complement of a matching
    assert cert.lam == pytest.approx(2.0, abs=1e-8)


def test_sample_expander_rejects_odd_m():
    with pytest.raises(GraphError):
        sample_expander(7, 4, 0.5, seed=0)


def test_sample_expander_infeasible_epsilon():
    with pytest.raises(CertificationError):
        # epsilon so negative that the bound is unachievable
        sample_expander(8, 4, -3.0, seed=0, max_tries=20)


@pytest.mark.parametrize("side,reach", [(12, 6), (32, 8)])
def test_sparse_router_graph_properties(side, reach):
    g = build_sparse_router_graph(side, reach, seed=7)
    nn = make_nn2(side, reach)
    assert g.vertex_count == side * side
    assert max(g.degrees()) <= 12
    for u, v in g.edges:
        (x1, y1), (x2, y2) = lattice_coord(u, side), lattice_coord(v, side)
        assert (x1 - x2) ** 2 + (y1 - y2) ** 2 <= reach * reach
        assert nn.has_edge(u, v)
    assert g.is_connected()


def test_sparse_router_single_block():
    # side == reach collapses the path factor; degree comes from the
    # within-block factors alone (<= 4 per axis).
    g = build_sparse_router_graph(6, 6, seed=1)
    assert max(g.degrees()) <= 8


def test_sparse_router_invalid_params():
    with pytest.raises(GraphError):
        build_sparse_router_graph(12, 5, seed=0)
    with pytest.raises(GraphError):
        build_sparse_router_graph(13, 6, seed=0)


def test_edge_list_round_trip():
    g = make_nn2(3, 1)
    text = g.to_edge_list_text()
    back = Graph.from_edge_list_text(text)
    assert back.edges == g.edges
    assert back.coords == g.coords
    assert back.to_edge_list_text() == text
