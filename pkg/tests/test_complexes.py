import networkx as nx
import numpy as np
import pytest

from conftest import cycle_pairs, grid_embedding, grid_window
from graphs.config import SplitConfig
from graphs.core import Graph, Subgraph, build_window
from graphs.errors import ArgumentError, BudgetError, PreconditionError
from graphs.generators import GeneratorSpec, make_embedding, make_source
from splitting.complexes import (Complex2, SimplicialComplex2, barycentric_subdivide, chomp_check, chomp_pipeline,
                                 cone_off, epsilon_filling, euler_characteristic, every_edge_two_cells, h1_rank,
                                 induced_h1_surjective, is_coboundary, is_cocycle, planar_filling,
                                 relative_chomp_check, ring_iso_round_trip)
from splitting.cuts import SubgraphSystem, boundary_face_system, is_h_finite, make_cut


def cycle_graph(vertices):
    return Graph.from_pairs(cycle_pairs(vertices))


def test_h1_ranks(tetrahedron, torus, annulus):
    assert h1_rank(tetrahedron) == 0
    assert h1_rank(torus) == 2
    assert h1_rank(annulus) == 1
    assert euler_characteristic(tetrahedron) == 2
    assert euler_characteristic(torus) == 0
    assert every_edge_two_cells(torus)
    assert not every_edge_two_cells(annulus)


def test_vertex_coboundary_is_recovered(tetrahedron):
    star = [tetrahedron.skeleton.edges_between(v, '3')[0] for v in '012']
    assert is_cocycle(tetrahedron, star)
    assert is_coboundary(tetrahedron, star) == {'3'}
    with pytest.raises(ArgumentError):
        is_coboundary(tetrahedron, ['0~1'])


def test_torus_meridian_is_not_a_coboundary(torus):
    g = torus.skeleton
    meridian = []
    for j in range(3):
        meridian.append(g.edges_between(f"0,{j}", f"1,{j}")[0])
        meridian.append(g.edges_between(f"0,{j}", f"1,{(j + 1) % 3}")[0])
    assert is_cocycle(torus, meridian)
    assert is_coboundary(torus, meridian) is None


def test_chomp_checks(annulus, torus, tetrahedron):
    assert chomp_check(tetrahedron)
    assert not chomp_check(annulus)
    assert not chomp_check(torus)
    assert relative_chomp_check(annulus, ['2,0', '2,1', '2,2'])


@pytest.mark.parametrize('vertices, eps, cells', [
    (['a', 'b', 'c'], 3, 1),
    (['a', 'b', 'c', 'd'], 3, 0),
    (['a', 'b', 'c', 'd'], 4, 1),
])
def test_epsilon_filling_of_cycles(vertices, eps, cells):
    filled = epsilon_filling(cycle_graph(vertices), eps)
    assert len(filled.cells) == cells


def test_epsilon_filling_of_a_grid_window():
    filled = epsilon_filling(grid_window(2).graph, 4)
    assert len(filled.cells) == 4
    assert all(len(walk) == 4 for walk in filled.cells.values())
    assert chomp_check(filled)


def test_epsilon_filling_budgets():
    g = grid_window(2).graph
    with pytest.raises(BudgetError):
        epsilon_filling(g, 13)
    with pytest.raises(BudgetError):
        epsilon_filling(g, 4, SplitConfig(walk_budget=1))
    with pytest.raises(ArgumentError):
        epsilon_filling(g, -1)


def test_cone_off_kills_the_cycle():
    g = cycle_graph(['a', 'b', 'c', 'd'])
    bare = Complex2(g, {})
    assert h1_rank(bare) == 1
    coned = cone_off(bare, [Subgraph.induced(g, g.vertices)])
    assert len(coned.cells) == 4
    assert h1_rank(coned) == 0


@pytest.mark.parametrize('vertices, cells', [(['a', 'b', 'c'], 6), (['a', 'b', 'c', 'd'], 8)])
def test_barycentric_subdivision_cell_counts(vertices, cells):
    g = cycle_graph(vertices)
    k = Complex2.from_vertex_cycles(g, [vertices])
    assert len(barycentric_subdivide(k).cells) == cells


def test_second_subdivision_is_simplicial(annulus):
    twice = barycentric_subdivide(annulus, 2)
    assert isinstance(twice, SimplicialComplex2)
    assert h1_rank(twice) == 1
    with pytest.raises(ArgumentError):
        barycentric_subdivide(annulus, 3)


def test_chomp_pipeline_on_the_grid():
    w = grid_window(3)
    report = chomp_pipeline(w, grid_embedding(w))
    assert report.chomp
    assert report.cells == 12
    assert report.cones == 1
    assert report.radius == 3
    assert report.variant == 'absolute'


def test_chomp_pipeline_on_the_cylinder(cylinder_window, cylinder_embedding):
    assert chomp_pipeline(cylinder_window, cylinder_embedding).chomp
    assert chomp_pipeline(cylinder_window, cylinder_embedding, relative=True).variant == 'relative'


def test_ring_iso_round_trip(cylinder_window, cylinder_embedding):
    k = planar_filling(cylinder_embedding)
    system = boundary_face_system(cylinder_window, cylinder_embedding)
    b = make_cut(cylinder_window, [v for v in cylinder_window.vertices if int(v.split(',')[0]) > 0])
    assert ring_iso_round_trip(k, system, b)


def test_ring_iso_needs_boundary_members(cylinder_window, cylinder_embedding):
    k = planar_filling(cylinder_embedding)
    inner = SubgraphSystem.of(cylinder_window, [Subgraph.induced(cylinder_window.graph, ['0,0', '1,0'])])
    b = make_cut(cylinder_window, ['0,0'])
    with pytest.raises(PreconditionError):
        ring_iso_round_trip(k, inner, b)


def test_induced_h1_surjective(annulus):
    identity = {v: v for v in annulus.skeleton.vertices}
    assert induced_h1_surjective(annulus, annulus, identity)
    c3 = Complex2(cycle_graph(['a', 'b', 'c']), {})
    assert induced_h1_surjective(c3, annulus, {'a': '0,0', 'b': '0,1', 'c': '0,2'})
    assert not induced_h1_surjective(c3, annulus, {'a': '0,0', 'b': '0,0', 'c': '0,0'})
    with pytest.raises(ArgumentError):
        induced_h1_surjective(c3, annulus, {'a': '0,0'})


def boundary_groups(system):
    """Boundary vertices linked through a member that meets them, each group whole on one side of an H-finite cut"""
    w = system.window
    links = nx.Graph()
    links.add_nodes_from(sorted(w.boundary))
    for member in system.members:
        touched = sorted(member.vertices & w.boundary)
        links.add_edges_from(zip(touched, touched[1:]))
    return sorted(sorted(group) for group in nx.connected_components(links))


def test_ring_iso_on_random_h_finite_cuts(cylinder_window, cylinder_embedding):
    w = cylinder_window
    k = planar_filling(cylinder_embedding)
    system = boundary_face_system(w, cylinder_embedding)
    groups = boundary_groups(system)
    free = sorted(w.vertices - w.boundary)
    rng = np.random.default_rng(5)
    previous = []
    for _ in range(100):
        side = {v for v in free if rng.random() < 0.5}
        for group in groups:
            if rng.random() < 0.5:
                side.update(group)
        b = make_cut(w, side)
        assert is_h_finite(b, system)
        assert ring_iso_round_trip(k, system, b, others=previous[-1:])
        previous.append(b)


@pytest.mark.parametrize('text, r', [
    ('zline', 5), ('grid2d', 4), ('ladder', 6), ('cylinder', 3), ('regular_tree:4', 3), ('free_group:2', 3),
    ('surface_genus2', 1), ('tree_of_flats', 2), ('grid_with_holes', 5), ('free_product:grid2d,surface_genus2', 1),
])
def test_fill_then_cone_has_chomp_on_generator_windows(text, r):
    spec = GeneratorSpec.parse(text)
    w = build_window(make_source(spec), r)
    report = chomp_pipeline(w, make_embedding(spec).restrict(w))
    assert report.chomp
    assert report.h1_rank == 0
