from itertools import combinations

import networkx as nx
import numpy as np
import pytest

from conftest import grid_window
from graphs.connectivity import (Mode, disjoint_rays, edge_separation, end_cut_size, finite_piece_depth,
                                 resolve_terminal, separation, valence_bound_holds, vertex_separation,
                                 window_end_cut_size)
from graphs.core import Graph, Window
from graphs.errors import ArgumentError, InfeasibleError, NotFoundError
from graphs.generators import CylinderSource


def random_window(seed):
    """Connected random graph on 5 to 10 vertices; the terminals "0" and "n-1" are not adjacent"""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 11))
    g = nx.gnp_random_graph(n, float(rng.uniform(0.2, 0.6)), seed=seed)
    g.add_edges_from((i, i + 1) for i in range(n - 1))
    if g.has_edge(0, n - 1):
        g.remove_edge(0, n - 1)
    return Window.of_graph(Graph.from_pairs((str(u), str(v)) for u, v in g.edges)), str(n - 1)


def brute_edge_cut(g: Graph, x: str, y: str) -> int:
    edges = sorted(g.edges)
    for size in range(len(edges) + 1):
        for removed in combinations(edges, size):
            if g.without(removed_edges=removed).distance(x, y) == float('inf'):
                return size
    raise AssertionError('unreachable')


def brute_vertex_cut(g: Graph, x: str, y: str) -> int:
    others = sorted(g.vertices - {x, y})
    for size in range(len(others) + 1):
        for removed in combinations(others, size):
            if g.without(removed).distance(x, y) == float('inf'):
                return size
    raise AssertionError('unreachable')


@pytest.mark.parametrize('seed', range(200))
def test_edge_separation_matches_brute_force(seed):
    w, last = random_window(seed)
    g = w.graph
    result = separation(w, '0', last, Mode.EDGE)
    if len(g.edges) <= 12:
        assert result.value == brute_edge_cut(g, '0', last)
    else:
        assert result.value == nx.edge_connectivity(g.simple, '0', last)
    assert len(result.cut_edges) == result.value
    assert g.without(removed_edges=result.cut_edges).distance('0', last) == float('inf')
    used = [frozenset(p) for path in result.paths for p in zip(path, path[1:])]
    assert len(used) == len(set(used))
    for path in result.paths:
        assert path[0] == '0' and path[-1] == last


@pytest.mark.parametrize('seed', range(200))
def test_vertex_separation_matches_brute_force(seed):
    w, last = random_window(seed)
    g = w.graph
    result = separation(w, '0', last, Mode.VERTEX)
    assert result.value == brute_vertex_cut(g, '0', last)
    assert g.without(result.cut_vertices).distance('0', last) == float('inf')
    assert len(result.cut_vertices) == result.value
    inner = [v for path in result.paths for v in path[1:-1]]
    assert len(inner) == len(set(inner))


def test_terminals_must_be_disjoint(ladder_window):
    with pytest.raises(ArgumentError):
        separation(ladder_window, '0,0', '0,0')
    with pytest.raises(NotFoundError):
        separation(ladder_window, 'marker:5', '0,0')
    with pytest.raises(NotFoundError):
        resolve_terminal(ladder_window, 'marker:x')


def test_marker_terminals(ladder_window):
    assert resolve_terminal(ladder_window, 0) == (ladder_window.marker(0), False)
    assert resolve_terminal(ladder_window, '0,0') == (frozenset({'0,0'}), True)
    assert separation(ladder_window, 'marker:0', 'marker:1').value == 2
    assert separation(ladder_window, 0, 1, 'vertex').value == 2


def test_ladder_valence_bound(ladder_window):
    report = valence_bound_holds(ladder_window)
    assert report['es'] == report['vs'] == 2
    assert report['max_degree'] == 3
    assert report['holds']


def test_cylinder_separation(cylinder_window):
    assert separation(cylinder_window, 0, 1, Mode.EDGE).value == 4
    vertex = separation(cylinder_window, 0, 1, Mode.VERTEX)
    assert vertex.value == 4
    assert len(vertex.cut_vertices) == 4
    assert len(disjoint_rays(cylinder_window, 0, 1, 3)) == 3


def test_disjoint_rays_reports_the_maximum(cylinder_window):
    with pytest.raises(InfeasibleError) as info:
        disjoint_rays(cylinder_window, 0, 1, 5)
    assert info.value.max_achievable == 4


def test_one_ended_window_has_infinite_end_cut():
    report = window_end_cut_size(grid_window(3))
    assert report.value == float('inf')
    assert report.pair is None
    assert report.radius == 3


def test_finite_piece_depth(cylinder_window):
    assert finite_piece_depth(cylinder_window, ['0,0', '0,1', '0,2', '0,3']) == 0
    w = grid_window(4)
    ring = [v for v, d in w.depth.items() if d == 2]
    assert finite_piece_depth(w, ring) == 2
    with pytest.raises(ArgumentError):
        finite_piece_depth(w, [])


def test_end_cut_size_from_a_source():
    report = end_cut_size(CylinderSource(), 6)
    assert report.value == 4
    assert report.pair == (0, 1)
    assert report.radius == 6
    assert end_cut_size(CylinderSource(), 6, 'vertex').value == 4


def test_named_separation_modes(ladder_window):
    assert edge_separation(ladder_window, 0, 1).mode == Mode.EDGE
    assert vertex_separation(ladder_window, 0, 1).mode == Mode.VERTEX
