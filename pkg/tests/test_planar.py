import pytest

from conftest import grid_embedding, grid_window
from graphs.core import Graph, Subgraph, build_window
from graphs.errors import ArgumentError, ContractViolation, PreconditionError
from graphs.generators import GeneratorSpec, GridWithHolesSource, make_embedding, make_source
from graphs.planar import (Drawing, PlanarEmbedding, augmentation_report, bad_loop_check, euler_report,
                           face_table, friendly_faced_check, good_drawing_augment, loop_edges, loop_sides,
                           marker_sides, max_finite_face_length, simple_finite_faces, two_connected_core)


def test_wheel_faces(wheel):
    lengths = sorted(f.length for f in wheel.faces)
    assert lengths == [3, 3, 3, 3, 4]
    report = euler_report(wheel)
    assert (report['vertices'], report['edges'], report['faces']) == (5, 8, 5)
    assert report['holds']
    assert simple_finite_faces(wheel)


def test_every_dart_lies_on_exactly_one_face(wheel):
    walks = [d for f in wheel.faces for d in f.walk]
    assert sorted(walks) == sorted(wheel.host.darts())
    for f in wheel.faces:
        for d in f.walk:
            assert wheel.face_of[d] == f.index


def test_rotation_must_list_incident_darts():
    g = Graph.from_pairs([('a', 'b'), ('b', 'c')])
    with pytest.raises(ContractViolation):
        PlanarEmbedding.from_neighbor_order(g, {'a': ['b'], 'b': ['a'], 'c': ['b']})


@pytest.mark.parametrize('r, finite', [(2, 4), (3, 12)])
def test_grid_finite_faces_are_unit_squares(r, finite):
    emb = grid_embedding(grid_window(r))
    lengths = [f.length for f in emb.faces if not f.boundary_touching]
    assert lengths == [4] * finite
    assert euler_report(emb)['holds']


@pytest.mark.parametrize('r', [2, 3, 4, 5])
def test_grid_max_finite_face_length_is_stable(r):
    assert max_finite_face_length(grid_embedding(grid_window(r))) == 4


def test_grid_with_holes_face_length_grows():
    src = GridWithHolesSource()
    drawing = Drawing(src)
    lengths = [max_finite_face_length(drawing.restrict(build_window(src, r))) for r in (8, 16, 32)]
    assert lengths == [8, 16, 32]


def test_face_table_columns():
    emb = grid_embedding(grid_window(2))
    table = face_table(emb)
    assert list(table.columns) == ['face', 'kind', 'length', 'vertices', 'simple', 'diameter', 'walk']
    finite = table[table['kind'] == 'finite']
    assert (finite['diameter'] == 2).all()
    assert len(table) == len(emb.faces)


def test_restrict_to_a_cycle_keeps_two_faces(wheel):
    cycle = Subgraph.induced(wheel.host, ['0', '1', '2', '3'])
    inner = wheel.restrict(cycle)
    assert sorted(f.length for f in inner.faces) == [4, 4]


def test_friendly_cycle_in_wheel(wheel):
    report = friendly_faced_check(wheel, ['0', '1', '2', '3'], 1)
    assert report.friendly
    assert report.required_radius == 1
    assert report.counterexample is None
    tight = friendly_faced_check(wheel, ['0', '1', '2', '3'], 0)
    assert not tight.friendly
    assert tight.counterexample is not None


def test_friendly_needs_a_connected_subgraph(wheel):
    with pytest.raises(PreconditionError):
        friendly_faced_check(wheel, ['0', '2'], 1)


def test_two_connected_core_with_pendant():
    g = Graph.from_pairs([('0', '1'), ('1', '2'), ('2', '3'), ('3', '0'), ('3', '4')])
    report = two_connected_core(g)
    assert report.core.vertices == {'0', '1', '2', '3'}
    assert report.max_pendant_diameter == 1
    assert report.almost_two_connected


def test_two_connected_core_of_a_path_is_empty():
    report = two_connected_core(Graph.from_pairs([('a', 'b'), ('b', 'c')]))
    assert len(report.core) == 0
    assert not report.almost_two_connected


def test_good_drawing_augment_on_a_path():
    g = Graph.from_pairs([('a', 'b'), ('b', 'c')])
    emb = PlanarEmbedding.from_neighbor_order(g, {'a': ['b'], 'b': ['a', 'c'], 'c': ['b']})
    aug = good_drawing_augment(g, emb)
    assert aug.doubled
    report = augmentation_report(g, aug)
    assert report['two_connected']
    assert report['euler']
    assert report['max_ratio'] == 3


def test_good_drawing_augment_needs_matching_embedding(wheel):
    g = Graph.from_pairs([('a', 'b')])
    with pytest.raises(ArgumentError):
        good_drawing_augment(g, wheel)


def test_loop_edges_validates_cycles(wheel):
    assert loop_edges(wheel.host, ['0', '1', '2', '3']) == ['0~1', '1~2', '2~3', '0~3']
    with pytest.raises(ArgumentError):
        loop_edges(wheel.host, ['0', '2', 'c'])
    with pytest.raises(ArgumentError):
        loop_edges(wheel.host, ['0', '1'])


def test_loop_sides_of_the_rim(wheel):
    left, right = loop_sides(wheel, ['0', '1', '2', '3'])
    assert left | right == {'c'}


def test_cylinder_ring_is_a_bad_loop(cylinder_window, cylinder_embedding):
    ring = ['0,0', '0,1', '0,2', '0,3']
    assert bad_loop_check(cylinder_window, cylinder_embedding, ring)
    assert sorted(marker_sides(cylinder_window, cylinder_embedding, ring)) == [0, 1]


def test_grid_loop_is_not_bad():
    w = grid_window(4)
    emb = grid_embedding(w)
    square = ['0,0', '1,0', '1,1', '0,1']
    assert not bad_loop_check(w, emb, square)
    assert marker_sides(w, emb, square) == [1]


GENERATOR_WINDOWS = [
    ('zline', 5), ('grid2d', 4), ('ladder', 6), ('cylinder', 3), ('regular_tree:4', 3), ('free_group:2', 3),
    ('surface_genus2', 1), ('tree_of_flats', 2), ('grid_with_holes', 5), ('free_product:grid2d,surface_genus2', 1),
]


def generator_window(text, r):
    spec = GeneratorSpec.parse(text)
    w = build_window(make_source(spec), r)
    return w, make_embedding(spec).restrict(w)


@pytest.mark.parametrize('text, r', GENERATOR_WINDOWS)
def test_generator_windows_are_planar_rotation_systems(text, r):
    w, emb = generator_window(text, r)
    walks = [d for f in emb.faces for d in f.walk]
    assert sorted(walks) == sorted(w.graph.darts())
    assert all(emb.face_of[d] == f.index for f in emb.faces for d in f.walk)
    assert euler_report(emb)['holds']


@pytest.mark.parametrize('text, r', GENERATOR_WINDOWS)
def test_good_drawing_augment_on_generator_windows(text, r):
    w, emb = generator_window(text, r)
    assert len(w.graph) <= 60
    aug = good_drawing_augment(w.graph, emb)
    report = augmentation_report(w.graph, aug)
    assert report['two_connected']
    assert report['euler']
    assert report['max_ratio'] <= 3
    assert report['max_deviation_from_triple'] <= 2


def punctured_grid():
    w = grid_window(6)
    g = w.graph
    holed = Subgraph.induced(g, w.vertices - {'0,0'})
    slit = {g.edges_between(f"{x},0", f"{x},1")[0] for x in range(1, 6)}
    slotted = Subgraph(holed.vertices, holed.edges - slit)
    return grid_embedding(w), holed, slotted


def test_punctured_grid_is_friendly_at_radius_two():
    emb, holed, _ = punctured_grid()
    assert friendly_faced_check(emb, holed, 2).friendly
    report = friendly_faced_check(emb, holed, 1)
    assert not report.friendly
    assert report.required_radius == 2
    assert report.counterexample is not None


def test_slit_to_the_outside_makes_the_grid_unfriendly():
    emb, holed, slotted = punctured_grid()
    report = friendly_faced_check(emb, slotted, 2)
    assert not report.friendly
    assert report.required_radius >= 4
    assert report.required_radius > friendly_faced_check(emb, holed, 2).required_radius
