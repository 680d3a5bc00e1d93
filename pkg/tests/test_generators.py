import pytest

from graphs.connectivity import window_end_cut_size
from graphs.core import build_window
from graphs.errors import ArgumentError, NotFoundError
from graphs.generators import (QI_CLASSES, GeneratorSpec, GridWithHolesSource, Kind, make_embedding,
                               make_source)
from graphs.surface import IDENTITY, SurfaceGroup, dehn_reduce, free_reduce, inverse


@pytest.mark.parametrize('text, label', [
    ('grid2d', 'grid2d'),
    ('free_group:3', 'free_group:3'),
    ('regular_tree', 'regular_tree:3'),
    ('Grid-With-Holes', 'grid_with_holes'),
    ('free_product:grid2d,surface_genus2', 'free_product:grid2d,surface_genus2'),
])
def test_parse_and_label(text, label):
    assert GeneratorSpec.parse(text).label() == label


@pytest.mark.parametrize('text', ['moebius', 'free_group:x', 'regular_tree:three'])
def test_parse_rejects_unknown_kinds_and_parameters(text):
    with pytest.raises(ArgumentError):
        GeneratorSpec.parse(text)


def test_free_product_factor_must_be_a_group():
    with pytest.raises(ArgumentError):
        make_source(GeneratorSpec.parse('free_product:ladder,grid2d'))


def test_regular_tree_degree_bound():
    with pytest.raises(ArgumentError):
        make_source(GeneratorSpec(Kind.REGULAR_TREE, degree=2))


def test_regular_tree_spheres():
    w = build_window(make_source(GeneratorSpec(Kind.REGULAR_TREE, degree=3)), 3)
    assert sorted(w.depth.values()).count(3) == 12
    assert len(w.markers) == 12


def test_free_group_window_has_a_marker_per_branch():
    w = build_window(make_source(GeneratorSpec.parse('free_group:2')), 2)
    assert len(w.graph) == 17
    assert len(w.markers) == 12
    assert window_end_cut_size(w).value == 1


def test_free_group_rejects_foreign_letters():
    with pytest.raises(NotFoundError):
        make_source(GeneratorSpec.parse('free_group:2')).neighbors('ac')


def test_infinite_dihedral_free_product_is_a_line():
    src = make_source(GeneratorSpec.parse('free_product:z2,z2'))
    assert src.neighbors(IDENTITY) == ('0:1', '1:1')
    assert src.neighbors('0:1') == (IDENTITY, '0:1|1:1')
    w = build_window(src, 3)
    assert len(w.graph) == 7
    assert len(w.markers) == 2


def test_tree_of_flats_identity_degree():
    src = make_source(GeneratorSpec(Kind.TREE_OF_FLATS))
    assert len(src.neighbors(src.basepoint)) == 5
    assert set(src.rotation(src.basepoint)) == set(src.neighbors(src.basepoint))


def test_every_qi_class_builds_a_window():
    for name, spec in QI_CLASSES.items():
        w = build_window(make_source(spec), 2)
        assert w.graph.is_connected(), name


def test_grid_with_holes_removes_hole_interiors():
    assert GridWithHolesSource.removed(5, 1)
    assert not GridWithHolesSource.removed(4, 1)
    assert GridWithHolesSource.removed(10, 3)
    assert not GridWithHolesSource.removed(10, 4)
    assert not GridWithHolesSource.removed(10, 0)
    src = GridWithHolesSource()
    assert src.neighbors('5,0') == ('6,0', '4,0')
    with pytest.raises(NotFoundError):
        src.neighbors('5,1')


def test_planar_kinds_have_drawings():
    drawing = make_embedding(GeneratorSpec.parse('ladder'))
    assert drawing is not None
    assert make_embedding(GeneratorSpec.parse('free_group:2')) is not None


def test_word_helpers():
    assert inverse('abC') == 'cBA'
    assert free_reduce('abBAc') == 'c'
    assert dehn_reduce('abABcdCD') == ''
    assert dehn_reduce(IDENTITY) == ''


def test_surface_group_relator_and_equality():
    assert SurfaceGroup.equal('abAB', 'dcDC')
    assert not SurfaceGroup.equal('ab', 'ba')
    assert SurfaceGroup.equal(IDENTITY, 'abABcdCD')


def test_surface_group_sphere_sizes():
    assert SurfaceGroup().sphere_sizes(3) == [1, 8, 56, 392]


def test_surface_group_neighbors_are_symmetric():
    group = SurfaceGroup()
    for v in group.neighbors(IDENTITY):
        assert IDENTITY in group.neighbors(v)
    assert group.canonical('abAB') == group.canonical('dcDC')
    with pytest.raises(ArgumentError):
        group.neighbors('xyz')
