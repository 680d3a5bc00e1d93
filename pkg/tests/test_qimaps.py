from fractions import Fraction

import pytest

from conftest import grid_embedding, grid_window
from graphs.core import build_window
from graphs.errors import ArgumentError, CertificationError, NotFoundError
from graphs.generators import ZLineSource
from splitting.cuts import make_cut
from splitting.qimaps import (QIMap, QuasiActionSample, coboundary_diameters, fit_eps, good_behavior_check,
                              inclusion_distortion, move_cuts_radii, move_cuts_violations, normalize_continuous,
                              qi_cut_growth_check, quasi_inverse, transfer_cut, verify_qi)


def line(r):
    return build_window(ZLineSource(), r)


def xy(v):
    x, y = v.split(',')
    return int(x), int(y)


def grid_map(w, fn):
    return {v: '{},{}'.format(*fn(*xy(v))) for v in w.vertices}


@pytest.fixture
def doubling():
    dom, cod = line(5), line(10)
    return QIMap({v: str(2 * int(v)) for v in dom.vertices}, 2, 1), dom, cod


def test_doubling_is_a_quasi_isometry(doubling):
    f, dom, cod = doubling
    report = verify_qi(f, dom, cod, coarse_surjective=True)
    assert report.passed
    assert report.exhaustive
    assert report.pairs_checked == 55
    strict = verify_qi(f.with_constants(lam=1), dom, cod)
    assert not strict.passed
    assert {kind for *_, kind in strict.violations} == {'upper'}


def test_fit_eps(doubling):
    f, dom, cod = doubling
    assert fit_eps(f, dom, cod) == 0
    assert fit_eps(f, dom, cod, lam=1) == 10


def test_qi_map_constants_are_validated():
    with pytest.raises(ArgumentError):
        QIMap({}, Fraction(1, 2))
    with pytest.raises(ArgumentError):
        QIMap({}, 1, -1)
    with pytest.raises(NotFoundError):
        QIMap({'0': '0'})('1')
    assert QIMap({}, '3/2').lam == Fraction(3, 2)


def test_quasi_inverse_of_doubling(doubling):
    f, dom, cod = doubling
    inverse = quasi_inverse(f, dom, cod)
    assert inverse.eta == 0
    assert inverse.qi_map('4') == '2'
    assert verify_qi(inverse.qi_map, cod, dom).passed


def test_transfer_cut_through_doubling(doubling):
    f, dom, cod = doubling
    b = make_cut(dom, [str(i) for i in range(1, 6)])
    moved = transfer_cut(f, b, cod, radius=1)
    assert len(moved) == 1
    assert moved.tags == ('transferred',)
    with pytest.raises(CertificationError) as info:
        transfer_cut(f, b, cod, radius=0)
    assert info.value.measured['connected'] is False
    identity = QIMap({v: v for v in dom.vertices})
    assert transfer_cut(identity, b, dom, radius=0).side == b.side


def test_transfer_cut_on_the_grid():
    dom, cod = grid_window(4), grid_window(8)
    f = QIMap(grid_map(dom, lambda x, y: (2 * x, 2 * y)), 2)
    b = make_cut(dom, [v for v in dom.vertices if xy(v)[0] >= 1])
    moved = transfer_cut(f, b, cod, radius=2)
    assert f('1,0') in moved.side
    assert f('-1,0') not in moved.side


def test_move_cuts():
    assert move_cuts_radii(1) == (4, 6)
    w = line(14)
    identity = QIMap({v: v for v in w.vertices})
    assert move_cuts_violations(identity, w, w, ['0']) == []
    folding = QIMap({v: str(abs(int(v))) for v in w.vertices})
    assert ('-7', '7') in move_cuts_violations(folding, w, w, ['0'])
    with pytest.raises(ArgumentError):
        move_cuts_violations(identity, w, w, [])


def test_coboundary_diameters_of_punctured_grids():
    w = grid_window(3)
    punctured = coboundary_diameters(w, w.vertices - {'0,0'})
    assert (punctured.incut, punctured.outcut) == (4, 0)
    assert not punctured.incut_truncated
    whole = coboundary_diameters(w, w.vertices)
    assert (whole.incut, whole.outcut) == (0, 0)
    big = grid_window(7)
    square = {'0,0', '1,0', '0,1', '1,1'}
    holed = coboundary_diameters(big, big.vertices - square)
    assert (holed.incut, holed.outcut) == (6, 2)
    assert holed.describe() == {'incut': '6', 'outcut': '2'}


def test_inclusion_distortion_of_a_punctured_grid():
    w = grid_window(3)
    report = inclusion_distortion(w, w.vertices - {'0,0'})
    assert report['max_ratio'] == 2
    assert report['bound'] == 2
    assert report['holds']


@pytest.fixture
def rotations():
    w = grid_window(3)
    turns = {'e': lambda x, y: (x, y), 'r': lambda x, y: (-y, x),
             'r2': lambda x, y: (-x, -y), 'r3': lambda x, y: (y, -x)}
    maps = {label: QIMap(grid_map(w, fn)) for label, fn in turns.items()}
    labels = ['e', 'r', 'r2', 'r3']
    products = {(a, b): labels[(labels.index(a) + labels.index(b)) % 4] for a in labels for b in labels}
    return w, QuasiActionSample(maps, 1, 3, products)


def test_rotation_quasi_action(rotations):
    w, qa = rotations
    report = qa.check(w)
    assert report['not_quasi_isometries'] == []
    assert report['composition_defect'] == 0
    assert report['defect_ok']
    assert report['cobound_measured'] == 3
    assert report['cobounded']


def test_good_behavior_of_rotations(rotations):
    w, qa = rotations
    report = good_behavior_check(qa, grid_embedding(w), 0, 1)
    assert report['max_distance'] == 0
    assert report['faces_checked'] == 12
    assert report['passes']
    assert report['labels'] == ['e', 'r', 'r2', 'r3']


def test_projection_is_not_well_behaved():
    w = grid_window(3)
    qa = QuasiActionSample({'p': QIMap(grid_map(w, lambda x, y: (x, 0)))}, 1, 3)
    report = good_behavior_check(qa, grid_embedding(w), 0, 1)
    assert report['max_distance'] == 1
    assert not report['passes']


def test_empty_quasi_action_is_rejected():
    with pytest.raises(ArgumentError):
        QuasiActionSample({}, 1, 1)


def test_qi_cut_growth_on_the_cylinder(cylinder_window):
    identity = QIMap({v: v for v in cylinder_window.vertices})
    report = qi_cut_growth_check(identity, cylinder_window, cylinder_window, cylinder_window.vertices, 4)
    assert report['applicable']
    assert report['vs_domain'] == report['vs_image'] == 4
    assert report['ratio'] == 1
    assert report['positive']


def test_normalize_identity():
    w = grid_window(2)
    normal = normalize_continuous(QIMap({v: v for v in w.vertices}), w, w)
    assert normal.report['max_path_length'] == 1
    assert normal.report['inclusion_stretch'] == 1
    assert normal.report['image_connected']
    assert normal.image == w.vertices
    assert verify_qi(normal.qi_map, w, w).continuity_errors == []


def test_outcut_is_the_largest_incut_of_a_complementary_component():
    w = grid_window(7)
    holes = [{'0,0'}, {'2,2', '3,2', '2,3', '3,3'}]
    lam = w.vertices - set().union(*holes)
    diameters = coboundary_diameters(w, lam)
    assert diameters.outcut == max(coboundary_diameters(w, h).incut for h in holes) == 2
    assert not diameters.outcut_truncated
