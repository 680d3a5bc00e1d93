import json
import math
from fractions import Fraction

import pytest

from conftest import grid_window
from graphs.errors import ContractViolation
from graphs.io import (embedding_from_json, embedding_to_json, graph_to_dot, read_json, to_jsonable,
                       window_from_json, window_to_json, write_json)
from splitting.complexes import h1_rank
from splitting.cuts import make_cut
from splitting.qimaps import QIMap
from splitting.records import (complex_from_json, complex_to_json, cut_to_json, cuts_from_json, cuts_to_json,
                               pattern_from_json, pattern_to_json, qimap_from_json, qimap_to_json)
from splitting.tracks import pattern_from_j


@pytest.mark.parametrize('value, expected', [
    (Fraction(3, 2), '3/2'),
    (Fraction(2), '2'),
    (math.inf, 'inf'),
    (frozenset({'b', 'a'}), ['a', 'b']),
    ({1: (Fraction(1, 3),)}, {'1': ['1/3']}),
])
def test_to_jsonable(value, expected):
    assert to_jsonable(value) == expected


def test_window_file_round_trip(tmp_path):
    w = grid_window(2)
    path = tmp_path / 'window.json'
    write_json(window_to_json(w, 'grid2d'), path)
    data = read_json(path)
    assert data['generator'] == 'grid2d'
    back = window_from_json(data)
    assert back.graph == w.graph
    assert back.boundary == w.boundary
    assert back.markers == w.markers
    assert back.radius == 2
    assert back.basepoint == '0,0'


def test_malformed_graph_json():
    with pytest.raises(ContractViolation):
        window_from_json({'edges': []})


def test_embedding_json(cylinder_window, cylinder_embedding):
    data = json.loads(json.dumps(embedding_to_json(cylinder_embedding)))
    back = embedding_from_json(data, cylinder_window)
    assert sorted(f.length for f in back.faces) == sorted(f.length for f in cylinder_embedding.faces)


def test_graph_to_dot():
    dot = graph_to_dot(grid_window(1).graph, highlight=['0,0'])
    assert dot.startswith('graph "window" {')
    assert '"0,0" [style=filled];' in dot


def test_qimap_json():
    f = QIMap({'0': '0', '1': '2'}, 2, Fraction(1, 2))
    data = qimap_to_json(f)
    assert data == {'map': {'0': '0', '1': '2'}, 'lambda': '2', 'eps': '1/2'}
    back = qimap_from_json(json.loads(json.dumps(data)))
    assert back.lam == 2
    assert back.eps == Fraction(1, 2)
    assert dict(back.vertex_map) == dict(f.vertex_map)
    with pytest.raises(ContractViolation):
        qimap_from_json({'lambda': 2})
    with pytest.raises(ContractViolation):
        qimap_from_json({'map': {}, 'lambda': 'x'})


def test_cut_json(ladder_window):
    c = make_cut(ladder_window, [v for v in ladder_window.vertices if int(v.split(',')[0]) >= 1])
    data = cut_to_json(c)
    assert data['coboundary'] == ['0,0~1,0', '0,1~1,1']
    assert 'tags' not in data
    assert cuts_from_json(cuts_to_json([c]), ladder_window) == [c]


def test_complex_json(annulus):
    data = json.loads(json.dumps(complex_to_json(annulus)))
    back = complex_from_json(data)
    assert len(back.cells) == 12
    assert h1_rank(back) == 1
    with pytest.raises(ContractViolation):
        complex_from_json({'vertices': [], 'edges': []})


def test_pattern_json(tetrahedron):
    p = pattern_from_j(tetrahedron, {'0~3': 1, '1~3': 1, '2~3': 1})
    data = pattern_to_json(p)
    assert data['j'] == {'0~3': 1, '1~3': 1, '2~3': 1}
    assert data['tracks'][0]['norm'] == 3
    assert dict(pattern_from_json(data, tetrahedron).j) == dict(p.j)
    with pytest.raises(ContractViolation):
        pattern_from_json({}, tetrahedron)
