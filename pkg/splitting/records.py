from typing import Iterable, Mapping

from graphs.core import Window
from graphs.errors import ContractViolation
from graphs.io import graph_from_json, graph_to_json, to_jsonable

from .complexes import Complex2
from .cuts import Cut, make_cut
from .qimaps import QIMap
from .tracks import Pattern, pattern_from_j


def cut_to_json(c: Cut) -> dict:
    data = {'side': c.sorted_side(), 'coboundary': sorted(c.coboundary)}
    if c.tags:
        data['tags'] = list(c.tags)
    return data


def cuts_to_json(cuts: Iterable[Cut]) -> list:
    return [c.sorted_side() for c in cuts]


def cuts_from_json(data: Iterable[Iterable[str]], w: Window) -> list:
    return [make_cut(w, side) for side in data]


def complex_to_json(k: Complex2) -> dict:
    data = graph_to_json(k.skeleton)
    data['cells'] = k.edge_cycles()
    if k.basepoint is not None:
        data['basepoint'] = k.basepoint
    return data


def complex_from_json(data: Mapping) -> Complex2:
    if 'cells' not in data:
        raise ContractViolation("complex JSON has no cells")
    return Complex2.from_edge_cycles(graph_from_json(data), data['cells'], data.get('basepoint'))


def pattern_to_json(p: Pattern) -> dict:
    return {
        'j': dict(p.j),
        'tracks': [{'points': sorted(t.points), 'norm': t.norm, 'cocycle': sorted(t.cocycle)} for t in p.tracks],
    }


def pattern_from_json(data: Mapping, k: Complex2) -> Pattern:
    try:
        j = {eid: int(v) for eid, v in data['j'].items()}
    except (KeyError, AttributeError, TypeError, ValueError) as exc:
        raise ContractViolation(f"malformed pattern JSON: {exc}") from None
    return pattern_from_j(k, j)


def qimap_to_json(f: QIMap) -> dict:
    data = {'map': dict(sorted(f.vertex_map.items())), 'lambda': f.lam, 'eps': f.eps}
    if f.edge_paths is not None:
        data['edgePaths'] = {eid: list(path) for eid, path in sorted(f.edge_paths.items())}
    return to_jsonable(data)


def qimap_from_json(data: Mapping) -> QIMap:
    try:
        paths = data.get('edgePaths')
        return QIMap(
            dict(data['map']),
            str(data.get('lambda', 1)),
            str(data.get('eps', 0)),
            None if paths is None else {eid: tuple(p) for eid, p in paths.items()},
        )
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ContractViolation(f"malformed map JSON: {exc}") from None
