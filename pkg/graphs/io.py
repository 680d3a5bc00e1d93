import json
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Optional, Union

import numpy as np
import pandas as pd

from .core import Dart, Graph, Window
from .errors import ContractViolation
from .planar import PlanarEmbedding, face_table

logger = logging.getLogger(__name__)


def to_jsonable(value):
    """
    Plain JSON values for the report types used across the packages: sets become sorted
    lists, rationals "p/q" strings, infinity "inf", data frames lists of records
    """
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, float) and math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return to_jsonable(float(value))
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, pd.DataFrame):
        return [to_jsonable(r) for r in value.to_dict(orient='records')]
    if isinstance(value, (set, frozenset)):
        return sorted(to_jsonable(v) for v in value)
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def dumps(value) -> str:
    return json.dumps(to_jsonable(value), sort_keys=True, indent=2)


def write_json(value, path: Union[str, Path, None]) -> str:
    text = dumps(value)
    if path is not None:
        Path(path).write_text(text + '\n')
        logger.debug(f"wrote {path}")
    return text


def read_json(path: Union[str, Path]):
    with open(path) as fh:
        return json.load(fh)


def graph_to_json(g: Graph) -> dict:
    return {
        'vertices': list(g.ordered_vertices),
        'edges': [[eid, u, v] for eid, (u, v) in sorted(g.edges.items())],
    }


def graph_from_json(data: Mapping) -> Graph:
    try:
        edges = {eid: (u, v) for eid, u, v in data.get('edges', [])}
        return Graph(data['vertices'], edges)
    except (KeyError, TypeError, ValueError) as exc:
        raise ContractViolation(f"malformed graph JSON: {exc}") from None


def window_to_json(w: Window, generator: Optional[str] = None) -> dict:
    data = graph_to_json(w.graph)
    data.update({
        'boundary': sorted(w.boundary),
        'markers': [sorted(m) for m in w.markers],
        'radius': w.radius,
        'basepoint': w.basepoint,
    })
    if generator is not None:
        data['generator'] = generator
    return data


def window_from_json(data: Mapping) -> Window:
    g = graph_from_json(data)
    basepoint = data.get('basepoint')
    if basepoint is None or basepoint not in g:
        return Window.of_graph(g, data.get('boundary', ()), data.get('markers', ()))
    w = Window.of_graph(g, data.get('boundary', ()), data.get('markers', ()), basepoint)
    radius = data.get('radius', w.radius)
    return Window(w.graph, radius, w.basepoint, w.boundary, w.markers, w.depth)


def _dart_id(d: Dart) -> str:
    return f"{d[0]}:{d[1]}"


def _parse_dart(text: str) -> Dart:
    eid, _, direction = text.rpartition(':')
    if direction not in ('0', '1') or not eid:
        raise ContractViolation(f"bad edge end id {text!r}")
    return eid, int(direction)


def embedding_to_json(emb: PlanarEmbedding) -> dict:
    data = {'rotation': {v: [_dart_id(d) for d in darts] for v, darts in emb.rotation.items()}}
    if emb.open_corners is not None:
        data['open_corners'] = sorted(_dart_id(d) for d in emb.open_corners)
    return data


def embedding_from_json(data: Mapping, w: Window) -> PlanarEmbedding:
    rotation = {v: [_parse_dart(d) for d in darts] for v, darts in data.get('rotation', {}).items()}
    corners = data.get('open_corners')
    return PlanarEmbedding(w.graph, rotation, w.boundary,
                           None if corners is None else [_parse_dart(d) for d in corners])


def faces_to_json(emb: PlanarEmbedding) -> list:
    return [{
        'index': f.index,
        'edges': [d[0] for d in f.walk],
        'length': f.length,
        'kind': f.kind,
    } for f in emb.faces]


def face_records(emb: PlanarEmbedding) -> list:
    return to_jsonable(face_table(emb))


def graph_to_dot(g: Graph, name: str = 'window', highlight: Iterable[str] = (), labels: Optional[Mapping] = None) -> str:
    highlight = set(highlight)
    lines = [f'graph "{name}" {{']
    for v in g.ordered_vertices:
        attrs = [f'label="{labels[v]}"'] if labels and v in labels else []
        if v in highlight:
            attrs.append('style=filled')
        suffix = f" [{', '.join(attrs)}]" if attrs else ''
        lines.append(f'  "{v}"{suffix};')
    for eid, (u, v) in sorted(g.edges.items()):
        lines.append(f'  "{u}" -- "{v}" [label="{eid}"];')
    lines.append('}')
    return '\n'.join(lines)
