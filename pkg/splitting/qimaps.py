import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from graphs.config import resolve
from graphs.connectivity import Mode, window_end_cut_size
from graphs.core import INF, Graph, Window
from graphs.errors import ArgumentError, CertificationError, NotFoundError, PreconditionError
from graphs.planar import PlanarEmbedding

from .cuts import Cut

logger = logging.getLogger(__name__)


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value)
    return Fraction(value).limit_denominator(10 ** 6)


@dataclass(frozen=True, eq=False)
class QIMap:
    """
    Vertex map between windows with quasi-isometry constants, has following attributes:

    - vertex_map: domain vertex -> codomain vertex
    - lam: multiplicative constant, at least 1
    - eps: additive constant, at least 0
    - edge_paths: optional domain edge -> codomain vertex path, the continuity data
    """

    vertex_map: Mapping[str, str]
    lam: Fraction = Fraction(1)
    eps: Fraction = Fraction(0)
    edge_paths: Optional[Mapping[str, Tuple[str, ...]]] = None

    def __post_init__(self):
        object.__setattr__(self, 'lam', as_fraction(self.lam))
        object.__setattr__(self, 'eps', as_fraction(self.eps))
        if self.lam < 1:
            raise ArgumentError(f"lambda must be at least 1, got {self.lam}")
        if self.eps < 0:
            raise ArgumentError(f"epsilon must be non-negative, got {self.eps}")

    def __call__(self, v: str) -> str:
        try:
            return self.vertex_map[v]
        except KeyError:
            raise NotFoundError(f"map is undefined at {v!r}") from None

    def image(self, vertices: Iterable[str]) -> FrozenSet[str]:
        return frozenset(self(v) for v in vertices)

    def with_constants(self, lam=None, eps=None) -> 'QIMap':
        return QIMap(self.vertex_map, self.lam if lam is None else lam, self.eps if eps is None else eps,
                     self.edge_paths)


@dataclass(frozen=True)
class QIReport:
    """
    - passed: no violated pair, and coarse surjectivity when it was requested
    - lam, eps: the constants checked against
    - pairs_checked: number of domain pairs compared
    - exhaustive: all pairs were compared rather than a seeded sample
    - violations: (x, y, domain distance, codomain distance, 'lower' or 'upper')
    - uncovered: codomain vertices farther than eps from the image
    - continuity_errors: domain edges whose path does not join the endpoint images
    """

    passed: bool
    lam: Fraction
    eps: Fraction
    pairs_checked: int
    exhaustive: bool
    violations: List[Tuple[str, str, float, float, str]] = field(default_factory=list)
    uncovered: List[str] = field(default_factory=list)
    continuity_errors: List[str] = field(default_factory=list)


def _check_total(f: QIMap, dom: Window, cod: Window):
    missing = sorted(dom.vertices - set(f.vertex_map))
    if missing:
        raise PreconditionError(f"map is not total on the domain window, e.g. at {missing[0]!r}")
    outside = sorted(v for v in dom.vertices if f(v) not in cod.graph)
    if outside:
        raise ArgumentError(f"image of {outside[0]!r} lies outside the codomain window")


def sample_pairs(vertices: Sequence[str], config=None) -> Tuple[List[Tuple[str, str]], bool]:
    """
    All pairs below the exhaustive threshold, otherwise a seeded sample
    """
    config = resolve(config)
    vertices = sorted(vertices)
    n = len(vertices)
    if n * (n - 1) // 2 <= config.exhaustive_pairs:
        return list(combinations(vertices, 2)), True
    rng = np.random.default_rng(config.seed)
    picks = rng.integers(0, n, size=(config.sample_pairs, 2))
    return [(vertices[i], vertices[j]) for i, j in picks if i != j], False


def verify_qi(f: QIMap, dom: Window, cod: Window, coarse_surjective: bool = False,
              lam=None, eps=None, config=None) -> QIReport:
    """
    Check (1/lam) d(x, y) - eps <= d(f x, f y) <= lam d(x, y) + eps, the map's own
    constants unless lam or eps are given
    """
    lam = f.lam if lam is None else as_fraction(lam)
    eps = f.eps if eps is None else as_fraction(eps)
    _check_total(f, dom, cod)
    pairs, exhaustive = sample_pairs(dom.vertices, config)
    violations = []
    for x, y in pairs:
        d1 = dom.graph.distance(x, y)
        d2 = cod.graph.distance(f(x), f(y))
        if d1 == INF or d2 == INF:
            if d1 != d2:
                violations.append((x, y, d1, d2, 'upper' if d2 == INF else 'lower'))
            continue
        if d1 > lam * (d2 + eps):
            violations.append((x, y, d1, d2, 'lower'))
        elif d2 > lam * d1 + eps:
            violations.append((x, y, d1, d2, 'upper'))
    uncovered = []
    if coarse_surjective:
        near = cod.graph.ball(f.image(dom.vertices), math.floor(eps))
        uncovered = sorted(cod.vertices - near)
    continuity = continuity_errors(f, dom, cod) if f.edge_paths is not None else []
    passed = not violations and not uncovered and not continuity
    logger.debug(f"qi check lam={lam} eps={eps}: {len(violations)} violations over {len(pairs)} pairs")
    return QIReport(passed, lam, eps, len(pairs), exhaustive, violations, uncovered, continuity)


def continuity_errors(f: QIMap, dom: Window, cod: Window) -> List[str]:
    errors = []
    for eid, (u, v) in dom.graph.edges.items():
        path = (f.edge_paths or {}).get(eid)
        if not path or {path[0], path[-1]} != {f(u), f(v)}:
            errors.append(eid)
            continue
        if any(not cod.graph.edges_between(a, b) for a, b in zip(path, path[1:]) if a != b):
            errors.append(eid)
    return errors


def fit_eps(f: QIMap, dom: Window, cod: Window, lam=None, config=None) -> Fraction:
    """
    Smallest additive constant making f a (lam, eps) quasi-isometric embedding on the checked pairs
    """
    lam = f.lam if lam is None else as_fraction(lam)
    _check_total(f, dom, cod)
    pairs, _ = sample_pairs(dom.vertices, config)
    best = Fraction(0)
    for x, y in pairs:
        d1 = dom.graph.distance(x, y)
        d2 = cod.graph.distance(f(x), f(y))
        if INF in (d1, d2):
            continue
        best = max(best, d2 - lam * d1, Fraction(d1) / lam - d2)
    return best


@dataclass(frozen=True)
class NormalizedMap:
    """
    - qi_map: the input map with a geodesic edge path for every domain edge
    - image: vertices of the image subgraph
    - image_edges: codomain edges used by the paths
    - report: inclusion distortion of the image and valence figures
    """

    qi_map: QIMap
    image: FrozenSet[str]
    image_edges: FrozenSet[str]
    report: Dict[str, object]


def normalize_continuous(f: QIMap, dom: Window, cod: Window, config=None) -> NormalizedMap:
    """
    Send every domain edge to a codomain geodesic between its endpoint images; the union
    of those paths is the image subgraph, whose inclusion into the codomain is measured
    """
    _check_total(f, dom, cod)
    g = cod.graph
    paths = {}
    used_edges = set()
    vertices = set(f.image(dom.vertices))
    for eid, (u, v) in dom.graph.edges.items():
        path = tuple(g.geodesic(f(u), f(v)))
        paths[eid] = path
        vertices.update(path)
        for a, b in zip(path, path[1:]):
            used_edges.add(g.edges_between(a, b)[0])
    image_graph = g.subgraph(vertices, used_edges)
    pairs, exhaustive = sample_pairs(vertices, config)
    stretch = Fraction(1)
    for x, y in pairs:
        inner = image_graph.distance(x, y)
        outer = g.distance(x, y)
        if inner == INF:
            stretch = INF
            break
        if outer:
            stretch = max(stretch, Fraction(inner, outer))
    report = {
        'max_path_length': max((len(p) - 1 for p in paths.values()), default=0),
        'path_bound': f.lam + f.eps,
        'inclusion_stretch': stretch,
        'image_connected': image_graph.is_connected(),
        'image_max_degree': image_graph.max_degree(),
        'domain_max_degree': dom.graph.max_degree(),
        'exhaustive': exhaustive,
    }
    return NormalizedMap(QIMap(f.vertex_map, f.lam, f.eps, paths), frozenset(vertices), frozenset(used_edges), report)


@dataclass(frozen=True)
class QuasiInverse:
    """
    - qi_map: codomain -> domain map sending each vertex to a nearest preimage
    - eta: largest displacement d(g(f(x)), x) over the domain
    """

    qi_map: QIMap
    eta: int


def quasi_inverse(f: QIMap, dom: Window, cod: Window, config=None) -> QuasiInverse:
    _check_total(f, dom, cod)
    reach = math.floor(f.eps)
    near = cod.graph.ball(f.image(dom.vertices), reach)
    uncovered = sorted(cod.vertices - near)
    if uncovered:
        raise PreconditionError(f"map is not {f.eps}-coarsely surjective, {uncovered[0]!r} is uncovered")
    preimages: Dict[str, List[str]] = {}
    for x in dom.graph.ordered_vertices:
        preimages.setdefault(f(x), []).append(x)
    inverse = {}
    for y in cod.graph.ordered_vertices:
        dist = cod.graph.distances_from(y)
        best = min(preimages, key=lambda z: (dist.get(z, INF), preimages[z][0]))
        inverse[y] = preimages[best][0]
    eta = max((dom.graph.distance(inverse[f(x)], x) for x in dom.vertices), default=0)
    g = QIMap(inverse, f.lam, 0)
    g = g.with_constants(eps=fit_eps(g, cod, dom, config=config))
    logger.debug(f"quasi-inverse with displacement {eta}")
    return QuasiInverse(g, eta)


def default_transfer_radius(f: QIMap, config=None) -> Fraction:
    return resolve(config).transfer_factor * f.lam ** 5


def transfer_measure(f: QIMap, b: Cut, moved: Cut, radius) -> Dict[str, object]:
    """
    Radii certifying a transferred cut: Hausdorff distance between f(b) and b', how far
    interior coboundary edges of b' reach from the image of the coboundary of b, and
    whether connectivity of b survived
    """
    cod = moved.host
    g = cod.graph
    image = f.image(b.side)
    hausdorff = max((g.distance_to_set(v, image) for v in moved.side), default=0)
    anchors = {f(v) for eid in b.coboundary for v in b.host.graph.endpoints(eid)}
    reach = 0
    for eid in moved.coboundary:
        ends = g.endpoints(eid)
        if any(v in cod.boundary for v in ends):
            continue
        reach = max(reach, max(g.distance_to_set(v, anchors) if anchors else INF for v in ends))
    connected_in = bool(b.side) and b.host.graph.induced(b.side).is_connected()
    connected_out = bool(moved.side) and g.induced(moved.side).is_connected()
    return {
        'radius': radius,
        'hausdorff': hausdorff,
        'coboundary_reach': reach,
        'reach_bound': radius + f.lam + f.eps + 1,
        'connected': (not connected_in) or connected_out,
    }


def transfer_cut(f: QIMap, b: Cut, cod: Window, radius=None, config=None) -> Cut:
    """
    b' = ball of the given radius around f(b), 100 lam^5 by default; raises
    CertificationError when the transfer cannot be certified
    """
    _check_total(f, b.host, cod)
    radius = default_transfer_radius(f, config) if radius is None else as_fraction(radius)
    if radius < 0:
        raise ArgumentError(f"transfer radius must be non-negative, got {radius}")
    side = cod.graph.ball(f.image(b.side), math.floor(radius)) if b.side else frozenset()
    moved = Cut(side, cod, ('transferred',))
    measured = transfer_measure(f, b, moved, radius)
    if not measured['connected']:
        raise CertificationError(f"b is connected but its transfer at radius {radius} is not", measured)
    if measured['coboundary_reach'] > measured['reach_bound']:
        raise CertificationError(
            f"coboundary of the transfer reaches {measured['coboundary_reach']} "
            f"from the image coboundary, bound {measured['reach_bound']}", measured)
    logger.debug(f"transferred a cut of size {len(b)} to one of size {len(moved)} at radius {radius}")
    return moved


@dataclass(frozen=True)
class CoboundaryDiameters:
    """
    - incut: largest diameter, measured inside the subgraph, of the attachment set of a
      complementary component
    - outcut: largest incut of a complementary component, taken against its own
      complement in the window
    - incut_truncated / outcut_truncated: the maximum is attained at a component reaching
      the window boundary, so the value is only a lower bound at this radius
    - radius: window radius
    """

    incut: float
    outcut: float
    incut_truncated: bool
    outcut_truncated: bool
    radius: int

    def describe(self) -> Dict[str, str]:
        def fmt(value, truncated):
            return f">= {value} at radius {self.radius}" if truncated else str(value)
        return {'incut': fmt(self.incut, self.incut_truncated), 'outcut': fmt(self.outcut, self.outcut_truncated)}


def _attachment_diameters(g: Graph, part: FrozenSet[str]) -> List[Tuple[FrozenSet[str], int]]:
    """
    Components of g - part, each with the diameter inside part of the vertices it attaches to
    """
    inner = g.induced(part)
    out = []
    for component in g.without(part).components():
        attach = {v for eid in g.edge_set_boundary(component) for v in g.endpoints(eid) if v in part}
        out.append((component, inner.set_diameter(attach)))
    return out


def coboundary_diameters(w: Window, lam: Iterable[str]) -> CoboundaryDiameters:
    lam = frozenset(lam)
    if not lam:
        raise ArgumentError("subgraph vertex set is empty")
    g = w.graph
    inner = g.induced(lam)
    if not inner.is_connected():
        raise PreconditionError("the subgraph must induce a connected graph")
    incut = outcut = 0
    in_trunc = out_trunc = False
    for component, d_in in _attachment_diameters(g, lam):
        touches = bool(component & w.boundary)
        d_out = max((d for _, d in _attachment_diameters(g, component)), default=0)
        if d_in > incut:
            incut, in_trunc = d_in, touches
        elif d_in == incut and touches:
            in_trunc = True
        if d_out > outcut:
            outcut, out_trunc = d_out, touches
        elif d_out == outcut and touches:
            out_trunc = True
    return CoboundaryDiameters(incut, outcut, in_trunc, out_trunc, w.radius)


def inclusion_distortion(w: Window, lam: Iterable[str], config=None) -> Dict[str, object]:
    """
    Largest ratio d_lam / d over vertex pairs of the subgraph, against the bound
    max(1, incut / 2) that holds whenever incut is finite
    """
    lam = frozenset(lam)
    diameters = coboundary_diameters(w, lam)
    inner = w.graph.induced(lam)
    pairs, exhaustive = sample_pairs(lam, config)
    worst = Fraction(1)
    for x, y in pairs:
        outer = w.graph.distance(x, y)
        if outer:
            worst = max(worst, Fraction(inner.distance(x, y), outer))
    bound = max(Fraction(1), Fraction(diameters.incut) / 2)
    return {'max_ratio': worst, 'bound': bound, 'holds': worst <= bound, 'exhaustive': exhaustive}


@dataclass(frozen=True, eq=False)
class QuasiActionSample:
    """
    Finitely many labelled maps standing in for a quasi-action on one window:

    - maps: group element label -> QIMap from the window to itself
    - lam: quasi-action constant
    - cobound: coboundedness constant B
    - products: optional (g, h) -> label of gh, used for the composition defect
    """

    maps: Mapping[str, QIMap]
    lam: Fraction
    cobound: Fraction
    products: Mapping[Tuple[str, str], str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'lam', as_fraction(self.lam))
        object.__setattr__(self, 'cobound', as_fraction(self.cobound))
        if not self.maps:
            raise ArgumentError("a quasi-action sample needs at least one map")

    def check(self, w: Window, config=None) -> Dict[str, object]:
        """
        Quasi-isometry constants of every map, composition defect over the product table
        and coboundedness over sampled pairs
        """
        failures = []
        for label, f in sorted(self.maps.items()):
            if not verify_qi(f, w, w, lam=self.lam, eps=self.lam, config=config).passed:
                failures.append(label)
        defect = 0
        for (g, h), gh in sorted(self.products.items()):
            fg, fh, fgh = self.maps[g], self.maps[h], self.maps[gh]
            for x in w.graph.ordered_vertices:
                y = fh(x)
                if y in fg.vertex_map:
                    defect = max(defect, w.graph.distance(fgh(x), fg(y)))
        pairs, exhaustive = sample_pairs(w.vertices, config)
        spread = 0
        for x, y in pairs:
            spread = max(spread, min(w.graph.distance(x, f(y)) for f in self.maps.values()))
        return {
            'labels': sorted(self.maps),
            'not_quasi_isometries': failures,
            'composition_defect': defect,
            'defect_ok': defect <= self.lam,
            'cobound_measured': spread,
            'cobounded': spread <= self.cobound,
            'sample': f"{len(self.maps)} maps, {len(self.products)} products, "
                      f"{len(pairs)} {'pairs' if exhaustive else 'sampled pairs'}",
        }


def good_behavior_check(qa: QuasiActionSample, emb: PlanarEmbedding, n: int, m: int) -> Dict[str, object]:
    """
    For every finite face of diameter above n and every label g, the Hausdorff distance
    from the image of the face to the nearest face; the check passes when the largest
    such distance stays below m. Faces reaching the window boundary are truncated and skipped.
    """
    g = emb.host
    faces = emb.faces
    face_sets = [f.vertices for f in faces]
    worst = 0
    checked = 0
    for face in faces:
        if face.boundary_touching or g.set_diameter(face.vertices) <= n:
            continue
        checked += 1
        for label, f in sorted(qa.maps.items()):
            image = f.image(face.vertices)
            worst = max(worst, min(_hausdorff(g, image, other) for other in face_sets))
    two_connected = g.is_connected() and len(g) > 2 and not list(nx.articulation_points(g.simple))
    return {
        'max_distance': worst,
        'faces_checked': checked,
        'labels': sorted(qa.maps),
        'passes': worst < m,
        'two_connected': two_connected,
    }


def _hausdorff(g: Graph, a: FrozenSet[str], b: FrozenSet[str]):
    forward = max(g.distance_to_set(x, b) for x in a)
    backward = max(g.distance_to_set(y, a) for y in b)
    return max(forward, backward)


def qi_cut_growth_check(f: QIMap, dom: Window, cod: Window, lam: Iterable[str], m_guess: int,
                        config=None) -> Dict[str, object]:
    """
    Vertex separation between the markers of the subgraph against that of its image
    """
    lam = frozenset(lam)
    _check_total(f, dom, cod)
    part = dom.restrict(lam)
    if len(part.markers) < 2:
        return {'applicable': False, 'reason': f"fewer than two markers at radius {dom.radius}"}
    before = window_end_cut_size(part, Mode.VERTEX).value
    if before < m_guess:
        raise PreconditionError(f"vertex separation of the subgraph is {before}, below {m_guess}")
    normal = normalize_continuous(QIMap({v: f(v) for v in lam}, f.lam, f.eps), part, cod, config)
    image = cod.restrict(normal.image, markers=[f.image(marker) for marker in part.markers])
    after = window_end_cut_size(image, Mode.VERTEX).value
    ratio = Fraction(int(after), int(before)) if before not in (0, INF) and after != INF else None
    return {
        'applicable': True,
        'vs_domain': before,
        'vs_image': after,
        'ratio': ratio,
        'positive': ratio is not None and ratio > 0,
        'radius': dom.radius,
    }


def move_cuts_radii(lam) -> Tuple[Fraction, Fraction]:
    """
    (r, R): a separator S pushed through a lam-quasi-isometry separates images of points
    beyond the R-ball of S once thickened to an r-ball
    """
    lam = as_fraction(lam)
    r = 2 * lam ** 2 + 2 * lam
    return r, lam * (r + lam) + lam


def move_cuts_violations(f: QIMap, dom: Window, cod: Window, separator: Iterable[str],
                         lam=None) -> List[Tuple[str, str]]:
    """
    Pairs x, y outside the R-ball of S, in different components of the domain minus S,
    whose images are not in different components of the codomain minus the r-ball of f(S)
    """
    separator = frozenset(separator)
    if not separator:
        raise ArgumentError("separator is empty")
    _check_total(f, dom, cod)
    r, big_r = move_cuts_radii(f.lam if lam is None else lam)
    far = dom.vertices - dom.graph.ball(separator, math.floor(big_r))
    side = {}
    for i, comp in enumerate(dom.graph.without(separator).components()):
        for v in comp:
            side[v] = i
    thick = cod.graph.ball(f.image(separator), math.floor(r))
    image_side = {}
    for i, comp in enumerate(cod.graph.without(thick).components()):
        for v in comp:
            image_side[v] = i
    bad = []
    for x, y in combinations(sorted(far), 2):
        if side[x] == side[y]:
            continue
        fx, fy = image_side.get(f(x)), image_side.get(f(y))
        if fx is None or fy is None or fx == fy:
            bad.append((x, y))
    return bad
