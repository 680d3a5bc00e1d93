import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import pandas as pd

from graphs.connectivity import Mode, window_end_cut_size
from graphs.core import Dart, Graph, GraphSource, Window, sort_sets
from graphs.errors import ArgumentError, ContractViolation, NestingViolation, NotFoundError, PreconditionError
from .cuts import Cut, crosses, cut_order, is_tight

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NestedSystem:
    """
    Nested family of tight cuts closed under complement:

    - window: host window
    - cuts: all cuts, in canonical order
    - partner: index of each cut's complement
    """

    window: Window = field(repr=False)
    cuts: Tuple[Cut, ...]
    partner: Tuple[int, ...]

    def __len__(self):
        return len(self.cuts)

    def index(self, c: Cut) -> int:
        for i, d in enumerate(self.cuts):
            if d.side == c.side:
                return i
        raise NotFoundError("cut is not in the system")


def validate_nested(cuts: Iterable[Cut], window: Optional[Window] = None, require_tight: bool = True) -> NestedSystem:
    """
    Check the structure tree axioms and add missing complements.
    Raises NestingViolation naming the axiom and the offending cuts.
    """
    cuts = list(cuts)
    if window is None:
        if not cuts:
            raise ArgumentError("an empty system needs its window")
        window = cuts[0].host
    for c in cuts:
        if not c.host.same_host(window):
            raise ArgumentError("cuts live in different windows")
        if not c.is_proper():
            raise NestingViolation('proper', [c], "cut side must be a nonempty proper subset")
        if require_tight and not is_tight(c):
            raise NestingViolation('tight', [c], f"cut {c.sorted_side()} is not tight")
    by_side: Dict[FrozenSet[str], Cut] = {}
    for c in cuts:
        by_side.setdefault(c.side, Cut(c.side, window))
        by_side.setdefault(c.complement.side, c.complement)
    ordered = sorted(by_side.values(), key=cut_order)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            if crosses(a, b):
                raise NestingViolation('nested', [a, b], f"cuts {a.sorted_side()} and {b.sorted_side()} cross")
    index = {c.side: i for i, c in enumerate(ordered)}
    partner = tuple(index[c.complement.side] for c in ordered)
    assert all(partner[partner[i]] == i != partner[i] for i in range(len(ordered)))
    return NestedSystem(window, tuple(ordered), partner)


class StructureTree:
    """
    Tree whose directed edges are the cuts of a nested system, has following attributes:

    - system: the nested system
    - tree: tree graph on vertices "t0", "t1", ...; edge "e<i>" runs from [A*] to [A]
    - dart_cut: dart of the tree -> cut
    - classes: tree vertex -> cuts pointing into it
    - regions: tree vertex -> window vertices outside every cut of its class

    A cut's side is the union of regions on the tail side of its dart.
    """

    def __init__(self, system: NestedSystem):
        self.system = system
        cuts = system.cuts
        n = len(cuts)
        below = [[cuts[i].side < cuts[j].side for j in range(n)] for i in range(n)]
        covered = [[below[i][j] and not any(below[i][k] and below[k][j] for k in range(n)) for j in range(n)]
                   for i in range(n)]
        union_find = nx.utils.UnionFind(range(n))
        for i in range(n):
            for j in range(n):
                if covered[i][system.partner[j]]:
                    union_find.union(i, j)
        groups = sorted((sorted(g) for g in union_find.to_sets()), key=lambda g: cut_order(cuts[g[0]]))
        if not groups:
            groups = [[]]
        self.vertex_of: Dict[int, str] = {}
        self.classes: Dict[str, Tuple[Cut, ...]] = {}
        for t, members in enumerate(groups):
            self.classes[f"t{t}"] = tuple(cuts[i] for i in members)
            for i in members:
                self.vertex_of[i] = f"t{t}"
        everything = system.window.vertices
        self.regions: Dict[str, FrozenSet[str]] = {}
        for t, members in self.classes.items():
            region = everything
            for c in members:
                region = region - c.side
            self.regions[t] = region

        edges = {}
        self.dart_cut: Dict[Dart, Cut] = {}
        self.cut_dart: Dict[FrozenSet[str], Dart] = {}
        count = 0
        for i, c in enumerate(cuts):
            if system.window.basepoint in c.side:
                continue
            eid = f"e{count}"
            count += 1
            edges[eid] = (self.vertex_of[system.partner[i]], self.vertex_of[i])
            self.dart_cut[(eid, 0)] = c
            self.dart_cut[(eid, 1)] = cuts[system.partner[i]]
            self.cut_dart[c.side] = (eid, 0)
            self.cut_dart[cuts[system.partner[i]].side] = (eid, 1)
        self.tree = Graph(self.classes, edges)
        if not nx.is_tree(self.tree.nx_graph):
            raise ContractViolation("structure tree construction did not produce a tree")
        logger.debug(f"structure tree: {len(self.tree)} vertices, {len(edges)} edges")

    def tree_leq(self, d1: Dart, d2: Dart) -> bool:
        """
        d1 <= d2 when the tree path from the tail of d1 to the head of d2 starts with d1 and ends with d2
        """
        path = nx.shortest_path(self.tree.simple, self.tree.tail(d1), self.tree.head(d2))
        if len(path) < 2:
            return False
        return path[1] == self.tree.head(d1) and path[-2] == self.tree.tail(d2)

    def order_mismatches(self) -> List[Tuple[Cut, Cut]]:
        """
        Pairs where the edge-path order disagrees with inclusion of sides
        """
        out = []
        cuts = self.system.cuts
        for a in cuts:
            for b in cuts:
                if self.tree_leq(self.cut_dart[a.side], self.cut_dart[b.side]) != (a.side <= b.side):
                    out.append((a, b))
        return out

    def home_vertex(self, v: str) -> str:
        homes = [t for t, region in self.regions.items() if v in region]
        if len(homes) != 1:
            raise ContractViolation(f"vertex {v!r} lies in {len(homes)} regions")
        return homes[0]

    def to_dot(self) -> str:
        lines = ['graph structure {']
        for t in self.tree.ordered_vertices:
            lines.append(f'  "{t}" [label="{t} ({len(self.regions[t])})"];')
        for eid, (a, b) in self.tree.edges.items():
            lines.append(f'  "{a}" -- "{b}" [label="{len(self.dart_cut[(eid, 0)])}"];')
        lines.append('}')
        return '\n'.join(lines)


def structure_tree(system: NestedSystem) -> StructureTree:
    return StructureTree(system)


@dataclass
class TreeDecomposition:
    """
    - window: decomposed window
    - tree: decomposition tree
    - bags: tree vertex -> vertex set
    - adhesion_bound: largest bag intersection along a tree edge
    - structure: structure tree the decomposition was read from, if any
    - m: neighbourhood parameter of the connected construction
    """

    window: Window
    tree: Graph
    bags: Dict[str, FrozenSet[str]]
    adhesion_bound: int = 0
    structure: Optional[StructureTree] = None
    m: Optional[int] = None

    def adhesion(self, eid: str) -> FrozenSet[str]:
        u, w = self.tree.endpoints(eid)
        return self.bags[u] & self.bags[w]

    def table(self) -> pd.DataFrame:
        rows = []
        for t in self.tree.ordered_vertices:
            rows.append({
                'tree_vertex': t,
                'size': len(self.bags[t]),
                'degree': self.tree.degree(t),
                'vertices': sorted(self.bags[t]),
            })
        return pd.DataFrame(rows, columns=['tree_vertex', 'size', 'degree', 'vertices'])

    def to_dot(self) -> str:
        lines = ['graph decomposition {']
        for t in self.tree.ordered_vertices:
            lines.append(f'  "{t}" [label="{t} |{len(self.bags[t])}|"];')
        for eid, (a, b) in self.tree.edges.items():
            lines.append(f'  "{a}" -- "{b}" [label="{len(self.adhesion(eid))}"];')
        lines.append('}')
        return '\n'.join(lines)


def _with_adhesion(td: TreeDecomposition) -> TreeDecomposition:
    td.adhesion_bound = max((len(td.adhesion(eid)) for eid in td.tree.edges), default=0)
    return td


def single_bag(w: Window) -> TreeDecomposition:
    return TreeDecomposition(w, Graph(['t0']), {'t0': w.vertices})


def _check_system_window(src: GraphSource, r: int, system: NestedSystem):
    w = system.window
    if w.radius != r or w.basepoint != src.basepoint:
        raise PreconditionError(f"system does not live in the radius {r} window of this source")
    for c in system.cuts:
        for eid in c.coboundary:
            if set(w.graph.endpoints(eid)) & w.boundary:
                raise PreconditionError(f"cut {c.sorted_side()} has a coboundary edge at the window boundary")
    return w


def _edge_ends(w: Window, c: Cut) -> FrozenSet[str]:
    return frozenset(v for eid in c.coboundary for v in w.graph.endpoints(eid))


def connected_bags(system: NestedSystem, st: StructureTree, m: int) -> Dict[str, FrozenSet[str]]:
    w = system.window
    g = w.graph
    bags = {}
    for t, members in st.classes.items():
        bag = set(st.regions[t])
        for b in members:
            near = g.ball(w.vertices - b.side, m) & b.side
            bag |= _edge_ends(w, b) | near
        bags[t] = frozenset(bag)
    return bags


def tree_decomp_connected(src: GraphSource, r: int, system: NestedSystem, m: int) -> TreeDecomposition:
    """
    Bag of a tree vertex: its region, plus for each cut pointing into it the
    coboundary endpoints and the vertices of the cut side within m of the far side
    """
    if m < 1:
        raise ArgumentError(f"m must be at least 1, got {m}")
    w = _check_system_window(src, r, system)
    if not system.cuts:
        return single_bag(w)
    st = structure_tree(system)
    bags = connected_bags(system, st, m)
    for t in st.tree.ordered_vertices:
        if not w.graph.induced(bags[t]).is_connected():
            raise PreconditionError(f"part {t} is disconnected at m={m}")
    return _with_adhesion(TreeDecomposition(w, st.tree, bags, structure=st, m=m))


def smallest_connecting_m(src: GraphSource, r: int, system: NestedSystem) -> int:
    """
    Smallest m <= r/2 for which every part of the connected decomposition is connected
    """
    w = _check_system_window(src, r, system)
    if not system.cuts:
        return 1
    st = structure_tree(system)
    for m in range(1, max(1, r // 2) + 1):
        bags = connected_bags(system, st, m)
        if all(w.graph.induced(bag).is_connected() for bag in bags.values()):
            return m
    raise PreconditionError(f"no m <= {max(1, r // 2)} connects every part")


def tree_decomp_tight(src: GraphSource, r: int, system: NestedSystem) -> TreeDecomposition:
    """
    Bag of a tree vertex: its region plus, for every incident tree edge, the
    coboundary endpoints lying on the side away from the basepoint's home.
    Only the far-side endpoints are added, not both ends of every coboundary edge.
    """
    w = _check_system_window(src, r, system)
    if not system.cuts:
        return single_bag(w)
    st = structure_tree(system)
    tree = st.tree
    root = st.home_vertex(w.basepoint)
    parent = dict(nx.bfs_predecessors(tree.simple, root))
    bags = {t: set(st.regions[t]) for t in tree.ordered_vertices}
    for eid, (a, b) in tree.edges.items():
        child = b if parent.get(b) == a else a
        dart = (eid, 0) if tree.tail((eid, 0)) == child else (eid, 1)
        far_side = st.dart_cut[dart].side
        adhesion = _edge_ends(w, st.dart_cut[dart]) & far_side
        bags[a] |= adhesion
        bags[b] |= adhesion
    bags = {t: frozenset(bag) for t, bag in bags.items()}
    return _with_adhesion(TreeDecomposition(w, tree, bags, structure=st))


@dataclass
class DecompositionReport:
    """
    Outcome of verify_tree_decomposition; failures lists a message per broken check
    """

    cover: bool = True
    path_condition: bool = True
    adhesion: int = 0
    tight: bool = True
    separated: bool = True
    parts_connected: bool = True
    end_partition: bool = True
    marker_claims: Dict[int, str] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _edge_separation(td: TreeDecomposition, eid: str):
    tree = td.tree
    a, b = tree.endpoints(eid)
    rest = tree.without(removed_edges=[eid])
    side_a = next(c for c in rest.components() if a in c)
    s = td.adhesion(eid)
    y1 = frozenset().union(*(td.bags[t] for t in side_a)) - s
    y2 = frozenset().union(*(td.bags[t] for t in tree.vertices - side_a)) - s
    return y1, s, y2


def _is_tight_separation(g: Graph, y1, s, y2) -> bool:
    if not s:
        return True
    for c1 in g.induced(y1).components():
        touch1 = {v for v in s if any(u in c1 for u in g.neighbors(v))}
        if touch1 != s:
            continue
        for c2 in g.induced(y2).components():
            if all(any(u in c2 for u in g.neighbors(v)) for v in s):
                return True
    return False


def verify_tree_decomposition(w: Window, td: TreeDecomposition, require_tight: bool = True,
                              require_connected: bool = False) -> DecompositionReport:
    report = DecompositionReport()
    g = w.graph
    tree = td.tree
    if set(td.bags) != set(tree.vertices):
        report.failures.append("bags and tree vertices differ")
        return report

    covered = frozenset().union(*td.bags.values())
    missing = sorted(w.vertices - covered)
    if missing:
        report.cover = False
        report.failures.append(f"cover: vertices {missing} lie in no bag")

    holders: Dict[str, List[str]] = {}
    for t, bag in td.bags.items():
        for v in bag:
            holders.setdefault(v, []).append(t)
    for v, ts in sorted(holders.items()):
        if len(ts) > 1 and not nx.is_connected(tree.simple.subgraph(ts)):
            report.path_condition = False
            report.failures.append(f"path condition: bags holding {v!r} are not contiguous")

    for eid in tree.edges:
        report.adhesion = max(report.adhesion, len(td.adhesion(eid)))
        y1, s, y2 = _edge_separation(td, eid)
        if any((a in y1 and b in y2) or (a in y2 and b in y1) for a, b in g.edges.values()):
            report.separated = False
            report.failures.append(f"separation: edge {eid} leaves an edge between its two sides")
        elif not _is_tight_separation(g, y1, s, y2):
            report.tight = False
            if require_tight:
                report.failures.append(f"tightness: separation at tree edge {eid} is not tight")
    if td.adhesion_bound and report.adhesion > td.adhesion_bound:
        report.failures.append(f"adhesion: {report.adhesion} exceeds the bound {td.adhesion_bound}")

    for t in tree.ordered_vertices:
        if td.bags[t] and not g.induced(td.bags[t]).is_connected():
            report.parts_connected = False
            if require_connected:
                report.failures.append(f"parts: part {t} is disconnected")

    leaves = {t for t in tree.vertices if tree.degree(t) <= 1}
    for i, marker in enumerate(w.markers):
        full = [t for t in tree.ordered_vertices if marker <= td.bags[t]]
        if len(full) == 1:
            report.marker_claims[i] = full[0]
            continue
        touching = [t for t in tree.ordered_vertices if marker & td.bags[t]]
        sub = tree.simple.subgraph(touching)
        if touching and nx.is_connected(sub) and all(d <= 2 for _, d in sub.degree()) and leaves & set(touching):
            report.marker_claims[i] = 'ray'
        else:
            report.end_partition = False
            report.failures.append(f"ends: marker {i} is claimed by {len(full)} parts and no ray")
    return report


def torso(w: Window, td: TreeDecomposition, u: str) -> Graph:
    if u not in td.tree:
        raise NotFoundError(f"unknown tree vertex {u!r}")
    part = w.graph.induced(td.bags[u])
    edges = dict(part.edges)
    for eid in td.tree.incident(u):
        adhesion = sorted(td.adhesion(eid))
        for i, x in enumerate(adhesion):
            for y in adhesion[i + 1:]:
                if not part.edges_between(x, y) and f"virtual:{x}~{y}" not in edges:
                    edges[f"virtual:{x}~{y}"] = (x, y)
    return Graph(part.vertices, edges)


def part_markers(td: TreeDecomposition, u: str) -> List[FrozenSet[str]]:
    """
    End markers of a part: its adhesion sets and the window markers it meets
    """
    bag = td.bags[u]
    markers = [td.adhesion(eid) for eid in td.tree.incident(u)]
    markers += [m & bag for m in td.window.markers]
    distinct = []
    for m in sort_sets(m for m in markers if m):
        if m not in distinct:
            distinct.append(m)
    return distinct


def part_end_cut_sizes(td: TreeDecomposition, mode: Mode = Mode.EDGE) -> Dict[str, Optional[float]]:
    """
    Separation number of every part between its own markers. Vertices shared by
    several markers belong to none of them; a part where this empties a marker
    gets None. A part with a single marker is one-ended and gets inf.
    """
    out = {}
    for t in td.tree.ordered_vertices:
        markers = _distinct(part_markers(td, t))
        if markers is None:
            logger.info(f"part {t}: markers cannot be made disjoint, end cut size does not apply")
            out[t] = None
            continue
        part = td.window.restrict(td.bags[t], markers=markers)
        out[t] = window_end_cut_size(part, mode).value
    return out


def _distinct(sets: Sequence[FrozenSet[str]]) -> Optional[List[FrozenSet[str]]]:
    """
    Each set minus the union of the others, or None when one of them becomes empty
    """
    out = []
    for i, s in enumerate(sets):
        rest = frozenset().union(*(o for j, o in enumerate(sets) if j != i))
        if not s - rest:
            return None
        out.append(s - rest)
    return sort_sets(out)


def separated_by_generated(system: NestedSystem, m1: int, m2: int) -> Optional[Cut]:
    """
    A system cut with one marker on each side; ring elements generated by the
    system separate two ends only if some system cut already does
    """
    w = system.window
    if len(w.markers) < 2:
        return None
    a, b = w.marker(m1), w.marker(m2)
    for c in system.cuts:
        if w.basepoint not in c.side:
            if (a <= c.side and not b & c.side) or (b <= c.side and not a & c.side):
                return c
    return None
