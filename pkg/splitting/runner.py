import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from graphs.config import SplitConfig
from graphs.connectivity import Mode, separation
from graphs.core import Subgraph, Window, build_window
from graphs.errors import ArgumentError, PreconditionError
from graphs.generators import GeneratorSpec, make_embedding, make_source
from graphs.io import (embedding_from_json, embedding_to_json, face_records, graph_to_dot, read_json,
                       to_jsonable, window_from_json, window_to_json, write_json)
from graphs.planar import (PlanarEmbedding, bad_loop_check, euler_report, friendly_faced_check,
                           marker_sides, max_finite_face_length)

from .complexes import chomp_check, chomp_pipeline, cone_off, epsilon_filling, h1_rank
from .cuts import bad_loop_to_cut, boundary_face_system, enumerate_tight_cuts, make_cut
from .qimaps import as_fraction, default_transfer_radius, transfer_cut, transfer_measure, verify_qi
from .records import complex_from_json, complex_to_json, cut_to_json, cuts_to_json, pattern_from_json, qimap_from_json
from .structure import (smallest_connecting_m, structure_tree, tree_decomp_connected, tree_decomp_tight,
                        validate_nested, verify_tree_decomposition)
from .tracks import is_thin, non_separating_track_search, track_separates

logger = logging.getLogger(__name__)

CONVENTIONS = {
    'coboundary': 'cuts only count coboundary edges with both endpoints inside the window',
    'markers': 'boundary vertices joined within one step beyond the window share an end marker',
}


class Command(str, Enum):
    GENERATE = 'generate'
    CUTS = 'cuts'
    MENGER = 'menger'
    STRUCTURE_TREE = 'structure-tree'
    TREE_DECOMP = 'tree-decomp'
    FACES = 'faces'
    FRIENDLY = 'friendly'
    BADLOOP = 'badloop'
    FILL = 'fill'
    CONE = 'cone'
    CHOMP = 'chomp'
    TRACKS = 'tracks'
    QI_VERIFY = 'qi-verify'
    QI_TRANSFER = 'qi-transfer'
    DIAGNOSE_FACES = 'diagnose-faces'


@dataclass
class PipelineConfig:
    """
    Everything a command reads, has following attributes:

    - command: command to run
    - kind: generator spec text, e.g. "grid2d" or "free_product:grid2d,surface_genus2"
    - radius: window radius for generated windows
    - radii: radius sweep for diagnose-faces
    - window, embedding, complex, pattern, map_path, cuts_path: input artifact paths
    - domain, codomain: window paths for the QI commands
    - edge, max_size: tight cut enumeration parameters
    - source, target, mode: Menger terminals and mode
    - variant, m: tree decomposition construction and its neighbourhood parameter
    - vertices: subgraph, loop or cut side, depending on the command
    - r: friendliness radius
    - eps: filling length
    - relative: relative CHomP variant
    - search: look for a non-separating track instead of reading a pattern
    - transfer_radius: radius of the transferred cut, lambda-dependent default
    - out, embedding_out: output paths, stdout when unset
    - format: 'json' or 'dot'
    - seed: seed for sampled checks
    """

    command: Command
    kind: Optional[str] = None
    radius: int = 4
    radii: Tuple[int, ...] = (8, 16, 32)
    window: Optional[str] = None
    embedding: Optional[str] = None
    complex: Optional[str] = None
    pattern: Optional[str] = None
    map_path: Optional[str] = None
    cuts_path: Optional[str] = None
    domain: Optional[str] = None
    codomain: Optional[str] = None
    edge: Optional[str] = None
    max_size: int = 3
    source: str = 'marker:0'
    target: str = 'marker:1'
    mode: Mode = Mode.EDGE
    variant: str = 'tight'
    m: Optional[int] = None
    vertices: Sequence[str] = field(default_factory=list)
    r: int = 1
    eps: int = 4
    relative: bool = False
    search: bool = False
    transfer_radius: Optional[str] = None
    out: Optional[str] = None
    embedding_out: Optional[str] = None
    format: str = 'json'
    seed: int = 42

    def __post_init__(self):
        self.command = Command(self.command)
        self.mode = Mode(self.mode)
        if self.format not in ('json', 'dot'):
            raise ArgumentError(f"unknown output format {self.format!r}")


class Runner:
    """
    Builds the inputs a command needs, runs it and writes its artifacts
    """

    def __init__(self, cfg: PipelineConfig, split_config: Optional[SplitConfig] = None):
        self.cfg = cfg
        self.config = split_config or SplitConfig.from_env(seed=cfg.seed)
        self._spec: Optional[GeneratorSpec] = GeneratorSpec.parse(cfg.kind) if cfg.kind else None
        self._window: Optional[Window] = None
        self.dot: Optional[str] = None

    def run(self) -> Dict:
        logger.info(f"running {self.cfg.command.value}")
        match self.cfg.command:
            case Command.GENERATE:
                report = self.generate()
            case Command.CUTS:
                report = self.cuts()
            case Command.MENGER:
                report = self.menger()
            case Command.STRUCTURE_TREE:
                report = self.structure_tree()
            case Command.TREE_DECOMP:
                report = self.tree_decomp()
            case Command.FACES:
                report = self.faces()
            case Command.FRIENDLY:
                report = self.friendly()
            case Command.BADLOOP:
                report = self.badloop()
            case Command.FILL:
                report = self.fill()
            case Command.CONE:
                report = self.cone()
            case Command.CHOMP:
                report = self.chomp()
            case Command.TRACKS:
                report = self.tracks()
            case Command.QI_VERIFY:
                report = self.qi_verify()
            case Command.QI_TRANSFER:
                report = self.qi_transfer()
            case Command.DIAGNOSE_FACES:
                report = self.diagnose_faces()
        report = to_jsonable(report)
        return report

    def write(self, report: Dict) -> str:
        if self.cfg.format == 'dot':
            if self.dot is None:
                raise ArgumentError(f"{self.cfg.command.value} has no DOT output")
            if self.cfg.out:
                with open(self.cfg.out, 'w') as fh:
                    fh.write(self.dot + '\n')
            return self.dot
        return write_json(report, self.cfg.out)

    # inputs

    def window(self) -> Window:
        if self._window is None:
            if self.cfg.window:
                self._window = window_from_json(read_json(self.cfg.window))
            elif self._spec is not None:
                self._window = build_window(make_source(self._spec), self.cfg.radius, self.config)
            else:
                raise PreconditionError("a window needs --window or --kind")
        return self._window

    def embedding(self) -> PlanarEmbedding:
        w = self.window()
        if self.cfg.embedding:
            return embedding_from_json(read_json(self.cfg.embedding), w)
        drawing = make_embedding(self._spec) if self._spec is not None and not self.cfg.window else None
        if drawing is None:
            raise PreconditionError("no planar embedding: pass --embedding or a planar --kind")
        return drawing.restrict(w)

    def _header(self) -> Dict:
        w = self.window()
        header = {'radius': w.radius, 'conventions': CONVENTIONS}
        if self._spec is not None:
            header['generator'] = self._spec.label()
        return header

    def _vertices(self, what: str) -> List[str]:
        if not self.cfg.vertices:
            raise PreconditionError(f"{what} needs a vertex list")
        return list(self.cfg.vertices)

    # commands

    def generate(self) -> Dict:
        if self._spec is None:
            raise PreconditionError("generate needs --kind")
        w = self.window()
        if self.cfg.embedding_out:
            drawing = make_embedding(self._spec)
            if drawing is None:
                raise PreconditionError(f"{self._spec.label()} has no planar drawing")
            write_json(embedding_to_json(drawing.restrict(w)), self.cfg.embedding_out)
        self.dot = graph_to_dot(w.graph, self._spec.label(), highlight=w.boundary)
        return window_to_json(w, self._spec.label())

    def cuts(self) -> Dict:
        if not self.cfg.edge:
            raise PreconditionError("cuts needs --edge")
        found = enumerate_tight_cuts(self.window(), self.cfg.edge, self.cfg.max_size, self.config)
        return {**self._header(), 'edge': self.cfg.edge, 'max_size': self.cfg.max_size,
                'cuts': cuts_to_json(found)}

    def menger(self) -> Dict:
        w = self.window()
        result = separation(w, self.cfg.source, self.cfg.target, self.cfg.mode)
        self.dot = graph_to_dot(w.graph, 'menger', highlight=result.side)
        return {
            **self._header(),
            'from': self.cfg.source,
            'to': self.cfg.target,
            'mode': result.mode.value,
            'value': result.value,
            'paths': result.paths,
            'cut_edges': result.cut_edges,
            'cut_vertices': result.cut_vertices,
        }

    def _system(self):
        if not self.cfg.cuts_path:
            raise PreconditionError("needs --cuts with a list of cut sides")
        w = self.window()
        return validate_nested([make_cut(w, side) for side in read_json(self.cfg.cuts_path)], w)

    def structure_tree(self) -> Dict:
        st = structure_tree(self._system())
        self.dot = st.to_dot()
        edges = {}
        for eid, (a, b) in st.tree.edges.items():
            edges[eid] = {'from': a, 'to': b, 'cut': st.dart_cut[(eid, 0)].sorted_side()}
        return {
            **self._header(),
            'vertices': {t: sorted(region) for t, region in st.regions.items()},
            'edges': edges,
            'order_mismatches': len(st.order_mismatches()),
        }

    def tree_decomp(self) -> Dict:
        if self._spec is None or self.cfg.window:
            raise PreconditionError("tree-decomp needs --kind and --radius")
        src = make_source(self._spec)
        system = self._system()
        r = self.cfg.radius
        match self.cfg.variant:
            case 'tight':
                td = tree_decomp_tight(src, r, system)
                report = verify_tree_decomposition(td.window, td)
            case 'connected':
                m = self.cfg.m if self.cfg.m is not None else smallest_connecting_m(src, r, system)
                td = tree_decomp_connected(src, r, system, m)
                report = verify_tree_decomposition(td.window, td, require_tight=False, require_connected=True)
            case _:
                raise ArgumentError(f"unknown decomposition variant {self.cfg.variant!r}")
        self.dot = td.to_dot()
        return {
            **self._header(),
            'variant': self.cfg.variant,
            'm': td.m,
            'bags': td.table(),
            'adhesion': td.adhesion_bound,
            'verified': report.ok,
            'failures': report.failures,
            'marker_claims': report.marker_claims,
        }

    def faces(self) -> Dict:
        emb = self.embedding()
        return {
            **self._header(),
            'faces': face_records(emb),
            'euler': euler_report(emb),
            'max_finite_face_length': max_finite_face_length(emb),
        }

    def friendly(self) -> Dict:
        emb = self.embedding()
        lam = Subgraph.induced(emb.host, self._vertices('friendly'))
        result = friendly_faced_check(emb, lam, self.cfg.r)
        return {
            **self._header(),
            'r': self.cfg.r,
            'friendly': result.friendly,
            'required_radius': result.required_radius,
            'witnesses': result.witnesses,
            'counterexample': result.counterexample,
        }

    def badloop(self) -> Dict:
        w = self.window()
        emb = self.embedding()
        loop = self._vertices('badloop')
        bad = bad_loop_check(w, emb, loop)
        report = {**self._header(), 'loop': loop, 'bad': bad, 'marker_sides': marker_sides(w, emb, loop)}
        if bad:
            report['cut'] = cut_to_json(bad_loop_to_cut(w, emb, loop))
        return report

    def fill(self) -> Dict:
        w = self.window()
        k = epsilon_filling(w.graph, self.cfg.eps, self.config, w.basepoint)
        return {**self._header(), 'eps': self.cfg.eps, 'h1_rank': h1_rank(k), 'complex': complex_to_json(k)}

    def cone(self) -> Dict:
        w = self.window()
        if self.cfg.complex:
            k = complex_from_json(read_json(self.cfg.complex))
        else:
            k = epsilon_filling(w.graph, self.cfg.eps, self.config, w.basepoint)
        system = boundary_face_system(w, self.embedding())
        coned = cone_off(k, system)
        return {**self._header(), 'cones': len(system.members), 'h1_rank': h1_rank(coned),
                'complex': complex_to_json(coned)}

    def chomp(self) -> Dict:
        if self.cfg.complex:
            k = complex_from_json(read_json(self.cfg.complex))
            return {'chomp': chomp_check(k), 'h1_rank': h1_rank(k), 'variant': 'absolute'}
        result = chomp_pipeline(self.window(), self.embedding(), self.cfg.relative)
        return {**self._header(), 'chomp': result.chomp, 'variant': result.variant, 'h1_rank': result.h1_rank,
                'cells': result.cells, 'cones': result.cones}

    def tracks(self) -> Dict:
        if not self.cfg.complex:
            raise PreconditionError("tracks needs --complex")
        k = complex_from_json(read_json(self.cfg.complex))
        if self.cfg.search:
            t = non_separating_track_search(k)
            found = None if t is None else {'points': sorted(t.points), 'norm': t.norm, 'cocycle': t.cocycle}
            return {'chomp': t is None, 'track': found}
        if not self.cfg.pattern:
            raise PreconditionError("tracks needs --pattern or --search")
        pattern = pattern_from_json(read_json(self.cfg.pattern), k)
        rows = []
        for t in pattern.tracks:
            separates, b = track_separates(k, t)
            rows.append({
                'points': sorted(t.points),
                'norm': t.norm,
                'cocycle': t.cocycle,
                'separates': separates,
                'side': b,
                'thin': is_thin(k, t, self.config) if separates else None,
            })
        return {'j': dict(pattern.j), 'tracks': rows}

    def _qi_inputs(self):
        if not (self.cfg.domain and self.cfg.codomain and self.cfg.map_path):
            raise PreconditionError("needs --domain, --codomain and --map")
        dom = window_from_json(read_json(self.cfg.domain))
        cod = window_from_json(read_json(self.cfg.codomain))
        return qimap_from_json(read_json(self.cfg.map_path)), dom, cod

    def qi_verify(self) -> Dict:
        f, dom, cod = self._qi_inputs()
        report = verify_qi(f, dom, cod, coarse_surjective=True, config=self.config)
        return {
            'passed': report.passed,
            'lambda': report.lam,
            'eps': report.eps,
            'pairs_checked': report.pairs_checked,
            'exhaustive': report.exhaustive,
            'violations': report.violations[:20],
            'violation_count': len(report.violations),
            'uncovered': report.uncovered,
            'continuity_errors': report.continuity_errors,
            'radius': {'domain': dom.radius, 'codomain': cod.radius},
        }

    def qi_transfer(self) -> Dict:
        f, dom, cod = self._qi_inputs()
        b = make_cut(dom, self._vertices('qi-transfer'))
        if self.cfg.transfer_radius is None:
            radius = default_transfer_radius(f, self.config)
        else:
            radius = as_fraction(self.cfg.transfer_radius)
        moved = transfer_cut(f, b, cod, radius, self.config)
        return {
            'cut': cut_to_json(moved),
            'measured': transfer_measure(f, b, moved, radius),
            'radius': {'domain': dom.radius, 'codomain': cod.radius},
        }

    def diagnose_faces(self) -> Dict:
        if self._spec is None:
            raise PreconditionError("diagnose-faces needs --kind")
        drawing = make_embedding(self._spec)
        if drawing is None:
            raise PreconditionError(f"{self._spec.label()} has no planar drawing")
        source = make_source(self._spec)
        rows = []
        for r in self.cfg.radii:
            w = build_window(source, r, self.config)
            emb = drawing.restrict(w)
            euler = euler_report(emb)
            rows.append({
                'radius': r,
                'vertices': len(w.graph),
                'faces': euler['faces'],
                'max_finite_face_length': max_finite_face_length(emb),
                'euler': euler['holds'],
            })
        table = pd.DataFrame.from_records(rows)
        lengths = table['max_finite_face_length'].tolist()
        return {
            'generator': self._spec.label(),
            'conventions': CONVENTIONS,
            'radii': table,
            'increasing': all(a < b for a, b in zip(lengths, lengths[1:])),
        }