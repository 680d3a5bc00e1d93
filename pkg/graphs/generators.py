import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from .core import GraphSource
from .errors import ArgumentError, NotFoundError
from .surface import ALPHABET as SURFACE_ALPHABET, IDENTITY, SurfaceGroup
from .planar import Drawing

logger = logging.getLogger(__name__)

FREE_LETTERS = 'abcdefghijklmnop'


class Kind(str, Enum):
    ZLINE = 'zline'
    GRID2D = 'grid2d'
    FREE_GROUP = 'free_group'
    SURFACE_GENUS2 = 'surface_genus2'
    FREE_PRODUCT = 'free_product'
    LADDER = 'ladder'
    CYLINDER = 'cylinder'
    TREE_OF_FLATS = 'tree_of_flats'
    GRID_WITH_HOLES = 'grid_with_holes'
    REGULAR_TREE = 'regular_tree'
    Z2 = 'z2'


FACTOR_KINDS = (Kind.ZLINE, Kind.GRID2D, Kind.FREE_GROUP, Kind.SURFACE_GENUS2, Kind.Z2)


@dataclass(frozen=True)
class GeneratorSpec:
    """
    Names a built-in graph source:

    - kind: one of Kind
    - rank: number of free generators for FREE_GROUP (>= 1)
    - degree: vertex degree for REGULAR_TREE (>= 3)
    - factors: factor specs for FREE_PRODUCT, each a group kind
    """

    kind: Kind
    rank: int = 2
    degree: int = 3
    factors: Tuple['GeneratorSpec', ...] = ()

    @classmethod
    def parse(cls, text: str) -> 'GeneratorSpec':
        """
        Parse "grid2d", "free_group:3", "regular_tree:4" or "free_product:grid2d,surface_genus2"
        """
        name, _, arg = text.strip().partition(':')
        try:
            kind = Kind(name.lower().replace('-', '_'))
        except ValueError:
            raise ArgumentError(f"unknown generator kind {name!r}") from None
        try:
            match kind:
                case Kind.FREE_GROUP:
                    return cls(kind, rank=int(arg) if arg else 2)
                case Kind.REGULAR_TREE:
                    return cls(kind, degree=int(arg) if arg else 3)
                case Kind.FREE_PRODUCT:
                    return cls(kind, factors=tuple(cls.parse(part) for part in arg.split(',') if part))
                case _:
                    return cls(kind)
        except ValueError as err:
            if isinstance(err, ArgumentError):
                raise
            raise ArgumentError(f"bad generator parameter in {text!r}") from None

    def label(self) -> str:
        match self.kind:
            case Kind.FREE_GROUP:
                return f"{self.kind.value}:{self.rank}"
            case Kind.REGULAR_TREE:
                return f"{self.kind.value}:{self.degree}"
            case Kind.FREE_PRODUCT:
                return f"{self.kind.value}:" + ','.join(f.label() for f in self.factors)
            case _:
                return self.kind.value


# one representative for each quasi-isometry class of planar finitely generated groups
QI_CLASSES = {
    '1': GeneratorSpec(Kind.FREE_PRODUCT),
    'Z': GeneratorSpec(Kind.ZLINE),
    'F2': GeneratorSpec(Kind.FREE_GROUP, rank=2),
    'Z2': GeneratorSpec(Kind.GRID2D),
    'S': GeneratorSpec(Kind.SURFACE_GENUS2),
    'Z2*Z2': GeneratorSpec(Kind.FREE_PRODUCT, factors=(GeneratorSpec(Kind.GRID2D), GeneratorSpec(Kind.GRID2D))),
    'S*S': GeneratorSpec(Kind.FREE_PRODUCT, factors=(GeneratorSpec(Kind.SURFACE_GENUS2),) * 2),
    'Z2*S': GeneratorSpec(Kind.FREE_PRODUCT, factors=(GeneratorSpec(Kind.GRID2D), GeneratorSpec(Kind.SURFACE_GENUS2))),
}


def _ints(v: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in v.split(','))
    except ValueError:
        raise NotFoundError(f"malformed vertex id {v!r}") from None


def _pair(v: str) -> Tuple[int, int]:
    coords = _ints(v)
    if len(coords) != 2:
        raise NotFoundError(f"malformed vertex id {v!r}")
    return coords


class ZLineSource(GraphSource):
    name = 'zline'

    def __init__(self):
        super().__init__('0')

    def neighbors(self, v):
        (x,) = _ints(v)
        return str(x + 1), str(x - 1)

    def rotation(self, v):
        return self.neighbors(v)


class Z2Source(GraphSource):
    name = 'z2'

    def __init__(self):
        super().__init__('0')

    def neighbors(self, v):
        if v not in ('0', '1'):
            raise NotFoundError(f"malformed vertex id {v!r}")
        return ('1',) if v == '0' else ('0',)

    def rotation(self, v):
        return self.neighbors(v)


class Grid2DSource(GraphSource):
    """
    Square lattice Z^2, vertex "x,y"; rotation is east, north, west, south
    """

    name = 'grid2d'

    def __init__(self):
        super().__init__('0,0')

    def neighbors(self, v):
        x, y = _pair(v)
        return f"{x + 1},{y}", f"{x},{y + 1}", f"{x - 1},{y}", f"{x},{y - 1}"

    def rotation(self, v):
        return self.neighbors(v)


class LadderSource(GraphSource):
    name = 'ladder'

    def __init__(self):
        super().__init__('0,0')

    def neighbors(self, v):
        x, y = _pair(v)
        if y not in (0, 1):
            raise NotFoundError(f"ladder has no vertex {v!r}")
        if y == 0:
            return f"{x + 1},0", f"{x},1", f"{x - 1},0"
        return f"{x + 1},1", f"{x - 1},1", f"{x},0"

    def rotation(self, v):
        return self.neighbors(v)


class CylinderSource(GraphSource):
    """
    Z x C4 drawn as concentric squares: "x,k" with k mod 4, x indexes the ring
    """

    name = 'cylinder'

    def __init__(self):
        super().__init__('0,0')

    def neighbors(self, v):
        x, k = _pair(v)
        if not 0 <= k < 4:
            raise NotFoundError(f"cylinder has no vertex {v!r}")
        return f"{x + 1},{k}", f"{x},{(k + 1) % 4}", f"{x - 1},{k}", f"{x},{(k - 1) % 4}"

    def rotation(self, v):
        return self.neighbors(v)


class RegularTreeSource(GraphSource):
    """
    d-regular tree: root "0", the children of v are "v.0", "v.1", ...
    """

    name = 'regular_tree'

    def __init__(self, degree: int):
        if degree < 3:
            raise ArgumentError(f"tree degree must be at least 3, got {degree}")
        super().__init__('0')
        self.degree = degree

    def neighbors(self, v):
        parts = v.split('.')
        if parts[0] != '0' or any(not p.isdigit() or int(p) >= self.degree for p in parts[1:]):
            raise NotFoundError(f"malformed tree vertex {v!r}")
        if v == '0':
            return tuple(f"0.{i}" for i in range(self.degree))
        children = tuple(f"{v}.{i}" for i in range(self.degree - 1))
        return ('.'.join(parts[:-1]),) + children

    def rotation(self, v):
        return self.neighbors(v)


class FreeGroupSource(GraphSource):
    """
    Cayley graph of the free group on rank letters a, b, ...; inverses are upper case,
    vertices are freely reduced words and the identity is "1"
    """

    name = 'free_group'

    def __init__(self, rank: int):
        if not 1 <= rank <= len(FREE_LETTERS):
            raise ArgumentError(f"free group rank must be in 1..{len(FREE_LETTERS)}, got {rank}")
        super().__init__(IDENTITY)
        self.rank = rank
        self.letters = FREE_LETTERS[:rank] + FREE_LETTERS[:rank].upper()

    def neighbors(self, v):
        word = '' if v == IDENTITY else v
        if any(x not in self.letters for x in word):
            raise NotFoundError(f"{v!r} is not a word over {self.letters}")
        out = []
        for x in self.letters:
            if word and word[-1] == x.swapcase():
                out.append(word[:-1] or IDENTITY)
            else:
                out.append(word + x)
        return tuple(out)

    def rotation(self, v):
        return self.neighbors(v)


class SurfaceGenus2Source(GraphSource):
    """
    Cayley graph of the genus two surface group; rotation follows the octagon tiling
    """

    name = 'surface_genus2'
    ROTATION = 'aBAbcDCd'

    def __init__(self, group: Optional[SurfaceGroup] = None):
        super().__init__(IDENTITY)
        self.group = group or SurfaceGroup()

    def neighbors(self, v):
        return self.group.neighbors(v)

    def rotation(self, v):
        by_letter = dict(zip(SURFACE_ALPHABET, self.neighbors(v)))
        return tuple(by_letter[x] for x in self.ROTATION)


class FreeProductSource(GraphSource):
    """
    Free product of group factors. A vertex is "1" or a sequence of syllables
    "i:x" joined by "|", where i indexes the factor and x is a non-identity
    vertex of that factor; consecutive syllables come from different factors.
    """

    name = 'free_product'

    def __init__(self, factors: Tuple[GraphSource, ...]):
        super().__init__(IDENTITY)
        self.factors = tuple(factors)

    def _syllables(self, v):
        if v == IDENTITY:
            return []
        out = []
        for part in v.split('|'):
            index, sep, x = part.partition(':')
            if not sep or not index.isdigit() or int(index) >= len(self.factors):
                raise NotFoundError(f"malformed free product vertex {v!r}")
            out.append((int(index), x))
        return out

    @staticmethod
    def _join(syllables):
        return '|'.join(f"{i}:{x}" for i, x in syllables) or IDENTITY

    def _block(self, syllables, i, rotation=False):
        factor = self.factors[i]
        if syllables and syllables[-1][0] == i:
            head, x = syllables[:-1], syllables[-1][1]
            steps = factor.rotation(x) if rotation else factor.neighbors(x)
            return [self._join(head if y == factor.basepoint else head + [(i, y)]) for y in steps]
        steps = factor.rotation(factor.basepoint) if rotation else factor.neighbors(factor.basepoint)
        return [self._join(syllables + [(i, y)]) for y in steps]

    def neighbors(self, v):
        syllables = self._syllables(v)
        return tuple(u for i in range(len(self.factors)) for u in self._block(syllables, i))

    def rotation(self, v):
        syllables = self._syllables(v)
        own = syllables[-1][0] if syllables else None
        order = ([own] if own is not None else []) + [i for i in range(len(self.factors)) if i != own]
        return tuple(u for i in order for u in self._block(syllables, i, rotation=True))


class GridWithHolesSource(GraphSource):
    """
    Upper half grid y >= 0 with square holes: hole n >= 1 has side s = 2**n,
    spans x in [2s, 3s] and y in [0, s], and its interior vertices are removed,
    so its rim bounds a face of length 4s
    """

    name = 'grid_with_holes'

    def __init__(self):
        super().__init__('0,0')

    @staticmethod
    def removed(x: int, y: int) -> bool:
        if y <= 0:
            return False
        side = 2
        while 2 * side < x:
            if 2 * side < x < 3 * side and y < side:
                return True
            side *= 2
        return False

    def exists(self, x, y):
        return y >= 0 and not self.removed(x, y)

    def neighbors(self, v):
        x, y = _pair(v)
        if not self.exists(x, y):
            raise NotFoundError(f"grid with holes has no vertex {v!r}")
        steps = ((x + 1, y), (x, y + 1), (x - 1, y), (x, y - 1))
        return tuple(f"{a},{b}" for a, b in steps if self.exists(a, b))

    def rotation(self, v):
        return self.neighbors(v)


def make_source(spec: GeneratorSpec) -> GraphSource:
    match spec.kind:
        case Kind.ZLINE:
            return ZLineSource()
        case Kind.Z2:
            return Z2Source()
        case Kind.GRID2D:
            return Grid2DSource()
        case Kind.LADDER:
            return LadderSource()
        case Kind.CYLINDER:
            return CylinderSource()
        case Kind.REGULAR_TREE:
            return RegularTreeSource(spec.degree)
        case Kind.FREE_GROUP:
            return FreeGroupSource(spec.rank)
        case Kind.SURFACE_GENUS2:
            return SurfaceGenus2Source()
        case Kind.GRID_WITH_HOLES:
            return GridWithHolesSource()
        case Kind.TREE_OF_FLATS:
            source = FreeProductSource((Grid2DSource(), Z2Source()))
            source.name = 'tree_of_flats'
            return source
        case Kind.FREE_PRODUCT:
            for factor in spec.factors:
                if factor.kind not in FACTOR_KINDS:
                    raise ArgumentError(f"{factor.kind.value} cannot be a free product factor")
            return FreeProductSource(tuple(make_source(f) for f in spec.factors))
        case _:
            raise ArgumentError(f"unsupported generator kind {spec.kind}")


def make_embedding(spec: GeneratorSpec) -> Optional[Drawing]:
    """
    Natural planar drawing of the source, None when the kind has no drawing
    """
    source = make_source(spec)
    if source.rotation(source.basepoint) is None:
        return None
    return Drawing(source)
