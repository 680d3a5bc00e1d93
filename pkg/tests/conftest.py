import pytest

from graphs.core import Graph, Window, build_window
from graphs.generators import CylinderSource, Grid2DSource, LadderSource, ZLineSource
from graphs.planar import Drawing, PlanarEmbedding
from splitting.complexes import Complex2


def cycle_pairs(vertices):
    return [(v, vertices[(i + 1) % len(vertices)]) for i, v in enumerate(vertices)]


@pytest.fixture
def tetrahedron():
    g = Graph.from_pairs([(a, b) for a in '0123' for b in '0123' if a < b])
    return Complex2.from_vertex_cycles(g, [['0', '1', '2'], ['0', '1', '3'], ['0', '2', '3'], ['1', '2', '3']])


@pytest.fixture
def torus():
    """3 x 3 triangulated torus, vertex "i,j" with both coordinates mod 3"""
    def v(i, j):
        return f"{i % 3},{j % 3}"
    pairs, cycles = [], []
    for i in range(3):
        for j in range(3):
            pairs += [(v(i, j), v(i + 1, j)), (v(i, j), v(i, j + 1)), (v(i, j), v(i + 1, j + 1))]
            cycles.append([v(i, j), v(i + 1, j), v(i + 1, j + 1)])
            cycles.append([v(i, j), v(i + 1, j + 1), v(i, j + 1)])
    return Complex2.from_vertex_cycles(Graph.from_pairs(pairs), cycles)


@pytest.fixture
def annulus():
    """Three concentric triangles "r,k" (ring r, position k mod 3) joined by triangulated bands"""
    def v(r, k):
        return f"{r},{k % 3}"
    pairs, cycles = [], []
    for r in range(3):
        for k in range(3):
            pairs.append((v(r, k), v(r, k + 1)))
            if r < 2:
                pairs += [(v(r, k), v(r + 1, k)), (v(r, k), v(r + 1, k + 1))]
                cycles.append([v(r, k), v(r + 1, k), v(r + 1, k + 1)])
                cycles.append([v(r, k), v(r + 1, k + 1), v(r, k + 1)])
    return Complex2.from_vertex_cycles(Graph.from_pairs(pairs), cycles)


def bipyramid(n):
    equator = [f"e{i}" for i in range(n)]
    pairs = cycle_pairs(equator)
    cycles = []
    for i, x in enumerate(equator):
        y = equator[(i + 1) % n]
        pairs += [('N', x), ('S', x)]
        cycles += [['N', x, y], ['S', y, x]]
    return Complex2.from_vertex_cycles(Graph.from_pairs(pairs), cycles)


@pytest.fixture
def wheel():
    """Wheel on the 4-cycle 0-1-2-3 with hub c, drawn counterclockwise"""
    rim = ['0', '1', '2', '3']
    g = Graph.from_pairs(cycle_pairs(rim) + [('c', x) for x in rim])
    order = {'c': rim}
    for i, x in enumerate(rim):
        order[x] = [rim[(i + 1) % 4], 'c', rim[(i - 1) % 4]]
    return PlanarEmbedding.from_neighbor_order(g, order)


@pytest.fixture
def k4_window():
    return Window.of_graph(Graph.from_pairs([(a, b) for a in '0123' for b in '0123' if a < b]))


@pytest.fixture
def zline():
    return ZLineSource()


@pytest.fixture
def cylinder_window():
    return build_window(CylinderSource(), 6)


@pytest.fixture
def cylinder_embedding(cylinder_window):
    return Drawing(CylinderSource()).restrict(cylinder_window)


@pytest.fixture
def ladder_window():
    return build_window(LadderSource(), 4)


def grid_window(r):
    return build_window(Grid2DSource(), r)


def grid_embedding(w):
    return Drawing(Grid2DSource()).restrict(w)
