"""Graphic arrangements x_i - x_j for the edges of a simple graph."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from .arrangement import Arrangement, ParseError
from .logder import DegreeSequence, InvariantError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Graph:
    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __init__(self, num_vertices: int, edges):
        if num_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        norm = []
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (1 <= u <= num_vertices and 1 <= v <= num_vertices):
                raise ValueError(f"edge ({u}, {v}) outside 1..{num_vertices}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"repeated edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "num_vertices", num_vertices)
        object.__setattr__(self, "edges", tuple(norm))

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in set(self.edges)

    def relabel(self, perm: dict[int, int]) -> Graph:
        return Graph(self.num_vertices, [(perm[u], perm[v]) for u, v in self.edges])

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(1, self.num_vertices + 1))
        g.add_edges_from(self.edges)
        return g

    def to_text(self) -> str:
        return f"vertices {self.num_vertices}\n" + "".join(f"{u} {v}\n" for u, v in self.edges)


def parse_graph(text: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "vertices":
                raise ParseError("expected 'vertices <n>'", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"bad vertex count {parts[1]!r}", lineno, line.index(parts[1]) + 1) from None
            continue
        if len(parts) != 2:
            raise ParseError("expected an edge 'u v'", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("vertex labels must be integers", lineno) from None
        edges.append((lineno, u, v))
    if n is None:
        raise ParseError("missing 'vertices' header", 1)
    # zero-based files are shifted to 1..n
    shift = 1 if any(u == 0 or v == 0 for _, u, v in edges) else 0
    try:
        return Graph(n, [(u + shift, v + shift) for _, u, v in edges])
    except ValueError as exc:
        raise ParseError(str(exc), edges[-1][0] if edges else 1) from None


def graphic_arrangement(g: Graph) -> Arrangement:
    rows = []
    for u, v in g.edges:
        r = [0] * g.num_vertices
        r[u - 1] = 1
        r[v - 1] = -1
        rows.append(r)
    return Arrangement(g.num_vertices, rows)


def has_4cycle(g: Graph) -> bool:
    nbrs = {v: g.neighbors(v) for v in range(1, g.num_vertices + 1)}
    for u, v in combinations(range(1, g.num_vertices + 1), 2):
        if len(nbrs[u] & nbrs[v]) >= 2:
            return True
    return False


def has_triangle(g: Graph) -> bool:
    for u, v in g.edges:
        if g.neighbors(u) & g.neighbors(v):
            return True
    return False


@dataclass(frozen=True)
class TriReport:
    tri: int
    witness_edge: tuple[int, int] | None
    has_4cycle: bool
    t_formula: int


def tri_count(g: Graph) -> TriReport:
    """Most triangles created by adding a single missing edge."""
    best, witness = 0, None
    for u, v in combinations(range(1, g.num_vertices + 1), 2):
        if g.has_edge(u, v):
            continue
        c = len(g.neighbors(u) & g.neighbors(v))
        if c > best:
            best, witness = c, (u, v)
    return TriReport(best, witness, has_4cycle(g), _formula(g, best))


def _formula(g: Graph, tri: int) -> int:
    e = len(g.edges)
    if e == 1:
        return e
    if not has_4cycle(g):
        return e - 1
    if tri == 0:
        return e - 2
    return e - tri


def graphic_t(g: Graph) -> int:
    """The four-case closed formula in |E|, 4-cycles and Tri(G), as stated."""
    return tri_count(g).t_formula


def graphic_t_corrected(g: Graph) -> int:
    """Closed formula that also weights triangle flats.

    Three edges of a triangle meet in one codim-2 flat, and a hyperplane
    through it removes 2 from the count, not 1.
    """
    e = len(g.edges)
    if e <= 1:
        return e
    gain = 1
    if has_4cycle(g):
        gain = max(gain, 2, tri_count(g).tri)
    if has_triangle(g):
        gain = max(gain, 2)
    return e - gain


def max_clique(g: Graph) -> int:
    return max((len(c) for c in nx.find_cliques(g.to_networkx())), default=0)


@dataclass
class CrossCheck:
    formula: int
    search: int
    corrected: int
    agree: bool
    notes: list[str] = field(default_factory=list)


def crosscheck_graphic_t(g: Graph) -> CrossCheck:
    from .restriction import minimal_restriction

    if g.num_vertices > 8:
        raise ValueError("general search limited to 8 vertices")
    if len(g.edges) == 0:
        raise ValueError("graph has no edges")
    a = graphic_arrangement(g)
    if a.ambient_dim < 3:
        search = len(a)  # one edge on two vertices: every other line meets it once
    else:
        search = minimal_restriction(a).t_value
    rep = CrossCheck(graphic_t(g), search, graphic_t_corrected(g), False)
    rep.agree = rep.formula == rep.search
    if not rep.agree:
        rep.notes.append(f"closed formula gives {rep.formula}, search gives {rep.search}")
        log.warning("graphic t mismatch on %s: formula %d, search %d", g.edges, rep.formula, rep.search)
    return rep


@dataclass
class TriBoundReport:
    tri: int
    d_max: int
    holds: bool
    tight: bool
    slack: int


def check_tri_bound(g: Graph, seq: DegreeSequence) -> TriBoundReport:
    """d_{A_G} >= Tri(G)."""
    tri = tri_count(g).tri
    if tri == 0:
        raise ValueError("no triangle can be created")
    if seq.truncated:
        raise ValueError("degree sequence is truncated")
    d = seq.d_max
    rep = TriBoundReport(tri, d, d >= tri, d == tri, d - tri)
    if not rep.holds:
        raise InvariantError(f"d = {d} < Tri = {tri}")
    return rep


def complete_graph(n: int) -> Graph:
    return Graph(n, list(combinations(range(1, n + 1), 2)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(1, n)])


def bipartite_2m(m: int) -> Graph:
    return Graph(m + 2, [(a, b) for a in (1, 2) for b in range(3, m + 3)])
