"""
Ribbon graphs as pairs of permutations on darts.

A ribbon graph on darts ``0 .. N-1`` is given by its vertex rotation (one
cycle per vertex, darts listed counterclockwise) and its edge pairing (a
fixed-point-free involution). Edge ``k`` is the ``k``-th pair of
``edge_pairing``.

EXAMPLES::

    >>> g = RibbonGraph(6, ((0, 1, 2), (3, 4, 5)), ((0, 3), (1, 4), (2, 5)))
    >>> genus(g), len(faces(g))
    (1, 1)
    >>> face_edge_sequence(g, faces(g)[0])
    [0, 2, 1, 0, 2, 1]
"""

from dataclasses import dataclass, field
from fractions import Fraction
from collections import Counter

# Faces are orbits of ``rotation^-1 . pairing``: cross the edge, then turn
# clockwise at the far vertex, which keeps the face on the left so that its
# sides come in counterclockwise order.  Under this choice the Kontsevich
# form inverts the Poisson bivector with a plus sign on fixed-perimeter leaves
# (forms.mk_check); the opposite traversal negates the form.
ORIENTATION_CONVENTION = "inverse_rotation_after_pairing"

MAX_ENUMERATION_DARTS = 24


class RibbonGraphError(ValueError):
    pass


@dataclass(frozen=True)
class RibbonGraph:
    dart_count: int
    vertex_cycles: tuple
    edge_pairing: tuple
    labels: dict = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertex_cycles",
                           tuple(tuple(int(d) for d in c) for c in self.vertex_cycles))
        object.__setattr__(self, "edge_pairing",
                           tuple(tuple(int(d) for d in p) for p in self.edge_pairing))

    @property
    def edge_count(self):
        return len(self.edge_pairing)

    @property
    def vertex_count(self):
        return len(self.vertex_cycles)

    def rotation(self):
        """The vertex rotation as a list ``next_dart[d]``."""
        nxt = [None] * self.dart_count
        for cycle in self.vertex_cycles:
            for i, d in enumerate(cycle):
                nxt[d] = cycle[(i + 1) % len(cycle)]
        return nxt

    def pairing(self):
        opp = [None] * self.dart_count
        for a, b in self.edge_pairing:
            opp[a] = b
            opp[b] = a
        return opp

    def edge_of(self):
        edge = [None] * self.dart_count
        for k, pair in enumerate(self.edge_pairing):
            for d in pair:
                edge[d] = k
        return edge

    def vertex_of(self):
        vertex = [None] * self.dart_count
        for k, cycle in enumerate(self.vertex_cycles):
            for d in cycle:
                vertex[d] = k
        return vertex

    def valences(self):
        return [len(c) for c in self.vertex_cycles]

    def is_loop(self, edge):
        a, b = self.edge_pairing[edge]
        vertex = self.vertex_of()
        return vertex[a] == vertex[b]

    def relabel(self, perm):
        """Conjugate by the dart bijection ``d -> perm[d]``."""
        return RibbonGraph(self.dart_count,
                           tuple(tuple(perm[d] for d in c) for c in self.vertex_cycles),
                           tuple(tuple(perm[d] for d in p) for p in self.edge_pairing),
                           self.labels)


@dataclass(frozen=True)
class MetricRibbonGraph:
    graph: RibbonGraph
    lengths: tuple

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(self.lengths))


@dataclass
class ValidationReport:
    problems: list

    @property
    def valid(self):
        return not self.problems


def validate(g):
    """
    Check the ribbon graph invariants and report every violation.

    EXAMPLES::

        >>> validate(RibbonGraph(2, ((0, 1),), ((0, 0), (1, 1)))).problems[0]
        'pairing not fixed-point-free'
    """
    problems = []
    n = g.dart_count
    if n < 0 or n % 2:
        problems.append("dart count must be even and non-negative")
    seen = [d for c in g.vertex_cycles for d in c]
    if sorted(seen) != list(range(n)):
        problems.append("vertex rotation is not a permutation of the darts")
    if any(len(c) == 0 for c in g.vertex_cycles):
        problems.append("empty vertex cycle")
    paired = [d for p in g.edge_pairing for d in p]
    if any(len(p) != 2 for p in g.edge_pairing):
        problems.append("edge pairing entries must have two darts")
    elif any(a == b for a, b in g.edge_pairing):
        problems.append("pairing not fixed-point-free")
    if sorted(paired) != list(range(n)) and "pairing not fixed-point-free" not in problems:
        problems.append("edge pairing is not an involution on the darts")
    if problems:
        return ValidationReport(problems)
    if n and not _connected(g):
        problems.append("not connected")
    if not problems:
        chi = g.vertex_count - g.edge_count + len(faces(g))
        if chi % 2 or chi > 2:
            problems.append("Euler characteristic does not give a non-negative integer genus")
    return ValidationReport(problems)


def _connected(g):
    rot, opp = g.rotation(), g.pairing()
    seen = {0}
    stack = [0]
    while stack:
        d = stack.pop()
        for e in (rot[d], opp[d]):
            if e not in seen:
                seen.add(e)
                stack.append(e)
    return len(seen) == g.dart_count


def _require_valid(g):
    report = validate(g)
    if not report.valid:
        raise RibbonGraphError("; ".join(report.problems))


def face_permutation(g):
    """
    Face permutation ``d -> rotation^-1(pairing(d))``.

    Each dart stands for the side of its edge traversed away from the dart's
    vertex; a face is the cyclic sequence of sides along its boundary.
    """
    rot, opp = g.rotation(), g.pairing()
    inverse = [None] * g.dart_count
    for d, e in enumerate(rot):
        inverse[e] = d
    return [inverse[opp[d]] for d in range(g.dart_count)]


def faces(g):
    """Orbits of the face permutation, each starting at its smallest dart."""
    phi = face_permutation(g)
    seen = [False] * g.dart_count
    result = []
    for start in range(g.dart_count):
        if seen[start]:
            continue
        cycle = []
        d = start
        while not seen[d]:
            seen[d] = True
            cycle.append(d)
            d = phi[d]
        result.append(tuple(cycle))
    return result


def face_edge_sequence(g, face):
    edge = g.edge_of()
    return [edge[d] for d in face]


def genus(g):
    """
    Genus ``(2 - V + E - F) / 2``.

    EXAMPLES::

        >>> genus(RibbonGraph(6, ((0, 1, 2), (3, 5, 4)), ((0, 3), (1, 4), (2, 5))))
        0
    """
    twice = 2 - g.vertex_count + g.edge_count - len(faces(g))
    if twice % 2 or twice < 0:
        raise RibbonGraphError("odd or negative Euler characteristic: corrupt graph")
    return twice // 2


def perimeters(mg):
    """Sum of side lengths around each face, in the order of :func:`faces`."""
    g = mg.graph
    edge = g.edge_of()
    zero = mg.lengths[0] * 0 if mg.lengths else 0
    return [sum((mg.lengths[edge[d]] for d in face), zero) for face in faces(g)]


# ---------------------------------------------------------------------------
# canonical form


def _bfs_code(g, rot, opp, start):
    label = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        d = order[i]
        for e in (rot[d], opp[d]):
            if e not in label:
                label[e] = len(order)
                order.append(e)
        i += 1
    code = tuple((label[rot[d]], label[opp[d]]) for d in order)
    return code, label


@dataclass(frozen=True)
class CanonicalForm:
    code: tuple
    relabeling: dict

    def graph(self):
        return graph_from_code(self.code)


def canonical_form(g):
    """
    Minimal breadth-first encoding over all starting darts.

    Two connected ribbon graphs are isomorphic iff their codes agree.
    ``relabeling`` maps the darts of ``g`` to the canonical labels.
    """
    rot, opp = g.rotation(), g.pairing()
    best = None
    for start in range(g.dart_count):
        code, label = _bfs_code(g, rot, opp, start)
        if best is None or code < best[0]:
            best = (code, label)
    if best is None:
        return CanonicalForm((), {})
    return CanonicalForm(best[0], best[1])


def graph_from_code(code):
    n = len(code)
    rot = [c[0] for c in code]
    seen = [False] * n
    cycles = []
    for d in range(n):
        if seen[d]:
            continue
        cycle = []
        e = d
        while not seen[e]:
            seen[e] = True
            cycle.append(e)
            e = rot[e]
        cycles.append(tuple(cycle))
    pairs = tuple((d, code[d][1]) for d in range(n) if d < code[d][1])
    return RibbonGraph(n, tuple(cycles), pairs)


def isomorphisms(g, h):
    """All dart bijections ``g -> h`` preserving rotation and pairing."""
    if g.dart_count != h.dart_count:
        return []
    if g.dart_count == 0:
        return [{}]
    rg, og = g.rotation(), g.pairing()
    rh, oh = h.rotation(), h.pairing()
    code_h, label_h = _bfs_code(h, rh, oh, 0)
    inverse_h = {v: k for k, v in label_h.items()}
    result = []
    for start in range(g.dart_count):
        code_g, label_g = _bfs_code(g, rg, og, start)
        if code_g == code_h:
            result.append({d: inverse_h[label_g[d]] for d in range(g.dart_count)})
    return result


def are_isomorphic(g, h):
    return canonical_form(g).code == canonical_form(h).code


# ---------------------------------------------------------------------------
# enumeration


def trivalent_counts(genus_, faces_):
    return 6 * genus_ - 6 + 3 * faces_, 4 * genus_ - 4 + 2 * faces_


def enumerate_graphs(genus_, faces_, valences="trivalent"):
    """
    All connected ribbon graphs of the given genus, face count and valences,
    up to isomorphism.

    ``valences`` is ``"trivalent"`` or an explicit multiset of vertex
    valences. Graphs are grown vertex by vertex, always pairing the smallest
    open dart either with another open dart or with the first dart of a new
    vertex; this covers every connected pairing up to relabeling, and the
    results are deduplicated by :func:`canonical_form`.

    EXAMPLES::

        >>> len(enumerate_graphs(0, 3))
        2
        >>> enumerate_graphs(0, 1)
        []
    """
    if valences == "trivalent":
        edges, vertices = trivalent_counts(genus_, faces_)
        if edges <= 0 or vertices <= 0:
            return []
        valence_list = [3] * vertices
    else:
        valence_list = sorted(int(v) for v in valences)
        if any(v < 1 for v in valence_list):
            raise RibbonGraphError("valences must be positive")
    darts = sum(valence_list)
    if darts % 2:
        return []
    if darts > MAX_ENUMERATION_DARTS:
        raise RibbonGraphError(
            f"enumeration refuses {darts} darts (limit {MAX_ENUMERATION_DARTS})")
    edges = darts // 2
    if len(valence_list) - edges + faces_ != 2 - 2 * genus_:
        return []
    found = {}
    for g in _grow(Counter(valence_list), darts):
        if len(faces(g)) != faces_:
            continue
        cf = canonical_form(g)
        if cf.code not in found:
            found[cf.code] = cf.graph()
    return [found[c] for c in sorted(found)]


def _grow(remaining, darts):
    opp = [None] * darts
    cycles = []

    def add_vertex(valence):
        start = sum(len(c) for c in cycles)
        cycles.append(tuple(range(start, start + valence)))
        remaining[valence] -= 1

    def remove_vertex():
        c = cycles.pop()
        remaining[len(c)] += 1

    def step(used):
        open_dart = next((d for d in range(used) if opp[d] is None), None)
        if open_dart is None:
            if used == darts:
                yield RibbonGraph(darts, tuple(cycles),
                                  tuple((d, opp[d]) for d in range(darts) if d < opp[d]))
            return
        for other in range(open_dart + 1, used):
            if opp[other] is None:
                opp[open_dart], opp[other] = other, open_dart
                yield from step(used)
                opp[open_dart] = opp[other] = None
        for valence in sorted(v for v, k in remaining.items() if k > 0):
            add_vertex(valence)
            opp[open_dart], opp[used] = used, open_dart
            yield from step(used + valence)
            opp[open_dart] = opp[used] = None
            remove_vertex()

    for valence in sorted(v for v, k in remaining.items() if k > 0):
        add_vertex(valence)
        yield from step(valence)
        remove_vertex()


# ---------------------------------------------------------------------------
# edge contraction


def contract_edge(mg, edge):
    """
    Contract a non-loop edge, merging its endpoints and keeping cyclic order.

    Darts are renumbered compactly in increasing order of their old labels
    and edges keep their relative order. Returns a
    :class:`MetricRibbonGraph`.
    """
    g = mg.graph
    if g.is_loop(edge):
        raise RibbonGraphError(
            "loop contraction corresponds to W11 degeneration, use moves module")
    a, b = g.edge_pairing[edge]
    vertex = g.vertex_of()
    cu, cv = g.vertex_cycles[vertex[a]], g.vertex_cycles[vertex[b]]
    arc_u = _arc_after(cu, a)
    arc_v = _arc_after(cv, b)
    merged = tuple(arc_u + arc_v)
    cycles = []
    for k, c in enumerate(g.vertex_cycles):
        if k == vertex[a]:
            cycles.append(merged)
        elif k != vertex[b]:
            cycles.append(c)
    keep = [d for d in range(g.dart_count) if d not in (a, b)]
    new = {d: i for i, d in enumerate(keep)}
    graph = RibbonGraph(len(keep),
                        tuple(tuple(new[d] for d in c) for c in cycles if c),
                        tuple((new[p], new[q]) for k, (p, q) in enumerate(g.edge_pairing)
                              if k != edge))
    lengths = tuple(l for k, l in enumerate(mg.lengths) if k != edge)
    return MetricRibbonGraph(graph, lengths)


def _arc_after(cycle, dart):
    i = cycle.index(dart)
    return list(cycle[i + 1:]) + list(cycle[:i])


def expand_vertex(mg, vertex, first_arc_length, length=Fraction(0)):
    """
    Inverse of :func:`contract_edge`: split ``vertex`` into two vertices.

    The first ``first_arc_length`` darts of the vertex cycle go to one new
    vertex and the rest to the other, joined by a new last edge.
    """
    g = mg.graph
    cycle = g.vertex_cycles[vertex]
    n = g.dart_count
    u = (n,) + tuple(cycle[:first_arc_length])
    v = (n + 1,) + tuple(cycle[first_arc_length:])
    cycles = [c for k, c in enumerate(g.vertex_cycles) if k != vertex]
    cycles[vertex:vertex] = [u, v]
    graph = RibbonGraph(n + 2, tuple(cycles), g.edge_pairing + ((n, n + 1),))
    return MetricRibbonGraph(graph, mg.lengths + (length,))


# ---------------------------------------------------------------------------
# standard examples


def m11_graph():
    """The theta graph on the torus: rotations (a b c)(a' b' c')."""
    return RibbonGraph(6, ((0, 1, 2), (3, 4, 5)), ((0, 3), (1, 4), (2, 5)))


def planar_theta_graph():
    return RibbonGraph(6, ((0, 1, 2), (3, 5, 4)), ((0, 3), (1, 4), (2, 5)))


def single_edge_graph():
    return RibbonGraph(2, ((0,), (1,)), ((0, 1),))


def pentavalent_torus_graph():
    """Torus with two faces: one five-valent and one trivalent vertex."""
    return RibbonGraph(8, ((0, 1, 2, 3, 4), (5, 6, 7)), ((0, 5), (1, 6), (2, 7), (3, 4)))
