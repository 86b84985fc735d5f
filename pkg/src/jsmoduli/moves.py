"""
Whitehead moves, transport of odd homology classes, pentagon loops and
combinatorial Dehn twists.

A Whitehead move on edge ``e = (d, d')`` between trivalent vertices
``(d, a1, a2)`` and ``(d', b1, b2)`` contracts ``e`` to a four-valent vertex
``(a1 a2 b1 b2)`` and re-expands it the other way. Turning the edge a
quarter turn counterclockwise gives ``(d, a2, b1)(d', b2, a1)``; clockwise
gives ``(d, b2, a1)(d', a2, b1)``. Dart labels and edge indices are kept, so
the dart correspondence is the identity. A quarter turn followed by the
opposite quarter turn restores the labeled graph; two turns in the same
sense reverse the moved edge.

Transport acts on the edge classes ``gamma_e`` of the odd homology. The
moved edge class changes sign, classes of edges whose dart stays at its
vertex are unchanged, and edges whose dart migrates pick up a multiple of
the new edge class fixed by requiring that intersection numbers are
preserved.

EXAMPLES::

    >>> from jsmoduli.ribbon import m11_graph, are_isomorphic
    >>> move = whitehead(m11_graph(), 0)
    >>> are_isomorphic(move.after, m11_graph())
    True
    >>> reverse(move).after == m11_graph()
    True
    >>> dehn_twist(m11_graph(), 0, 1).minus_coefficient
    Fraction(2, 1)
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .cover import PAIRING_SIGN, intersection_matrix
from .ribbon import RibbonGraph, RibbonGraphError, faces, isomorphisms

COUNTERCLOCKWISE = 1
CLOCKWISE = -1


@dataclass(frozen=True)
class WhiteheadMove:
    before: RibbonGraph
    after: RibbonGraph
    moved_edge: int
    direction: int
    staying_darts: tuple
    migrating_darts: tuple
    dart_correspondence: dict = field(compare=False)


@dataclass(frozen=True)
class BasisTransport:
    """``matrix[:, x]`` is the image of ``gamma_x`` in the target edge basis."""
    matrix: list


@dataclass
class FacetRecord:
    shrinking_edge: int
    pairing_with_next: Fraction
    a_sign_before: int
    a_sign_after: int
    b_sign_before: int
    b_sign_after: int

    @property
    def positive(self):
        return self.pairing_with_next > 0


@dataclass
class MoveSequence:
    moves: list
    transports: list
    closure: dict
    composite: list
    facets: list
    symplectic_mod_radical: bool
    plus_composite: list = None
    minus_coefficient: Fraction = None
    minus_radical_part: list = None
    plus_coefficient: Fraction = None
    plus_fixes_others: bool = None
    distinguished_fixed: bool = None
    plus_trivial: bool = None


def _locus(g, edge):
    if g.is_loop(edge):
        raise RibbonGraphError("loop edge: no Whitehead move")
    d, d2 = g.edge_pairing[edge]
    vertex = g.vertex_of()
    u, v = g.vertex_cycles[vertex[d]], g.vertex_cycles[vertex[d2]]
    if len(u) != 3 or len(v) != 3:
        raise RibbonGraphError("Whitehead move needs trivalent endpoints")
    i, j = u.index(d), v.index(d2)
    a1, a2 = u[(i + 1) % 3], u[(i + 2) % 3]
    b1, b2 = v[(j + 1) % 3], v[(j + 2) % 3]
    return vertex[d], vertex[d2], d, d2, a1, a2, b1, b2


def whitehead(g, edge, direction=COUNTERCLOCKWISE):
    """Flip ``edge`` by a quarter turn in the given direction."""
    iu, iv, d, d2, a1, a2, b1, b2 = _locus(g, edge)
    if direction == COUNTERCLOCKWISE:
        u, v = (d, a2, b1), (d2, b2, a1)
        staying, migrating = (a2, b2), (a1, b1)
    elif direction == CLOCKWISE:
        u, v = (d, b2, a1), (d2, a2, b1)
        staying, migrating = (a1, b1), (a2, b2)
    else:
        raise ValueError("direction must be +1 or -1")
    cycles = list(g.vertex_cycles)
    cycles[iu], cycles[iv] = u, v
    after = RibbonGraph(g.dart_count, tuple(cycles), g.edge_pairing, g.labels)
    identity = {x: x for x in range(g.dart_count)}
    return WhiteheadMove(g, after, edge, direction, staying, migrating, identity)


def reverse(move):
    """The move undoing ``move`` on labeled graphs."""
    return whitehead(move.after, move.moved_edge, -move.direction)


def _dart_sign(g, dart):
    return 1 if g.edge_pairing[g.edge_of()[dart]][0] == dart else -1


def transport_basis(move):
    """
    Transport of edge classes across the facet of ``move``.

    The migrating darts carry unknown multiples of the new edge class; they
    are solved exactly from ``T^T J_after T = J_before``. Results are cached
    and must not be mutated.
    """
    return _transport(move.before, move.moved_edge, move.direction)


@lru_cache(maxsize=4096)
def _transport(g, e, direction):
    move = whitehead(g, e, direction)
    h = move.after
    n = g.edge_count
    if n == 0:
        return BasisTransport([])
    J = intersection_matrix(g).J
    Jp = intersection_matrix(h).J
    edge = g.edge_of()
    migrating = list(move.migrating_darts)

    def assemble(coefficients):
        T = linalg.identity(n)
        T[e][e] = Fraction(-1)
        for dart, c in zip(migrating, coefficients):
            x = edge[dart]
            if x != e:
                T[e][x] += c * _dart_sign(g, dart)
        return T

    # With T = base + sum_k c_k s_k E(e, x_k), the linear part of entry
    # (x, y) of T^T J' T is s_k ([x = x_k] (J' base)[e][y] + [y = x_k] (base^T J')[x][e]).
    base = assemble([0] * len(migrating))
    right = linalg.matmul(Jp, base)
    left = linalg.matmul(linalg.transpose(base), Jp)
    g0 = linalg.matmul(left, base)
    rows, rhs = [], []
    for x in range(n):
        for y in range(n):
            row = []
            for dart in migrating:
                target = edge[dart]
                if target == e:
                    row.append(Fraction(0))
                    continue
                s = _dart_sign(g, dart)
                row.append(s * ((right[e][y] if x == target else 0)
                                + (left[x][e] if y == target else 0)))
            rows.append(row)
            rhs.append(J[x][y] - g0[x][y])
    solution = linalg.solve(rows, rhs) if migrating else []
    if solution is None:
        raise ArithmeticError("no intersection-preserving transport")
    T = assemble(solution)
    if linalg.matmul(linalg.transpose(T), linalg.matmul(Jp, T)) != J:
        raise ArithmeticError("transport is not linear in the migrating coefficients")
    return BasisTransport(T)


def intertwines(move, transport):
    J = intersection_matrix(move.before).J
    Jp = intersection_matrix(move.after).J
    T = transport.matrix
    return linalg.matmul(linalg.transpose(T), linalg.matmul(Jp, T)) == J


# ---------------------------------------------------------------------------
# orientation


def orientation_check(move, transport=None, step=Fraction(1, 10), partner=None):
    """
    Sign of the vanishing and transverse coordinates on either side of the
    facet.

    Off-locus lengths are 1 and the moved edge has length ``step`` on both
    sides. ``A`` is the period of the moved edge class and ``B`` that of an
    edge class pairing nontrivially with it.
    """
    record = _facet_record(move, transport, step, partner)
    if record is None:
        return False
    return record.a_sign_before != record.a_sign_after and \
        record.b_sign_before == record.b_sign_after


def _period(vector, lengths):
    return sum((2 * c * l for c, l in zip(vector, lengths)), Fraction(0))


def _partner(J, e):
    for y in range(len(J)):
        if J[e][y] != 0:
            return y
    return None


def _facet_record(move, transport=None, step=Fraction(1, 10), partner=None):
    if transport is None:
        transport = transport_basis(move)
    g = move.before
    e = move.moved_edge
    J = intersection_matrix(g).J
    y = _partner(J, e) if partner is None else partner
    if y is None:
        return None
    n = g.edge_count
    lengths = [Fraction(1)] * n
    lengths[e] = step
    a = [Fraction(int(k == e)) for k in range(n)]
    b = [Fraction(int(k == y)) for k in range(n)]
    T = transport.matrix
    a_after = linalg.matvec(T, a)
    b_after = linalg.matvec(T, b)

    def sign(x):
        return (x > 0) - (x < 0)

    return FacetRecord(e, J[e][y],
                       sign(_period(a, lengths)), sign(_period(a_after, lengths)),
                       sign(_period(b, lengths)), sign(_period(b_after, lengths)))


# ---------------------------------------------------------------------------
# sequences
#
# Across a facet the real-locus transport is ambiguous up to a transvection
# by the vanishing class: the two quarter-turn directions give the two
# integral choices. A loop fixes them by asking that the distinguished class
# of the loop come back to itself; among admissible patterns the one with
# the fewest clockwise turns, then the lexicographically first, is used.


def _edge_map_matrix(source, target, iso):
    """Edge-class map of a dart isomorphism; classes are fixed by positive
    periods, so no orientation signs arise."""
    n = source.edge_count
    m = linalg.zeros(n, n)
    tedge = target.edge_of()
    for k, (p, _) in enumerate(source.edge_pairing):
        m[tedge[iso[p]]][k] = Fraction(1)
    return m


def _closing_isomorphism(source, target, edge_targets):
    """An isomorphism sending edge ``k`` to ``edge_targets[k]`` where given."""
    tedge = target.edge_of()
    for iso in isomorphisms(source, target):
        if all(tedge[iso[source.edge_pairing[k][0]]] == t for k, t in edge_targets.items()):
            return iso
    return None


def _signed_edge_map_matrix(source, target, iso):
    """Map of oriented edge chains under a dart isomorphism."""
    n = source.edge_count
    m = linalg.zeros(n, n)
    tedge = target.edge_of()
    for k, (p, _) in enumerate(source.edge_pairing):
        m[tedge[iso[p]]][k] = Fraction(_dart_sign(target, iso[p]))
    return m


def _radical(g):
    return [list(c) for c in intersection_matrix(g).face_cycles]


def _symplectic_mod_radical(sigma, J, radical):
    """``sigma`` preserves ``J`` and maps the radical into itself."""
    if linalg.matmul(linalg.transpose(sigma), linalg.matmul(J, sigma)) != J:
        return False
    return all(linalg.in_row_span(linalg.matvec(sigma, r), radical) for r in radical)


def _fixed_mod(sigma, vector, radical):
    image = linalg.matvec(sigma, vector)
    return linalg.in_row_span([x - y for x, y in zip(image, vector)], radical)


def _rank_mod(matrix, radical):
    columns = linalg.transpose(matrix)
    return linalg.rank(columns + radical) - linalg.rank(radical) if radical else linalg.rank(columns)


def _run(g, edges, directions, edge_targets, partners):
    moves, transports, facets = [], [], []
    current = g
    composite = linalg.identity(g.edge_count)
    for e, direction, partner in zip(edges, directions, partners):
        move = whitehead(current, e, direction)
        T = transport_basis(move)
        moves.append(move)
        transports.append(T)
        facets.append(_facet_record(move, T, partner=partner))
        composite = linalg.matmul(T.matrix, composite)
        current = move.after
    iso = _closing_isomorphism(current, g, edge_targets)
    if iso is None:
        raise ArithmeticError("move sequence does not close")
    sigma = linalg.matmul(_edge_map_matrix(current, g, iso), composite)
    return moves, transports, facets, iso, sigma, current


def _direction_patterns(count):
    patterns = []
    for mask in range(2 ** count):
        pattern = tuple(CLOCKWISE if mask >> (count - 1 - i) & 1 else COUNTERCLOCKWISE
                        for i in range(count))
        patterns.append(pattern)
    return sorted(patterns, key=lambda p: (p.count(CLOCKWISE), [-x for x in p]))


def _positive_first(J, e1, e2):
    """Order a locus pair so that the first edge pairs positively with the second."""
    if J[e1][e2] > 0:
        return e1, e2
    if J[e1][e2] < 0:
        return e2, e1
    raise RibbonGraphError("locus edges have zero intersection")


def _endpoints(g, e):
    vertex = g.vertex_of()
    return {vertex[d] for d in g.edge_pairing[e]}


def pentagon(g, e1, e2):
    """
    Five alternating Whitehead moves around a five-valent resolution.

    ``e1`` and ``e2`` must share exactly one trivalent vertex. The first
    flip is on whichever edge pairs positively with the other; the closing
    isomorphism fixes every edge off the locus, and facet sides are chosen
    so that the class of the first shrinking edge returns to itself.
    """
    if e1 == e2:
        raise RibbonGraphError("locus needs two distinct edges")
    shared = _endpoints(g, e1) & _endpoints(g, e2)
    if len(shared) == 2:
        raise RibbonGraphError("locus edges share two vertices: use dehn_twist")
    if len(shared) != 1:
        raise RibbonGraphError("locus edges must share exactly one vertex")
    J = intersection_matrix(g).J
    first, second = _positive_first(J, e1, e2)
    edges = [first, second, first, second, first]
    partners = [second, first, second, first, second]
    spectators = {k: k for k in range(g.edge_count) if k not in (first, second)}
    radical = _radical(g)
    distinguished = [Fraction(int(k == first)) for k in range(g.edge_count)]
    chosen = None
    for pattern in _direction_patterns(5):
        run = _run(g, edges, pattern, spectators, partners)
        if _fixed_mod(run[4], distinguished, radical):
            chosen = run
            break
    if chosen is None:
        chosen = _run(g, edges, (COUNTERCLOCKWISE,) * 5, spectators, partners)
    moves, transports, facets, iso, sigma, final = chosen
    sequence = MoveSequence(moves, transports, iso, sigma, facets,
                            _symplectic_mod_radical(sigma, J, radical),
                            plus_composite=_plus_composite(g, moves, final, iso))
    sequence.distinguished_fixed = _fixed_mod(sigma, distinguished, radical)
    sequence.plus_trivial = _acts_trivially(g, sequence.plus_composite)
    return sequence


def dehn_twist(g, e1, e2):
    """
    The one-move loop through the cone identification around a pair of
    edges joining the same two vertices.

    The edge pairing positively with the other shrinks; after the move the
    new edge is identified with the other edge and all remaining edges with
    themselves. The facet side is the one for which the composite is a
    transvection. With ``a`` half the class of the loop through both edges
    and ``b`` any class with ``a . b = 1``, the report gives ``k`` and the
    radical part ``r`` in ``sigma(b) = b + k a + r``, and the analogous
    coefficient on the homology of the base surface.
    """
    if e1 == e2 or _endpoints(g, e1) != _endpoints(g, e2) or len(_endpoints(g, e1)) != 2:
        raise RibbonGraphError("edges must join the same two vertices")
    if _bounds_face(g, e1, e2):
        raise RibbonGraphError("edges bound a face: loop is homotopically trivial")
    J = intersection_matrix(g).J
    shrink, other = _positive_first(J, e1, e2)
    targets = {k: k for k in range(g.edge_count) if k not in (shrink, other)}
    targets[shrink] = other
    radical = _radical(g)
    n = g.edge_count
    identity = linalg.identity(n)
    chosen = None
    for pattern in _direction_patterns(1):
        run = _run(g, [shrink], pattern, targets, [other])
        if _rank_mod(linalg.subtract(run[4], identity), radical) == 1:
            chosen = run
            break
    if chosen is None:
        raise ArithmeticError("no facet side gives a transvection")
    moves, transports, facets, iso, sigma, final = chosen
    # The lift of the loop through both edges crosses them on one sheet.
    a = [Fraction(int(k in (shrink, other)), 2) for k in range(n)]
    partner = next(v for v in identity if linalg.bilinear(a, J, v) != 0)
    b = [x / linalg.bilinear(a, J, partner) for x in partner]
    k = None
    residue = None
    if _fixed_mod(sigma, a, radical):
        k, residue = _coefficient_mod([x - y for x, y in zip(linalg.matvec(sigma, b), b)],
                                      a, radical)
    plus = _plus_composite(g, moves, final, iso)
    plus_k, fixes = _plus_dehn_data(g, plus, shrink, other)
    sequence = MoveSequence(moves, transports, iso, sigma, facets,
                            _symplectic_mod_radical(sigma, J, radical),
                            plus_composite=plus, minus_coefficient=k,
                            minus_radical_part=residue, plus_coefficient=plus_k,
                            plus_fixes_others=fixes)
    sequence.distinguished_fixed = k is not None
    return sequence


def _bounds_face(g, e1, e2):
    edge = g.edge_of()
    return any(sorted(edge[d] for d in face) == sorted((e1, e2)) for face in faces(g))


def _coefficient_mod(vector, direction, radical):
    """Write ``vector = k direction + r`` with ``r`` in the radical span."""
    n = len(vector)
    columns = [direction] + radical
    matrix = [[c[i] for c in columns] for i in range(n)]
    solution = linalg.solve(matrix, vector)
    if solution is None:
        return None, None
    k = solution[0]
    residue = [v - k * d for v, d in zip(vector, direction)]
    return k, residue


# ---------------------------------------------------------------------------
# homology of the base surface
#
# Cycles are edge vectors with zero boundary, each edge oriented from its
# first dart to its second. Face boundaries span the classes that vanish on
# the closed surface.


def boundary_matrix(g):
    vertex = g.vertex_of()
    m = linalg.zeros(g.vertex_count, g.edge_count)
    for k, (p, q) in enumerate(g.edge_pairing):
        m[vertex[p]][k] -= 1
        m[vertex[q]][k] += 1
    return m


def cycle_space(g):
    return linalg.nullspace(boundary_matrix(g), g.edge_count)


def face_boundaries(g):
    edge = g.edge_of()
    rows = []
    for face in faces(g):
        row = [Fraction(0)] * g.edge_count
        for d in face:
            row[edge[d]] += _dart_sign(g, d)
        rows.append(row)
    return rows


def base_intersection(g, x, y):
    """Intersection of two graph cycles on the base surface."""
    edge = g.edge_of()

    def outgoing(vector):
        return [vector[edge[d]] * _dart_sign(g, d) for d in range(g.dart_count)]

    a, b = outgoing(x), outgoing(y)
    total = Fraction(0)
    for cycle in g.vertex_cycles:
        for i in range(len(cycle)):
            for j in range(i + 1, len(cycle)):
                total += a[cycle[i]] * b[cycle[j]] - a[cycle[j]] * b[cycle[i]]
    return PAIRING_SIGN * total / 2


def _plus_composite(g, moves, final, iso):
    """Images of the base cycle basis after the whole sequence, in the
    original graph's edge coordinates."""
    basis = cycle_space(g)
    current = [list(c) for c in basis]
    for move in moves:
        e = move.moved_edge
        h = move.after
        boundary = boundary_matrix(h)
        first = h.vertex_of()[h.edge_pairing[e][0]]
        nxt = []
        for c in current:
            image = list(c)
            image[e] = Fraction(0)
            image[e] = -linalg.matvec([boundary[first]], image)[0] / boundary[first][e]
            if any(x != 0 for x in linalg.matvec(boundary, image)):
                raise ArithmeticError("transported cycle is not closed")
            nxt.append(image)
        current = nxt
    edge_map = _signed_edge_map_matrix(final, g, iso)
    return [linalg.matvec(edge_map, c) for c in current]


def _acts_trivially(g, images):
    """Whether every base cycle returns to itself modulo face boundaries."""
    faces_ = face_boundaries(g)
    return all(linalg.in_row_span(linalg.subtract([image], [c])[0], faces_)
               for image, c in zip(images, cycle_space(g)))


def _plus_dehn_data(g, images, shrink, other):
    """Coefficient ``k`` in ``b -> b + k a`` modulo faces, where ``a`` is the
    cycle through the two edges and ``b`` a dual cycle with ``a . b = 1``."""
    basis = cycle_space(g)
    n = g.edge_count
    faces_ = face_boundaries(g)
    bm = boundary_matrix(g)
    row = next(r for r in bm if r[other] != 0)
    a = [Fraction(0)] * n
    a[shrink] = Fraction(1)
    a[other] = -row[shrink] / row[other]
    if any(x != 0 for x in linalg.matvec(bm, a)):
        raise ArithmeticError("edge pair is not a cycle")

    def sigma(vector):
        coords = linalg.solve(linalg.transpose(basis), vector)
        total = [Fraction(0)] * n
        for c, img in zip(coords, images):
            total = [t + c * v for t, v in zip(total, img)]
        return total

    b = next((c for c in basis if base_intersection(g, a, c) != 0), None)
    if b is None:
        return None, None
    b = [x / base_intersection(g, a, b) for x in b]
    fixed_a, _ = _coefficient_mod(linalg.subtract([sigma(a)], [a])[0], a, faces_)
    k, _ = _coefficient_mod(linalg.subtract([sigma(b)], [b])[0], a, faces_)
    if fixed_a != 0:
        return None, False
    fixes = True
    for c in basis:
        pairing = base_intersection(g, a, c)
        expected = [x + k * pairing * y for x, y in zip(c, a)]
        if not linalg.in_row_span(linalg.subtract([sigma(c)], [expected])[0], faces_):
            fixes = False
    return k, fixes
