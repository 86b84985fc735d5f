"""
Canonical double cover of an odd-valent ribbon graph and its odd homology.

Cover darts are pairs ``(d, s)`` encoded as ``2 d + s``. Sheet ``s = 0``
carries the branch of ``v`` that is positive on the outgoing direction of
``d``. Turning to the next dart at a vertex passes through a sector of angle
``pi`` and crossing an edge reverses the direction, so both cover
permutations flip the sheet; faces lift to two faces because the face
permutation preserves it.

The odd class of edge ``e`` is ``gamma_e = c_e - mu(c_e)``, where ``c_e`` is
the lift of ``e`` on sheet 0 oriented away from its first dart, so that its
period ``2 l_e`` is positive.

EXAMPLES::

    >>> from jsmoduli.ribbon import m11_graph, genus
    >>> genus(build_cover(m11_graph()).cover_graph)
    2
    >>> [[int(x) for x in row] for row in intersection_matrix(m11_graph()).J]
    [[0, -2, 2], [2, 0, -2], [-2, 2, 0]]
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .forms import kontsevich_form, leaf_basis
from .ribbon import RibbonGraph, RibbonGraphError, faces, genus, perimeters


@dataclass(frozen=True)
class DoubleCover:
    base: RibbonGraph
    branch_vertices: tuple
    cover_graph: RibbonGraph
    deck_involution: tuple

    def projection(self, cover_dart):
        return cover_dart // 2


@dataclass(frozen=True)
class OddHomology:
    graph: RibbonGraph
    J: list
    face_cycles: list

    @property
    def gamma_basis(self):
        return tuple(range(self.graph.edge_count))


@dataclass(frozen=True)
class SymplecticBasis:
    U: list
    a_classes: list
    b_classes: list
    radical_classes: list

    @property
    def half_rank(self):
        return len(self.a_classes)


@dataclass(frozen=True)
class HomologicalCoordinates:
    A: list
    B: list
    p: list


def _require_odd(g):
    if any(v % 2 == 0 for v in g.valences()):
        raise RibbonGraphError("even-valent vertex present: cover has nodes, unsupported")


def build_cover(g):
    _require_odd(g)
    rot, opp = g.rotation(), g.pairing()
    n = 2 * g.dart_count

    def lift(perm, d, s):
        return 2 * perm[d] + (1 - s)

    cover_rot = [lift(rot, c // 2, c % 2) for c in range(n)]
    seen = [False] * n
    cycles = []
    for start in range(n):
        if seen[start]:
            continue
        cycle = []
        c = start
        while not seen[c]:
            seen[c] = True
            cycle.append(c)
            c = cover_rot[c]
        cycles.append(tuple(cycle))
    pairs = []
    for a, b in g.edge_pairing:
        pairs.append((2 * a, 2 * b + 1))
        pairs.append((2 * a + 1, 2 * b))
    deck = tuple(c ^ 1 for c in range(n))
    branch = tuple(k for k, v in enumerate(g.valences()) if v % 2)
    return DoubleCover(g, branch, RibbonGraph(n, tuple(cycles), tuple(pairs)), deck)


def cover_genus_formula(g):
    m_odd = sum(1 for v in g.valences() if v % 2)
    return 2 * genus(g) + Fraction(m_odd, 2) - 1


# ---------------------------------------------------------------------------
# chains on the cover
#
# A one-chain is a dict {(e, t): coefficient}; the oriented cover edge
# (e, t) runs from cover dart (d_e, t) to (opp(d_e), 1 - t), where d_e is the
# first dart of base edge e.


def edge_class_chain(e):
    return {(e, 0): Fraction(1), (e, 1): Fraction(-1)}


def deck_image(chain):
    return {(e, 1 - t): c for (e, t), c in chain.items()}


def face_lift_chain(g, face):
    """Lift of the boundary of ``face`` on sheet 0 as a cover one-chain."""
    chain = {}
    for d in face:
        for e, (first, second) in enumerate(g.edge_pairing):
            if d == first:
                key, sign = (e, 0), 1
                break
            if d == second:
                key, sign = (e, 1), -1
                break
        chain[key] = chain.get(key, 0) + Fraction(sign)
    return chain


def _dart_coefficients(g, chain):
    coefficient = {}
    for (e, t), c in chain.items():
        first, second = g.edge_pairing[e]
        leave = 2 * first + t
        arrive = 2 * second + (1 - t)
        coefficient[leave] = coefficient.get(leave, 0) + c
        coefficient[arrive] = coefficient.get(arrive, 0) - c
    return coefficient


# Sign of the pairing relative to the frame rule, under which a crossing
# counts +1 when the tangent frame of alpha then beta is positively oriented.
# With this rule the pairing of edge classes is minus four times the Poisson
# bivector, and sum dA ^ dB over a normalized basis is the Kontsevich form.
PAIRING_SIGN = 1


def intersection_number(cover, alpha, beta):
    """
    Intersection pairing of two closed chains on the cover surface.

    At each cover vertex with darts in counterclockwise order the frame-rule
    contribution is ``1/2 sum_{i<j} (a_i b_j - a_j b_i)``, where ``a_i`` is
    the outgoing minus incoming multiplicity of ``alpha`` on dart ``i``; the
    total is multiplied by :data:`PAIRING_SIGN`.
    """
    g = cover.base
    a = _dart_coefficients(g, alpha)
    b = _dart_coefficients(g, beta)
    total = Fraction(0)
    for cycle in cover.cover_graph.vertex_cycles:
        av = [a.get(c, 0) for c in cycle]
        bv = [b.get(c, 0) for c in cycle]
        if sum(av) != 0 or sum(bv) != 0:
            raise ValueError("chain is not closed")
        for i in range(len(cycle)):
            for j in range(i + 1, len(cycle)):
                total += av[i] * bv[j] - av[j] * bv[i]
    return PAIRING_SIGN * total / 2


def _chain_in_gamma_basis(g, chain):
    """Coefficients of an odd chain in the basis ``gamma_e``."""
    coefficients = [Fraction(0)] * g.edge_count
    for (e, t), c in chain.items():
        if t == 0:
            coefficients[e] += c
        elif chain.get((e, 0), 0) != -c:
            raise ValueError("chain is not anti-invariant under the deck involution")
    return coefficients


def intersection_matrix(g):
    """Pairing matrix of the edge classes and the face cycles spanning its
    radical. Results are cached and must not be mutated."""
    return _intersection_matrix(g)


@lru_cache(maxsize=4096)
def _intersection_matrix(g):
    cover = build_cover(g)
    chains = [edge_class_chain(e) for e in range(g.edge_count)]
    J = [[intersection_number(cover, x, y) for y in chains] for x in chains]
    face_cycles = []
    for face in faces(g):
        lift = face_lift_chain(g, face)
        odd = {}
        for key, c in lift.items():
            odd[key] = odd.get(key, 0) + c / 2
        for key, c in deck_image(lift).items():
            odd[key] = odd.get(key, 0) - c / 2
        face_cycles.append(_chain_in_gamma_basis(g, odd))
    return OddHomology(g, J, face_cycles)


def symplectic_basis(h):
    """
    Rational skew-normal form of ``J``.

    Columns of ``U`` are ``a_1 .. a_k, b_1 .. b_k`` followed by the face
    cycles, with ``a_i . b_j = delta_ij`` where ``x . y = x^T J y``.
    """
    J = h.J
    n = len(J)
    radical = linalg.nullspace(J, n) if n else []
    for cycle in h.face_cycles:
        if any(x != 0 for x in linalg.matvec(J, cycle)):
            raise ValueError("face cycle not in the radical: corrupt input")
    if h.face_cycles and linalg.rank(h.face_cycles) != len(radical):
        raise ValueError("face cycles do not span the radical")
    if not h.face_cycles and radical:
        raise ValueError("face cycles do not span the radical")
    if linalg.rank(J) % 2:
        raise ValueError("odd rank")

    def pair(u, v):
        return linalg.bilinear(u, J, v)

    candidates = linalg.identity(n)
    a_list, b_list = [], []
    while True:
        found = None
        for i, u in enumerate(candidates):
            for j in range(i + 1, len(candidates)):
                w = candidates[j]
                value = pair(u, w)
                if value != 0:
                    found = (i, j, value)
                    break
            if found:
                break
        if not found:
            break
        i, j, value = found
        a = candidates[i]
        b = [x / value for x in candidates[j]]
        a_list.append(a)
        b_list.append(b)
        rest = [c for k, c in enumerate(candidates) if k not in (i, j)]
        candidates = []
        for v in rest:
            va, vb = pair(v, a), pair(v, b)
            candidates.append([x - vb * y + va * z for x, y, z in zip(v, a, b)])
    columns = a_list + b_list + [list(c) for c in h.face_cycles]
    U = linalg.transpose(columns) if columns else []
    return SymplecticBasis(U, a_list, b_list, [list(c) for c in h.face_cycles])


def homological_coordinates(mg, sb):
    g = mg.graph
    if sb.U and len(sb.U) != g.edge_count:
        raise ValueError("dimension mismatch")
    periods = [2 * l for l in mg.lengths]

    def pairing(v):
        return sum((x * p for x, p in zip(v, periods)), 0 * periods[0] if periods else 0)

    return HomologicalCoordinates([pairing(a) for a in sb.a_classes],
                                  [pairing(b) for b in sb.b_classes],
                                  perimeters(mg))


def darboux_form(sb, edge_count):
    """Matrix of ``sum dA_i ^ dB_i`` pulled back to edge-length coordinates."""
    m = linalg.zeros(edge_count, edge_count)
    for a, b in zip(sb.a_classes, sb.b_classes):
        for i in range(edge_count):
            for j in range(edge_count):
                m[i][j] += 4 * (a[i] * b[j] - b[i] * a[j])
    return m


def darboux_check(g):
    """Exact equality of ``sum dA ^ dB`` and the Kontsevich form on the leaf."""
    _require_odd(g)
    basis = leaf_basis(g)
    if not basis:
        return True
    sb = symplectic_basis(intersection_matrix(g))
    lhs = linalg.restrict(darboux_form(sb, g.edge_count), basis)
    rhs = linalg.restrict(kontsevich_form(g).matrix, basis)
    return lhs == rhs
