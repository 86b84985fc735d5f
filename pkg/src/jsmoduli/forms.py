"""
Kontsevich two-form, Poisson bivector and perimeter map in edge-length
coordinates, all over the rationals.

The two-form is ``Omega = sum_f eta_f`` where ``eta_f`` is the sum of
``dl_j ^ dl_k`` over pairs of sides ``j < k`` along the boundary of face ``f``.
The bivector is ``P = 1/4 sum_v sum_{j<k} (-1)^(k-j-1) d_j ^ d_k`` over the
darts at each vertex in counterclockwise order.

Antisymmetric matrices ``M`` encode ``sum_{a<b} M[a][b] x_a ^ x_b``.

EXAMPLES::

    >>> from jsmoduli.ribbon import m11_graph
    >>> [int(x) for x in kontsevich_form(m11_graph()).matrix[0]]
    [0, 2, 2]
    >>> mk_check(m11_graph()).holds_mod_perimeters
    True
"""

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .ribbon import faces, face_edge_sequence, RibbonGraphError


@dataclass(frozen=True)
class TwoForm:
    matrix: list
    basis_edges: tuple


@dataclass(frozen=True)
class Bivector:
    matrix: list
    basis_edges: tuple


@dataclass(frozen=True)
class PerimeterMap:
    matrix: list


@dataclass(frozen=True)
class MKReport:
    holds_exactly: bool
    holds_mod_perimeters: bool
    witness: list


def _wedge_add(m, a, b, coefficient):
    if a != b:
        m[a][b] += coefficient
        m[b][a] -= coefficient


def face_form(g, face, first_side=0):
    """``eta_f`` for one face, starting the side order at ``first_side``."""
    n = g.edge_count
    sides = face_edge_sequence(g, face)
    sides = sides[first_side:] + sides[:first_side]
    m = linalg.zeros(n, n)
    for j in range(len(sides)):
        for k in range(j + 1, len(sides)):
            _wedge_add(m, sides[j], sides[k], 1)
    return m


def kontsevich_form(g, first_sides=None):
    n = g.edge_count
    total = linalg.zeros(n, n)
    for i, face in enumerate(faces(g)):
        start = first_sides[i] if first_sides else 0
        eta = face_form(g, face, start)
        total = [[x + y for x, y in zip(r, s)] for r, s in zip(total, eta)]
    return TwoForm(total, tuple(range(n)))


def vertex_bivector(g, cycle):
    """The contribution of one vertex star, before the factor 1/4."""
    edge = g.edge_of()
    n = g.edge_count
    m = linalg.zeros(n, n)
    incident = [edge[d] for d in cycle]
    for j in range(len(incident)):
        for k in range(j + 1, len(incident)):
            sign = 1 if (k - j - 1) % 2 == 0 else -1
            _wedge_add(m, incident[j], incident[k], sign)
    return m


def poisson_bivector(g):
    n = g.edge_count
    total = linalg.zeros(n, n)
    for cycle in g.vertex_cycles:
        star = vertex_bivector(g, cycle)
        total = [[x + Fraction(y, 4) for x, y in zip(r, s)] for r, s in zip(total, star)]
    return Bivector(total, tuple(range(n)))


def perimeter_map(g):
    n = g.edge_count
    rows = []
    for face in faces(g):
        row = [0] * n
        for e in face_edge_sequence(g, face):
            row[e] += 1
        rows.append(row)
    return PerimeterMap(rows)


def mk_check(g):
    """
    Compare the composite ``dl -> Omega[P(dl)]`` with the identity.

    The composite is the matrix product ``Omega P``: its column ``e`` is the
    one-form ``Omega(., P(., dl_e))``. Row ``e`` of the witness is that
    one-form minus ``dl_e``; ``holds_mod_perimeters`` asks that every row be
    a combination of perimeter differentials.
    """
    n = g.edge_count
    omega = kontsevich_form(g).matrix
    bivector = poisson_bivector(g).matrix
    composite = linalg.transpose(linalg.matmul(omega, bivector))
    defect = linalg.subtract(composite, linalg.identity(n))
    perimeter_rows = perimeter_map(g).matrix
    exact = linalg.is_zero(defect)
    modular = all(linalg.in_row_span(row, perimeter_rows) for row in defect)
    return MKReport(exact, modular, defect)


def casimir_check(g):
    bivector = poisson_bivector(g).matrix
    return all(all(x == 0 for x in linalg.matvec(bivector, row))
               for row in perimeter_map(g).matrix)


def leaf_basis(g):
    """Basis of the fixed-perimeter directions (kernel of the perimeter map)."""
    return linalg.nullspace(perimeter_map(g).matrix, g.edge_count)


def leaf_form(g):
    return linalg.restrict(kontsevich_form(g).matrix, leaf_basis(g))


def leaf_rank(g):
    """Rank of the two-form on the fixed-perimeter leaf (odd valences only)."""
    if any(v % 2 == 0 for v in g.valences()):
        raise RibbonGraphError("even-valent vertex: unsupported stratum")
    return linalg.rank(leaf_form(g)) if leaf_basis(g) else 0


def leaf_volume_nonzero(g):
    """True iff the top power of the leaf form is nonzero."""
    gram = leaf_form(g)
    return linalg.determinant(gram) != 0 if gram else True
