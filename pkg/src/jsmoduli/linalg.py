"""
Exact linear algebra over the rationals.

Matrices are lists of rows of :class:`fractions.Fraction`. Everything here is
small (at most a few dozen rows), so plain Gaussian elimination is adequate.

EXAMPLES::

    >>> from fractions import Fraction
    >>> rank([[1, 2], [2, 4]])
    1
    >>> nullspace([[1, 1, 1]])
    [[Fraction(-1, 1), Fraction(1, 1), Fraction(0, 1)], [Fraction(-1, 1), Fraction(0, 1), Fraction(1, 1)]]
"""

from fractions import Fraction


def to_fractions(matrix):
    return [[Fraction(x) for x in row] for row in matrix]


def zeros(rows, cols):
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n):
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def transpose(m):
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def matmul(a, b):
    if not a:
        return []
    cols = len(b[0]) if b else 0
    result = []
    for row in a:
        out = [Fraction(0)] * cols
        for x, brow in zip(row, b):
            if x:
                for j, y in enumerate(brow):
                    if y:
                        out[j] += x * y
        result.append(out)
    return result


def matvec(m, v):
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in m]


def subtract(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def is_zero(m):
    return all(x == 0 for row in m for x in row)


def is_antisymmetric(m):
    n = len(m)
    return all(m[i][j] == -m[j][i] for i in range(n) for j in range(n))


def bilinear(u, m, v):
    """Return ``u^T m v``."""
    return sum((x * y for x, y in zip(u, matvec(m, v))), Fraction(0))


def rref(matrix):
    """
    Reduced row echelon form.

    Returns ``(reduced, pivots)`` where ``pivots`` lists the pivot columns.
    """
    m = to_fractions(matrix)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(matrix):
    if not matrix or not matrix[0]:
        return 0
    return len(rref(matrix)[1])


def nullspace(matrix, cols=None):
    """Basis of the right kernel ``{x : matrix x = 0}`` as a list of vectors."""
    if cols is None:
        cols = len(matrix[0]) if matrix else 0
    if not matrix:
        return [[Fraction(int(i == j)) for j in range(cols)] for i in range(cols)]
    reduced, pivots = rref(matrix)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def in_row_span(vector, rows):
    """True iff ``vector`` is a rational combination of ``rows``."""
    if all(x == 0 for x in vector):
        return True
    if not rows:
        return False
    return rank(rows) == rank(list(rows) + [list(vector)])


def solve(matrix, rhs):
    """
    One solution ``x`` of ``matrix x = rhs``, or ``None`` if inconsistent.

    Free variables are set to zero.
    """
    cols = len(matrix[0]) if matrix else 0
    augmented = [list(row) + [b] for row, b in zip(to_fractions(matrix), rhs)]
    reduced, pivots = rref(augmented)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for row, p in zip(reduced, pivots):
        x[p] = row[cols]
    return x


def determinant(matrix):
    m = to_fractions(matrix)
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def restrict(form, basis):
    """Gram matrix ``B^T form B`` for the columns listed in ``basis``."""
    return [[bilinear(u, form, v) for v in basis] for u in basis]


def format_fraction(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(text):
    return Fraction(text)
