"""
Boutroux curves of the two genus-zero strata and continuation of closed
loops on the real-period locus.

Pentagon model: ``v**2 = (x - x1)(x - x2)(x - x3) dx**2`` with
``x1 + x2 + x3 = 0``. The ribbon graph is a path ``i - j - k`` through the
three zeros; its two edges are straight segments between branch points and
their ``v``-integrals are the edge lengths.

Dehn model: ``v**2 = (x - x1)(x - x2) x**-3 dx**2``. In the plane
``w = sqrt(x)`` the differential becomes ``2 w**-2 sqrt((w**2 - x1)(w**2 -
x2)) dw`` with branch points ``+-r1, +-r2``. The two edges run from ``r1`` to
``r2`` and from ``r1`` to ``-r2``; point labels ``+-1, +-2`` stand for
``+-r1, +-r2``.

The holomorphic differential ``v0 = dx / y`` lives on the cubic through the
finite branch points (``x1, x2, x3`` or ``0, x1, x2``); periods are scaled
by :data:`OMEGA_NORMALIZATION` so that
``eta**24(omega2 / omega1) = omega1**12 prod (e_i - e_j)**2 / (2 pi)**12``.

A loop starts at the cell midpoint, shrinks one edge to a wall, crosses by
turning the colliding pair a quarter turn about its midpoint, and continues
in the next cell until it returns to the starting configuration. Positive
orientation shrinks first the edge ``a`` with ``Im(omega_b / omega_a) > 0``
when both edges are oriented to have positive ``v``-period.

EXAMPLES::

    >>> curve = solve([1.0, 1.0], pentagon_seed())
    >>> bool(max(abs(boutroux_residual(curve))) < 1e-10)
    True
"""

import cmath
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .quadrature import DEFAULT_ORDER, segment_integral

OMEGA_NORMALIZATION = 2.0 ** (-2.0 / 3.0)
NEWTON_TOLERANCE = 1e-11
MAX_NEWTON_STEPS = 40
DEFAULT_GAP = 1e-6
DEFAULT_DETOUR_STEPS = 40
MAX_ARG_STEP = 0.1
CLOSURE_TOLERANCE = 1e-9
LATTICE_TOLERANCE = 0.25


class BoutrouxError(RuntimeError):
    pass


class NewtonDivergence(BoutrouxError):
    pass


# ---------------------------------------------------------------------------
# curves and period data


@dataclass(frozen=True)
class PentagonCurve:
    x1: complex
    x2: complex
    x3: complex

    @classmethod
    def from_pair(cls, x1, x2):
        return cls(complex(x1), complex(x2), complex(-x1 - x2))

    @property
    def roots(self):
        return (self.x1, self.x2, self.x3)

    @property
    def cubic_roots(self):
        return self.roots

    def scaled(self, factor):
        return PentagonCurve(*(factor * x for x in self.roots))

    def discriminant(self):
        x1, x2, x3 = self.roots
        return ((x1 - x2) * (x1 - x3) * (x2 - x3)) ** 2


@dataclass(frozen=True)
class DehnCurve:
    x1: complex
    x2: complex

    @property
    def roots(self):
        return (self.x1, self.x2)

    @property
    def cubic_roots(self):
        return (0j, self.x1, self.x2)

    def scaled(self, factor):
        return DehnCurve(factor * self.x1, factor * self.x2)

    def discriminant(self):
        return (self.x1 * self.x2 * (self.x1 - self.x2)) ** 2


@dataclass(frozen=True)
class PeriodData:
    """Cycle periods of ``v`` (twice the edge integrals) and normalized
    ``v0``-periods ``omega1, omega2`` with ``Im(omega2 / omega1) > 0``."""
    Pa: complex
    Pb: complex
    omega1: complex
    omega2: complex
    branch_tracking: tuple = ()

    @property
    def tau(self):
        return self.omega2 / self.omega1


# ---------------------------------------------------------------------------
# models


class _PentagonModel:
    name = "pentagon"
    walls = 5
    start_edges = ((0, 1), (1, 2))
    # radius of the targets as a function of the total length t
    seed_state = (0.8820805 - 0.8896283j, -0.3085692 - 0.2241859j)

    def roots(self, z):
        return (z[0], z[1], -z[0] - z[1])

    def curve(self, z):
        return PentagonCurve.from_pair(z[0], z[1])

    def state(self, curve):
        return np.array([curve.x1, curve.x2], dtype=complex)

    def _third(self, edge):
        return next(m for m in range(3) if m not in edge)

    def period(self, z, edge, order=DEFAULT_ORDER):
        x = self.roots(z)
        i, j = edge
        return segment_integral(x[i], x[j], [x[self._third(edge)]], 1, order=order)

    def omega(self, z, edge, order=DEFAULT_ORDER):
        x = self.roots(z)
        i, j = edge
        raw = segment_integral(x[i], x[j], [x[self._third(edge)]], -1, order=order)
        return 2 * OMEGA_NORMALIZATION * raw

    def gradient(self, z, edge):
        x = self.roots(z)
        i, j = edge
        k = self._third(edge)
        partial = []
        for l in range(3):
            others = [x[m] for m in range(3) if m != l]
            weight = (lambda s, p=others[0], q=others[1]: -0.5 * (s - p) * (s - q))
            partial.append(segment_integral(x[i], x[j], [x[k]], -1, weight=weight))
        return np.array([partial[0] - partial[2], partial[1] - partial[2]])

    def rotate(self, z, edge, angle):
        x = list(self.roots(z))
        i, j = edge
        middle = (x[i] + x[j]) / 2
        turn = cmath.exp(1j * angle)
        x[i] = middle + turn * (x[i] - middle)
        x[j] = middle + turn * (x[j] - middle)
        return np.array([x[0], x[1]], dtype=complex)

    def colliding_pair(self, edge):
        return "x%d-x%d" % tuple(sorted(m + 1 for m in edge))

    def next_edges(self, z, shrunk, other):
        x = self.roots(z)
        i, j = shrunk
        k = other[1] if other[0] in shrunk else other[0]
        c = i if abs(x[i] - x[k]) < abs(x[j] - x[k]) else j
        o = j if c == i else i
        return (k, c), (c, o)

    def omega_basis(self, z):
        return [self.omega(z, (0, 1)), self.omega(z, (1, 2))]

    def lattice_partner(self, omega_a, omega_b):
        return omega_b

    def factors(self, z):
        x = self.roots(z)
        return [x[0] - x[1], x[1] - x[2], x[0] - x[2]]

    def scale_exponent(self):
        """Branch points scale as ``(t'/t)**exponent`` when lengths scale."""
        return 0.4


class _DehnModel:
    name = "dehn"
    walls = 1
    start_edges = ((1, 2), (1, -2))
    seed_state = (0.154040858j, 0.335756764 + 0j)

    def points(self, z):
        return {1: z[0], -1: -z[0], 2: z[1], -2: -z[1]}

    def roots(self, z):
        return (z[0] ** 2, z[1] ** 2)

    def curve(self, z):
        return DehnCurve(complex(z[0] ** 2), complex(z[1] ** 2))

    def state(self, curve):
        return np.array([cmath.sqrt(curve.x1), cmath.sqrt(curve.x2)], dtype=complex)

    def _ends(self, z, edge):
        p = self.points(z)
        others = [p[q] for q in (1, -1, 2, -2) if q not in edge]
        return p[edge[0]], p[edge[1]], others

    def period(self, z, edge, order=DEFAULT_ORDER):
        a, b, others = self._ends(z, edge)
        return segment_integral(a, b, others, 1, weight=lambda w: 2 / w ** 2,
                                poles=(0j,), order=order)

    def omega(self, z, edge, order=DEFAULT_ORDER):
        a, b, others = self._ends(z, edge)
        raw = segment_integral(a, b, others, -1, weight=lambda w: 2 + 0 * w, order=order)
        return 2 * OMEGA_NORMALIZATION * raw

    def gradient(self, z, edge):
        a, b, others = self._ends(z, edge)
        x1, x2 = self.roots(z)
        g1 = -2 * z[0] * segment_integral(a, b, others, -1,
                                          weight=lambda w: (w * w - x2) / w ** 2, poles=(0j,))
        g2 = -2 * z[1] * segment_integral(a, b, others, -1,
                                          weight=lambda w: (w * w - x1) / w ** 2, poles=(0j,))
        return np.array([g1, g2])

    def rotate(self, z, edge, angle):
        p = self.points(z)
        a, b = p[edge[0]], p[edge[1]]
        middle = (a + b) / 2
        turn = cmath.exp(1j * angle)
        moved = {edge[0]: middle + turn * (a - middle), edge[1]: middle + turn * (b - middle)}
        new = list(z)
        for label, value in moved.items():
            new[abs(label) - 1] = value if label > 0 else -value
        return np.array(new, dtype=complex)

    def colliding_pair(self, edge):
        return "x1-x2"

    def next_edges(self, z, shrunk, other):
        return other, shrunk

    def omega_basis(self, z):
        first = self.omega(z, (1, 2))
        return [first, (first + self.omega(z, (1, -2))) / 2]

    def lattice_partner(self, omega_a, omega_b):
        # the two edge cycles span an index-two sublattice; half their sum
        # is the cycle around the branch points 0 and x1
        return (omega_a + omega_b) / 2

    def factors(self, z):
        x1, x2 = self.roots(z)
        return [x1, x2, x1 - x2]

    def scale_exponent(self):
        return 1.0


MODELS = {"pentagon": _PentagonModel(), "dehn": _DehnModel()}


def _model_of(curve):
    if isinstance(curve, PentagonCurve):
        return MODELS["pentagon"]
    if isinstance(curve, DehnCurve):
        return MODELS["dehn"]
    raise TypeError("unknown curve type")


def _check_distinct(points):
    points = list(points)
    scale = max(1.0, max(abs(p) for p in points))
    for p, q in itertools.combinations(points, 2):
        if abs(p - q) < 1e-14 * scale:
            raise BoutrouxError("collided branch points")


def _oriented_pair(model, z, first, second):
    """Edge periods and omegas with each edge oriented to positive v-period."""
    values = []
    for edge in (first, second):
        e = model.period(z, edge)
        w = model.omega(z, edge)
        sign = 1 if e.real >= 0 else -1
        values.append((sign * e, sign * w))
    return values


def _period_data(model, z, edges):
    _check_distinct(model.curve(z).cubic_roots)
    (ea, wa), (eb, wb) = _oriented_pair(model, z, *edges)
    if (wb / wa).imag < 0:
        eb, wb = -eb, -wb
    return PeriodData(2 * ea, 2 * eb, wa, model.lattice_partner(wa, wb), (1, 1))


def periods_pentagon(c, edges=((0, 1), (1, 2))):
    model = MODELS["pentagon"]
    return _period_data(model, model.state(c), edges)


def periods_dehn(c, edges=((1, 2), (1, -2))):
    model = MODELS["dehn"]
    return _period_data(model, model.state(c), edges)


def boutroux_residual(c, edges=None):
    """Imaginary parts of the two edge periods (default: the starting
    edges of the model)."""
    model = _model_of(c)
    z = model.state(c)
    return np.array([model.period(z, e).imag for e in edges or model.start_edges])


# ---------------------------------------------------------------------------
# Newton solving


def _continued(raw, reference):
    """Sheet sign making ``raw`` continue ``reference``."""
    return 1 if abs(raw - reference) <= abs(raw + reference) else -1


def _system(model, z, edges, references):
    values, rows, signs = [], [], []
    for edge, ref in zip(edges, references):
        raw = model.period(z, edge)
        sign = _continued(raw, ref)
        values.append(sign * raw)
        rows.append(sign * model.gradient(z, edge))
        signs.append(sign)
    return np.array(values), np.array(rows), signs


def _newton(model, z, edges, targets, references, tol=NEWTON_TOLERANCE):
    targets = np.asarray(targets, dtype=float)
    bound = tol * max(1.0, float(np.max(np.abs(targets))))
    values, jac, _ = _system(model, z, edges, references)
    residual = values - targets
    for _ in range(MAX_NEWTON_STEPS):
        size = float(np.max(np.abs(residual)))
        if size < bound:
            return z, values
        step = np.linalg.solve(jac, -residual)
        damping = 1.0
        while True:
            trial = z + damping * step
            try:
                _check_distinct(model.curve(trial).cubic_roots)
                tv, tj, _ = _system(model, trial, edges, values)
                tr = tv - targets
                if float(np.max(np.abs(tr))) < size or damping < 1e-3:
                    break
            except (BoutrouxError, ZeroDivisionError):
                pass
            damping /= 2
            if damping < 1e-6:
                raise NewtonDivergence("step halving exhausted")
        z, values, jac, residual = trial, tv, tj, tr
    raise NewtonDivergence("no convergence")


def pentagon_seed(t=2.0):
    """On-locus pentagon curve with both edge lengths ``t / 2``."""
    return _seed(MODELS["pentagon"], t)


def dehn_seed(t=2.0):
    """On-locus Dehn curve with both edge lengths ``t / 2``."""
    return _seed(MODELS["dehn"], t)


def _seed(model, t):
    factor = (t / 2.0) ** model.scale_exponent()
    z = factor * np.array(model.seed_state, dtype=complex)
    references = [model.period(z, e) for e in model.start_edges]
    references = [r if r.real >= 0 else -r for r in references]
    z, _ = _newton(model, z, model.start_edges, [t / 2, t / 2], references)
    return model.curve(z)


def solve(targets, seed, edges=None, tol=NEWTON_TOLERANCE):
    """
    Curve on the real locus whose two edge lengths equal ``targets``.

    Damped Newton from ``seed`` with analytic Jacobians; each edge keeps the
    sheet on which its length is positive at the seed. A Dehn curve fixes
    ``r2`` only up to sign, so the two edges of the returned curve may come
    back with their lengths exchanged.
    """
    model = _model_of(seed)
    edges = edges or model.start_edges
    z = model.state(seed)
    _check_distinct(model.curve(z).cubic_roots)
    references = []
    for edge, target in zip(edges, targets):
        raw = model.period(z, edge)
        references.append(raw if raw.real * target >= 0 else -raw)
    z, _ = _newton(model, z, edges, targets, references, tol)
    return model.curve(z)


# ---------------------------------------------------------------------------
# loops


@dataclass
class PathSample:
    curve: object
    periods: PeriodData
    kind: str
    cell: int
    parameter: float


@dataclass
class WallCrossing:
    """Data of one facet crossing; ``sample`` indexes the last sample
    before the wall and ``resume`` the first cell sample after it."""
    sample: int
    resume: int
    colliding_pair: str
    vanishing_before: complex
    vanishing_after: complex
    detour_side: int

    @property
    def sign_change(self):
        return self.vanishing_before.real > 0 > self.vanishing_after.real


@dataclass
class BoutrouxPath:
    model: str
    scale: float
    orientation: int
    samples: list
    walls: list
    omega_monodromy: list
    closure_error: float
    lattice_error: float
    start_edges: tuple = field(default=())
    cell_edges: tuple = field(default=())

    @property
    def wall_count(self):
        return len(self.walls)

    def cell_samples(self):
        return [s for s in self.samples if s.kind == "cell"]


def _logit(s):
    return math.log(s / (1 - s))


def _phase_step(before, after):
    return max(abs(cmath.phase(b / a)) for a, b in zip(before, after))


def _trace_cell(model, z, edges, total, s_from, s_to, count, references, max_arg):
    """Continue along a cell with lengths ``(total (1 - s), total s)``."""
    grid = np.linspace(_logit(s_from), _logit(s_to), max(count, 2))
    accepted = []
    s_prev, z_prev, ref_prev = grid[0], z, references
    for target in grid[1:]:
        pending = [target]
        while pending:
            u = pending[-1]
            s = 1 / (1 + math.exp(-u))
            z_new, values = _newton(model, z_prev, edges, [total * (1 - s), total * s], ref_prev)
            if _phase_step(model.factors(z_prev), model.factors(z_new)) > max_arg and \
                    abs(u - s_prev) > 1e-6:
                pending.append((s_prev + u) / 2)
                continue
            pending.pop()
            accepted.append((s, z_new, values))
            s_prev, z_prev, ref_prev = u, z_new, values
    return accepted


def _lattice_round(values, basis):
    """Round complex ``values`` into the lattice spanned by ``basis``."""
    b0, b1 = basis
    det = b0.real * b1.imag - b1.real * b0.imag
    out, worst = [], 0.0
    for v in values:
        m = (v.real * b1.imag - b1.real * v.imag) / det
        n = (b0.real * v.imag - v.real * b0.imag) / det
        rm, rn = round(m), round(n)
        worst = max(worst, abs(m - rm), abs(n - rn))
        out.append(rm * b0 + rn * b1)
    return out, worst


def _coefficients(value, basis):
    b0, b1 = basis
    det = b0.real * b1.imag - b1.real * b0.imag
    return ((value.real * b1.imag - b1.real * value.imag) / det,
            (b0.real * value.imag - value.real * b0.imag) / det)


def _adapted_basis(matrix):
    """Unimodular oriented change of basis whose first vector is the
    primitive cycle fixed by the unipotent ``matrix``, rows of which are the
    images of the basis vectors."""
    (m00, m01), (m10, m11) = matrix
    p, q = m10, 1 - m00
    if (p, q) == (0, 0):
        p, q = 1 - m11, m01
    g = math.gcd(p, q)
    p, q = p // g, q // g
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    x, y = _bezout(p, q)
    return [[p, q], [-y, x]]


def _bezout(p, q):
    """``(x, y)`` with ``x p + y q = 1`` for coprime ``p, q``."""
    old_r, r, old_x, x, old_y, y = p, q, 1, 0, 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_x, x = x, old_x - k * x
        old_y, y = y, old_y - k * y
    return old_x * old_r, old_y * old_r


def _apply(change, values):
    return [row[0] * values[0] + row[1] * values[1] for row in change]


def _conjugate(matrix, change):
    """Monodromy rows expressed in the changed basis."""
    c = np.array(change, dtype=float)
    m = np.array(matrix, dtype=float)
    result = c @ m @ np.linalg.inv(c)
    return [[int(round(x)) for x in row] for row in result]


def _direction_patterns(count):
    patterns = list(itertools.product((1, -1), repeat=count))
    return sorted(patterns, key=lambda p: (p.count(-1), [-x for x in p]))


def continue_loop(model_name, t=2.0, steps=2000, gap=DEFAULT_GAP,
                  detour_steps=DEFAULT_DETOUR_STEPS, max_arg_step=MAX_ARG_STEP,
                  orientation=1):
    """
    Closed loop on the real locus around the degenerate configuration.

    ``t`` is the total length of the two edges, ``steps`` the nominal number
    of cell samples. ``orientation=-1`` traverses the loop backwards.
    """
    if model_name not in MODELS:
        raise ValueError(f"unknown model {model_name!r}")
    model = MODELS[model_name]
    walls = model.walls
    z0 = model.state(_seed(model, t))
    e1, e2 = model.start_edges
    (_, wa), (_, wb) = _oriented_pair(model, z0, e1, e2)
    first, second = (e1, e2) if (wb / wa).imag > 0 else (e2, e1)
    if orientation < 0:
        first, second = second, first
    per_cell = max(steps // walls, 4)

    (ea, _), (eb, _) = _oriented_pair(model, z0, first, second)
    references = [ea, eb]
    cells = []  # (edges, samples)
    wall_data = []
    z = z0
    edges = (first, second)
    cell = _trace_cell(model, z, edges, t, 0.5, 1 - gap, per_cell // 2, references, max_arg_step)
    cells.append((edges, [(0.5, z0, np.array(references))] + cell))
    for w in range(walls):
        s, z, values = cells[-1][1][-1]
        shrunk, other = edges
        post = model.rotate(z, shrunk, math.pi / 2)
        after_raw = model.period(post, shrunk)
        after = _continued(after_raw, -values[0]) * after_raw
        detours = {}
        for side in (1, -1):
            angles = np.linspace(0, side * math.pi / 2, detour_steps)[1:]
            detours[side] = [model.rotate(z, shrunk, a) for a in angles]
        new_first, new_second = model.next_edges(post, shrunk, other)
        long_raw = model.period(post, new_first)
        new_refs = [_continued(long_raw, values[1]) * long_raw, -after]
        edges = (new_first, new_second)
        # the quarter turn leaves the locus slightly; return to it at the
        # mirrored cell parameter
        post, refined = _newton(model, post, edges, [t * (1 - gap), t * gap], new_refs)
        new_refs = list(refined)
        after = -refined[1]
        wall_data.append((model.colliding_pair(shrunk), complex(values[0]), complex(after), detours))
        last = w == walls - 1
        end = 0.5 if last else 1 - gap
        count = per_cell // 2 if last else per_cell
        cell = _trace_cell(model, post, edges, t, gap, end, count, new_refs, max_arg_step)
        cells.append((edges, [(gap, post, np.array(new_refs))] + cell))

    z_end = cells[-1][1][-1][1]
    start_roots = model.curve(z0).cubic_roots
    end_roots = model.curve(z_end).cubic_roots
    closure = max(min(abs(p - q) for q in end_roots) for p in start_roots)
    if closure > CLOSURE_TOLERANCE * max(1.0, max(abs(p) for p in start_roots)):
        raise BoutrouxError(f"loop does not close (error {closure:.3e})")

    # omega bases along cells and both detour sides
    cell_bases = [[model.omega_basis(zz) for (_, zz, _) in samples] for _, samples in cells]
    detour_bases = [{side: [model.omega_basis(zz) for zz in d[3][side]] for side in (1, -1)}
                    for d in wall_data]
    (_, omega_a), (_, omega_b) = _oriented_pair(model, z0, first, second)
    if (omega_b / omega_a).imag < 0:
        omega_b = -omega_b
    omega_b = model.lattice_partner(omega_a, omega_b)

    def replay(pattern):
        values = [omega_a, omega_b]
        history = []
        worst = 0.0
        for n, (_, samples) in enumerate(cells):
            for basis in cell_bases[n]:
                values, err = _lattice_round(values, basis)
                worst = max(worst, err)
                history.append(("cell", values))
            if n < walls:
                for basis in detour_bases[n][pattern[n]]:
                    values, err = _lattice_round(values, basis)
                    worst = max(worst, err)
                    history.append(("detour", values))
        return values, history, worst

    start_basis = [omega_a, omega_b]
    chosen = None
    for pattern in _direction_patterns(walls):
        values, history, worst = replay(pattern)
        matrix = [[int(round(c)) for c in _coefficients(v, start_basis)] for v in values]
        if matrix[0][0] + matrix[1][1] == 2 and matrix != [[1, 0], [0, 1]]:
            chosen = (pattern, matrix, history, worst)
            break
    if chosen is None:
        raise BoutrouxError("no detour pattern gives a unipotent monodromy")
    pattern, matrix, history, worst = chosen
    if worst > LATTICE_TOLERANCE:
        raise BoutrouxError("lattice tracking lost (step too coarse)")
    change = _adapted_basis(matrix)
    history = [(kind, _apply(change, vals)) for kind, vals in history]
    monodromy = _conjugate(matrix, change)

    samples, wall_records = [], []
    cursor = 0
    for n, (cell_edges, cell_samples) in enumerate(cells):
        if n > 0:
            wall_records[-1].resume = len(samples)
        for (s, zz, vals) in cell_samples:
            _, (wa_, wb_) = history[cursor]
            cursor += 1
            samples.append(PathSample(model.curve(zz),
                                      PeriodData(2 * vals[0], 2 * vals[1], wa_, wb_),
                                      "cell", n, s))
        if n < walls:
            pair, before, after, detours = wall_data[n]
            wall_records.append(WallCrossing(len(samples) - 1, -1, pair, before, after,
                                             pattern[n]))
            for zz in detours[pattern[n]]:
                _, (wa_, wb_) = history[cursor]
                cursor += 1
                samples.append(PathSample(model.curve(zz),
                                          PeriodData(0j, 0j, wa_, wb_),
                                          "detour", n, float("nan")))
    return BoutrouxPath(model.name, t, orientation, samples, wall_records, monodromy,
                        closure, worst, (first, second),
                        tuple(cell_edges for cell_edges, _ in cells))


# ---------------------------------------------------------------------------
# modular check


def _reduce_basis(omega1, omega2):
    """SL2(Z)-equivalent oriented basis with ratio in the fundamental domain."""
    if (omega2 / omega1).imag <= 0:
        raise BoutrouxError("basis not positively oriented")
    for _ in range(200):
        ratio = omega2 / omega1
        shift = round(ratio.real)
        omega2 = omega2 - shift * omega1
        ratio = omega2 / omega1
        if abs(ratio) < 1 - 1e-15:
            omega1, omega2 = omega2, -omega1
            continue
        return omega1, omega2
    raise BoutrouxError("lattice reduction did not terminate")


def eta24(ratio, terms=60):
    """``eta(ratio)**24`` from the product ``q prod (1 - q**n)**24``."""
    q = cmath.exp(2j * math.pi * ratio)
    product = 1.0 + 0j
    for n in range(1, terms + 1):
        qn = q ** n
        product *= (1 - qn) ** 24
        if abs(qn) < 1e-18:
            break
    return q * product


def eta_identity_ratio(periods, curve):
    """``eta**24 (2 pi)**12 / (omega1**12 Delta)``; equals 1 on a consistent
    lattice basis."""
    w1, w2 = _reduce_basis(periods.omega1, periods.omega2)
    return eta24(w2 / w1) * (2 * math.pi) ** 12 / (w1 ** 12 * curve.discriminant())


# ---------------------------------------------------------------------------
# serialization


def _pack(z):
    return [float(z.real), float(z.imag)]


def _unpack(pair):
    return complex(pair[0], pair[1])


def path_to_dict(path):
    """JSON-ready form of a path; complex numbers become ``[re, im]``."""
    samples = []
    for s in path.samples:
        p = s.periods
        samples.append({
            "roots": [_pack(x) for x in s.curve.roots],
            "Pa": _pack(p.Pa), "Pb": _pack(p.Pb),
            "omega1": _pack(p.omega1), "omega2": _pack(p.omega2),
            "kind": s.kind, "cell": s.cell,
            "parameter": None if math.isnan(s.parameter) else s.parameter,
        })
    walls = [{"sample": w.sample, "resume": w.resume, "colliding_pair": w.colliding_pair,
              "vanishing_before": _pack(w.vanishing_before),
              "vanishing_after": _pack(w.vanishing_after),
              "detour_side": w.detour_side} for w in path.walls]
    return {"model": path.model, "scale": path.scale, "orientation": path.orientation,
            "omega_monodromy": path.omega_monodromy, "closure_error": path.closure_error,
            "lattice_error": path.lattice_error,
            "start_edges": [list(e) for e in path.start_edges],
            "cell_edges": [[list(e) for e in pair] for pair in path.cell_edges],
            "walls": walls, "samples": samples}


def path_from_dict(data):
    model = data["model"]
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    make = PentagonCurve if model == "pentagon" else DehnCurve
    samples = []
    for s in data["samples"]:
        roots = [_unpack(x) for x in s["roots"]]
        periods = PeriodData(_unpack(s["Pa"]), _unpack(s["Pb"]),
                             _unpack(s["omega1"]), _unpack(s["omega2"]))
        parameter = float("nan") if s["parameter"] is None else s["parameter"]
        samples.append(PathSample(make(*roots), periods, s["kind"], s["cell"], parameter))
    walls = [WallCrossing(w["sample"], w["resume"], w["colliding_pair"],
                          _unpack(w["vanishing_before"]), _unpack(w["vanishing_after"]),
                          w["detour_side"]) for w in data["walls"]]
    return BoutrouxPath(model, data["scale"], data["orientation"], samples, walls,
                        data["omega_monodromy"], data["closure_error"],
                        data["lattice_error"], tuple(tuple(e) for e in data["start_edges"]),
                        tuple(tuple(tuple(e) for e in pair)
                              for pair in data.get("cell_edges", ())))
