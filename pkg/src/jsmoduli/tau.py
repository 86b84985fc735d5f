"""
Closed-form tau functions of the two genus-zero strata, their argument
monodromy along stored loops, homogeneity exponents and the exact ledger of
class relations.

Each tau value is a product of complex factors raised to rational
exponents. Arguments are tracked per factor; along a cell the increment of a
factor is the principal argument of its ratio between consecutive samples.
At a wall the colliding pair ``d`` passes through zero, and its increment is
half the principal argument of ``r_after / r_before`` with ``r = d**2 / E``,
where ``E`` is the vanishing edge period continued through the wall. The
ratio ``r`` stays finite and nonzero there because ``E`` vanishes to the same
order as ``d**2``.

Monodromies are reported in units of ``pi / 72``.

EXAMPLES::

    >>> kappa_plus(PENTAGON_DIVISOR), kappa_minus(PENTAGON_DIVISOR)
    (Fraction(1, 60), Fraction(7, 60))
    >>> str(ledger({"W5": (1, 13), "W11": (13, 25)}).relations["mumford"])
    'lambda_P - 13 lambda = psi - W11'
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from . import boutroux
from .boutroux import DehnCurve, PentagonCurve

UNIT = math.pi / 72
MONODROMY_TOLERANCE = 1e-3
WALL_JUMP_LIMIT = 0.1

PENTAGON_DIVISOR = (1, 1, 1, -7)
DEHN_DIVISOR = (1, 1, -3, -3)

# factor exponents of each tau function; "omega1" is the a-period of v0
EXPONENTS = {
    ("pentagon", "plus"): {"x1-x2": Fraction(1, 36), "x2-x3": Fraction(1, 36),
                           "x1-x3": Fraction(1, 36)},
    ("pentagon", "minus"): {"x1-x2": Fraction(13, 36), "x2-x3": Fraction(13, 36),
                            "x1-x3": Fraction(13, 36), "omega1": Fraction(1)},
    ("dehn", "plus"): {"x1": Fraction(1, 12), "x2": Fraction(1, 12), "x1-x2": Fraction(1, 36)},
    ("dehn", "minus"): {"x1": Fraction(1, 12), "x2": Fraction(1, 12),
                        "x1-x2": Fraction(13, 36), "omega1": Fraction(1)},
}


class TauError(RuntimeError):
    pass


@dataclass(frozen=True)
class TauValue:
    """``components`` maps a factor name to ``(exponent, value, arg)``."""
    components: dict

    @property
    def modulus(self):
        return math.prod(abs(v) ** float(e) for e, v, _ in self.components.values())

    @property
    def arg(self):
        return sum(float(e) * a for e, _, a in self.components.values())

    @property
    def value(self):
        return self.modulus * cmath.exp(1j * self.arg)


@dataclass(frozen=True)
class MonodromyResult:
    model: str
    which: str
    raw_increment: float
    units: int
    residual: float
    component_increments: dict


def _factors(curve, omega1=None):
    if isinstance(curve, PentagonCurve):
        x1, x2, x3 = curve.roots
        values = {"x1-x2": x1 - x2, "x2-x3": x2 - x3, "x1-x3": x1 - x3}
    elif isinstance(curve, DehnCurve):
        values = {"x1": curve.x1, "x2": curve.x2, "x1-x2": curve.x1 - curve.x2}
    else:
        raise TypeError("unknown curve type")
    if omega1 is not None:
        values["omega1"] = omega1
    return values


def _nearest(angle, reference):
    return angle + 2 * math.pi * round((reference - angle) / (2 * math.pi))


def _evaluate(model, which, curve, omega1=None, reference=None):
    values = _factors(curve, omega1)
    components = {}
    for name, exponent in EXPONENTS[(model, which)].items():
        v = values[name]
        if v == 0:
            raise TauError(f"factor {name} vanishes")
        a = cmath.phase(v)
        if reference is not None:
            a = _nearest(a, reference.components[name][2])
        components[name] = (exponent, v, a)
    return TauValue(components)


def tau_plus_pentagon(c, reference=None):
    return _evaluate("pentagon", "plus", c, reference=reference)


def tau_minus_pentagon(c, pd, reference=None):
    return _evaluate("pentagon", "minus", c, pd.omega1, reference)


def tau_plus_dehn(c, reference=None):
    return _evaluate("dehn", "plus", c, reference=reference)


def tau_minus_dehn(c, pd, reference=None):
    return _evaluate("dehn", "minus", c, pd.omega1, reference)


def tau_value(model, which, curve, periods=None, reference=None):
    omega1 = periods.omega1 if which == "minus" else None
    return _evaluate(model, which, curve, omega1, reference)


# ---------------------------------------------------------------------------
# tracking


def _step(before, after):
    return cmath.phase(after / before)


def tau_along_path(path, which):
    """Tau values at every cell sample with continuously tracked arguments."""
    if which not in ("plus", "minus"):
        raise ValueError("which must be 'plus' or 'minus'")
    exponents = EXPONENTS[(path.model, which)]
    samples = path.samples
    walls = {w.sample: w for w in path.walls}
    first = samples[0]
    current = tau_value(path.model, which, first.curve, first.periods)
    track = [current]
    args = {k: a for k, (_, _, a) in current.components.items()}
    values = {k: v for k, (_, v, _) in current.components.items()}
    omega_value = first.periods.omega1
    index = 0
    while index < len(samples) - 1:
        wall = walls.get(index)
        if wall is not None:
            for detour in samples[index + 1:wall.resume]:
                if "omega1" in args:
                    args["omega1"] += _step(omega_value, detour.periods.omega1)
                omega_value = detour.periods.omega1
            nxt = wall.resume
        else:
            nxt = index + 1
        sample = samples[nxt]
        fresh = _factors(sample.curve, sample.periods.omega1 if "omega1" in args else None)
        for name in exponents:
            if name == "omega1":
                args[name] += _step(omega_value, fresh[name])
            elif wall is not None and name == wall.colliding_pair:
                before = values[name] ** 2 / wall.vanishing_before
                after = fresh[name] ** 2 / wall.vanishing_after
                args[name] += 0.5 * _step(before, after)
            else:
                jump = _step(values[name], fresh[name])
                if wall is not None and abs(jump) > WALL_JUMP_LIMIT:
                    raise TauError(f"factor {name} jumps across a wall")
                args[name] += jump
            values[name] = fresh[name]
        omega_value = sample.periods.omega1
        track.append(TauValue({k: (exponents[k], values[k], args[k]) for k in exponents}))
        index = nxt
    return track


def track_monodromy(path, which):
    track = tau_along_path(path, which)
    start, end = track[0], track[-1]
    raw = end.arg - start.arg
    units = round(raw / UNIT)
    increments = {k: end.components[k][2] - start.components[k][2] for k in start.components}
    return MonodromyResult(path.model, which, raw, int(units), abs(raw - units * UNIT),
                           increments)


# ---------------------------------------------------------------------------
# homogeneity


def kappa_plus(divisor):
    return sum((Fraction(d * (d + 4), d + 2) for d in divisor), Fraction(0)) / 48


def kappa_minus(divisor):
    return kappa_plus(divisor) + sum((Fraction(1, d + 2) for d in divisor), Fraction(0)) / 8


def predicted_exponent(model, which):
    divisor = PENTAGON_DIVISOR if model == "pentagon" else DEHN_DIVISOR
    return kappa_plus(divisor) if which == "plus" else kappa_minus(divisor)


def homogeneity_check(model, which, factor=2.0, t=2.0):
    """
    Log-log slope of ``|tau|`` under ``Q -> eps Q`` for ``eps`` in
    ``(1 / factor, factor)``.

    Scaling ``Q`` by ``eps`` scales edge lengths by ``sqrt(eps)``; each
    scaled curve is re-solved on the real locus and its periods recomputed.
    """
    if model not in boutroux.MODELS:
        raise ValueError(f"unknown model {model!r}")
    base = boutroux.pentagon_seed(t) if model == "pentagon" else boutroux.dehn_seed(t)
    periods = boutroux.periods_pentagon if model == "pentagon" else boutroux.periods_dehn
    logs = []
    for eps in (1 / factor, factor):
        targets = [math.sqrt(eps) * t / 2] * 2
        curve = boutroux.solve(targets, base)
        pd = periods(curve)
        logs.append(math.log(tau_value(model, which, curve, pd).modulus))
    return (logs[1] - logs[0]) / (2 * math.log(factor))


# ---------------------------------------------------------------------------
# ledger

SYMBOLS = ("kappa1", "lambda_P", "lambda", "psi", "W5", "W11")


@dataclass(frozen=True)
class Relation:
    """Linear relation ``sum coefficients[s] * s = 0`` over formal symbols;
    ``psi`` stands for the sum of the psi classes. ``left`` lists the
    symbols printed on the left-hand side."""
    coefficients: tuple
    left: tuple = ("kappa1", "lambda_P", "lambda")

    @classmethod
    def of(cls, mapping, left=("kappa1", "lambda_P", "lambda")):
        return cls(tuple(Fraction(mapping.get(s, 0)) for s in SYMBOLS), left)

    def __getitem__(self, symbol):
        return self.coefficients[SYMBOLS.index(symbol)]

    def __add__(self, other):
        return Relation(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)),
                        self.left)

    def scale(self, factor):
        return Relation(tuple(Fraction(factor) * a for a in self.coefficients), self.left)

    def with_left(self, left):
        return Relation(self.coefficients, tuple(left))

    def normalized(self):
        """Integer coefficients, first nonzero coefficient positive."""
        nonzero = [c for c in self.coefficients if c]
        if not nonzero:
            return self
        lcm = math.lcm(*(c.denominator for c in nonzero))
        gcd = math.gcd(*(int(c * lcm) for c in nonzero))
        sign = 1 if nonzero[0] > 0 else -1
        return self.scale(Fraction(sign * lcm, gcd))

    def __str__(self):
        left, right = [], []
        for s, c in zip(SYMBOLS, self.coefficients):
            if c:
                (left if s in self.left else right).append((s, c if s in self.left else -c))
        return f"{_render(left)} = {_render(right)}"


def _render(terms):
    if not terms:
        return "0"
    out = ""
    for k, (s, c) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        size = abs(c)
        body = s if size == 1 else f"{size} {s}"
        out += (("-" if sign == "-" else "") if k == 0 else f" {sign} ") + body
    return out


def eliminate(first, second, symbol):
    """Combination of two relations free of ``symbol``."""
    a, b = first[symbol], second[symbol]
    if a == 0:
        return first
    if b == 0:
        raise ValueError(f"second relation does not contain {symbol}")
    return (first + second.scale(-a / b)).normalized()


def _rank(relations):
    rows = [list(r.coefficients) for r in relations]
    rank, col = 0, 0
    while rank < len(rows) and col < len(SYMBOLS):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def same_span(left, right):
    return _rank(left) == _rank(right) == _rank(list(left) + list(right))


@dataclass(frozen=True)
class ClassLedger:
    units: dict
    coefficients: dict
    relations: dict


def ledger(measurements):
    """
    Exact class relations from measured units.

    ``measurements`` maps ``"W5"`` and ``"W11"`` to ``(plus units, minus
    units)``. The coefficient of a boundary class is ``units / 144``. The
    input convention ``kappa1 = lambda_P - lambda`` closes the system.
    """
    for key in ("W5", "W11"):
        for u in measurements[key]:
            if int(u) != u:
                raise TauError("non-integer units")
    coefficients = {(w, which): Fraction(int(measurements[w][k]), 144)
                    for w in ("W5", "W11") for k, which in enumerate(("plus", "minus"))}
    class_side = ("lambda", "lambda_P", "psi")
    hodge = Relation.of({"lambda": 1, "psi": Fraction(1, 12),
                         "W5": -coefficients[("W5", "plus")],
                         "W11": -coefficients[("W11", "plus")]}, class_side)
    prym = Relation.of({"lambda_P": 1, "psi": Fraction(1, 12),
                        "W5": -coefficients[("W5", "minus")],
                        "W11": -coefficients[("W11", "minus")]}, class_side)
    kappa_definition = Relation.of({"kappa1": 1, "lambda_P": -1, "lambda": 1})
    difference = eliminate(prym, hodge, "psi")
    kappa = eliminate(difference, kappa_definition, "lambda_P").with_left(("kappa1",))
    mumford = eliminate(prym, hodge, "W5").with_left(("lambda_P", "lambda"))
    return ClassLedger(
        units={w: tuple(int(u) for u in measurements[w]) for w in ("W5", "W11")},
        coefficients=coefficients,
        relations={"hodge": hodge, "prym": prym, "kappa_definition": kappa_definition,
                   "kappa": kappa, "mumford": mumford},
    )


def measure_all(t=2.0, steps=2000):
    """Run both loops and return the monodromy results keyed by
    ``(model, which)``."""
    results = {}
    for model in ("pentagon", "dehn"):
        path = boutroux.continue_loop(model, t, steps)
        for which in ("plus", "minus"):
            results[(model, which)] = track_monodromy(path, which)
    return results
