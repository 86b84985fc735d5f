import cmath
import itertools
import math
import random
from fractions import Fraction

import pytest

from jsmoduli import boutroux as B
from jsmoduli import tau as T


def _random_on_locus(model, count, seed=7):
    rng = random.Random(seed)
    start = B.pentagon_seed() if model == "pentagon" else B.dehn_seed()
    curves = []
    for _ in range(count):
        targets = [rng.uniform(0.4, 1.6), rng.uniform(0.4, 1.6)]
        curves.append(B.solve(targets, start))
    return curves


def test_real_ordered_pentagon_args():
    value = T.tau_plus_pentagon(B.PentagonCurve(-1.0 + 0j, 0.25 + 0j, 0.75 + 0j))
    assert [a for _, _, a in value.components.values()] == [math.pi] * 3
    assert abs(value.arg - math.pi / 12) < 1e-15


@pytest.mark.parametrize("factor", [2.0, 0.3, 1.7j, -0.5 + 0.4j])
def test_pentagon_plus_scaling(factor):
    curve = B.PentagonCurve(0.8 - 0.3j, -0.1 + 0.9j, -0.7 - 0.6j)
    ratio = T.tau_plus_pentagon(curve.scaled(factor)).modulus / T.tau_plus_pentagon(curve).modulus
    assert abs(ratio / abs(factor) ** (3 / 36) - 1) < 1e-14


@pytest.mark.parametrize("rho", [0.7, 1.3 * cmath.exp(0.4j)])
def test_equianharmonic_plus_modulus(rho):
    curve = B.PentagonCurve(*(rho * cmath.exp(2j * math.pi * k / 3) for k in range(3)))
    expected = abs(3 * math.sqrt(3) * rho ** 3) ** (1 / 36)
    assert abs(T.tau_plus_pentagon(curve).modulus - expected) < 1e-14


def test_dehn_plus_at_opposite_points():
    assert abs(T.tau_plus_dehn(B.DehnCurve(1 + 0j, -1 + 0j)).modulus - 2 ** (1 / 36)) < 1e-15


@pytest.mark.parametrize("factor", [2.0, 0.3j, -1.1 + 0.2j])
def test_dehn_plus_scaling(factor):
    curve = B.DehnCurve(0.4 + 0.2j, -0.9 + 0.1j)
    ratio = T.tau_plus_dehn(curve.scaled(factor)).modulus / T.tau_plus_dehn(curve).modulus
    assert abs(ratio / abs(factor) ** (7 / 36) - 1) < 1e-14


def test_dehn_plus_arg_is_sum_of_factor_args():
    x1, x2 = 0.4 + 0.2j, -0.9 + 0.1j
    value = T.tau_plus_dehn(B.DehnCurve(x1, x2))
    expected = (cmath.phase(x1) + cmath.phase(x2)) / 12 + cmath.phase(x1 - x2) / 36
    assert abs(value.arg - expected) < 1e-15


def test_vanishing_factor_is_an_error():
    with pytest.raises(T.TauError):
        T.tau_plus_dehn(B.DehnCurve(0j, 1 + 0j))


def _identity_defect(model, curve, periods, plus=None, minus=None):
    plus = plus or T.tau_value(model, "plus", curve)
    minus = minus or T.tau_value(model, "minus", curve, periods)
    correction = curve.x1 * curve.x2 if model == "dehn" else 1
    return abs(minus.value * correction / (periods.omega1 * plus.value ** 13) - 1)


@pytest.mark.parametrize("model", ["pentagon", "dehn"])
def test_minus_plus_identity_at_random_points(model):
    periods = B.periods_pentagon if model == "pentagon" else B.periods_dehn
    for curve in _random_on_locus(model, 100):
        assert _identity_defect(model, curve, periods(curve)) < 1e-12


@pytest.mark.parametrize("model", ["pentagon", "dehn"])
def test_minus_plus_identity_along_loop(loops, model):
    path = loops[model]
    plus, minus = T.tau_along_path(path, "plus"), T.tau_along_path(path, "minus")
    cells = [s for s in path.samples if s.kind == "cell"]
    assert len(plus) == len(minus) == len(cells)
    for p, m, s in zip(plus, minus, cells):
        assert _identity_defect(model, s.curve, s.periods, p, m) < 1e-10


@pytest.mark.parametrize("model, plus_units, minus_units", [
    ("pentagon", 1, 13), ("dehn", 13, 25)])
def test_loop_monodromy_units(loops, model, plus_units, minus_units):
    path = loops[model]
    plus, minus = T.track_monodromy(path, "plus"), T.track_monodromy(path, "minus")
    assert (plus.units, minus.units) == (plus_units, minus_units)
    assert plus.residual < T.MONODROMY_TOLERANCE and minus.residual < T.MONODROMY_TOLERANCE
    assert abs(minus.component_increments["omega1"]) < 1e-3


@pytest.mark.parametrize("model, units", [("pentagon", (1, 13)), ("dehn", (13, 25))])
def test_monodromy_is_resolution_independent(model, units):
    # per-factor phase steps are exact, so the residual is at roundoff level
    # for every resolution that keeps the steps below pi
    for steps in (100, 250):
        path = B.continue_loop(model, 2.0, steps=steps)
        results = [T.track_monodromy(path, which) for which in ("plus", "minus")]
        assert tuple(r.units for r in results) == units
        assert all(r.residual < 1e-9 for r in results)


def test_reversed_loop_negates_units():
    path = B.continue_loop("pentagon", 2.0, steps=150, orientation=-1)
    assert [T.track_monodromy(path, w).units for w in ("plus", "minus")] == [-1, -13]


def test_unknown_tau_is_rejected(loops):
    with pytest.raises(ValueError):
        T.tau_along_path(loops["dehn"], "middle")


def test_kappa_values():
    assert T.kappa_plus(T.PENTAGON_DIVISOR) == Fraction(1, 60)
    assert T.kappa_minus(T.PENTAGON_DIVISOR) == Fraction(7, 60)
    assert T.kappa_plus(T.PENTAGON_DIVISOR) + T.kappa_minus(T.PENTAGON_DIVISOR) == Fraction(2, 15)
    assert T.kappa_plus(T.DEHN_DIVISOR) == Fraction(7, 36)
    assert T.kappa_minus(T.DEHN_DIVISOR) == Fraction(1, 36)


@pytest.mark.parametrize("model, which", list(itertools.product(["pentagon", "dehn"], ["plus", "minus"])))
def test_homogeneity_matches_closed_form(model, which):
    measured = T.homogeneity_check(model, which)
    assert abs(measured - float(T.predicted_exponent(model, which))) < 1e-8


def test_pentagon_total_homogeneity():
    total = T.homogeneity_check("pentagon", "plus") + T.homogeneity_check("pentagon", "minus")
    assert abs(total - 2 / 15) < 1e-8


def test_ledger_relations():
    L = T.ledger({"W5": (1, 13), "W11": (13, 25)})
    rel = L.relations
    assert str(rel["hodge"]) == "lambda + 1/12 psi = 1/144 W5 + 13/144 W11"
    assert str(rel["prym"]) == "lambda_P + 1/12 psi = 13/144 W5 + 25/144 W11"
    assert str(rel["kappa"]) == "12 kappa1 = W5 + W11"
    assert str(rel["mumford"]) == "lambda_P - 13 lambda = psi - W11"
    assert L.coefficients[("W11", "minus")] == Fraction(25, 144)


def test_ledger_span_is_independent_of_elimination_order():
    rel = T.ledger({"W5": (1, 13), "W11": (13, 25)}).relations
    reference = [rel["hodge"], rel["prym"], rel["kappa_definition"]]
    for a, b in itertools.combinations(["hodge", "prym", "kappa", "mumford"], 2):
        assert T.same_span([rel[a], rel[b], rel["kappa_definition"]], reference)


def test_ledger_rejects_non_integer_units():
    with pytest.raises(T.TauError):
        T.ledger({"W5": (1.5, 13), "W11": (13, 25)})
