import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from jsmoduli import boutroux as B
from jsmoduli.quadrature import segment_integral

PENTAGON = B.MODELS["pentagon"]
DEHN = B.MODELS["dehn"]


@pytest.mark.parametrize("a, b, c", [
    (-1 + 0.2j, 0.7 - 0.1j, 0.3 + 0.9j),
    (0.5j, 2.0 + 0j, -1.5 - 0.3j),
    (-0.2 - 0.1j, 0.1 + 0.05j, 0.05 + 0.2j),
])
@pytest.mark.parametrize("power", [1, -1])
def test_segment_integral_matches_substitution_oracle(a, b, c, power):
    expected = oracles.segment_integral_by_substitution(a, b, [c], power)
    assert abs(segment_integral(a, b, [c], power) - expected) < 1e-11 * max(1, abs(expected))


def test_dehn_omega_matches_oracle_in_root_plane():
    curve = B.dehn_seed()
    z = DEHN.state(curve)
    points = DEHN.points(z)
    for edge in DEHN.start_edges:
        others = [points[q] for q in (1, -1, 2, -2) if q not in edge]
        raw = oracles.segment_integral_by_substitution(points[edge[0]], points[edge[1]],
                                                       others, -1, weight=lambda w: 2)
        assert abs(DEHN.omega(z, edge) - 2 * B.OMEGA_NORMALIZATION * raw) < 1e-11


def test_equianharmonic_periods_have_equal_modulus():
    curve = B.PentagonCurve(*(0.7 * cmath.exp(2j * math.pi * k / 3) for k in range(3)))
    z = PENTAGON.state(curve)
    pa, pb = (PENTAGON.period(z, e) for e in ((0, 1), (1, 2)))
    assert abs(abs(pa) - abs(pb)) < 1e-13


def test_degenerate_limit_of_pentagon_periods():
    x1 = -1.0 + 0.3j
    finite, divergent = [], []
    for eps in (1e-3, 1e-4, 1e-5):
        x2, x3 = 0.5 + eps * (1 + 1j), 0.5 - eps * (1 + 1j)
        shift = (x1 + x2 + x3) / 3
        z = PENTAGON.state(B.PentagonCurve(x1 - shift, x2 - shift, x3 - shift))
        finite.append(PENTAGON.omega(z, (1, 2)))
        divergent.append(PENTAGON.omega(z, (0, 1)))
    # the short cycle tends to the residue integral around the double point
    limit = 2 ** (1 / 3) * math.pi / math.sqrt(abs(0.5 - x1))
    errors = [abs(abs(w) - limit) for w in finite]
    assert errors[-1] < 1e-4 and errors[0] > 5 * errors[1] > 25 * errors[2]
    # the long cycle grows like log(1/eps) with the local coefficient
    coefficient = 2 ** (1 / 3) / math.sqrt(abs(0.5 - x1))
    steps = [abs(divergent[k + 1] - divergent[k]) for k in range(2)]
    for step in steps:
        assert abs(step / (coefficient * math.log(10)) - 1) < 1e-3


@pytest.mark.parametrize("ratio", [0.3 + 1.1j, -0.45 + 0.9j, 0.5 + 0.8660254j, 2.0j])
def test_eta_product_matches_pentagonal_series(ratio):
    expected = oracles.eta_pentagonal(ratio) ** 24
    assert abs(B.eta24(ratio) / expected - 1) < 1e-12


def _oracle_eta_ratio(omega1, omega2, discriminant):
    if (omega2 / omega1).imag < 0:
        omega2 = -omega2
    w1, w2 = B._reduce_basis(omega1, omega2)
    return oracles.eta_pentagonal(w2 / w1) ** 24 * (2 * math.pi) ** 12 / (w1 ** 12 * discriminant)


def test_eta_identity_at_pentagon_seed_with_oracle_periods():
    curve = B.pentagon_seed()
    x = curve.roots
    omegas = [2 * B.OMEGA_NORMALIZATION * oracles.segment_integral_by_substitution(
        x[i], x[j], [x[3 - i - j]]) for i, j in ((0, 1), (1, 2))]
    ratio = _oracle_eta_ratio(omegas[0], omegas[1], curve.discriminant())
    assert abs(ratio - 1) < 1e-8


def test_eta_identity_at_dehn_seed():
    curve = B.dehn_seed()
    periods = B.periods_dehn(curve)
    ratio = _oracle_eta_ratio(periods.omega1, periods.omega2, curve.discriminant())
    assert abs(ratio - 1) < 1e-8
    assert abs(B.eta_identity_ratio(periods, curve) - 1) < 1e-8


def test_conjugate_dehn_point_has_real_or_imaginary_periods():
    for angle in (0.3, 1.0, 2.0):
        x1 = cmath.exp(1j * angle)
        z = DEHN.state(B.DehnCurve(x1, x1.conjugate()))
        for edge in DEHN.start_edges:
            value = DEHN.period(z, edge)
            assert min(abs(value.real), abs(value.imag)) < 1e-12 * abs(value)


def test_real_dehn_point_residual_is_real():
    residual = B.boutroux_residual(B.DehnCurve(0.5, -0.7))
    assert residual.dtype.kind == "f" and np.all(np.isfinite(residual))


@pytest.mark.parametrize("seed", [B.pentagon_seed, B.dehn_seed])
def test_seed_is_on_locus_and_symmetric(seed):
    curve = seed()
    assert np.max(np.abs(B.boutroux_residual(curve))) < 1e-12
    if isinstance(curve, B.PentagonCurve):
        x = curve.roots
        assert abs(abs(x[0] - x[1]) - abs(x[1] - x[2])) < 1e-12


def test_off_locus_point_has_residual():
    assert np.max(np.abs(B.boutroux_residual(B.PentagonCurve.from_pair(1 + 0.3j, -0.2 + 0.9j)))) > 1e-3


@pytest.mark.parametrize("seed, targets", [
    (B.pentagon_seed, [0.7, 1.4]), (B.dehn_seed, [1.3, 0.6])])
def test_solve_reaches_targets_on_locus(seed, targets):
    curve = B.solve(targets, seed())
    model = B._model_of(curve)
    z = model.state(curve)
    values = [model.period(z, e) for e in model.start_edges]
    assert max(abs(v.imag) for v in values) < 1e-12 * max(targets)
    # a Dehn curve determines r2 only up to sign, which exchanges the edges
    lengths = sorted(abs(v.real) for v in values)
    assert max(abs(a - b) for a, b in zip(lengths, sorted(targets))) < 1e-11 * max(targets)


@pytest.mark.parametrize("seed, exponent", [(B.pentagon_seed, 0.4), (B.dehn_seed, 1.0)])
def test_solve_is_homogeneous(seed, exponent):
    base = B.solve([0.8, 1.1], seed())
    for factor in (0.5, 3.0):
        scaled = B.solve([0.8 * factor, 1.1 * factor], base.scaled(factor ** exponent))
        model = B._model_of(base)
        expected = factor ** exponent * model.state(base)
        assert np.max(np.abs(model.state(scaled) - expected)) < 1e-8


def test_quadrature_orders_agree_near_a_wall(loops):
    path = loops["pentagon"]
    sample = path.samples[path.walls[2].sample]
    z = PENTAGON.state(sample.curve)
    for edge in ((0, 1), (1, 2), (0, 2)):
        low, high = PENTAGON.omega(z, edge, order=24), PENTAGON.omega(z, edge, order=48)
        assert abs(low - high) < 1e-10 * abs(high)


@pytest.mark.parametrize("model, walls, monodromy", [
    ("pentagon", 5, [[1, 0], [1, 1]]), ("dehn", 1, [[1, 0], [2, 1]])])
def test_loop_is_certified(loops, model, walls, monodromy):
    path = loops[model]
    assert path.wall_count == walls
    assert path.closure_error < 1e-9
    assert path.lattice_error < B.LATTICE_TOLERANCE
    assert path.omega_monodromy == monodromy
    assert all(w.sign_change for w in path.walls)
    # the loop returns to the starting configuration as an unordered set
    first, last = path.samples[0].curve.roots, path.samples[-1].curve.roots
    assert max(min(abs(p - q) for q in last) for p in first) < 1e-9


@pytest.mark.parametrize("model", ["pentagon", "dehn"])
def test_loop_cells_stay_on_locus(loops, model):
    path = loops[model]
    cells = path.cell_samples()
    for sample in cells[::10]:
        edges = path.cell_edges[sample.cell]
        assert np.max(np.abs(B.boutroux_residual(sample.curve, edges))) < 1e-10
        assert abs((sample.periods.Pa + sample.periods.Pb).real / 2 - path.scale) < 1e-9


@pytest.mark.parametrize("model", ["pentagon", "dehn"])
def test_eta_identity_along_loop(loops, model):
    path = loops[model]
    worst = max(abs(B.eta_identity_ratio(s.periods, s.curve) - 1) for s in path.samples[::5])
    assert worst < 1e-6


@pytest.mark.parametrize("model, walls", [("pentagon", 5), ("dehn", 1)])
@pytest.mark.parametrize("t", [0.1, 1.0])
def test_wall_count_is_independent_of_radius(model, walls, t):
    path = B.continue_loop(model, t, steps=200)
    assert path.wall_count == walls
    assert path.closure_error < 1e-9


def test_path_json_round_trip(loops):
    path = loops["dehn"]
    data = json.loads(json.dumps(B.path_to_dict(path)))
    restored = B.path_from_dict(data)
    assert restored.wall_count == path.wall_count
    assert restored.omega_monodromy == path.omega_monodromy
    assert len(restored.samples) == len(path.samples)
    for a, b in zip(restored.samples[::50], path.samples[::50]):
        assert a.curve.roots == b.curve.roots
        assert a.periods.omega1 == b.periods.omega1


def test_unknown_model_is_rejected():
    with pytest.raises(ValueError):
        B.path_from_dict({"model": "octagon"})


@settings(max_examples=15, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.3, 3.0))
def test_solve_hits_random_targets(a, b):
    curve = B.solve([a, b], B.pentagon_seed(a + b))
    assert np.max(np.abs(B.boutroux_residual(curve))) < 1e-10
