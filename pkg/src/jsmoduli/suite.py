"""
Acceptance matrix: exact combinatorial suites and numerical monodromies,
evaluated from a :class:`SuiteConfig` into a :class:`SuiteReport`.
"""

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import boutroux, tau
from .cover import build_cover, cover_genus_formula, darboux_check
from .forms import casimir_check, leaf_rank, mk_check
from .moves import dehn_twist, pentagon
from .ribbon import (MAX_ENUMERATION_DARTS, enumerate_graphs, faces, genus,
                     m11_graph, pentavalent_torus_graph, trivalent_counts)

THREADS_VARIABLE = "JSMODULI_THREADS"
RUNTIME_LIMIT = 60.0
DARBOUX_RUNTIME_LIMIT = 300.0
MK_RUNTIME_LIMIT = 60.0


class ConfigError(ValueError):
    pass


@dataclass
class SuiteConfig:
    targets: list = field(default_factory=lambda: [(0, 3), (0, 4), (1, 1), (1, 2)])
    monodromy_tolerance: float = tau.MONODROMY_TOLERANCE
    homogeneity_tolerance: float = 1e-8
    eta_tolerance: float = 1e-6
    scale: float = 2.0
    steps: int = 2000
    output_directory: str = None
    threads: int = None

    def __post_init__(self):
        self.targets = [tuple(int(x) for x in t) for t in self.targets]
        for g, n in self.targets:
            if g < 0 or n < 1 or 2 * g - 2 + n <= 0:
                raise ConfigError(f"(g, n) = ({g}, {n}) is not a stable type")
            edges, _ = trivalent_counts(g, n)
            if 2 * edges > MAX_ENUMERATION_DARTS:
                raise ConfigError(f"(g, n) = ({g}, {n}) exceeds the enumeration bound")
        for name in ("monodromy_tolerance", "homogeneity_tolerance", "eta_tolerance"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if self.scale <= 0 or self.steps < 10:
            raise ConfigError("loop scale must be positive and steps at least 10")
        if self.threads is None:
            self.threads = int(os.environ.get(THREADS_VARIABLE, "1"))
        if self.threads < 1:
            raise ConfigError("threads must be positive")

    @classmethod
    def from_dict(cls, data):
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: dict

    def line(self):
        return f"criterion {self.number} [{'PASS' if self.passed else 'FAIL'}] {self.title}"


@dataclass
class SuiteReport:
    criteria: list

    @property
    def passed(self):
        return all(c.passed for c in self.criteria)

    @property
    def exit_code(self):
        return 0 if self.passed else 1

    def to_dict(self):
        return {"passed": self.passed,
                "criteria": [{"number": c.number, "title": c.title, "passed": c.passed,
                              "detail": c.detail} for c in self.criteria]}


# ---------------------------------------------------------------------------
# graph suite


def suite_graphs(targets):
    """Enumerated trivalent graphs with their ``(g, n)`` plus the hand-built
    five-valent graph."""
    graphs = []
    for g, n in targets:
        graphs.extend(((g, n), graph, True) for graph in enumerate_graphs(g, n))
    extra = pentavalent_torus_graph()
    graphs.append(((genus(extra), len(faces(extra))), extra, False))
    return graphs


def criterion_darboux(targets):
    start = time.perf_counter()
    graphs = suite_graphs(targets)
    failures = [str(graph.vertex_cycles) for _, graph, _ in graphs if not darboux_check(graph)]
    elapsed = time.perf_counter() - start
    return CriterionResult(1, "Darboux form equals the Kontsevich form on the leaf",
                           not failures and elapsed < DARBOUX_RUNTIME_LIMIT,
                           {"graphs": len(graphs), "failures": failures,
                            "seconds": round(elapsed, 3)})


def criterion_mk(targets):
    start = time.perf_counter()
    failures = []
    graphs = suite_graphs(targets)
    for (g, n), graph, trivalent in graphs:
        expected = 6 * g - 6 + 2 * n if trivalent else graph.edge_count - n
        report = mk_check(graph)
        if not (report.holds_mod_perimeters and casimir_check(graph)
                and leaf_rank(graph) == expected):
            failures.append(str(graph.vertex_cycles))
    elapsed = time.perf_counter() - start
    return CriterionResult(2, "bivector inverts the form modulo perimeters",
                           not failures and elapsed < MK_RUNTIME_LIMIT,
                           {"graphs": len(graphs), "failures": failures,
                            "seconds": round(elapsed, 3)})


def criterion_cover_genus(targets):
    failures = []
    graphs = suite_graphs(targets)
    for _, graph, _ in graphs:
        if genus(build_cover(graph).cover_graph) != cover_genus_formula(graph):
            failures.append(str(graph.vertex_cycles))
    return CriterionResult(3, "double cover genus formula", not failures,
                           {"graphs": len(graphs), "failures": failures})


# ---------------------------------------------------------------------------
# moves


def facet_oriented(record):
    return (record.positive and record.a_sign_before != record.a_sign_after
            and record.b_sign_before == record.b_sign_after)


def pentagon_loci(graph):
    """Pairs of edges meeting at exactly one vertex, all three trivalent."""
    vertex = graph.vertex_of()
    ends = [{vertex[d] for d in pair} for pair in graph.edge_pairing]
    valence = graph.valences()
    loci = []
    for e1 in range(graph.edge_count):
        for e2 in range(e1 + 1, graph.edge_count):
            shared = ends[e1] & ends[e2]
            union = ends[e1] | ends[e2]
            if len(shared) == 1 and len(union) == 3 and all(valence[v] == 3 for v in union):
                loci.append((e1, e2))
    return loci


def pentagon_report(targets):
    results = []
    for _, graph, trivalent in suite_graphs(targets):
        if not trivalent:
            continue
        for e1, e2 in pentagon_loci(graph):
            seq = pentagon(graph, e1, e2)
            results.append({
                "graph": [list(c) for c in graph.vertex_cycles],
                "edges": [e1, e2],
                "moves": len(seq.moves),
                "symplectic": bool(seq.symplectic_mod_radical),
                "distinguished_fixed": bool(seq.distinguished_fixed),
                "plus_trivial": bool(seq.plus_trivial),
                "facets_oriented": all(facet_oriented(f) for f in seq.facets),
            })
    passed = bool(results) and all(r["moves"] == 5 and r["symplectic"]
                                   and r["facets_oriented"] for r in results)
    return passed, results


def dehn_report():
    seq = dehn_twist(m11_graph(), 0, 1)
    expected = Fraction(-2)
    residual = seq.minus_radical_part or []
    return {
        "minus_coefficient": str(seq.minus_coefficient),
        "expected_coefficient": str(expected),
        "radical_part": [str(x) for x in residual],
        "plus_coefficient": str(seq.plus_coefficient),
        "symplectic": bool(seq.symplectic_mod_radical),
        "facets_oriented": all(facet_oriented(f) for f in seq.facets),
        "coefficient_matches": seq.minus_coefficient == expected,
    }


def criterion_moves(targets):
    pentagon_ok, pentagons = pentagon_report(targets)
    dehn = dehn_report()
    passed = pentagon_ok and dehn["coefficient_matches"] and dehn["facets_oriented"] \
        and dehn["symplectic"]
    return CriterionResult(4, "pentagon closes symplectically; Dehn twist transvection b - 2a",
                           passed, {"pentagon_passed": pentagon_ok,
                                    "pentagon_loci": len(pentagons),
                                    "pentagon_failures": [p for p in pentagons
                                                          if not (p["moves"] == 5
                                                                  and p["symplectic"]
                                                                  and p["facets_oriented"])],
                                    "dehn": dehn})


# ---------------------------------------------------------------------------
# numerics


def run_loop(model, scale, steps):
    start = time.perf_counter()
    path = boutroux.continue_loop(model, scale, steps)
    elapsed = time.perf_counter() - start
    results = {which: tau.track_monodromy(path, which) for which in ("plus", "minus")}
    return path, results, elapsed


def _monodromy_detail(result):
    return {"raw_increment": result.raw_increment, "units": result.units,
            "residual": result.residual,
            "components": {k: v for k, v in result.component_increments.items()}}


def criterion_loop(number, model, loop, tolerance):
    path, results, elapsed = loop
    expected = {"pentagon": (5, 1, 13), "dehn": (1, 13, 25)}[model]
    walls_ok = path.wall_count == expected[0] and all(w.sign_change for w in path.walls)
    checks = []
    for which, units in zip(("plus", "minus"), expected[1:]):
        raw = results[which].raw_increment
        checks.append(abs(raw - units * tau.UNIT) <= tolerance)
    detail = {"walls": path.wall_count, "closure_error": path.closure_error,
              "omega_monodromy": path.omega_monodromy, "seconds": round(elapsed, 3),
              "plus": _monodromy_detail(results["plus"]),
              "minus": _monodromy_detail(results["minus"])}
    passed = walls_ok and all(checks) and elapsed < RUNTIME_LIMIT
    if model == "pentagon":
        omega = results["minus"].component_increments["omega1"]
        detail["omega1_increment"] = omega
        passed = passed and abs(omega) <= tolerance
    title = {"pentagon": "pentagon monodromy 1 and 13 units",
             "dehn": "Dehn monodromy 13 and 25 units"}[model]
    return CriterionResult(number, title, passed, detail)


def homogeneity_measurements():
    return {f"{m}/{w}": tau.homogeneity_check(m, w)
            for m in ("pentagon", "dehn") for w in ("plus", "minus")}


def criterion_homogeneity(measured, tolerance):
    expected = {f"{m}/{w}": tau.predicted_exponent(m, w)
                for m in ("pentagon", "dehn") for w in ("plus", "minus")}
    checks = {k: abs(measured[k] - float(expected[k])) <= tolerance for k in expected}
    stated_total = measured["pentagon/plus"] + measured["pentagon/minus"]
    checks["pentagon/total"] = abs(stated_total - 2 / 15) <= tolerance
    checks["pentagon/minus_stated"] = abs(measured["pentagon/minus"] - 7 / 60) <= tolerance
    return CriterionResult(7, "homogeneity exponents", all(checks.values()),
                           {"measured": measured,
                            "expected": {k: str(v) for k, v in expected.items()},
                            "checks": checks})


def eta_deviation(path):
    worst = 0.0
    for sample in path.samples:
        ratio = boutroux.eta_identity_ratio(sample.periods, sample.curve)
        worst = max(worst, abs(ratio - 1))
    return worst


def criterion_eta(paths, tolerance):
    deviations = {model: eta_deviation(path) for model, path in paths.items()}
    return CriterionResult(8, "eta identity along both loops",
                           all(d <= tolerance for d in deviations.values()),
                           {"max_deviation": deviations})


def criterion_ledger(loops, tolerance):
    units = {}
    for key, model in (("W5", "pentagon"), ("W11", "dehn")):
        results = loops[model][1]
        if any(results[w].residual > tolerance for w in ("plus", "minus")):
            return CriterionResult(9, "class ledger", False, {"error": "non-integer units"})
        units[key] = (results["plus"].units, results["minus"].units)
    book = tau.ledger(units)
    expected = {
        "hodge": "lambda + 1/12 psi = 1/144 W5 + 13/144 W11",
        "prym": "lambda_P + 1/12 psi = 13/144 W5 + 25/144 W11",
        "kappa": "12 kappa1 = W5 + W11",
        "mumford": "lambda_P - 13 lambda = psi - W11",
    }
    rendered = {k: str(book.relations[k]) for k in expected}
    return CriterionResult(9, "class ledger", rendered == expected,
                           {"units": units, "relations": rendered})


# ---------------------------------------------------------------------------
# runner


def _call(task):
    function, args = task
    return function(*args)


def run_suite(config=None):
    config = config or SuiteConfig()
    tasks = {
        "darboux": (criterion_darboux, (config.targets,)),
        "mk": (criterion_mk, (config.targets,)),
        "cover": (criterion_cover_genus, (config.targets,)),
        "moves": (criterion_moves, (config.targets,)),
        "pentagon": (run_loop, ("pentagon", config.scale, config.steps)),
        "dehn": (run_loop, ("dehn", config.scale, config.steps)),
        "homogeneity": (homogeneity_measurements, ()),
    }
    if config.threads > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            futures = {k: pool.submit(_call, t) for k, t in tasks.items()}
            done = {k: f.result() for k, f in futures.items()}
    else:
        done = {k: _call(t) for k, t in tasks.items()}
    loops = {"pentagon": done["pentagon"], "dehn": done["dehn"]}
    criteria = [
        done["darboux"], done["mk"], done["cover"], done["moves"],
        criterion_loop(5, "pentagon", loops["pentagon"], config.monodromy_tolerance),
        criterion_loop(6, "dehn", loops["dehn"], config.monodromy_tolerance),
        criterion_homogeneity(done["homogeneity"], config.homogeneity_tolerance),
        criterion_eta({m: loops[m][0] for m in loops}, config.eta_tolerance),
        criterion_ledger(loops, config.monodromy_tolerance),
    ]
    report = SuiteReport(criteria)
    report.loops = loops
    return report

