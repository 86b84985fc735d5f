"""
Command-line entry point.

Graph files are JSON objects ``{"darts", "vertex_cycles", "edge_pairing",
"lengths", "labels"}`` with 0-based dart ids; lengths map edge ids to
rationals written ``"p/q"`` (or floats). Every command prints JSON on
stdout. Exit codes: 0 success, 1 failed check or criterion, 2 usage or
input error.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import boutroux, cover, forms, linalg, moves, ribbon, suite, tau

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# graph JSON


def _rational_text(x):
    return linalg.format_fraction(x) if isinstance(x, (int, Fraction)) else repr(float(x))


def _parse_length(value):
    if isinstance(value, bool):
        raise InputError("length must be a number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError:
            try:
                return float(value)
            except ValueError:
                raise InputError(f"bad length {value!r}") from None
    raise InputError(f"bad length {value!r}")


def graph_to_dict(graph, lengths=None):
    data = {"darts": graph.dart_count,
            "vertex_cycles": [list(c) for c in graph.vertex_cycles],
            "edge_pairing": [list(p) for p in graph.edge_pairing]}
    if lengths is not None:
        data["lengths"] = {str(k): _rational_text(l) for k, l in enumerate(lengths)}
    if graph.labels:
        data["labels"] = dict(graph.labels)
    return data


def graph_from_dict(data):
    """Parse a graph object; returns ``(RibbonGraph, lengths or None)``."""
    if not isinstance(data, dict):
        raise InputError("graph JSON must be an object")
    unknown = set(data) - {"darts", "vertex_cycles", "edge_pairing", "lengths", "labels"}
    if unknown:
        raise InputError(f"unknown keys {sorted(unknown)}")
    try:
        darts = data["darts"]
        cycles = data["vertex_cycles"]
        pairs = data["edge_pairing"]
    except KeyError as missing:
        raise InputError(f"missing key {missing}") from None
    if not isinstance(darts, int) or not all(isinstance(c, list) for c in cycles) \
            or not all(isinstance(p, list) for p in pairs):
        raise InputError("darts must be an integer, cycles and pairs lists")
    if not all(isinstance(d, int) for c in cycles + pairs for d in c):
        raise InputError("dart ids must be integers")
    graph = ribbon.RibbonGraph(darts, tuple(tuple(c) for c in cycles),
                               tuple(tuple(p) for p in pairs), data.get("labels"))
    lengths = None
    if "lengths" in data:
        raw = data["lengths"]
        if not isinstance(raw, dict) or sorted(raw, key=str) != sorted(
                (str(k) for k in range(len(pairs))), key=str):
            raise InputError("lengths must map every edge id to a value")
        lengths = tuple(_parse_length(raw[str(k)]) for k in range(len(pairs)))
    return graph, lengths


def load_graph(path):
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as error:
        raise InputError(str(error)) from None
    except json.JSONDecodeError as error:
        raise InputError(f"malformed JSON: {error}") from None
    graph, lengths = graph_from_dict(data)
    report = ribbon.validate(graph)
    if not report.valid:
        raise InputError("; ".join(report.problems))
    return graph, lengths


def _matrix(m):
    return [[linalg.format_fraction(x) for x in row] for row in m]


def _vector(v):
    return [linalg.format_fraction(x) for x in v]


def _emit(data, out=None):
    text = json.dumps(data, indent=2, default=_json_default)
    if out:
        with open(out, "w") as handle:
            handle.write(text + "\n")
    else:
        print(text)


def _json_default(x):
    if isinstance(x, Fraction):
        return linalg.format_fraction(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if hasattr(x, "item"):
        return x.item()
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


# ---------------------------------------------------------------------------
# commands


def cmd_graph(args):
    if args.action == "validate":
        graph_path = _require(args.file, "graph file")
        try:
            with open(graph_path) as handle:
                data = json.load(handle)
        except (OSError, json.JSONDecodeError) as error:
            raise InputError(str(error)) from None
        graph, _ = graph_from_dict(data)
        report = ribbon.validate(graph)
        if report.valid:
            print("valid")
            return EXIT_OK
        _emit({"valid": False, "problems": report.problems})
        return EXIT_FAIL
    if args.action == "enumerate":
        if args.genus is None or args.faces is None:
            raise InputError("--genus and --faces are required")
        valences = "trivalent" if args.trivalent or not args.valences else \
            [int(v) for v in args.valences.split(",")]
        graphs = ribbon.enumerate_graphs(args.genus, args.faces, valences)
        files = []
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            for k, g in enumerate(graphs):
                name = os.path.join(args.out, f"graph_g{args.genus}_n{args.faces}_{k}.json")
                _emit(graph_to_dict(g), name)
                files.append(name)
        _emit({"genus": args.genus, "faces": args.faces, "count": len(graphs),
               "files": files,
               "graphs": [] if args.out else [graph_to_dict(g) for g in graphs]})
        return EXIT_OK
    graph, lengths = load_graph(_require(args.file, "graph file"))
    canonical = ribbon.canonical_form(graph)
    _emit({"code": [list(c) for c in canonical.code],
           "relabeling": {str(k): v for k, v in canonical.relabeling.items()},
           "graph": graph_to_dict(canonical.graph())})
    return EXIT_OK


def cmd_forms(args):
    graph, _ = load_graph(args.file)
    if args.action == "kontsevich":
        form = forms.kontsevich_form(graph)
        _emit({"matrix": _matrix(form.matrix), "leaf_rank": forms.leaf_rank(graph)})
        return EXIT_OK
    if args.action == "bivector":
        _emit({"matrix": _matrix(forms.poisson_bivector(graph).matrix),
               "casimir": forms.casimir_check(graph)})
        return EXIT_OK
    report = forms.mk_check(graph)
    _emit({"holds_exactly": report.holds_exactly,
           "holds_mod_perimeters": report.holds_mod_perimeters,
           "casimir": forms.casimir_check(graph),
           "witness": _matrix(report.witness)})
    return EXIT_OK if report.holds_mod_perimeters else EXIT_FAIL


def cmd_cover(args):
    graph, lengths = load_graph(args.file)
    if args.action == "build":
        dc = cover.build_cover(graph)
        _emit({"cover": graph_to_dict(dc.cover_graph),
               "branch_vertices": list(dc.branch_vertices),
               "cover_genus": ribbon.genus(dc.cover_graph),
               "formula_genus": linalg.format_fraction(cover.cover_genus_formula(graph))})
        return EXIT_OK
    if args.action == "homology":
        h = cover.intersection_matrix(graph)
        sb = cover.symplectic_basis(h)
        data = {"J": _matrix(h.J), "U": _matrix(sb.U),
                "radical": [_vector(v) for v in sb.radical_classes],
                "half_rank": sb.half_rank}
        if lengths is not None:
            coordinates = cover.homological_coordinates(
                ribbon.MetricRibbonGraph(graph, lengths), sb)
            data["A"] = [_rational_text(x) for x in coordinates.A]
            data["B"] = [_rational_text(x) for x in coordinates.B]
            data["perimeters"] = [_rational_text(x) for x in coordinates.p]
        _emit(data)
        return EXIT_OK
    verdict = cover.darboux_check(graph)
    sb = cover.symplectic_basis(cover.intersection_matrix(graph))
    _emit({"darboux": verdict,
           "darboux_form": _matrix(cover.darboux_form(sb, graph.edge_count)),
           "kontsevich_form": _matrix(forms.kontsevich_form(graph).matrix)})
    return EXIT_OK if verdict else EXIT_FAIL


def _sequence_dict(seq):
    data = {"moves": [{"edge": m.moved_edge, "direction": m.direction,
                       "after": graph_to_dict(m.after)} for m in seq.moves],
            "transports": [_matrix(t.matrix) for t in seq.transports],
            "composite": _matrix(seq.composite),
            "closure": {str(k): v for k, v in seq.closure.items()},
            "symplectic_mod_radical": seq.symplectic_mod_radical,
            "distinguished_fixed": seq.distinguished_fixed,
            "facets": [{"shrinking_edge": f.shrinking_edge,
                        "pairing_with_next": linalg.format_fraction(f.pairing_with_next),
                        "oriented": suite.facet_oriented(f)} for f in seq.facets]}
    if seq.plus_composite is not None:
        data["plus_composite"] = _matrix(seq.plus_composite)
    if seq.plus_trivial is not None:
        data["plus_trivial"] = seq.plus_trivial
    if seq.minus_coefficient is not None:
        data["minus_coefficient"] = linalg.format_fraction(seq.minus_coefficient)
        data["minus_radical_part"] = _vector(seq.minus_radical_part)
    if seq.plus_coefficient is not None:
        data["plus_coefficient"] = linalg.format_fraction(seq.plus_coefficient)
    return data


def cmd_moves(args):
    graph, _ = load_graph(args.file)
    if args.edge is None:
        raise InputError("--edge is required")
    if args.action == "whitehead":
        move = moves.whitehead(graph, args.edge, args.direction)
        transport = moves.transport_basis(move)
        verdict = moves.orientation_check(move, transport)
        _emit({"after": graph_to_dict(move.after), "transport": _matrix(transport.matrix),
               "intertwines": moves.intertwines(move, transport),
               "orientation_check": verdict})
        return EXIT_OK
    if args.edge2 is None:
        raise InputError("--edge2 is required")
    if args.action == "pentagon":
        seq = moves.pentagon(graph, args.edge, args.edge2)
        ok = len(seq.moves) == 5 and seq.symplectic_mod_radical
    else:
        seq = moves.dehn_twist(graph, args.edge, args.edge2)
        ok = seq.symplectic_mod_radical and seq.distinguished_fixed
    _emit(_sequence_dict(seq))
    return EXIT_OK if ok and all(suite.facet_oriented(f) for f in seq.facets) else EXIT_FAIL


def cmd_boutroux(args):
    path = boutroux.continue_loop(args.model, args.t, args.steps)
    data = boutroux.path_to_dict(path)
    if args.out:
        _emit(data, args.out)
        _emit({"model": path.model, "samples": len(path.samples), "walls": path.wall_count,
               "closure_error": path.closure_error, "omega_monodromy": path.omega_monodromy,
               "out": args.out})
    else:
        _emit(data)
    return EXIT_OK


def _monodromy_dict(result):
    return {"model": result.model, "which": result.which,
            "raw_increment": result.raw_increment, "units": result.units,
            "residual": result.residual, "components": result.component_increments}


def _ledger_dict(book):
    return {"units": {k: list(v) for k, v in book.units.items()},
            "coefficients": {f"{w}/{which}": linalg.format_fraction(c)
                             for (w, which), c in book.coefficients.items()},
            "relations": {k: str(r) for k, r in book.relations.items()}}


def cmd_tau(args):
    if args.action == "monodromy":
        try:
            with open(_require(args.path, "--path")) as handle:
                path = boutroux.path_from_dict(json.load(handle))
        except (OSError, json.JSONDecodeError, KeyError) as error:
            raise InputError(f"bad path file: {error}") from None
        result = tau.track_monodromy(path, args.which)
        _emit(_monodromy_dict(result))
        return EXIT_OK if result.residual < tau.MONODROMY_TOLERANCE else EXIT_FAIL
    if args.action == "homogeneity":
        model = _require(args.model, "--model")
        out = {}
        for which in ("plus", "minus"):
            measured = tau.homogeneity_check(model, which)
            out[which] = {"measured": measured,
                          "expected": linalg.format_fraction(tau.predicted_exponent(model, which))}
        _emit({"model": model, "exponents": out})
        return EXIT_OK
    if args.auto:
        results = tau.measure_all(args.t, args.steps)
        units = {"W5": (results[("pentagon", "plus")].units,
                        results[("pentagon", "minus")].units),
                 "W11": (results[("dehn", "plus")].units, results[("dehn", "minus")].units)}
        measured = [_monodromy_dict(r) for r in results.values()]
    elif args.units:
        values = [int(u) for u in args.units.split(",")]
        if len(values) != 4:
            raise InputError("--units needs four integers")
        units = {"W5": tuple(values[:2]), "W11": tuple(values[2:])}
        measured = []
    else:
        raise InputError("ledger needs --auto or --units")
    data = _ledger_dict(tau.ledger(units))
    data["measurements"] = measured
    _emit(data)
    return EXIT_OK


def cmd_run_suite(args):
    try:
        data = {}
        if args.config:
            with open(args.config) as handle:
                data = json.load(handle)
        config = suite.SuiteConfig.from_dict(data)
    except (OSError, json.JSONDecodeError, TypeError, suite.ConfigError) as error:
        raise InputError(f"bad config: {error}") from None
    report = suite.run_suite(config)
    for criterion in report.criteria:
        print(criterion.line(), file=sys.stderr)
    payload = report.to_dict()
    if config.output_directory:
        os.makedirs(config.output_directory, exist_ok=True)
        _emit(payload, os.path.join(config.output_directory, "suite_report.json"))
    _emit(payload)
    return report.exit_code


def _require(value, name):
    if value is None:
        raise InputError(f"{name} is required")
    return value


# ---------------------------------------------------------------------------
# parser


def build_parser():
    parser = argparse.ArgumentParser(prog="jsmoduli")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph")
    g.add_argument("action", choices=["validate", "enumerate", "canon"])
    g.add_argument("file", nargs="?")
    g.add_argument("--genus", type=int)
    g.add_argument("--faces", type=int)
    g.add_argument("--trivalent", action="store_true")
    g.add_argument("--valences", help="comma-separated vertex valences")
    g.add_argument("--out", help="directory for one JSON file per graph")
    g.set_defaults(handler=cmd_graph)

    f = sub.add_parser("forms")
    f.add_argument("action", choices=["kontsevich", "bivector", "mk-check"])
    f.add_argument("file")
    f.set_defaults(handler=cmd_forms)

    c = sub.add_parser("cover")
    c.add_argument("action", choices=["build", "homology", "darboux"])
    c.add_argument("file")
    c.set_defaults(handler=cmd_cover)

    m = sub.add_parser("moves")
    m.add_argument("action", choices=["whitehead", "pentagon", "dehn"])
    m.add_argument("file")
    m.add_argument("--edge", type=int)
    m.add_argument("--edge2", type=int)
    m.add_argument("--direction", type=int, choices=[1, -1], default=1)
    m.set_defaults(handler=cmd_moves)

    b = sub.add_parser("boutroux")
    b.add_argument("action", choices=["loop"])
    b.add_argument("--model", choices=["pentagon", "dehn"], required=True)
    b.add_argument("--t", type=float, default=2.0)
    b.add_argument("--steps", type=int, default=2000)
    b.add_argument("--out")
    b.set_defaults(handler=cmd_boutroux)

    t = sub.add_parser("tau")
    t.add_argument("action", choices=["monodromy", "homogeneity", "ledger"])
    t.add_argument("--path")
    t.add_argument("--which", choices=["plus", "minus"], default="plus")
    t.add_argument("--model", choices=["pentagon", "dehn"])
    t.add_argument("--auto", action="store_true")
    t.add_argument("--units", help="W5 plus, W5 minus, W11 plus, W11 minus")
    t.add_argument("--t", type=float, default=2.0)
    t.add_argument("--steps", type=int, default=2000)
    t.set_defaults(handler=cmd_tau)

    r = sub.add_parser("run-suite")
    r.add_argument("--config")
    r.set_defaults(handler=cmd_run_suite)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (InputError, ribbon.RibbonGraphError, ValueError) as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_USAGE
