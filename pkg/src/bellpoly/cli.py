"""Command-line front end.

Reports are canonical JSON: two-space indent, sorted keys, trailing newline.
Exact quantities appear as "num/den" strings; floating-point quantities are
objects {"value": ..., "precision": ...} so the printed digits carry their
own error bar. Exit codes: 0 success, 2 malformed input, 3 enumeration
budget exceeded, 4 internal cross-check failure (a computed certificate
contradicted an exact recomputation; deliberately loud).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .chsh import (WeightedCHSH, canonicalize, face_condition,
                   qubit_value_estimate, sigma_lambda_certificate)
from .cut import (CutInequality, Graph, NCBehaviour, ce1_inequalities,
                  ce_gap_certificate, ce_gap_report, cut_facet_test,
                  enumerate_cuts, hypermetric_valid,
                  pentagonal_contextuality_inequality, suspension)
from .errors import BudgetExceededError, ParseError, VerificationError
from .games import (NLCSpec, LinearGame, UniqueGame3, build_nlc,
                    to_bell_inequality, to_correlator_inequality)
from .rational import format_rational, parse_rational
from .scenario import BellInequality, Scenario, correlator_inequality
from .tightness import (DEFAULT_BOX_BUDGET, facet_test, nlc2_decompose,
                        nlcd_lambda, nlcd_nonfacet_check)
from .values import DEFAULT_STRATEGY_BUDGET, value_report


def canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _float_field(value: float, precision: float) -> dict:
    return {"value": float(value), "precision": float(precision)}


def _line_of(raw: str, needle: str) -> int:
    for i, line in enumerate(raw.splitlines(), start=1):
        if needle in line:
            return i
    return 1


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def _load_json(raw: str) -> dict:
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", line=1)
    return data


def _rat(value, raw: str, what: str) -> Fraction:
    try:
        return parse_rational(value, where=what)
    except ParseError as e:
        raise ParseError(str(e), line=_line_of(raw, str(value))) from None


def _need(data, key, raw):
    if key not in data:
        raise ParseError(f"missing key {key!r}", line=1)
    return data[key]


def _int_at(value, raw, what) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{what} must be an integer", line=_line_of(raw, str(value)))
    return value


def _table(data, key, raw, rows, cols, convert):
    t = _need(data, key, raw)
    if not isinstance(t, list) or len(t) != rows \
            or any(not isinstance(r, list) or len(r) != cols for r in t):
        raise ParseError(f"{key!r} must be a {rows} x {cols} table",
                         line=_line_of(raw, f'"{key}"'))
    return tuple(tuple(convert(v) for v in r) for r in t)


def parse_game_text(raw: str):
    data = _load_json(raw)
    kind = _need(data, "kind", raw)
    if kind == "linear":
        d = _int_at(_need(data, "d", raw), raw, "d")
        ma = _int_at(_need(data, "mA", raw), raw, "mA")
        mb = _int_at(_need(data, "mB", raw), raw, "mB")
        q = _table(data, "q", raw, ma, mb, lambda v: _rat(v, raw, "weight"))
        f = _table(data, "f", raw, ma, mb, lambda v: _int_at(v, raw, "f entry"))
        for row in f:
            for v in row:
                if not 0 <= v < d:
                    raise ParseError(f"f entry {v} outside Z_{d}",
                                     line=_line_of(raw, str(v)))
        try:
            return LinearGame(d, ma, mb, q, f, n=data.get("n", 1))
        except ValueError as e:
            raise ParseError(str(e), line=1) from None
    if kind == "unique3":
        ma = _int_at(_need(data, "mA", raw), raw, "mA")
        mb = _int_at(_need(data, "mB", raw), raw, "mB")
        q = _table(data, "q", raw, ma, mb, lambda v: _rat(v, raw, "weight"))
        perms = _table(data, "perms", raw, ma, mb, str)
        try:
            return UniqueGame3(ma, mb, q, perms)
        except ValueError as e:
            raise ParseError(str(e), line=_line_of(raw, '"perms"')) from None
    if kind == "nlc":
        d = _int_at(_need(data, "d", raw), raw, "d")
        sub = _need(data, "nlc", raw)
        if not isinstance(sub, dict):
            raise ParseError('"nlc" must be an object', line=_line_of(raw, '"nlc"'))
        n = _int_at(_need(sub, "n", raw), raw, "n")
        g = [_int_at(v, raw, "g entry") for v in _need(sub, "g", raw)]
        p = [_rat(v, raw, "probability") for v in _need(sub, "p", raw)]
        try:
            return build_nlc(NLCSpec(d, n, tuple(g), tuple(p)))
        except ValueError as e:
            raise ParseError(str(e), line=_line_of(raw, '"nlc"')) from None
    raise ParseError(f"unknown game kind {kind!r}", line=_line_of(raw, '"kind"'))


def serialize_game(g) -> str:
    if isinstance(g, UniqueGame3):
        data = {"kind": "unique3", "d": 3, "mA": g.ma, "mB": g.mb,
                "q": [[format_rational(v) for v in row] for row in g.q],
                "perms": [list(row) for row in g.perms]}
    elif g.nlc is not None:
        data = {"kind": "nlc", "d": g.d,
                "nlc": {"n": g.nlc.n, "g": list(g.nlc.g),
                        "p": [format_rational(v) for v in g.nlc.p]}}
    else:
        data = {"kind": "linear", "d": g.d, "mA": g.ma, "mB": g.mb,
                "q": [[format_rational(v) for v in row] for row in g.q],
                "f": [list(row) for row in g.f]}
        if g.n != 1:
            data["n"] = g.n
    return canonical_json(data)


def parse_graph_text(raw: str) -> Graph:
    lines = raw.splitlines()
    if not lines:
        raise ParseError("empty graph file", line=1)
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ParseError("first line must be the vertex count", line=1) from None
    edges = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("edge lines read 'i j'", line=ln)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("edge endpoints must be integers", line=ln) from None
        edges.append((i, j))
    try:
        return Graph(n, edges)
    except ValueError as e:
        raise ParseError(str(e), line=1) from None


def serialize_graph(g: Graph) -> str:
    return "\n".join([str(g.n)] + [f"{i} {j}" for i, j in g.sorted_edges]) + "\n"


def parse_inequality_text(raw: str):
    data = _load_json(raw)
    space = _need(data, "space", raw)
    bound = _rat(_need(data, "bound", raw), raw, "bound")
    coeffs = _need(data, "coeffs", raw)
    if space == "probability":
        try:
            ma, mb = len(coeffs), len(coeffs[0])
            da, db = len(coeffs[0][0]), len(coeffs[0][0][0])
            table = tuple(
                tuple(tuple(tuple(_rat(v, raw, "coefficient") for v in cell)
                            for cell in row) for row in block)
                for block in coeffs)
            return BellInequality(Scenario(ma, mb, da, db), table, bound)
        except (TypeError, IndexError):
            raise ParseError("probability coeffs must be nested [x][y][a][b]",
                             line=_line_of(raw, '"coeffs"')) from None
    if space == "correlator":
        try:
            ma, mb = len(coeffs), len(coeffs[0])
            corr = tuple(tuple(_rat(v, raw, "coefficient") for v in row)
                         for row in coeffs)
            return correlator_inequality(Scenario(ma, mb, 2, 2), corr, bound)
        except (TypeError, IndexError):
            raise ParseError("correlator coeffs must be nested [x][y]",
                             line=_line_of(raw, '"coeffs"')) from None
    if space == "cut":
        n = _int_at(_need(data, "n", raw), raw, "n")
        try:
            table = {(e[0], e[1]): _rat(e[2], raw, "coefficient") for e in coeffs}
        except (TypeError, IndexError):
            raise ParseError("cut coeffs must be [i, j, value] triples",
                             line=_line_of(raw, '"coeffs"')) from None
        return CutInequality.cut_space(n, table, bound)
    raise ParseError(f"unknown space {space!r}", line=_line_of(raw, '"space"'))


def serialize_inequality(ineq) -> str:
    if isinstance(ineq, CutInequality):
        data = {"space": "cut", "n": ineq.n,
                "coeffs": [[i, j, format_rational(c)]
                           for (i, j), c in sorted(ineq.edge_coeffs.items())],
                "bound": format_rational(ineq.bound)}
    elif ineq.space == "correlator":
        data = {"space": "correlator",
                "coeffs": [[format_rational(v) for v in row] for row in ineq.corr],
                "bound": format_rational(ineq.bound)}
    else:
        data = {"space": "probability",
                "coeffs": [[[[format_rational(v) for v in cell] for cell in row]
                            for row in block] for block in ineq.coeffs],
                "bound": format_rational(ineq.bound)}
    return canonical_json(data)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _scenario_dict(g):
    s = g.scenario
    return {"mA": s.ma, "mB": s.mb, "dA": s.da, "dB": s.db}


def _cmd_analyze_game(args):
    raw = open(args.path, "rb").read()
    g = parse_game_text(raw.decode())
    rep = value_report(g, with_sufficient=args.sufficient,
                       budget=args.budget, workers=args.workers)
    everything = not (args.classical or args.bound or args.sufficient)
    results = {"kind": "unique3" if isinstance(g, UniqueGame3) else "linear",
               "scenario": _scenario_dict(g),
               "total_weight": format_rational(rep.no_signaling),
               "soundness": "verified"}
    if args.classical or everything:
        results["classical_value"] = format_rational(rep.classical)
        results["witness"] = {"a_map": list(rep.witness[0]),
                              "b_map": list(rep.witness[1])}
        results["no_signaling_value"] = format_rational(rep.no_signaling)
    if args.bound or everything:
        results["quantum_upper_bound"] = _float_field(rep.quantum_upper_bound,
                                                      rep.bound_error)
        if isinstance(g, UniqueGame3):
            from .values import norm_bound_unique3_report
            u = norm_bound_unique3_report(g)
            results["bound_certified"] = u.certified
            results["bound_converged"] = u.converged
            results["joint_norms"] = [_float_field(v, 1e-9) for v in u.joint_norms]
    if args.sufficient and rep.no_advantage is not None:
        v = rep.no_advantage
        results["no_advantage"] = {
            "verdict": "Holds" if v.holds else "Inconclusive",
            "strategy": None if v.strategy is None else
                        {"a_map": list(v.strategy[0]), "b_map": list(v.strategy[1])},
            "reason": v.reason,
        }
    return results, _digest(raw)


def _facet_report_dict(rep, extra=None):
    out = {"polytope": rep.polytope_kind,
           "ambient_dim": rep.ambient_dim,
           "saturating_count": rep.saturating_count,
           "saturating_affine_dim": rep.saturating_affine_dim,
           "is_facet": rep.is_facet,
           "trivial_facet_class": rep.trivial_facet_class,
           "notes": list(rep.notes)}
    if rep.decomposition is not None:
        out["decomposition"] = {
            "fragments": len(rep.decomposition),
            "fragment_bounds": [format_rational(fr.bound) for fr in rep.decomposition],
        }
    if extra:
        out.update(extra)
    return out


def _cmd_facet_test(args):
    raw = open(args.path, "rb").read()
    text = raw.decode()
    data = _load_json(text)
    if "kind" in data:
        g = parse_game_text(text)
        if args.polytope == "bell":
            ineq = to_bell_inequality(g)
            spec = getattr(g, "nlc", None)
            if spec is not None and spec.n >= 2:
                if g.d == 2:
                    rep = nlc2_decompose(g, budget=args.budget)
                elif spec.is_product_form and nlcd_lambda(g).big_lambda >= Fraction(1, 2):
                    rep = nlcd_nonfacet_check(g)
                else:
                    rep = facet_test(ineq, "bell", budget=args.budget)
            else:
                rep = facet_test(ineq, "bell", budget=args.budget)
        else:
            ineq = to_correlator_inequality(g)
            rep = facet_test(ineq, "correlation", budget=args.budget)
        return _facet_report_dict(rep, {"bound": format_rational(ineq.bound)}), _digest(raw)
    ineq = parse_inequality_text(text)
    if isinstance(ineq, CutInequality):
        raise ParseError("cut-space inequalities go through the cut subcommand", line=1)
    kind = "bell" if args.polytope == "bell" else "correlation"
    rep = facet_test(ineq, kind, budget=args.budget)
    return _facet_report_dict(rep, {"bound": format_rational(ineq.bound)}), _digest(raw)


def _cmd_chsh(args):
    raw = [args.p1, args.p2, args.p3, args.p4]
    try:
        vals = [parse_rational(v) for v in raw]
    except ValueError as exc:
        raise ParseError(str(exc), line=1) from None
    if all(v >= 0 for v in vals):
        # All-nonnegative input names the weights of the canonical form
        # directly (minus sign implied on the fourth cell).
        total = sum(vals)
        if total == 0:
            raise ParseError("weights cannot all be zero", line=1)
        ordered = sorted((v / total for v in vals), reverse=True)
        w = WeightedCHSH(tuple(ordered))
    else:
        w = canonicalize(raw)
    verdict = face_condition(w)
    results = {
        "canonical": {
            "p": [format_rational(v) for v in w.p],
            "sign_cell": None if w.sign_cell is None else list(w.sign_cell),
            "trivial_even": w.trivial_even,
        },
        "verdict": verdict.verdict,
        "algebraically_trivial": verdict.algebraically_trivial,
        "face_lhs": None if verdict.lhs is None else format_rational(verdict.lhs),
        "face_rhs": None if verdict.rhs is None else format_rational(verdict.rhs),
        "classical_game_value": format_rational(verdict.classical_game_value),
        "correlator_bound": format_rational(verdict.correlator_bound),
        "qubit_estimate": _float_field(qubit_value_estimate(w), 1e-4),
    }
    if w.trivial_even:
        results["certificate"] = None
    else:
        cert = sigma_lambda_certificate(w)
        results["certificate"] = {
            "rho": _float_field(cert.rho, cert.tolerance),
            "verdict": cert.verdict,
        }
    arg_blob = " ".join([args.p1, args.p2, args.p3, args.p4]).encode()
    return results, _digest(arg_blob)


def _parse_b(text: str):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise ParseError("--b takes comma-separated integers", line=1) from None


def _graph_dict(g: Graph):
    return {"n": g.n, "edges": [list(e) for e in g.sorted_edges]}


def _correlator_ineq_dict(ineq: CutInequality):
    return {"pairs": [[i, j, format_rational(c)]
                      for (i, j), c in sorted(ineq.pair_coeffs.items())],
            "singles": [format_rational(v) for v in ineq.single_coeffs],
            "bound": format_rational(ineq.bound)}


def _cmd_cut(args):
    sub = args.subcommand
    if sub in ("suspend", "cuts") and args.graph is None:
        raise ParseError(f"{sub} needs --graph", line=1)
    if sub == "hypermetric" and args.b is None:
        raise ParseError("hypermetric needs --b", line=1)
    if sub == "facet" and args.b is None and args.ineq is None:
        raise ParseError("facet needs --b or --ineq", line=1)
    if sub == "suspend":
        raw = open(args.graph, "rb").read()
        g = parse_graph_text(raw.decode())
        return {"graph": _graph_dict(g),
                "suspension": _graph_dict(suspension(g))}, _digest(raw)
    if sub == "cuts":
        raw = open(args.graph, "rb").read()
        g = parse_graph_text(raw.decode())
        cuts = enumerate_cuts(g)
        return {"count": len(cuts),
                "cuts": [{"subset": sorted(cv.subset), "bits": list(cv.bits)}
                         for cv in cuts]}, _digest(raw)
    if sub == "ce1":
        if args.n is None:
            raise ParseError("ce1 needs --n", line=1)
        ineqs = ce1_inequalities(args.n)
        return {"n": args.n, "count": len(ineqs),
                "inequalities": [_correlator_ineq_dict(q) for q in ineqs]}, \
               _digest(str(args.n).encode())
    if sub == "hypermetric":
        b = _parse_b(args.b)
        g = Graph.complete(len(b))
        return {"b": list(b), "n": len(b),
                "valid": hypermetric_valid(b, g)}, _digest(args.b.encode())
    if sub == "facet":
        if args.ineq is not None:
            raw = open(args.ineq, "rb").read()
            ineq = parse_inequality_text(raw.decode())
            if not isinstance(ineq, CutInequality):
                raise ParseError("cut facet tests need a cut-space inequality", line=1)
            rep = cut_facet_test(ineq, Graph.complete(ineq.n))
            return _facet_report_dict(rep), _digest(raw)
        b = _parse_b(args.b)
        rep = cut_facet_test(CutInequality.hypermetric(b), Graph.complete(len(b)))
        return _facet_report_dict(rep, {"b": list(b)}), _digest(args.b.encode())
    if sub == "pentagonal":
        ineq = pentagonal_contextuality_inequality()
        g5 = Graph.complete(5)
        det_max = max(
            ineq.evaluate_behaviour(NCBehaviour.deterministic(
                Graph.complete(4), [1 - 2 * ((m >> i) & 1) for i in range(4)]))
            for m in range(16))
        rep = cut_facet_test(CutInequality.hypermetric((1, 1, 1, -1, -1)), g5)
        return {"inequality": _correlator_ineq_dict(ineq),
                "cut_form": json.loads(serialize_inequality(ineq.to_cut_form())),
                "hypermetric_b": [1, 1, 1, -1, -1],
                "valid_on_k5": hypermetric_valid((1, 1, 1, -1, -1), g5),
                "deterministic_max": format_rational(det_max),
                "facet": _facet_report_dict(rep)}, _digest(b"pentagonal")
    if sub == "ce-gap":
        beh = ce_gap_certificate()
        rep = ce_gap_report()
        return {"behaviour": {
                    "singles": [format_rational(v) for v in beh.singles],
                    "fulls": [[i, j, format_rational(c)]
                              for (i, j), c in sorted(beh.fulls.items())]},
                "checks": {
                    "positivity_min": format_rational(rep["positivity_min"]),
                    "ce1_count": rep["ce1_count"],
                    "ce1_max": format_rational(rep["ce1_max"]),
                    "pentagonal_value": format_rational(rep["pentagonal_value"]),
                    "pentagonal_bound": format_rational(rep["pentagonal_bound"]),
                }}, _digest(b"ce-gap")
    raise ParseError(f"unknown cut subcommand {sub!r}", line=1)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bellpoly",
                                 description="nonlocal game values, facet tests, "
                                             "and cut-polytope contextuality checks")
    sub = ap.add_subparsers(dest="command", required=True)

    g1 = sub.add_parser("analyze-game", help="classical/no-signaling values and norm bounds")
    g1.add_argument("path")
    g1.add_argument("--classical", action="store_true")
    g1.add_argument("--bound", action="store_true")
    g1.add_argument("--sufficient", action="store_true")
    g1.add_argument("--budget", type=int, default=DEFAULT_STRATEGY_BUDGET)
    g1.add_argument("--workers", type=int, default=None)
    g1.add_argument("--timing", action="store_true")

    g2 = sub.add_parser("facet-test", help="exact facet test of a game or inequality file")
    g2.add_argument("path")
    g2.add_argument("--polytope", choices=("bell", "correlation"), required=True)
    g2.add_argument("--budget", type=int, default=DEFAULT_BOX_BUDGET)
    g2.add_argument("--timing", action="store_true")

    g3 = sub.add_parser("chsh", help="canonical form, face verdict, certificates")
    g3.add_argument("p1")
    g3.add_argument("p2")
    g3.add_argument("p3")
    g3.add_argument("p4")
    g3.add_argument("--timing", action="store_true")

    g4 = sub.add_parser("cut", help="cut polytope and exclusivity operations")
    g4.add_argument("subcommand", choices=("suspend", "cuts", "ce1", "hypermetric",
                                           "facet", "pentagonal", "ce-gap"))
    g4.add_argument("--graph", help="graph file (suspend, cuts)")
    g4.add_argument("--n", type=int, help="observable count (ce1)")
    g4.add_argument("--b", help="comma-separated hypermetric coefficients")
    g4.add_argument("--ineq", help="cut-space inequality file (facet)")
    g4.add_argument("--timing", action="store_true")

    return ap


_DISPATCH = {
    "analyze-game": _cmd_analyze_game,
    "facet-test": _cmd_facet_test,
    "chsh": _cmd_chsh,
    "cut": _cmd_cut,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    started = time.monotonic()
    try:
        results, digest = _DISPATCH[args.command](args)
    except ParseError as e:
        print(f"bellpoly: parse error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"bellpoly: invalid input: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"bellpoly: cannot read input: {e}", file=sys.stderr)
        return 2
    except BudgetExceededError as e:
        print(f"bellpoly: budget exceeded: {e}", file=sys.stderr)
        return 3
    except VerificationError as e:
        print(f"bellpoly: verification failure: {e}", file=sys.stderr)
        return 4
    report = {
        "command": [args.command] + argv[1:],
        "input_digest": digest,
        "results": results,
        "tool": "bellpoly",
        "version": __version__,
    }
    if args.timing:
        report["timing_seconds"] = round(time.monotonic() - started, 6)
    sys.stdout.write(canonical_json(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
