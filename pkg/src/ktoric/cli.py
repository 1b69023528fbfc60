"""Command-line front end: ``ktoric <command> polytope.json``.

Exit codes: 0 success, 1 invalid polytope, 2 unreadable input,
3 failed internal check.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from fractions import Fraction

from .gkm import (
    build_gkm_graph,
    equivariant_rank_certificate,
    morse_basis,
    verify_presentation,
)
from .kirwan import (
    _reduced_names,
    build_delzant_data,
    critical_values_Z,
    draw_flow_samples,
    eliminate_J,
    flow_check_all,
    flow_retraction_check,
    kernel_generators,
    nonface_duality,
    presentation,
)
from .polytope import (
    DelzantPolytope,
    format_rational,
    generic_direction,
    minimal_nonfaces,
    validate_delzant,
)

log = logging.getLogger("ktoric")

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_CHECK = 0, 1, 2, 3


def _facets(S) -> str:
    return "{" + ", ".join(f"F_{i + 1}" for i in sorted(S)) + "}"


def _vec(v) -> str:
    return "(" + ", ".join(str(format_rational(x)) for x in v) + ")"


def _parse_vector(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(x.strip()) for x in text.split(","))


def cmd_validate(P, args):
    rep = validate_delzant(P)
    if args.format == "json":
        return rep.to_dict(), EXIT_OK if rep.valid else EXIT_INVALID
    lines = [f"polytope: dim {P.dim}, {P.nfacets} facets"]
    lines += [f"  {c.describe()}" for c in rep.checks]
    lines.append("Delzant: yes" if rep.valid else "Delzant: NO")
    return "\n".join(lines), EXIT_OK if rep.valid else EXIT_INVALID


def cmd_vertices(P, args):
    verts = P.vertices
    if args.format == "json":
        return {
            "vertices": [
                {"id": i, "point": [format_rational(x) for x in v.point], "facets": sorted(j + 1 for j in v.incident)}
                for i, v in enumerate(verts)
            ],
            "edges": [
                {"from": e.endpoints[0], "to": e.endpoints[1], "direction": list(e.direction)}
                for e in P.edges
            ],
        }, EXIT_OK
    lines = [f"v{i} = {_vec(v.point)} on {_facets(v.incident)}" for i, v in enumerate(verts)]
    lines += [f"edge v{e.endpoints[0]} -> v{e.endpoints[1]}: direction {_vec(e.direction)}" for e in P.edges]
    return "\n".join(lines), EXIT_OK


def cmd_nonfaces(P, args):
    nf = minimal_nonfaces(P)
    if args.format == "json":
        return {"nonfaces": [sorted(i + 1 for i in S) for S in nf]}, EXIT_OK
    return "\n".join(f"{_facets(S)}: empty intersection" for S in nf), EXIT_OK


def cmd_presentation(P, args):
    pres = presentation(P)
    red = eliminate_J(pres)
    if args.format == "json":
        d = pres.to_dict()
        d["reduced"] = red.to_dict()
        return d, EXIT_OK
    names = ", ".join(f"x{i}^±1" for i in range(1, pres.N + 1))
    lines = [f"K^*(X) = Z[{names}] / (I + J)"]
    lines.append("I = {" + ", ".join(f.render() for f in pres.I_gens) + "}")
    for f, S in zip(pres.I_gens, pres.nonfaces):
        lines.append(f"  from non-face {_facets(S)}: {f.render()}")
    lines.append("J = {" + ", ".join(g.render() for g in pres.J_gens) + "}")
    sub = red.to_dict()
    lines.append("after eliminating J (" + ", ".join(f"x{i + 1} = {s}" for i, s in enumerate(sub["substitution"])) + "):")
    ring = ", ".join(f"{v}^±1" for v in _reduced_names(red.k))
    lines.append(f"  Z[{ring}] / (" + ", ".join(sub["relations"]) + ")")
    return "\n".join(lines), EXIT_OK


def cmd_gkm(P, args):
    graph = build_gkm_graph(P)
    basis = morse_basis(P, args.xi_int(P))
    if args.format == "json":
        return {
            "graph": graph.to_dict(),
            "morse_basis": [{"vertex": v, "class": cls.to_dict()} for v, cls in basis],
        }, EXIT_OK
    lines = [f"vertex {v}: {_vec(graph.points[v])}" for v in graph.vertices]
    lines += [f"edge ({p}, {q}): weight {_vec(w)}" for p, q, w in graph.edges]
    return "\n".join(lines), EXIT_OK


def cmd_kernel(P, args):
    D = build_delzant_data(P)
    Z = critical_values_Z(D)
    duality = nonface_duality(D)
    gens = kernel_generators(P)
    if args.format == "json":
        return {
            "delzant_data": D.to_dict(),
            "Z": [c.to_dict() for c in Z],
            "I": [f.render() for f in gens],
            "nonface_duality": [
                {
                    "S": sorted(i + 1 for i in r["S"]),
                    "xi_A": [format_rational(x) for x in r["xi"]],
                    "pairings": [format_rational(r["pairings"][i]) for i in range(D.N)],
                    "vanishes_on_A": r["vanishes_on_A"],
                    "negative_on_S": r["negative_on_S"],
                }
                for r in duality
            ],
        }, EXIT_OK
    lines = [f"alpha_{i + 1} = {_vec(a)}" for i, a in enumerate(D.alphas)]
    lines.append(f"iota^* eta = {_vec(D.iota_star_eta)}")
    lines.append(f"Z ({len(Z)} values):")
    for c in Z:
        lines.append(f"  xi_A = {_vec(c.xi)}  A = {_facets(c.A)}  S = {_facets(c.negative_set)}")
    lines.append("I = {" + ", ".join(f.render() for f in gens) + "}")
    return "\n".join(lines), EXIT_OK


def cmd_rank(P, args):
    cert = equivariant_rank_certificate(P, args.xi_int(P))
    code = EXIT_OK if cert.valid else EXIT_CHECK
    rk = cert.rank if cert.valid else None
    if args.format == "json":
        return {"ordinary_k0_rank": rk, "k1_rank": 0, "equivariant_certificate": cert.to_dict()}, code
    lines = [f"rank K^0(X) = {rk}", "rank K^1(X) = 0 (odd K-theory vanishes)"]
    lines.append(f"certificate: triangular={cert.triangular} diagonal={cert.diagonal_ok} gamma={cert.in_gamma}")
    return "\n".join(lines), code


def cmd_verify(P, args):
    rep = verify_presentation(P, samples=args.samples, seed=args.seed)
    cert = equivariant_rank_certificate(P, args.xi_int(P))
    ok = rep.passed and cert.valid
    if args.format == "json":
        d = rep.to_dict()
        d["rank_certificate"] = cert.valid
        d["passed"] = ok
        return d, EXIT_OK if ok else EXIT_CHECK
    lines = [f"I restricts to zero: {all(x for _, x in rep.I_zero)}"]
    lines.append(f"J restricts to constants: {all(x for _, x, _ in rep.J_constant)}")
    lines.append(f"GKM congruences: {rep.monomials_tested - len(rep.monomial_failures)}/{rep.monomials_tested} monomials")
    lines.append(f"rank certificate: {cert.valid}")
    lines.append("verify: PASS" if ok else "verify: FAIL")
    return "\n".join(lines), EXIT_OK if ok else EXIT_CHECK


def cmd_flow(P, args):
    D = build_delzant_data(P)
    if args.xi:
        xi = _parse_vector(args.xi)
        if len(xi) != D.k:
            raise ValueError(f"--xi needs {D.k} coordinates")
        c = sum(a * b for a, b in zip(D.iota_star_eta, xi))
        if any(xi) and c >= 0:
            raise ValueError("--xi must satisfy <iota^T eta, xi> < 0")
        rng = random.Random(args.seed)
        samples = draw_flow_samples(D, xi, args.samples, rng, -float(c) / 2) if any(xi) else []
        reports = [flow_retraction_check(D, xi, samples, args.tmax, args.tol)]
    else:
        reports = flow_check_all(D, args.samples, args.seed, args.tmax, args.tol)
    ok = all(r.passed for r in reports)
    if args.format == "json":
        return {"passed": ok, "reports": [r.to_dict() for r in reports]}, EXIT_OK if ok else EXIT_CHECK
    lines = []
    for r in reports:
        if r.skipped:
            lines.append(f"xi_A = {_vec(r.xi)}: skipped ({r.skipped})")
            continue
        hits = [s.hit_time for s in r.samples]
        worst = max(h for h in hits if h is not None) if any(h is not None for h in hits) else None
        reached = sum(h is not None for h in hits)
        line = f"xi_A = {_vec(r.xi)}: {reached}/{len(hits)} samples reach level -{r.epsilon:g}"
        if worst is not None:
            line += f" (latest at t = {worst:.6g})"
        lines.append(line)
    return "\n".join(lines), EXIT_OK if ok else EXIT_CHECK


COMMANDS = {
    "validate": (cmd_validate, "Delzant validation report"),
    "vertices": (cmd_vertices, "vertices and edges"),
    "nonfaces": (cmd_nonfaces, "minimal non-faces"),
    "presentation": (cmd_presentation, "K-theory presentation Z[x^±]/(I + J)"),
    "gkm": (cmd_gkm, "GKM graph and Morse basis"),
    "kernel": (cmd_kernel, "critical values Z, xi_A, negative sets and kernel generators"),
    "rank": (cmd_rank, "ordinary K-rank with equivariant certificate"),
    "verify": (cmd_verify, "cross-check presentation against fixed points"),
    "flow": (cmd_flow, "gradient-flow retraction check"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ktoric", description="K-theory of symplectic toric manifolds")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("input", help="polytope JSON file")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--xi", help="comma-separated direction (generic direction for rank/gkm/verify, xi for flow)")
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--tmax", type=float, default=50.0)
        p.add_argument("--tol", type=float, default=1e-9)
    return parser


def _configure_logging():
    level = os.environ.get("KTORIC_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.samples is None:
        args.samples = 200 if args.command == "verify" else 50

    def xi_int(P):
        if not args.xi:
            return generic_direction(P)
        return tuple(int(x) for x in _parse_vector(args.xi))

    args.xi_int = xi_int

    try:
        P = DelzantPolytope.from_json(args.input)
    except (OSError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_PARSE

    rep = validate_delzant(P)
    if args.command != "validate" and not rep.valid:
        out = rep.to_dict() if args.format == "json" else "\n".join(c.describe() for c in rep.checks)
        _emit(out)
        return EXIT_INVALID

    handler = COMMANDS[args.command][0]
    log.info("running %s on %s", args.command, args.input)
    try:
        out, code = handler(P, args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    _emit(out)
    return code


def _emit(out) -> None:
    if isinstance(out, str):
        sys.stdout.write(out + "\n")
    else:
        sys.stdout.write(json.dumps(out, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    sys.exit(main())
