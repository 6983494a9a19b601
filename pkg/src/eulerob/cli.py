"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

from . import examples, oracle
from .calculus import ConstructibleFunction, cf, parse_alpha, stalk_report
from .fuzz import run_fuzz
from .model import GENERIC, GermModel, ModelError, dumps_model, load_model
from .obstruction import (
    InsufficientDataError,
    bls_evaluate,
    decompose,
    eu_function,
    eu_of_germ,
    eu_table,
    index_pairing,
    recompose,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict[str, Any]
    results: dict[str, Any] = field(default_factory=dict)
    status: int = EXIT_OK

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, default=str)


def _load(path: str) -> GermModel:
    if path.startswith("example:"):
        try:
            return examples.get(path.split(":", 1)[1])
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    try:
        return load_model(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _alpha(m: GermModel, args: argparse.Namespace) -> ConstructibleFunction:
    text = args.alpha_eu if args.alpha_eu is not None else args.alpha
    if text is None:
        raise UsageError("one of --alpha or --alpha-eu is required")
    try:
        values = parse_alpha(text)
        unknown = sorted(set(values) - set(m.ids))
        if unknown:
            raise ValueError(f"unknown stratum {unknown[0]!r}")
        if args.alpha_eu is not None:
            return recompose(m, values)
        return cf(m, values)
    except (ValueError, ModelError) as exc:
        raise UsageError(f"bad constructible function: {exc}") from None


def _validated(report: RunReport, m: GermModel) -> bool:
    if not m.report.ok:
        report.results["validation"] = m.report.as_dict()
        report.status = EXIT_FAIL
        return False
    return True


def cmd_validate(args: argparse.Namespace) -> RunReport:
    m = _load(args.model)
    report = RunReport("validate", {"model": args.model})
    report.results = m.report.as_dict()
    report.status = EXIT_OK if m.report.ok else EXIT_FAIL
    return report


def cmd_eu(args: argparse.Namespace) -> RunReport:
    m = _load(args.model)
    report = RunReport("eu", {"model": args.model, "stratum": args.stratum})
    if not _validated(report, m):
        return report
    if args.stratum is not None:
        try:
            m.stratum(args.stratum)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        report.results["eu"] = dict(eu_function(m, args.stratum).values)
        return report
    table = eu_table(m)
    report.results["order"] = list(table.order)
    report.results["table"] = {i: dict(table.M[i]) for i in table.order}
    germ = eu_of_germ(m)
    report.results["eu_germ"] = dict(germ.values)
    report.results["eu_origin"] = germ[m.base]
    report.results["origin_contributions"] = {
        k: m.ns(GENERIC, m.base, k) * germ[k] for k in m.ids if k != m.base
    }
    return report


def _bls_fields(m: GermModel, a: ConstructibleFunction, c: str) -> dict[str, Any]:
    r = bls_evaluate(m, a, c)
    sr = stalk_report(m, a, c)
    out: dict[str, Any] = {**asdict(r), "phi": sr.phi_stalk, "stalks": sr.as_dict(),
                           "eu_coords": decompose(m, a)}
    try:
        out["index"] = index_pairing(m, a, c)
        out["eq8"] = sr.phi_stalk + out["index"] == 0
    except InsufficientDataError as exc:
        out["index"] = None
        out["eq8"] = None
        out["note"] = str(exc)
    return out


def _covector(m: GermModel, name: str) -> str:
    if name not in m.covectors:
        raise UsageError(f"unknown covector {name!r}; model has {', '.join(sorted(m.covectors))}")
    return name


def cmd_bls(args: argparse.Namespace) -> RunReport:
    m = _load(args.model)
    report = RunReport("bls", {"model": args.model, "alpha": args.alpha, "alpha_eu": args.alpha_eu,
                               "covector": args.covector})
    if not _validated(report, m):
        return report
    a = _alpha(m, args)
    report.results = _bls_fields(m, a, _covector(m, args.covector))
    identity_broken = report.results["admissible"] and report.results["defect"] != 0
    if identity_broken or report.results["eq8"] is False:
        report.status = EXIT_FAIL
    return report


def cmd_phi(args: argparse.Namespace) -> RunReport:
    m = _load(args.model)
    report = RunReport("phi", {"model": args.model, "alpha": args.alpha, "alpha_eu": args.alpha_eu,
                               "covector": args.covector})
    if not _validated(report, m):
        return report
    a = _alpha(m, args)
    report.results = _bls_fields(m, a, _covector(m, args.covector))
    if report.results["eq8"] is not True:
        report.status = EXIT_FAIL
    return report


def cmd_fuzz(args: argparse.Namespace) -> RunReport:
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    r = run_fuzz(args.count, args.seed, jobs=args.jobs)
    return RunReport("fuzz", {"count": args.count, "seed": args.seed}, r.as_dict(),
                     EXIT_OK if r.ok else EXIT_FAIL)


def cmd_oracle(args: argparse.Namespace) -> RunReport:
    try:
        K = oracle.load_complex(args.complex)
        report = RunReport("oracle", {"complex": args.complex, "op": args.op, "vertex": args.vertex,
                                      "minus": args.minus})
        if args.op == "chi":
            report.results["chi"] = oracle.chi(K)
        elif args.op == "chic":
            B = oracle.load_complex(args.minus) if args.minus else None
            report.results["chi_c"] = oracle.chi_c(K, B)
        elif args.op == "link":
            if args.vertex is None:
                raise UsageError("--op link needs --vertex")
            v = _vertex(K, args.vertex)
            L = oracle.vertex_link(K, v)
            report.results = {"link": oracle.complex_to_dict(L), "chi": oracle.chi(L)}
        elif args.op == "cone":
            C = oracle.cone(K, apex=args.vertex or "apex")
            report.results = {"cone": oracle.complex_to_dict(C), "chi": oracle.chi(C)}
    except OSError as exc:
        raise UsageError(f"cannot read complex: {exc.strerror}") from None
    except oracle.ComplexError as exc:
        raise UsageError(str(exc)) from None
    return report


def _vertex(K: oracle.SimplicialComplex, text: str) -> Any:
    for v in K.vertices:
        if str(v) == text:
            return v
    raise UsageError(f"unknown vertex {text!r}")


def cmd_examples(args: argparse.Namespace) -> RunReport:
    if args.action == "list":
        results = {
            name: {"parameters": d.parameters, "eu_origin": d.eu_origin, "provenance": d.provenance}
            for name, d in examples.CATALOG.items()
        }
        return RunReport("examples list", {}, results)
    if not args.name:
        raise UsageError("examples emit needs a NAME")
    try:
        m = examples.get(args.name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    return RunReport("examples emit", {"name": args.name}, {"model": json.loads(dumps_model(m))})


def _text(report: RunReport) -> str:
    r = report.results
    if report.command == "examples emit":
        return json.dumps(r["model"], indent=2)
    if report.command == "examples list":
        return "\n".join(f"{name:18s} Eu(X,0) = {d['eu_origin']}" for name, d in r.items())
    if "validation" in r or report.command == "validate":
        v = r.get("validation", r)
        lines = [f"model {v['model']}: {'valid' if v['valid'] else 'INVALID'}"]
        for c in v["checks"]:
            mark = "ok  " if c["passed"] else "FAIL"
            lines.append(f"  {mark} {c['name']}" + (f"  {' '.join(c['loci'])}" if c["loci"] else ""))
        lines += [f"  warn {w}" for w in v["warnings"]]
        return "\n".join(lines)
    if report.command == "eu":
        if "eu" in r:
            return "\n".join(f"  Eu(cl {report.inputs['stratum']}, {i}) = {v}" for i, v in r["eu"].items())
        order = r["order"]
        width = max(len(i) for i in order) + 2
        lines = [" " * width + "".join(f"{j:>{width}}" for j in order)]
        for i in order:
            lines.append(f"{i:<{width}}" + "".join(f"{r['table'][i][j]:>{width}}" for j in order))
        lines.append("contributions at origin: " + ", ".join(f"{k}: {v}" for k, v in r["origin_contributions"].items()))
        lines.append(f"Eu(X,0) = {r['eu_origin']}")
        return "\n".join(lines)
    if report.command in ("bls", "phi"):
        keys = ("lhs", "rhs", "defect", "admissible", "phi", "index", "eq8")
        lines = [f"{k:>10}: {r[k]}" for k in keys]
        if "note" in r:
            lines.append(f"      note: {r['note']}")
        return "\n".join(lines)
    if report.command == "fuzz":
        head = f"fuzz: {r['checked']}/{r['count']} models checked (seed {r['seed']}): {'pass' if r['ok'] else 'FAIL'}"
        if r["failure"]:
            return head + "\n" + json.dumps(r["failure"], indent=2)
        return head
    return json.dumps(r, indent=2, default=str)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eulerob", description="Euler obstructions on combinatorial germ models.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, func: Any, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--json", action="store_true", help="emit a JSON report")
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", cmd_validate, "check every model axiom")
    sp.add_argument("model")

    sp = add("eu", cmd_eu, "Euler obstruction table")
    sp.add_argument("model")
    sp.add_argument("--stratum")

    for name, func in (("bls", cmd_bls), ("phi", cmd_phi)):
        sp = add(name, func, "hyperplane-section formula" if name == "bls" else "vanishing cycles and index")
        sp.add_argument("model")
        group = sp.add_mutually_exclusive_group()
        group.add_argument("--alpha", help='stratum values, e.g. "s0=2,s1=1,s2=1"')
        group.add_argument("--alpha-eu", help="coordinates in the basis Eu(cl V_j, .)")
        sp.add_argument("--covector", default=GENERIC, required=(name == "phi"))

    sp = add("fuzz", cmd_fuzz, "seeded property suite on random models")
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)

    sp = add("oracle", cmd_oracle, "simplicial oracle")
    sp.add_argument("complex")
    sp.add_argument("--op", choices=["chi", "chic", "link", "cone"], required=True)
    sp.add_argument("--vertex")
    sp.add_argument("--minus", help="subcomplex file removed for chic")

    sp = add("examples", cmd_examples, "curated models")
    sp.add_argument("action", choices=["list", "emit"])
    sp.add_argument("name", nargs="?")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except (UsageError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(report.to_json() if args.json else _text(report))
    return report.status


if __name__ == "__main__":
    sys.exit(main())
