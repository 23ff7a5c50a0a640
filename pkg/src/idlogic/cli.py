"""Command-line interface: ``idlogic {wfm,check,models,transform,partition}``.

Exit codes: 0 success/total, 1 parse or input error, 2 semantic error,
3 not total or unsatisfied, 4 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import checker, engine, transform
from .core import Structure, load_structure, structure_to_json
from .errors import BudgetExceeded, IDLogicError, ParseError, StructureFormatError
from .ground import dependency_graph
from .syntax import Def, Theory, format_theory, load_theory

SCHEMA = "v1"
EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC, EXIT_FALSE, EXIT_BUDGET = 0, 1, 2, 3, 4


class _Fail(Exception):
    def __init__(self, code, message):
        self.code = code
        super().__init__(message)


def _load(args) -> tuple:
    try:
        theory = load_theory(args.theory)
    except OSError as exc:
        raise _Fail(EXIT_PARSE, f"cannot read {args.theory}: {exc.strerror}") from exc
    path = getattr(args, "structure", None)
    if path is None:
        return theory, Structure.build(["0"])
    try:
        structure = load_structure(path, theory.vocab)
    except OSError as exc:
        raise _Fail(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise _Fail(EXIT_PARSE, f"{path}: invalid JSON: {exc}") from exc
    return theory, structure


def _definition(theory: Theory, index: int):
    defs = theory.definitions()
    if not defs:
        raise _Fail(EXIT_SEMANTIC, "the theory contains no definition")
    if not 0 <= index < len(defs):
        raise _Fail(EXIT_SEMANTIC, f"definition index {index} out of range (0..{len(defs) - 1})")
    return defs[index]


def _atoms(I: Structure, pred) -> list:
    return [str(a) for a in I.true_atoms([pred])]


def _elements(I: Structure, pred) -> str:
    items = sorted(I.rels[pred], key=I._tuple_key)
    return "{" + ", ".join(str(t[0]) if len(t) == 1 else "(" + ",".join(map(str, t)) + ")"
                           for t in items) + "}"


# subcommands ------------------------------------------------------------------

def cmd_wfm(args, out) -> int:
    theory, structure = _load(args)
    delta = _definition(theory, args.definition)
    pair = engine.wf_pair_of(delta, structure, trace=args.trace)
    g = pair.ground
    undefined = pair.undefined_atoms()
    if args.json:
        report = {
            "schema": SCHEMA, "command": "wfm", "total": pair.total,
            "lb": {p: _atoms(pair.lb, p) for p in g.defined},
            "ub": {p: _atoms(pair.ub, p) for p in g.defined},
            "undefined": [str(a) for a in undefined],
        }
        if args.trace:
            report["trace"] = pair.trace_json()
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        parts = [f"total: {'yes' if pair.total else 'no'}"]
        for p in g.defined:
            if g.arities[p] == 0:
                if () in pair.lb.rels[p]:
                    parts.append(f"{p}=true")
                elif () in pair.ub.rels[p]:
                    parts.append(f"{p}=undefined")
                else:
                    parts.append(f"{p}=false")
            elif pair.total:
                parts.append(f"{p}={_elements(pair.lb, p)}")
            else:
                parts.append(f"{p}: lb={_elements(pair.lb, p)} ub={_elements(pair.ub, p)}")
        out.write("; ".join(parts) + "\n")
        for a in undefined:
            out.write(f"{a}: undefined\n")
        if args.trace:
            out.write(pair.trace_text() + "\n")
        if args.dump:
            out.write(g.dump() + "\n")
        if args.dot:
            out.write(dependency_graph(g, include_folded=False).to_dot())
    return EXIT_OK if pair.total else EXIT_FALSE


def cmd_check(args, out) -> int:
    theory, structure = _load(args)
    results = [checker.satisfies(structure, ax) for ax in theory.axioms]
    ok = all(results)
    if args.json:
        out.write(json.dumps({"schema": SCHEMA, "command": "check", "satisfied": ok,
                              "axioms": results}, indent=2) + "\n")
    else:
        out.write(f"satisfied: {'yes' if ok else 'no'}\n")
        for k, r in enumerate(results):
            if not r:
                out.write(f"axiom {k} fails\n")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_models(args, out) -> int:
    theory, structure = _load(args)
    free = [s.strip() for s in args.free.split(",") if s.strip()] if args.free else None
    found = []
    for m in checker.enumerate_models(theory, structure, free):
        found.append(m)
        if args.max is not None and len(found) >= args.max:
            break
    names = sorted(set(m.vocab.names()) - set(structure.vocab.names())) if found else []
    if args.json:
        out.write(json.dumps({
            "schema": SCHEMA, "command": "models", "count": len(found),
            "models": [{p: _atoms(m, p) for p in names} for m in found],
            "structures": [structure_to_json(m) for m in found],
        }, indent=2) + "\n")
    else:
        out.write(f"models: {len(found)}\n")
        for k, m in enumerate(found):
            atoms = [a for p in names for a in _atoms(m, p)]
            out.write(f"model {k}: {{{', '.join(atoms)}}}\n")
    return EXIT_OK if found else EXIT_FALSE


_OPS = {"complete": transform.completion, "posind": transform.pos_ind,
        "circ": transform.circumscription}


def cmd_transform(args, out) -> int:
    theory, _ = _load(args)
    op = _OPS[args.op]
    axioms = []
    k = 0
    for ax in theory.axioms:
        if isinstance(ax, Def) and (args.definition is None or args.definition == k):
            axioms.append(op(ax.definition))
        else:
            axioms.append(ax)
        k += isinstance(ax, Def)
    text = format_theory(Theory(theory.vocab, tuple(axioms)))
    if args.json:
        out.write(json.dumps({"schema": SCHEMA, "command": "transform", "op": args.op,
                              "theory": text}, indent=2) + "\n")
    else:
        out.write(text)
    return EXIT_OK


def _parse_groups(text: str) -> dict:
    grouping = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" not in item:
            raise _Fail(EXIT_SEMANTIC, f"bad group item {item!r}; expected PRED:PART")
        pred, part = item.split(":", 1)
        grouping[pred.strip()] = part.strip()
    return grouping


def _total_or_none(delta, structure):
    try:
        return engine.is_total(delta, structure)
    except BudgetExceeded:
        return None


def cmd_partition(args, out) -> int:
    theory, structure = _load(args)
    delta = _definition(theory, args.definition)
    p = transform.make_partition(delta, _parse_groups(args.groups))
    cert = transform.certify_reduction_partition(delta, p, structure)
    strict = transform.certify_strict_reduction(delta, structure)
    parts_total = [_total_or_none(part, structure) for part in p.parts]
    whole = _total_or_none(delta, structure)
    if args.json:
        out.write(json.dumps({
            "schema": SCHEMA, "command": "partition", "status": cert.status,
            "witness": [str(a) for a in cert.witness], "reason": cert.reason,
            "strict": strict.status,
            "parts": [{"defines": list(part.defined), "total": t}
                      for part, t in zip(p.parts, parts_total)],
            "total": whole,
        }, indent=2) + "\n")
    else:
        def verdict(t):
            return "unknown (budget)" if t is None else ("yes" if t else "no")
        out.write(f"reduction partition: {cert.report()}\n")
        out.write(f"strict reduction: {strict.report()}\n")
        for k, (part, t) in enumerate(zip(p.parts, parts_total)):
            out.write(f"part {k} ({', '.join(part.defined)}): total {verdict(t)}\n")
        out.write(f"definition total: {verdict(whole)}\n")
    return EXIT_OK if cert else EXIT_FALSE


# entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="idlogic", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, structure=True, optional=False):
        p.add_argument("theory", help="theory file, or - for stdin")
        if structure:
            if optional:
                p.add_argument("structure", nargs="?", help="structure JSON file")
            else:
                p.add_argument("structure", help="structure JSON file, or - for stdin")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("wfm", help="well-founded pair of a definition")
    common(p)
    p.add_argument("-d", "--definition", type=int, default=0, help="definition index")
    p.add_argument("--trace", action="store_true", help="print the alternating stages")
    p.add_argument("--dump", action="store_true", help="print the ground bodies")
    p.add_argument("--dot", action="store_true", help="print the dependency graph")
    p.set_defaults(func=cmd_wfm)

    p = sub.add_parser("check", help="does the structure satisfy the theory")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("models", help="enumerate models extending a structure")
    common(p, optional=True)
    p.add_argument("--free", help="comma-separated predicates to enumerate")
    p.add_argument("--max", type=int, help="stop after this many models")
    p.set_defaults(func=cmd_models)

    p = sub.add_parser("transform", help="rewrite definitions")
    common(p, structure=False)
    p.add_argument("--op", choices=sorted(_OPS), required=True)
    p.add_argument("-d", "--definition", type=int, help="only this definition")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("partition", help="certify a partition of a definition")
    common(p)
    p.add_argument("-d", "--definition", type=int, default=0)
    p.add_argument("--groups", required=True, help="PRED:PART pairs, e.g. E:1,O:2")
    p.set_defaults(func=cmd_partition)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ParseError, StructureFormatError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except IDLogicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
