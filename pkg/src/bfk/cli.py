"""Command-line front door.

Each invocation reads one object per file, runs one kernel operation and
prints a report.  ``--format machine`` switches to ``key=value`` lines.

Exit codes: 0 success, 1 verification failure, 2 malformed input or any
kernel error (the error class name is printed).

Diagram literal grammar (coefficients in module files)::

    diagram := "S={" ints "}" " T={" ints "}" " phi=[" maps "]"
    ints    := (int ("," int)*)?
    maps    := (int ">" int ("," int ">" int)*)?
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Sequence

from . import arcalg, diagrams, f2, grading, modules, pairing, pmc
from .errors import BFKError, MalformedInput


class _Out:
    def __init__(self, machine: bool):
        self.machine = machine
        self.lines: list[str] = []

    def kv(self, key: str, value) -> None:
        if self.machine:
            self.lines.append(f"{key}={value}")

    def human(self, text: str) -> None:
        if not self.machine:
            self.lines.append(text)

    def flush(self) -> None:
        if self.lines:
            sys.stdout.write("\n".join(self.lines) + "\n")


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise MalformedInput(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _framing(text: str):
    if text == modules.INF:
        return modules.INF
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"framing must be an integer or {modules.INF!r}") from None


# -- subcommands ----------------------------------------------------------------

def _pmc_check(args, out: _Out) -> int:
    z = pmc.from_json(_load(args.file))
    out.human(f"valid pointed matched circle, genus {pmc.genus(z)}: {z}")
    out.kv("status", "valid")
    out.kv("genus", pmc.genus(z))
    out.kv("matching", " ".join(f"{p}-{q}" for p, q in z.pairs))
    return 0


def _pmc_enumerate(args, out: _Out) -> int:
    circles = pmc.enumerate_circles(args.k)
    out.human(f"{len(circles)} pointed matched circles of genus {args.k}")
    out.kv("count", len(circles))
    for z in circles:
        text = " ".join(f"{p}-{q}" for p, q in z.pairs)
        out.human(f"  {text}")
        out.kv("circle", text)
    return 0


def _algebra_basis(args, out: _Out) -> int:
    z = pmc.from_json(_load(args.file))
    if not -z.k <= args.i <= z.k:
        raise MalformedInput(f"-i: summand {args.i} outside {-z.k}..{z.k}")
    gens = arcalg.basis(z, args.i)
    out.human(f"A(Z, {args.i}) has {len(gens)} basic generators")
    out.kv("count", len(gens))
    for g in gens:
        out.human(f"  {g}")
        out.kv("gen", g)
    return 0


def _algebra_poincare(args, out: _Out) -> int:
    z = pmc.from_json(_load(args.file))
    poly = arcalg.poincare_polynomial(z)
    text = " ".join(map(str, poly))
    out.human(text)
    out.kv("poincare", text)
    return 0


def _parse_grade(value, where: str):
    if isinstance(value, int):
        return value
    if isinstance(value, dict) and "m2" in value and "h1" in value:
        return value
    raise MalformedInput(f"{where}: expected an integer or {{\"m2\", \"h1\"}}")


def _grading_check(args, out: _Out) -> int:
    from .strands import parse_diagram

    z = pmc.from_json(_load(args.file))
    doc = _load(args.grading)
    if not isinstance(doc, dict) or "grades" not in doc:
        raise MalformedInput("grades: missing")
    summand = doc.get("summand", 0)
    group = grading.GradingGroup(doc["form"]) if "form" in doc else grading.grading_group(z)
    table = {}
    for i, entry in enumerate(doc["grades"]):
        if not isinstance(entry, dict) or "gen" not in entry or "value" not in entry:
            raise MalformedInput(f"grades[{i}]: needs gen and value")
        elem = arcalg.a_map(parse_diagram(entry["gen"], z.n_points), z)
        if not elem:
            raise MalformedInput(f"grades[{i}].gen: not equitable")
        raw = _parse_grade(entry["value"], f"grades[{i}].value")
        if isinstance(raw, dict):
            raw = group.element(raw["m2"], raw["h1"])
        table[next(iter(elem.gens))] = raw
    report = grading.check_algebra_grading(arcalg.basis(z, summand), table)
    out.human(f"checked {report.checked} containments, {len(report.violations)} violations")
    for v in report.violations:
        out.human(f"  {v}")
    out.kv("checked", report.checked)
    out.kv("violations", len(report.violations))
    for v in report.violations:
        out.kv("violation", v)
    return 0 if report.ok else 1


def _module_verify(args, out: _Out) -> int:
    m = modules.module_from_json(_load(args.file))
    if isinstance(m, modules.TypeDStructure):
        report = modules.verify_type_d(m)
        kind = "type D"
    elif isinstance(m, modules.AInfModule):
        report = modules.verify_a_inf(m, args.nmax)
        kind = "A-infinity"
    elif isinstance(m, modules.TypeDDBimodule):
        report = modules.verify_type_dd(m)
        kind = "type DD"
    else:
        report = modules.verify_type_da(m, args.nmax)
        kind = "type DA"
    status = "ok" if report.ok else "fail"
    out.human(f"{kind} structure relation: {status} ({report.checked} checks, {len(report.failures)} failures)")
    for line in report.lines():
        out.human(f"  {line}")
    out.kv("kind", kind.replace(" ", "_"))
    out.kv("status", status)
    out.kv("checked", report.checked)
    out.kv("failures", len(report.failures))
    for line in report.lines():
        out.kv("failure", line)
    if isinstance(m, modules.TypeDStructure):
        out.human(f"bounded: {modules.is_bounded(m)}")
        out.kv("bounded", str(modules.is_bounded(m)).lower())
    return 0 if report.ok else 1


def _module_solve(args, out: _Out) -> int:
    m = modules.module_from_json(_load(args.file))
    if not isinstance(m, modules.TypeDStructure):
        raise MalformedInput("side: module solve needs a type D structure")
    doc = _load(args.support)
    if not isinstance(doc, dict) or "unknowns" not in doc:
        raise MalformedInput("unknowns: missing")
    support = []
    for i, e in enumerate(doc["unknowns"]):
        if not isinstance(e, dict) or not {"from", "coeff", "to"} <= set(e):
            raise MalformedInput(f"unknowns[{i}]: needs from, coeff, to")
        for key in ("from", "to"):
            if e[key] not in m.idem:
                raise MalformedInput(f"unknowns[{i}].{key}: unknown generator {e[key]!r}")
        support.append((e["from"], modules._literal(m.circle, e["coeff"]), e["to"]))
    fixed = [(x, rep, y) for (x, y), a in m.delta.items() for rep in a]
    sols = modules.solve_delta(m.circle, m.gens, m.idem, support, fixed)
    out.human(f"{len(sols)} solutions over {len(support)} unknowns")
    out.kv("unknowns", len(support))
    out.kv("solutions", len(sols))
    for k, s in enumerate(sols):
        present = {(x, rep, y) for (x, y), a in s.delta.items() for rep in a}
        bits = "".join("1" if t in present else "0" for t in support)
        out.human(f"  solution {k}: {bits}")
        out.kv("solution", bits)
    return 0


def _side_a(doc):
    m = modules.module_from_json(doc)
    if isinstance(m, modules.TypeDStructure):
        return modules.dual_d_to_a(m), True
    if not isinstance(m, modules.AInfModule):
        raise MalformedInput("side: first box factor must be A or D")
    return m, False


def _side_d(doc, what: str):
    m = modules.module_from_json(doc)
    if not isinstance(m, modules.TypeDStructure):
        raise MalformedInput(f"side: {what} must be a type D structure")
    return m


def _report_complex(c: f2.ChainComplexF2, out: _Out) -> None:
    h = f2.homology_dim(c)
    out.human(f"generators = {len(c)}")
    out.human(f"H dim = {h}")
    out.kv("generators", len(c))
    out.kv("h_dim", h)


def _pair_box(args, out: _Out) -> int:
    m, dualized = _side_a(_load(args.m))
    n = _side_d(_load(args.n), "second box factor")
    if dualized:
        out.human("first factor is type D; using its dual A-module")
    out.kv("dualized", str(dualized).lower())
    _report_complex(pairing.box_tensor(m, n), out)
    return 0


def _pair_mor(args, out: _Out) -> int:
    m1 = _side_d(_load(args.m1), "M1")
    m2 = _side_d(_load(args.m2), "M2")
    _report_complex(pairing.mor_complex_d(m1, m2), out)
    return 0


def _pair_hh(args, out: _Out) -> int:
    b = modules.module_from_json(_load(args.b))
    if not isinstance(b, modules.TypeDABimodule):
        raise MalformedInput("side: pair hh needs a DA bimodule")
    _report_complex(pairing.hochschild(b), out)
    return 0


def _diagram_gens(args, out: _Out) -> int:
    h = diagrams.from_json(_load(args.file))
    z = diagrams.boundary_pmc(h)
    gens = diagrams.generators(h)
    out.human(f"boundary circle: {z}")
    out.human(f"{len(gens)} generators")
    out.kv("boundary", " ".join(f"{p}-{q}" for p, q in z.pairs))
    out.kv("count", len(gens))
    for x in gens:
        label = ",".join(f"{h.points[i].alpha}/{h.points[i].beta}" for i in x)
        ia = sorted(diagrams.idempotent_a(h, x))
        idd = sorted(diagrams.idempotent_d(h, x))
        out.human(f"  {label}  I_A={ia}  I_D={idd}")
        out.kv("gen", f"{label} I_A={ia} I_D={idd}".replace(" ", ""))
    return 0


def _module_builtin(args, out: _Out) -> int:
    if args.side == "D":
        m = modules.builtin_solid_torus_d(args.framing)
    else:
        m = modules.builtin_solid_torus_a(args.framing, args.model)
    sys.stdout.write(json.dumps(modules.module_to_json(m), indent=2, sort_keys=True) + "\n")
    return 0


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["human", "machine"], default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="bfk", description="bordered Floer combinatorial kernel")
    p.add_argument("--format", choices=["human", "machine"], default="human")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized routines")
    p.add_argument("--jobs", type=int, default=1, help="worker cap (the kernel runs single-threaded)")
    groups = p.add_subparsers(dest="group", required=True)

    def leaf(sub, name, func, help_text):
        q = sub.add_parser(name, parents=[common], help=help_text)
        q.set_defaults(func=func)
        return q

    g = groups.add_parser("pmc").add_subparsers(dest="cmd", required=True)
    leaf(g, "check", _pmc_check, "validate a pointed matched circle").add_argument("file")
    leaf(g, "enumerate", _pmc_enumerate, "list all circles of a genus").add_argument("-k", type=int, required=True)

    g = groups.add_parser("algebra").add_subparsers(dest="cmd", required=True)
    q = leaf(g, "basis", _algebra_basis, "basic generators of A(Z, i)")
    q.add_argument("file")
    q.add_argument("-i", type=int, required=True)
    leaf(g, "poincare", _algebra_poincare, "homology dimensions of A(Z, i)").add_argument("file")

    g = groups.add_parser("grading").add_subparsers(dest="cmd", required=True)
    q = leaf(g, "check", _grading_check, "check a grading of one algebra summand")
    q.add_argument("file")
    q.add_argument("grading")

    g = groups.add_parser("module").add_subparsers(dest="cmd", required=True)
    q = leaf(g, "verify", _module_verify, "check the structure relation")
    q.add_argument("file")
    q.add_argument("--nmax", type=int, default=6)
    q = leaf(g, "solve", _module_solve, "solve for delta coefficients")
    q.add_argument("file")
    q.add_argument("support")
    q = leaf(g, "builtin", _module_builtin, "print a built-in solid torus module")
    q.add_argument("framing", type=_framing)
    q.add_argument("--side", choices=["D", "A"], default="D")
    q.add_argument("--model", choices=["dual", "periodic"], default="dual")

    g = groups.add_parser("pair").add_subparsers(dest="cmd", required=True)
    q = leaf(g, "box", _pair_box, "box tensor product M box N")
    q.add_argument("m")
    q.add_argument("n")
    q = leaf(g, "mor", _pair_mor, "Mor complex of two type D structures")
    q.add_argument("m1")
    q.add_argument("m2")
    leaf(g, "hh", _pair_hh, "Hochschild complex of a DA bimodule").add_argument("b")

    g = groups.add_parser("diagram").add_subparsers(dest="cmd", required=True)
    leaf(g, "gens", _diagram_gens, "generators of a bordered diagram").add_argument("file")
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs: must be at least 1")
    random.seed(args.seed)
    out = _Out(args.format == "machine")
    try:
        code = args.func(args, out)
    except (BFKError, ValueError) as exc:
        out.flush()
        name = type(exc).__name__ if isinstance(exc, BFKError) else "MalformedInput"
        if out.machine:
            sys.stdout.write(f"error={name}\nmessage={exc}\n")
        else:
            sys.stderr.write(f"{name}: {exc}\n")
        return 2
    out.flush()
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
