"""Command-line front end.

Exit codes: 0 success, 1 a checked property is false, 2 usage or bad input,
3 I/O, 4 internal assertion (a computation contradicted a proven result).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import catalog
from .enumeration import enumerate_lattices
from .errors import (BoundExceeded, FiberUnstable, InternalCaseExhaustion, LatticeError,
                     MismatchWithOracle, NonCanonicalIntersection, TheoremViolated)
from .identities import IDENTITIES, check_identity, h_modularity_index
from .lattice import FiniteLattice, are_isomorphic, format_lattice, parse_lattice

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_IO, EXIT_INTERNAL = 0, 1, 2, 3, 4

SUBCOMMANDS = ("check", "tensor", "tensun", "klat", "kclosure", "enumerate", "term")

_INTERNAL = (TheoremViolated, InternalCaseExhaustion, MismatchWithOracle, FiberUnstable,
             BoundExceeded, NonCanonicalIntersection)


class UsageError(Exception):
    pass


class FileNotFound(Exception):
    pass


@dataclass
class CommandPlan:
    subcommand: str
    inputs: list
    options: dict = field(default_factory=dict)
    output_format: str = "text"


def render_dot(L: FiniteLattice, name: str = "lattice") -> str:
    """Hasse diagram in DOT syntax, bottom to top."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for x in L.elements:
        lines.append(f'  n{x} [label="{L.name(x)}"];')
    for i, j in L.covers:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="latticeforge", description="Finite lattices, tensor products and the lattice K.")
    sub = p.add_subparsers(dest="subcommand", parser_class=_Parser)

    def fmt(sp, choices=("text", "json")):
        sp.add_argument("--format", "--report", dest="format", choices=choices, default="text")

    c = sub.add_parser("check", help="decide properties of a lattice file")
    c.add_argument("file")
    c.add_argument("--tjoin", action="store_true")
    c.add_argument("--simple", action="store_true")
    c.add_argument("--dpt", action="store_true")
    c.add_argument("--hmod", action="store_true")
    c.add_argument("--identity", action="append", choices=IDENTITIES, default=[])
    c.add_argument("--dot")
    fmt(c, ("text", "json", "dot"))

    t = sub.add_parser("tensor", help="tensor product of two lattice files")
    t.add_argument("file_a")
    t.add_argument("file_b")
    t.add_argument("--oracle", action="store_true")
    t.add_argument("--dot")
    fmt(t, ("text", "json", "dot"))

    u = sub.add_parser("tensun", help="join of pure tensors vs union over terms")
    u.add_argument("file_a")
    u.add_argument("file_b")
    u.add_argument("--pairs", required=True, help="comma list a:b of element labels")
    u.add_argument("--depth", type=int, default=4)
    fmt(u)

    k = sub.add_parser("klat", help="checks on the lattice K")
    k.add_argument("--check-2modular", type=int, dest="check_2modular")
    k.add_argument("--truncate", type=int)
    k.add_argument("--dot")
    fmt(k, ("text", "json", "dot"))

    kc = sub.add_parser("kclosure", help="capped joins of pure tensors in K (x) L")
    kc.add_argument("--lattice", required=True)
    kc.add_argument("--h", type=int, required=True)
    kc.add_argument("--tensors", required=True, help='comma list "u*xi", e.g. "a0*p,b0*q"')
    kc.add_argument("--truncate", type=int)
    fmt(kc)

    e = sub.add_parser("enumerate", help="all lattices of a given size up to isomorphism")
    e.add_argument("n", type=int)
    e.add_argument("--out-dir")
    fmt(e)

    tm = sub.add_parser("term", help="free-lattice terms")
    tsub = tm.add_subparsers(dest="action", parser_class=_Parser)
    leq = tsub.add_parser("leq")
    leq.add_argument("p")
    leq.add_argument("q")
    fmt(leq)
    du = tsub.add_parser("dual")
    du.add_argument("p")
    fmt(du)
    ev = tsub.add_parser("eval")
    ev.add_argument("p")
    ev.add_argument("--lattice", required=True)
    ev.add_argument("--assign", required=True, help="comma list var=label")
    fmt(ev)
    return p


_FILE_OPTS = {"check": ["file"], "tensor": ["file_a", "file_b"], "tensun": ["file_a", "file_b"],
              "kclosure": ["lattice"], "term": ["lattice"]}


def _is_catalog(ref: str) -> bool:
    return ref.startswith("catalog:")


def parse_args(argv) -> CommandPlan:
    ns = _build_parser().parse_args(list(argv))
    if ns.subcommand is None:
        raise UsageError(f"expected a subcommand: {', '.join(SUBCOMMANDS)}")
    if ns.subcommand == "term" and ns.action is None:
        raise UsageError("expected term leq|dual|eval")
    opts = {k: v for k, v in vars(ns).items() if k != "subcommand"}
    inputs = []
    for key in _FILE_OPTS.get(ns.subcommand, []):
        ref = opts.get(key)
        if ref is None:
            continue
        if not _is_catalog(ref) and not os.path.isfile(ref):
            raise FileNotFound(ref)
        inputs.append(ref)
    return CommandPlan(ns.subcommand, inputs, opts, ns.format)


def load_lattice(ref: str) -> FiniteLattice:
    """Read a lattice file; ``catalog:<name>`` selects a built-in lattice."""
    if _is_catalog(ref):
        return catalog.by_name(ref.split(":", 1)[1])
    try:
        with open(ref) as fh:
            return parse_lattice(fh.read())
    except OSError as exc:
        raise FileNotFound(ref) from exc


def _write(path, text):
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise FileNotFound(path) from exc


def _emit_dot(o, text, report):
    if o.get("dot"):
        _write(o["dot"], text)
    if o.get("format") == "dot":
        report["dot"] = text


# ----------------------------------------------------------------------------
# Subcommands; each returns (exit code, report dict)

def _run_check(o):
    from .structure import dpt_holds, is_simple, satisfies_T_join
    L = load_lattice(o["file"])
    report = {"size": L.size}
    ok = True
    if o["tjoin"]:
        holds, cycle = satisfies_T_join(L)
        report["T_join"] = holds
        if not holds:
            report["cycle"] = [L.name(x) for x in cycle]
        ok &= holds
    if o["simple"]:
        s = is_simple(L)
        report["simple"] = s
        ok &= s
    if o["dpt"]:
        holds, w = dpt_holds(L)
        report["DPT"] = holds
        if not holds:
            report["dpt_witness"] = [L.name(x) for x in w]
        ok &= holds
    for which in o["identity"]:
        holds, w = check_identity(L, which)
        report[which] = holds
        if not holds:
            report[f"{which}_witness"] = [L.name(x) for x in w]
        ok &= holds
    if o["hmod"]:
        report["h_modularity_index"] = h_modularity_index(L)
    _emit_dot(o, render_dot(L), report)
    return (EXIT_OK if ok else EXIT_FALSE), report


def _run_tensor(o):
    from .tensor import brute_force_biideals, capping_of, element_of, tensor_lattice
    A, B = load_lattice(o["file_a"]), load_lattice(o["file_b"])
    T = tensor_lattice(A, B)
    sizes = {}
    for i in T.elements:
        n = len(capping_of(element_of(A, B, T, i)).pairs)
        sizes[n] = sizes.get(n, 0) + 1
    report = {"elements": T.size, "capping_sizes": {str(k): v for k, v in sorted(sizes.items())}}
    code = EXIT_OK
    if o["oracle"]:
        O, _ = brute_force_biideals(A, B)
        iso = are_isomorphic(T, O)[0]
        report["oracle_elements"] = O.size
        report["oracle_isomorphic"] = iso
        code = EXIT_OK if iso else EXIT_INTERNAL
    _emit_dot(o, render_dot(T, "tensor"), report)
    return code, report


def _parse_pairs(A, B, text):
    out = []
    for item in text.split(","):
        a, sep, b = item.strip().partition(":")
        if not sep:
            raise UsageError(f"pair {item!r} must look like a:b")
        out.append((A.index(a), B.index(b)))
    return out


def _run_tensun(o):
    from .tensor import tensun_verify
    A, B = load_lattice(o["file_a"]), load_lattice(o["file_b"])
    try:
        pairs = _parse_pairs(A, B, o["pairs"])
    except KeyError as exc:
        raise UsageError(f"unknown element {exc}") from None
    ok, rep = tensun_verify(A, B, pairs, o["depth"])
    report = {"holds": ok, "equal": rep["equal"], "union_is_bi_ideal": rep["union_is_bi_ideal"],
              "depth_reached": rep["depth_reached"],
              "trace": [f"{t} -> ({A.name(p)}, {B.name(q)})" for t, p, q in rep["trace"]]}
    return (EXIT_OK if ok else EXIT_FALSE), report


def _run_klat(o):
    from .klat import format_kelem, k_check_2modular, k_truncation
    report = {}
    if o["check_2modular"] is None and o["truncate"] is None:
        raise UsageError("klat needs --check-2modular and/or --truncate")
    if o["check_2modular"] is not None:
        ok, w = k_check_2modular(o["check_2modular"])
        report["two_modular"] = ok
        report["nonmodular_witness"] = [format_kelem(e) for e in w]
    if o["truncate"] is not None:
        L, _ = k_truncation(o["truncate"])
        report["truncation_size"] = L.size
        _emit_dot(o, render_dot(L, "K"), report)
    return EXIT_OK, report


def _run_kclosure(o):
    from .klat import parse_kelem
    from .kclosure import verify_capped
    L = load_lattice(o["lattice"])
    tensors = []
    for item in o["tensors"].split(","):
        u, sep, xi = item.strip().partition("*")
        if not sep:
            raise UsageError(f"tensor {item!r} must look like u*xi")
        try:
            tensors.append((parse_kelem(u), L.index(xi)))
        except (ValueError, KeyError) as exc:
            raise UsageError(str(exc)) from None
    return EXIT_OK, verify_capped(L, tensors, o["h"], o["truncate"])


def _run_enumerate(o):
    lattices = list(enumerate_lattices(o["n"]))
    if o["out_dir"]:
        try:
            os.makedirs(o["out_dir"], exist_ok=True)
        except OSError as exc:
            raise FileNotFound(o["out_dir"]) from exc
        for i, L in enumerate(lattices):
            _write(os.path.join(o["out_dir"], f"lattice{o['n']}_{i:03d}.lat"), format_lattice(L))
    return EXIT_OK, {"n": o["n"], "count": len(lattices),
                     "lattices": [format_lattice(L) for L in lattices]}


def _run_term(o):
    from .terms import dual_term, eval_term, format_term, free_leq, parse_term
    action = o["action"]
    if action == "leq":
        holds = free_leq(parse_term(o["p"]), parse_term(o["q"]))
        return (EXIT_OK if holds else EXIT_FALSE), {"leq": holds}
    if action == "dual":
        return EXIT_OK, {"dual": format_term(dual_term(parse_term(o["p"])))}
    L = load_lattice(o["lattice"])
    assignment = {}
    for item in o["assign"].split(","):
        var, sep, label = item.strip().partition("=")
        if not sep:
            raise UsageError(f"assignment {item!r} must look like var=label")
        try:
            assignment[var] = L.index(label)
        except KeyError:
            raise UsageError(f"unknown element {label!r}") from None
    return EXIT_OK, {"value": L.name(eval_term(parse_term(o["p"]), L, assignment))}


_RUNNERS = {"check": _run_check, "tensor": _run_tensor, "tensun": _run_tensun, "klat": _run_klat,
            "kclosure": _run_kclosure, "enumerate": _run_enumerate, "term": _run_term}


def run(plan: CommandPlan):
    """Execute a plan; returns ``(exit_code, report)``."""
    try:
        return _RUNNERS[plan.subcommand](plan.options)
    except FileNotFound as exc:
        return EXIT_IO, {"error": f"file not found: {exc}"}
    except UsageError as exc:
        return EXIT_USAGE, {"error": str(exc)}
    except _INTERNAL as exc:
        return EXIT_INTERNAL, {"error": f"internal assertion: {exc}"}
    except (LatticeError, ValueError) as exc:
        return EXIT_USAGE, {"error": str(exc)}


def _value_text(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, (list, tuple)):
        return " ".join(_value_text(x) for x in v)
    return str(v)


def format_report(report: dict, output_format: str) -> str:
    if output_format == "dot" and "dot" in report:
        return report["dot"]
    if output_format == "json":
        return json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    lines = []
    for k, v in report.items():
        if k == "dot":
            continue
        if k == "lattices":
            lines.extend(x.rstrip("\n") + "\n" for x in v)
        elif k == "trace" or (isinstance(v, list) and v and isinstance(v[0], (list, tuple))):
            lines.append(f"{k}:")
            lines.extend(f"  {_value_text(x)}" for x in v)
        elif isinstance(v, dict):
            lines.append(f"{k}: " + ", ".join(f"{a}={b}" for a, b in v.items()))
        else:
            lines.append(f"{k}: {_value_text(v)}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        plan = parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"latticeforge: usage error: {exc}\n")
        return EXIT_USAGE
    except FileNotFound as exc:
        sys.stderr.write(f"latticeforge: file not found: {exc}\n")
        return EXIT_IO
    code, report = run(plan)
    out = sys.stderr if "error" in report and code >= EXIT_USAGE else sys.stdout
    out.write(format_report(report, plan.output_format))
    return code


if __name__ == "__main__":
    sys.exit(main())
