"""Command-line front end.

Every verb writes a JSON report (``--report``, default
``orbipres-report.json``).  Exit status: 0 all checks pass, 1 a check
failed, 2 usage error, 3 a coset enumeration hit its cap.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import __version__
from .coset import default_cap, todd_coxeter
from .grouprep import (
    InvalidLabels,
    braid_graph_with_assignment,
    reflection_group_order,
    verify_nu,
)
from .present import (
    Presentation,
    abelianization,
    artin_b_mod_sd,
    normal_subgroup_generators,
    relations_from_quiver,
)
from .quiver import DecoratedQuiver, mutate, quiver_from_triangulation
from .surface import (
    ConeDisk,
    ModelError,
    TaggedTriangulation,
    brute_force_triangulations,
    dumps_triangulation,
    enumerate_flip_graph,
    flip,
    initial_triangulation,
    random_flip_walk,
    triangulation_from_json,
)
from .words import (
    Word,
    bounded_consequence,
    cycle_shift_instance,
    diagram_check,
    dihedral_transfer_instance,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPPED = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class Outcome:
    """What a verb hands back: report body, status and optional stdout text."""

    result: dict
    status: str = "pass"
    d: int | None = None
    n: int | None = None
    stdout: str = ""
    inputs: dict[str, str] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return {"pass": EXIT_OK, "fail": EXIT_FAIL, "capped": EXIT_CAPPED}[self.status]


def _sha256(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _read_json(path: str, inputs: dict[str, str]) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    inputs[path] = _sha256(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _triangulation(args, inputs: dict[str, str], path_attr: str = "triangulation") -> TaggedTriangulation:
    path = getattr(args, path_attr, None)
    if path:
        obj = _read_json(path, inputs)
        if getattr(args, "d", None) is not None:
            obj = dict(obj, d=args.d)
        try:
            return triangulation_from_json(obj)
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"invalid triangulation in {path}: {exc}") from exc
    return initial_triangulation(_disk(args))


def _disk(args) -> ConeDisk:
    if getattr(args, "n", None) is None or getattr(args, "d", None) is None:
        raise UsageError("give --n and --d, or a triangulation file")
    try:
        return ConeDisk(args.n, args.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _cap(args) -> int:
    if getattr(args, "cap", None) is not None:
        if args.cap <= 0:
            raise UsageError("--cap must be positive")
        return args.cap
    try:
        return default_cap()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def _render(P: Presentation, fmt: str) -> str:
    if fmt == "text":
        return P.to_text()
    if fmt == "algebra":
        return P.to_algebra()
    return json.dumps(P.to_json(), indent=2, sort_keys=True) + "\n"


# -- verbs -------------------------------------------------------------------


def cmd_present(args) -> Outcome:
    inputs: dict[str, str] = {}
    T = _triangulation(args, inputs)
    P = relations_from_quiver(quiver_from_triangulation(T), args.variant)
    text = _render(P, args.format)
    _write(args.out, text)
    return Outcome({"presentation": P.to_json()}, "pass", T.d, T.n, "" if args.out else text, inputs)


def cmd_flip(args) -> Outcome:
    inputs: dict[str, str] = {}
    if not args.input:
        raise UsageError("flip needs --in")
    T = _triangulation(args, inputs, "input")
    if not 1 <= args.slot <= T.n:
        raise UsageError(f"--slot must lie in 1..{T.n}")
    U = flip(T, args.slot)
    text = dumps_triangulation(U)
    _write(args.out, text)
    return Outcome({"slot": args.slot, "triangulation": json.loads(text)}, "pass", T.d, T.n, "" if args.out else text, inputs)


def cmd_mutate(args) -> Outcome:
    inputs: dict[str, str] = {}
    if args.quiver:
        try:
            Q = DecoratedQuiver.from_json(_read_json(args.quiver, inputs))
            Q.validate()
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"invalid quiver: {exc}") from exc
    else:
        Q = quiver_from_triangulation(_triangulation(args, inputs))
    if args.slot not in Q.vertices:
        raise UsageError(f"--slot {args.slot} is not a vertex")
    R = mutate(Q, args.slot)
    text = json.dumps(R.to_json(), indent=2, sort_keys=True) + "\n"
    _write(args.out, text)
    return Outcome({"slot": args.slot, "quiver": R.to_json()}, "pass", Q.d, len(Q.vertices), "" if args.out else text, inputs)


def cmd_orbit(args) -> Outcome:
    disk = _disk(args)
    G = enumerate_flip_graph(disk, limit=args.limit)
    brute = set(brute_force_triangulations(disk)) if args.brute_force else None
    found = {T.arc_set() for T in G.triangulations}
    degrees = G.degree_sequence()
    ok = all(x == disk.n for x in degrees) and (brute is None or brute == found)
    _write(args.dot, G.to_dot())
    _write(args.csv, G.to_csv())
    result = {
        "triangulations": len(G.triangulations),
        "edges": len(G.edges),
        "regular": all(x == disk.n for x in degrees),
        "brute_force": None if brute is None else len(brute),
        "matches_brute_force": None if brute is None else brute == found,
    }
    return Outcome(result, "pass" if ok else "fail", disk.d, disk.n, f"{len(G.triangulations)}\n")


def cmd_verify_mutation(args) -> Outcome:
    disk = _disk(args)
    failures = []
    checked = 0
    if args.exhaustive:
        pairs = ((T, k) for T in enumerate_flip_graph(disk).triangulations for k in T.slots())
        mode = {"mode": "exhaustive"}
    else:
        if args.seed is None:
            raise UsageError("random walks need an explicit --seed")
        rng = random.Random(args.seed)
        pairs = (p for _ in range(args.walks) for p in random_flip_walk(disk, args.steps, rng))
        mode = {"mode": "random", "seed": args.seed, "walks": args.walks, "steps": args.steps}
    triangulations = set()
    for T, k in pairs:
        checked += 1
        triangulations.add(T.arc_set())
        try:
            ok = mutate(quiver_from_triangulation(T), k) == quiver_from_triangulation(flip(T, k))
        except ModelError as exc:
            ok = False
            failures.append({"triangulation": json.loads(dumps_triangulation(T)), "slot": k, "error": str(exc)})
            continue
        if not ok:
            failures.append({"triangulation": json.loads(dumps_triangulation(T)), "slot": k})
    result = dict(mode, checked=checked, triangulations=len(triangulations), failures=failures)
    text = f"{checked} checks, {len(failures)} failures\n"
    return Outcome(result, "fail" if failures else "pass", disk.d, disk.n, text)


def cmd_verify_nu(args) -> Outcome:
    inputs: dict[str, str] = {}
    cap = _cap(args)
    if args.all:
        disk = _disk(args)
        certs = [verify_nu(T, cap=cap) for T in enumerate_flip_graph(disk).triangulations]
        capped = any(c.coset_status == "capped" for c in certs)
        passed = all(c.passed for c in certs)
        result = {"certificates": [c.to_json() for c in certs], "count": len(certs)}
        status = "capped" if capped else ("pass" if passed else "fail")
        return Outcome(result, status, disk.d, disk.n, f"{sum(c.passed for c in certs)}/{len(certs)} pass\n")
    T = _triangulation(args, inputs)
    labels = None
    if args.labels:
        try:
            labels = {int(k): int(v) for k, v in json.loads(args.labels).items()}
        except (ValueError, AttributeError) as exc:
            raise UsageError(f"--labels must be a JSON object slot->int: {exc}") from exc
    try:
        _, R = braid_graph_with_assignment(T, labels, strict=not args.allow_degenerate)
    except InvalidLabels as exc:
        raise UsageError(str(exc)) from exc
    cert = verify_nu(T, R, cap=cap)
    status = "capped" if cert.coset_status == "capped" else ("pass" if cert.passed else "fail")
    result = {"certificate": cert.to_json(), "assignment": R.to_json()}
    return Outcome(result, status, T.d, T.n, f"{'pass' if cert.passed else 'fail'}\n", inputs)


def cmd_order(args) -> Outcome:
    inputs: dict[str, str] = {}
    T = _triangulation(args, inputs)
    P = relations_from_quiver(quiver_from_triangulation(T), args.variant)
    res = todd_coxeter(P, (), _cap(args), args.strategy)
    if res.table.status == "complete":
        _write(args.table_csv, res.table.to_csv())
    expected = reflection_group_order(T.d, T.n) if args.variant == "reflection" else None
    result = {"order": res.index, "status": res.status, "expected": expected, "log": res.log.to_json()}
    if not res.complete:
        return Outcome(result, "capped", T.d, T.n, "capped\n", inputs)
    ok = expected is None or res.index == expected
    return Outcome(result, "pass" if ok else "fail", T.d, T.n, f"{res.index}\n", inputs)


def cmd_index_n(args) -> Outcome:
    disk = _disk(args)
    P = artin_b_mod_sd(disk.d, disk.n)
    H = normal_subgroup_generators(disk.n)
    res = todd_coxeter(P, H, _cap(args), args.strategy)
    result = {"index": res.index, "status": res.status, "log": res.log.to_json()}
    if not res.complete:
        return Outcome(result, "capped", disk.d, disk.n, "capped\n")
    reps = res.table.representatives()
    powers_of_s = {str(Word.of(*["s"] * m)) for m in range(res.index)} | {
        str(Word((("s", -1),) * m)) for m in range(res.index)
    }
    s_orbit = [0]
    col = res.table.column("s")
    while len(s_orbit) <= res.index:
        nxt = res.table.rows[s_orbit[-1]][col]
        if nxt == 0:
            break
        s_orbit.append(nxt)
    result["representatives"] = [str(w) for w in reps]
    result["cosets_are_powers_of_s"] = sorted(s_orbit) == list(range(res.index))
    result["shortlex_representatives_are_powers_of_s"] = all(str(w) in powers_of_s for w in reps)
    ok = res.index == disk.d and result["cosets_are_powers_of_s"]
    return Outcome(result, "pass" if ok else "fail", disk.d, disk.n, f"{res.index}\n")


def cmd_diagram_check(args) -> Outcome:
    disk = _disk(args)
    rep = diagram_check(disk.d, disk.n, args.sign)
    return Outcome(rep.to_json(), "pass" if rep.passed else "fail", disk.d, disk.n, f"{'pass' if rep.passed else 'fail'}\n")


def cmd_abelianization(args) -> Outcome:
    inputs: dict[str, str] = {}
    T = _triangulation(args, inputs)
    ab = abelianization(relations_from_quiver(quiver_from_triangulation(T), args.variant))
    return Outcome(ab.to_json(), "pass", T.d, T.n, json.dumps(ab.to_json(), sort_keys=True) + "\n", inputs)


def cmd_prove(args) -> Outcome:
    inputs: dict[str, str] = {}
    if args.fixture == "dihedral":
        if args.d is None:
            raise UsageError("the dihedral fixture needs --d")
        P, lhs, rhs = dihedral_transfer_instance(args.d)
    elif args.fixture == "cycle-shift":
        P, lhs, rhs = cycle_shift_instance(args.n or 3, args.d or 2)
    else:
        if not (args.presentation and args.lhs is not None and args.rhs is not None):
            raise UsageError("give --fixture, or --presentation with --lhs and --rhs")
        try:
            inputs[args.presentation] = _sha256(args.presentation)
            P = Presentation.from_text(Path(args.presentation).read_text())
            lhs, rhs = Word.parse(args.lhs), Word.parse(args.rhs)
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
    try:
        res = bounded_consequence(P, lhs, rhs, depth=args.depth)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = {"lhs": str(lhs), "rhs": str(rhs), "status": res.status, "depth": res.depth, "explored": res.explored, "path": res.path}
    return Outcome(result, "pass" if res.proved else "fail", args.d, args.n, f"{res.status}\n", inputs)


# -- parser ------------------------------------------------------------------


def _add_dn(p, required: bool = False) -> None:
    p.add_argument("--d", type=int, required=required, help="cone point degree")
    p.add_argument("--n", type=int, required=required, help="number of boundary points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbipres", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"orbipres {__version__}")
    parser.add_argument("--report", default="orbipres-report.json", help="where to write the JSON report")
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name: str, func: Callable, help: str):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        p.add_argument("--report", default=argparse.SUPPRESS, help="where to write the JSON report")
        return p

    p = verb("present", cmd_present, "presentation of a triangulation's quiver group")
    _add_dn(p)
    p.add_argument("--triangulation")
    p.add_argument("--variant", choices=["braid", "reflection", "no_cycle"], default="braid")
    p.add_argument("--format", choices=["json", "text", "algebra"], default="text")
    p.add_argument("--out")

    p = verb("flip", cmd_flip, "flip one arc of a triangulation")
    p.add_argument("--in", dest="input")
    p.add_argument("--slot", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--d", type=int, help=argparse.SUPPRESS)

    p = verb("mutate", cmd_mutate, "mutate a decorated quiver")
    _add_dn(p)
    p.add_argument("--quiver")
    p.add_argument("--triangulation")
    p.add_argument("--slot", type=int, required=True)
    p.add_argument("--out")

    p = verb("orbit", cmd_orbit, "enumerate the flip graph")
    _add_dn(p, required=True)
    p.add_argument("--limit", type=int, default=100_000)
    p.add_argument("--brute-force", action="store_true")
    p.add_argument("--dot")
    p.add_argument("--csv")

    p = verb("verify-mutation", cmd_verify_mutation, "compare quiver mutation with flips")
    _add_dn(p, required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--walks", type=int, default=100)
    p.add_argument("--steps", type=int, default=20)

    p = verb("verify-nu", cmd_verify_nu, "certify the reflection representation")
    _add_dn(p)
    p.add_argument("--triangulation")
    p.add_argument("--labels", help='JSON object, e.g. {"1": 1, "2": 0}')
    p.add_argument("--allow-degenerate", action="store_true", help="accept labels whose cycle sum is not coprime to d")
    p.add_argument("--all", action="store_true", help="every triangulation of the disk")
    p.add_argument("--cap", type=int)

    p = verb("order", cmd_order, "group order by coset enumeration")
    _add_dn(p)
    p.add_argument("--triangulation")
    p.add_argument("--variant", choices=["braid", "reflection", "no_cycle"], default="reflection")
    p.add_argument("--strategy", choices=["hlt", "felsch"], default="hlt")
    p.add_argument("--cap", type=int)
    p.add_argument("--table-csv")

    p = verb("index-n", cmd_index_n, "index of N in the type-B Artin group mod s^d")
    _add_dn(p, required=True)
    p.add_argument("--strategy", choices=["hlt", "felsch"], default="hlt")
    p.add_argument("--cap", type=int)

    p = verb("diagram-check", cmd_diagram_check, "finite check of the commuting square")
    _add_dn(p, required=True)
    p.add_argument("--sign", type=int, choices=[-1, 1], default=-1)

    p = verb("abelianization", cmd_abelianization, "abelian invariants of a quiver group")
    _add_dn(p)
    p.add_argument("--triangulation")
    p.add_argument("--variant", choices=["braid", "reflection", "no_cycle"], default="braid")

    p = verb("prove", cmd_prove, "bounded search for a consequence of relators")
    _add_dn(p)
    p.add_argument("--fixture", choices=["dihedral", "cycle-shift"])
    p.add_argument("--presentation", help="file in the gens:/rel: text format")
    p.add_argument("--lhs")
    p.add_argument("--rhs")
    p.add_argument("--depth", type=int, default=12)
    return parser


def make_report(args, out: Outcome, argv: list[str]) -> dict:
    return {
        "tool": "orbipres",
        "version": __version__,
        "command": args.verb,
        "argv": argv,
        "d": out.d,
        "n": out.n,
        "inputs": dict(sorted(out.inputs.items())),
        "status": out.status,
        "exit_code": out.exit_code,
        "result": out.result,
    }


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = args.func(args)
    except UsageError as exc:
        print(f"orbipres {args.verb}: {exc}", file=sys.stderr)
        report = {"tool": "orbipres", "version": __version__, "command": args.verb, "argv": argv,
                  "status": "usage_error", "exit_code": EXIT_USAGE, "error": str(exc)}
        Path(args.report).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        return EXIT_USAGE
    Path(args.report).write_text(json.dumps(make_report(args, out, argv), indent=2, sort_keys=True) + "\n")
    if out.stdout:
        sys.stdout.write(out.stdout)
    return out.exit_code


if __name__ == "__main__":
    sys.exit(main())
