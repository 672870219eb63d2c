"""Command-line front end.

Exit codes: 0 when the checked property holds (or the command simply ran),
1 when it fails (a witness is printed), 2 on bad input or a size-guard hit.
"""
from __future__ import annotations

import argparse
import random
import sys
import time
from typing import Sequence

from . import coalgebra as co
from . import formats, nabla as nb, profinite as pf, stone_hat as sh
from .errors import StoneCoalgError, size_guard
from .functor import barr_lift, check_lax_laws, random_samples
from .relation import Relation
from .syntax import parse_carrier, parse_functor, parse_relation, parse_value, render_relation, render_value

HOLDS, FAILS, BAD_INPUT = 0, 1, 2


class Report:
    """Ordered key/value lines; values are rendered in the literal grammar."""

    def __init__(self):
        self.items: list[tuple[str, str]] = []

    def add(self, key: str, value) -> None:
        self.items.append((key, _render(value)))

    def emit(self, fmt: str, out) -> None:
        sep = "=" if fmt == "machine" else ": "
        for k, v in self.items:
            print(f"{k}{sep}{v}", file=out)


def _render(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Relation):
        return render_relation(value)
    if isinstance(value, Text):
        return str(value)
    return render_value(value)


class Text(str):
    """Free text, printed as is rather than as a literal."""


# -- shared loaders ----------------------------------------------------------

def _coalgebra(path: str) -> co.FinCoalgebra:
    return formats.parse_coalgebra(formats.read_text(path))


def _relation(args, a: co.FinCoalgebra, b: co.FinCoalgebra) -> Relation:
    text = args.rel
    if args.rel_file:
        text = formats.read_text(args.rel_file)
    if text is None:
        raise StoneCoalgError("give the relation with --rel or --rel-file")
    return parse_relation(text.strip(), a.carrier, b.carrier)


def _add_pair_args(p: argparse.ArgumentParser, relation: bool = True) -> None:
    p.add_argument("a", help="coalgebra file for the left system")
    p.add_argument("b", help="coalgebra file for the right system")
    if relation:
        p.add_argument("--rel", help="relation literal such as {(a,1),(b,1)}")
        p.add_argument("--rel-file", help="file holding a relation literal")


def _verdict(report: Report, holds: bool) -> int:
    report.add("holds", holds)
    return HOLDS if holds else FAILS


# -- commands ----------------------------------------------------------------

def cmd_lift(args, report: Report) -> int:
    f = parse_functor(args.functor)
    dom, cod = parse_carrier(args.dom), parse_carrier(args.cod)
    r = parse_relation(args.rel, dom, cod)
    lifted = barr_lift(f, r)
    report.add("functor", Text(str(f)))
    report.add("size_dom", len(lifted.dom))
    report.add("size_cod", len(lifted.cod))
    report.add("pairs", len(lifted))
    report.add("lifted", lifted)
    return HOLDS


def cmd_nabla(args, report: Report) -> int:
    base = parse_carrier(args.base)
    if args.op == "eval":
        f = parse_functor(args.functor)
        table = nb.nabla_table(f, base)
        result = nb.nabla(f, base, parse_value(args.formula))
        report.add("formulas", len(table.formulas))
        report.add("universe", len(table.universe))
    else:
        z = parse_carrier(args.set)
        result = (nb.diamond if args.op == "diamond" else nb.box)(base, z)
    report.add("size", len(result))
    report.add("extension", frozenset(result))
    return HOLDS


def cmd_algebra(args, report: Report) -> int:
    f = parse_functor(args.functor)
    alg = nb.generated_clopen_algebra(f, parse_carrier(args.base))
    report.add("universe", len(alg.universe))
    report.add("generators", len(alg.generators))
    report.add("distinct_generators", len(set(alg.generators)))
    report.add("atoms", len(alg.atoms))
    report.add("separates_points", alg.separates_points)
    for k, atom in enumerate(alg.atoms):
        report.add(f"atom.{k}", atom)
    if args.list_generators:
        for k, phi in enumerate(alg.table.formulas):
            report.add(f"generator.{render_value(phi)}", alg.generators[k])
    return HOLDS


def cmd_bisim(args, report: Report) -> int:
    a, b = _coalgebra(args.a), _coalgebra(args.b)
    if args.op == "greatest":
        r = co.greatest_L_bisimulation(a, b)
        report.add("pairs", len(r))
        report.add("relation", r)
        return HOLDS
    r = _relation(args, a, b)
    v = co.is_L_bisimulation(r, a, b)
    report.add("pairs", len(r))
    code = _verdict(report, v.holds)
    if not v.holds:
        report.add("witness", v.witness)
    return code


def cmd_beq(args, report: Report) -> int:
    a, b = _coalgebra(args.a), _coalgebra(args.b)
    if args.u is None:
        r = co.behavioural_equivalence(a, b)
        report.add("pairs", len(r))
        report.add("relation", r)
        return HOLDS
    v = co.behaviourally_equivalent(a, parse_value(args.u), b, parse_value(args.v))
    report.add("stages", v.stats["stages"])
    code = _verdict(report, v.holds)
    if not v.holds:
        report.add("separated_at", v.witness)
    return code


def cmd_companion(args, report: Report) -> int:
    a = _coalgebra(args.a)
    hat = co.companion(a)
    report.add("formulas", len(hat.formulas))
    report.add("atoms", len(hat.algebra.atoms))
    for x in hat.carrier:
        report.add(f"state.{render_value(x)}", hat(x))
    return HOLDS


def _nbisim_stats(report: Report, v: sh.NbisimVerdict) -> None:
    for key in ("method", "pairs", "formulas_x", "formulas_y", "lifted_forward", "lifted_backward"):
        if key in v.stats:
            report.add(key, Text(v.stats[key]) if isinstance(v.stats[key], str) else v.stats[key])
    report.add("seconds", float(v.stats.get("seconds", 0.0)))


def _nbisim_witness(report: Report, w: tuple) -> None:
    u, v, phi, psi, direction = w
    report.add("witness.u", u)
    report.add("witness.v", v)
    report.add("witness.phi", phi)
    report.add("witness.psi", psi)
    report.add("witness.direction", Text(direction))


def cmd_nbisim(args, report: Report) -> int:
    a, b = _coalgebra(args.a), _coalgebra(args.b)
    ha, hb = co.companion(a), co.companion(b)
    if args.op == "greatest":
        start = time.perf_counter()
        r = sh.greatest_neighbourhood_bisimulation(ha, hb, method=args.method)
        report.add("pairs", len(r))
        report.add("relation", r)
        report.add("seconds", time.perf_counter() - start)
        return HOLDS
    r = _relation(args, a, b)
    v = sh.is_neighbourhood_bisimulation(r, ha, hb, args.method)
    _nbisim_stats(report, v)
    code = _verdict(report, v.holds)
    if not v.holds:
        _nbisim_witness(report, v.witness)
    return code


def cmd_vietoris(args, report: Report) -> int:
    a, b = _coalgebra(args.a), _coalgebra(args.b)
    r = _relation(args, a, b)
    v = sh.is_vietoris_bisimulation(r, a, b)
    report.add("pairs", len(r))
    report.add("note", Text(v.note))
    code = _verdict(report, v.holds)
    if not v.holds:
        report.add("witness", v.witness)
    return code


def cmd_lattice(args, report: Report) -> int:
    a, b = _coalgebra(args.a), _coalgebra(args.b)
    ha, hb = co.companion(a), co.companion(b)
    family = [parse_relation(text, a.carrier, b.carrier) for text in args.rel or []]
    op = sh.nbisim_meet if args.op == "meet" else sh.nbisim_join
    r = op(family, ha, hb, method=args.method)
    report.add("members", len(family))
    report.add("pairs", len(r))
    report.add("relation", r)
    return HOLDS


def _tower(args) -> pf.Tower:
    if args.file:
        return formats.parse_tower(formats.read_text(args.file))
    if args.source != "cantor-shift":
        raise StoneCoalgError(f"unknown built-in tower {args.source!r}; try cantor-shift or --file")
    return pf.cantor_shift_example(args.depth)


def _probe_relation(args, tower: pf.Tower):
    if args.relation_file:
        return formats.parse_level_relation(formats.read_text(args.relation_file), tower, tower)
    if tower.name != "cantor-shift":
        raise StoneCoalgError("file towers need --relation-file")
    return pf.cantor_relation(args.threads)


def cmd_tower(args, report: Report) -> int:
    tower = _tower(args)
    depth = tower.depth if args.file else args.depth
    report.add("tower", Text(tower.name))
    report.add("depth", depth)
    if args.op == "validate":
        v = pf.validate_tower(tower)
        code = _verdict(report, v.valid)
        if not v.valid:
            report.add("failing_level", v.failing_level)
            report.add("reason", Text(v.reason))
        return code
    b = _probe_relation(args, tower)
    if args.op == "closure":
        for k in range(depth + 1):
            rel = pf.closure_approx(b, tower, tower, k)
            report.add(f"level.{k}.pairs", len(rel))
            report.add(f"level.{k}.relation", rel)
        return HOLDS
    probe = pf.closure_theorem_probe(b, tower, tower, depth, method=args.method)
    for lp in probe.levels:
        report.add(f"level.{lp.level}.pairs", len(lp.closure))
        report.add(f"level.{lp.level}.method", Text(lp.verdict.stats["method"]))
        report.add(f"level.{lp.level}.holds", lp.verdict.holds)
        if not lp.verdict.holds:
            u, v, phi, psi, direction = lp.verdict.witness
            report.add(f"level.{lp.level}.witness.u", u)
            report.add(f"level.{lp.level}.witness.v", v)
            report.add(f"level.{lp.level}.witness.phi", phi)
            report.add(f"level.{lp.level}.witness.psi", psi)
            report.add(f"level.{lp.level}.witness.direction", Text(direction))
    report.add("note", Text(probe.note))
    return _verdict(report, probe.holds)


def cmd_laws(args, report: Report) -> int:
    f = parse_functor(args.functor)
    samples = random_samples(random.Random(args.seed), args.samples, args.max_carrier)
    result = check_lax_laws(f, samples)
    report.add("functor", Text(str(f)))
    report.add("samples", len(samples))
    for law, res in result.results.items():
        report.add(f"{law}.holds", res.holds)
        report.add(f"{law}.checked", res.checked)
        if res.counterexample is not None:
            sample_no, pair = res.counterexample
            report.add(f"{law}.sample", sample_no)
            report.add(f"{law}.witness", pair)
    return _verdict(report, result.all_hold)


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stonecoalg", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("text", "machine"), default="text")
    parser.add_argument("--guard", type=int, default=None, help="enumeration size guard")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lift", help="Barr lifting of a relation")
    p.add_argument("functor")
    p.add_argument("--dom", required=True)
    p.add_argument("--cod", required=True)
    p.add_argument("--rel", required=True)
    p.set_defaults(run=cmd_lift)

    p = sub.add_parser("nabla", help="evaluate ∇, ◇ or □")
    p.add_argument("op", choices=("eval", "diamond", "box"))
    p.add_argument("functor", nargs="?", default="P")
    p.add_argument("--base", required=True)
    p.add_argument("--formula", default="{}")
    p.add_argument("--set", default="{}")
    p.set_defaults(run=cmd_nabla)

    p = sub.add_parser("algebra", help="atoms of the algebra generated by ∇")
    p.add_argument("functor")
    p.add_argument("--base", required=True)
    p.add_argument("--list-generators", action="store_true")
    p.set_defaults(run=cmd_algebra)

    p = sub.add_parser("bisim", help="L-bisimulation")
    p.add_argument("op", choices=("check", "greatest"))
    _add_pair_args(p)
    p.set_defaults(run=cmd_bisim)

    p = sub.add_parser("beq", help="behavioural equivalence")
    _add_pair_args(p, relation=False)
    p.add_argument("--u")
    p.add_argument("--v")
    p.set_defaults(run=cmd_beq)

    p = sub.add_parser("companion", help="Stone companion of a coalgebra")
    p.add_argument("a")
    p.set_defaults(run=cmd_companion)

    for name, fn, ops in (("nbisim", cmd_nbisim, ("check", "greatest")),
                          ("lattice", cmd_lattice, ("meet", "join"))):
        p = sub.add_parser(name, help=f"{name} on companions")
        p.add_argument("op", choices=ops)
        p.add_argument("a")
        p.add_argument("b")
        if name == "nbisim":
            p.add_argument("--rel")
            p.add_argument("--rel-file")
        else:
            p.add_argument("--rel", action="append", help="family member (repeatable)")
        p.add_argument("--method", choices=sh.METHODS, default="auto")
        p.set_defaults(run=fn)

    p = sub.add_parser("vietoris", help="Vietoris bisimulation (powerset only)")
    p.add_argument("op", choices=("check",))
    _add_pair_args(p)
    p.set_defaults(run=cmd_vietoris)

    p = sub.add_parser("tower", help="profinite towers")
    p.add_argument("op", choices=("validate", "closure", "probe"))
    p.add_argument("source", nargs="?", default="cantor-shift")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--file")
    p.add_argument("--threads", default="identity-eventually-zero",
                   choices=sorted(pf.CANTOR_RELATIONS))
    p.add_argument("--relation-file")
    p.add_argument("--method", choices=sh.METHODS, default="auto")
    p.set_defaults(run=cmd_tower)

    p = sub.add_parser("laws", help="lax extension laws on random samples")
    p.add_argument("functor")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--max-carrier", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_laws)
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else HOLDS
    report = Report()
    try:
        if args.guard is not None:
            with size_guard(args.guard):
                code = args.run(args, report)
        else:
            code = args.run(args, report)
    except StoneCoalgError as exc:
        report.emit(args.format, out)
        print(f"error: {exc}", file=err)
        return BAD_INPUT
    report.emit(args.format, out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
