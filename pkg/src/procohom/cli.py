"""Command-line front end: scenario files in, reports and charts out.

Exit codes: 0 = a result or verdict was produced (including an
inconclusive one); 1 = no rule applies and a rank obstruction was
produced; 2 = scenario parsing or validation failed; 3 = a computation
budget was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .checker import Scenario, run_all
from .cohomology import (
    UndeterminedAt,
    continuous_cohomology_report,
    group_cohomology,
    symbolic_cohomology,
)
from .errors import BudgetExceeded, ProcohomError, ScenarioInvalid, UnknownFormat
from .profinite import canonical_tower, closed_subgroup
from .scenario import parse_scenario, report_document
from .serialize import stable_dumps
from .spectral_sequence import e2_page, render_chart, render_png
from .spectra import degree_classes, homotopy_of

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3


def _load_scenario(path: str) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ScenarioInvalid(f"cannot read scenario file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioInvalid(f"scenario file is not valid JSON: {exc}") from exc
    return parse_scenario(data)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _acting_group(scenario: Scenario):
    """The group whose fixed points the scenario studies: the closed
    subgroup when one is given, else the whole group."""
    if scenario.subgroup is not None:
        return closed_subgroup(scenario.group, dict(scenario.subgroup))
    return scenario.group


def _page_group(scenario: Scenario):
    """The group the E2 page is drawn for.

    A declared family selects its first member as the open normal
    subgroup of the page; otherwise the closed subgroup (when given) or
    the whole group acts.
    """
    from .profinite import DeclaredChain, Finite
    if isinstance(scenario.family, DeclaredChain):
        return scenario.family.members[0]
    g = _acting_group(scenario)
    return g.group if isinstance(g, Finite) else g


def cmd_order(args) -> int:
    scenario = _load_scenario(args.scenario)
    g = scenario.group
    lines = [f"group: {g.label()}", f"order: #G = {g.order().label()}"]
    if scenario.subgroup is not None:
        h = _acting_group(scenario)
        lines.append(f"closed subgroup: {h.label()}")
        lines.append(f"order: #H = {h.order().label()}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_tower(args) -> int:
    scenario = _load_scenario(args.scenario)
    g = scenario.group
    tower = canonical_tower(g, args.depth, scenario.limits.table_budget)
    lines = [f"canonical tower of {g.label()} to depth {args.depth}"]
    for j, (q, kernel) in enumerate(zip(tower.quotients, tower.kernels)):
        lines.append(
            f"  level {j}: Q_{j} = {q.label()} (order {q.size}), "
            f"kernel {kernel.label()}, index {kernel.index()}"
        )
    lines.append("surjections between consecutive levels verified")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_cohom(args) -> int:
    scenario = _load_scenario(args.scenario)
    table = _finite_table(scenario)
    limits = scenario.limits
    lines = [f"cohomology of {table.label()} with coefficients pi_t({scenario.spectrum.label()})"]
    for s in range(min(args.s, limits.s_max) + 1):
        row = []
        for t in range(limits.t_min, limits.t_max + 1):
            coeffs = homotopy_of(scenario.spectrum, t)
            fg = coeffs.as_fg()
            if fg is None:
                verdict = symbolic_cohomology(table, coeffs, s)
                if verdict.kind == "equals_coefficients":
                    row.append(coeffs.label())
                elif verdict.kind == "vanishes":
                    row.append("0")
                else:
                    row.append("?")
            else:
                row.append(group_cohomology(table, fg, s, limits.bar_budget).label())
        lines.append(f"  s={s}: " + " | ".join(row))
    lines.append(f"  (columns: t = {limits.t_min} .. {limits.t_max})")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _finite_table(scenario: Scenario):
    g = _acting_group(scenario)
    from .profinite import Finite
    if isinstance(g, Finite):
        return g.group
    raise ScenarioInvalid(
        "cohom needs a finite group; use ccohom for profinite groups"
    )


def cmd_ccohom(args) -> int:
    scenario = _load_scenario(args.scenario)
    g = _acting_group(scenario)
    limits = scenario.limits
    depth = args.depth if args.depth is not None else limits.tower_depth
    classes = degree_classes(scenario.spectrum)
    if classes is None:
        raise ScenarioInvalid("degree structure too large for classwise reporting")
    lines = [
        f"continuous cohomology of {g.label()} with coefficients "
        f"pi_t({scenario.spectrum.label()}), tower depth {depth}",
    ]
    for cls in classes:
        if cls.value.is_zero():
            continue
        lines.append(f"coefficients {cls.value.label()} at {cls.description}:")
        for s in range(args.s + 1):
            value, report = continuous_cohomology_report(
                g, cls.value, s, depth=depth, budget=limits.bar_budget,
                table_budget=limits.table_budget,
            )
            lines.append(f"  H^{s} = {value.label()}  "
                         f"[{report.status}; {report.certificate}]")
            if report.levels:
                lines.append(
                    "    levels: "
                    + ", ".join(f"{l}:{v}" for l, v in
                                zip(report.levels, report.level_values))
                )
                lines.append("    transitions: " + ", ".join(report.transitions))
            lines.append(f"    note: {report.detail}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_e2(args) -> int:
    scenario = _load_scenario(args.scenario)
    limits = scenario.limits
    page = e2_page(_page_group(scenario), scenario.spectrum, limits.s_max,
                   limits.t_min, limits.t_max, depth=limits.tower_depth,
                   budget=limits.bar_budget, table_budget=limits.table_budget)
    if args.format == "png":
        if not args.out:
            raise ScenarioInvalid("--format png requires --out")
        render_png(page, args.out)
        return EXIT_OK
    _emit(render_chart(page, args.format), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    scenario = _load_scenario(args.scenario)
    verdict = run_all(scenario)
    if args.format == "json":
        _emit(stable_dumps(report_document(scenario, verdict)), args.out)
    else:
        _emit(_verdict_text(scenario, verdict), args.out)
    if args.figure:
        limits = scenario.limits
        page = e2_page(_page_group(scenario), scenario.spectrum, limits.s_max,
                       limits.t_min, limits.t_max, depth=limits.tower_depth,
                       budget=limits.bar_budget, table_budget=limits.table_budget)
        render_png(page, args.figure)
    if not verdict.applicable and verdict.obstruction is not None:
        return EXIT_REFUTED
    return EXIT_OK


def _verdict_text(scenario: Scenario, verdict) -> str:
    lines = [
        f"scenario: group {scenario.group.label()}, "
        f"spectrum {scenario.spectrum.label()}",
        f"rule: {verdict.rule}" + ("" if verdict.applicable else " (no rule applies)"),
        f"ambient group: {verdict.ambient}",
    ]
    if verdict.conclusions:
        lines.append("conclusions:")
        lines.extend(f"  - {c.statement}" for c in verdict.conclusions)
    if verdict.certificates:
        lines.append("certificates:")
        lines.extend(
            f"  - {c.hypothesis} [{c.status}]: {c.detail}" for c in verdict.certificates
        )
    if verdict.obstruction is not None:
        lines.append("obstruction:")
        lines.extend(f"  - {s}" for s in verdict.obstruction.statements)
    if verdict.failure_reasons:
        lines.append("diagnostics:")
        lines.extend(f"  - {r}" for r in verdict.failure_reasons)
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="procohom",
        description=(
            "Continuous cohomology of profinite groups, homotopy fixed point "
            "E2 pages, and weak-equivalence criteria for trivial actions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("order", help="print the supernatural order of the group")
    p.add_argument("scenario")
    p.add_argument("--out")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("tower", help="print the canonical quotient tower")
    p.add_argument("scenario")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_tower)

    p = sub.add_parser("cohom", help="finite-level cohomology table")
    p.add_argument("scenario")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cohom)

    p = sub.add_parser("ccohom", help="continuous cohomology with stabilization report")
    p.add_argument("scenario")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ccohom)

    p = sub.add_parser("e2", help="E2 page chart of the spectral sequence")
    p.add_argument("scenario")
    p.add_argument("--format", choices=["text", "json", "svg", "png"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_e2)

    p = sub.add_parser("check", help="full verdict report")
    p.add_argument("scenario")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    p.add_argument("--figure", help="also render the E2 page to this PNG file")
    p.set_defaults(func=cmd_check)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioInvalid as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except UnknownFormat as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ProcohomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
