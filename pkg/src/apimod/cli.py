"""Command-line entry point.

Exit codes follow linter practice: 0 clean, 1 warnings only (2 with
--strict), 2 errors, 64 for usage mistakes.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .core import (
    ApimodError, Diagnostic, GoalModel, Label, ValueModel, sort_diagnostics,
)
from .dsl import (
    parse_api_descriptor, parse_goal_model, parse_metric_catalog, parse_model,
    parse_scenario, parse_value_model, print_goal_model,
)
from .evaluate import (
    RULE_SET, compare_scenarios, evaluation_nodes, propagate,
)
from .govern import (
    AutomationLevel, DecisionItem, Exclusion, Subtractability,
    automation_report, check_metric_catalog, classify_openness,
    dimension_coverage_report, load_governance_catalog, parse_score,
    prioritize_items,
)
from .lifecycle import (
    ApiDescriptor, LifecycleStage, MismatchThresholds, ValueCurveSample,
    detect_value_mismatches, lint_characteristics, transition_checklist,
)
from .link import link_metrics, who_report
from .report import exit_code_for, export_dot, make_report, report_json
from .transform import transform_value_to_goal
from .validate import (
    check_bapo_coverage, check_layer_coverage, validate_goal_model,
    validate_value_model,
)

USAGE_EXIT = 64


class _Cli(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 64, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Cli(prog="apimod",
                  description="Analysis toolkit for strategic API ecosystem models")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Cli)

    def common(p):
        p.add_argument("--json", action="store_true",
                       help="emit a JSON report instead of text")
        p.add_argument("--strict", action="store_true",
                       help="treat warnings as errors for the exit code")

    p = sub.add_parser("check", help="parse and validate a model file")
    p.add_argument("file")
    p.add_argument("--focus", action="append", default=[],
                   help="API of focus for layer-coverage checking (repeatable)")
    p.add_argument("--strict-reciprocity", action="store_true",
                   help="require a backflow for every actor pair")
    common(p)

    p = sub.add_parser("transform", help="derive a draft goal model from a value model")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="write the goal model here instead of stdout")
    common(p)

    p = sub.add_parser("evaluate", help="propagate scenario labels through a goal model")
    p.add_argument("file")
    p.add_argument("--scenario", required=True)
    common(p)

    p = sub.add_parser("compare", help="evaluate scenarios side by side")
    p.add_argument("file")
    p.add_argument("--scenarios", required=True,
                   help="comma-separated scenario files")
    p.add_argument("--actor", help="restrict rows and scoring to this actor")
    common(p)

    p = sub.add_parser("lifecycle", help="lint an API descriptor against its stage")
    p.add_argument("file")
    p.add_argument("--curve", help="CSV (t,stage,value) replacing the inline curve")
    p.add_argument("--high", type=float, default=0.7,
                   help="value considered 'very high' (default 0.7)")
    p.add_argument("--drop", type=float, default=0.5,
                   help="in-operation drop fraction considered excessive (default 0.5)")
    common(p)

    p = sub.add_parser("govern", help="governance classifiers and reference catalog")
    gsub = p.add_subparsers(dest="govern_command", required=True, parser_class=_Cli)
    g = gsub.add_parser("classify", help="quadrant-classify decision items from CSV")
    g.add_argument("file", help="CSV with columns name,a,b")
    g.add_argument("--mode", choices=["impl", "change"], required=True)
    g.add_argument("--threshold", type=float, default=0.5)
    common(g)
    g = gsub.add_parser("openness", help="classify an API on the openness grid")
    g.add_argument("exclusion", choices=["difficult", "easy"])
    g.add_argument("subtractability", choices=["low", "high"])
    common(g)
    g = gsub.add_parser("catalog", help="print the governance aspect/strategy catalog")
    common(g)

    p = sub.add_parser("metrics", help="metric catalog checks and goal-model linking")
    msub = p.add_subparsers(dest="metrics_command", required=True, parser_class=_Cli)
    m = msub.add_parser("link", help="attach catalog metrics to a goal model")
    m.add_argument("model")
    m.add_argument("catalog")
    m.add_argument("-o", "--output")
    common(m)
    m = msub.add_parser("check", help="lint a metric catalog")
    m.add_argument("catalog")
    common(m)
    m = msub.add_parser("who", help="why/who/where table for a catalog")
    m.add_argument("model")
    m.add_argument("catalog")
    common(m)
    m = msub.add_parser("dimensions", help="dimension coverage report")
    m.add_argument("catalog")
    common(m)
    m = msub.add_parser("automation", help="automation grouping of design metrics")
    m.add_argument("catalog")
    common(m)

    p = sub.add_parser("export", help="render a model as DOT")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--focus", help="group actors into layer bands for this focus")
    p.add_argument("--flat", action="store_true", help="do not cluster by actor")
    common(p)
    return parser


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

class _Failure(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.exit_code = code


class _ParseFailure(Exception):
    def __init__(self, path: str, diagnostics: list[Diagnostic]):
        super().__init__(f"{path}: parse failed")
        self.path = path
        self.diagnostics = diagnostics


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Failure(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write_output(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _emit(args, command: str, files: list[str], diagnostics: list[Diagnostic],
          analysis: dict, text_lines: list[str]) -> int:
    diagnostics = sort_diagnostics(diagnostics)
    if args.json:
        sys.stdout.write(report_json(make_report(command, files, diagnostics,
                                                 analysis)))
    else:
        for d in diagnostics:
            print(d.render())
        for line in text_lines:
            print(line)
    return exit_code_for(diagnostics, args.strict)


def _parse_file(parse, path: str):
    """Parse a file; on errors raise a _ParseFailure with its diagnostics."""
    result = parse(_read(path), path)
    if not result.ok:
        raise _ParseFailure(path, result.diagnostics)
    return result


def _label_word(label: Label) -> str:
    return label.value


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _cmd_check(args) -> int:
    text = _read(args.file)
    result = parse_model(text, args.file)
    diagnostics = list(result.diagnostics)
    analysis: dict = {"modelKind": None}
    if result.ok:
        model = result.model
        if isinstance(model, ValueModel):
            analysis["modelKind"] = "valuemodel"
            diagnostics += validate_value_model(
                model, strict_reciprocity=args.strict_reciprocity)
        elif isinstance(model, GoalModel):
            analysis["modelKind"] = "goalmodel"
            diagnostics += validate_goal_model(model)
        elif isinstance(model, ApiDescriptor):
            analysis["modelKind"] = "api"
            diagnostics += lint_characteristics(model)
        elif isinstance(model, list):
            analysis["modelKind"] = "metrics"
            diagnostics += check_metric_catalog(model)
        else:
            analysis["modelKind"] = "scenario"
        if isinstance(model, (ValueModel, GoalModel)):
            focuses = args.focus or sorted(
                {f for a in model.actors for f in a.layer_assignments})
            for focus in focuses:
                diagnostics += check_layer_coverage(model, focus)
            diagnostics += check_bapo_coverage(model)
            analysis["focuses"] = focuses
    return _emit(args, "check", [args.file], diagnostics, analysis, [])


def _cmd_transform(args) -> int:
    result = _parse_file(parse_value_model, args.file)
    goal, diagnostics = transform_value_to_goal(result.model)
    text = print_goal_model(goal)
    if args.json:
        analysis = {"goalModel": text}
        return _emit(args, "transform", [args.file], diagnostics, analysis, [])
    _write_output(text, args.output)
    stream = sys.stderr if args.output is None else sys.stdout
    for d in sort_diagnostics(diagnostics):
        print(d.render(), file=stream)
    return exit_code_for(diagnostics, args.strict)


def _evaluation_lines(model: GoalModel, result) -> list[str]:
    lines = [f"scenario: {result.scenario}", f"rule set: {RULE_SET}",
             f"iterations: {result.iterations}"]
    dependums = {d.id: d.dependum for d in model.dependencies}
    for node in evaluation_nodes(model):
        mark = " (overridden)" if node in result.overridden else ""
        if node in dependums:
            dep = dependums[node]
            lines.append(f"  {node} [{dep.kind.value} {dep.name}] = "
                         f"{_label_word(result.labels[node])}{mark}")
        else:
            lines.append(f"  {node} = {_label_word(result.labels[node])}{mark}")
    return lines


def _evaluation_payload(model: GoalModel, result) -> dict:
    return {
        "scenario": result.scenario,
        "ruleSet": RULE_SET,
        "iterations": result.iterations,
        "labels": {node: _label_word(result.labels[node])
                   for node in evaluation_nodes(model)},
        "overridden": sorted(result.overridden),
    }


def _cmd_evaluate(args) -> int:
    model = _parse_file(parse_goal_model, args.file).model
    scenario = _parse_file(parse_scenario, args.scenario).model
    result = propagate(model, scenario)
    analysis = _evaluation_payload(model, result)
    return _emit(args, "evaluate", [args.file, args.scenario],
                 result.diagnostics, analysis, _evaluation_lines(model, result))


def _cmd_compare(args) -> int:
    model = _parse_file(parse_goal_model, args.file).model
    paths = [p for p in args.scenarios.split(",") if p]
    scenarios = [_parse_file(parse_scenario, p).model for p in paths]
    table = compare_scenarios(model, scenarios, args.actor)
    lines = [f"rule set: {RULE_SET}",
             "scenarios: " + ", ".join(table.scenarios)]
    for row in table.rows:
        cells = ", ".join(f"{name}={_label_word(label)}"
                          for name, label in zip(table.scenarios, row.labels))
        lines.append(f"  {row.node}: {cells}")
    for name in table.scenarios:
        lines.append(f"score {name}: {table.scores[name]:g}")
    lines.append("ranking: " + ", ".join(f"{name} (#{rank})"
                                         for name, rank in table.ranking))
    analysis = {
        "ruleSet": RULE_SET,
        "scenarios": table.scenarios,
        "focusActor": table.focus_actor,
        "rows": [{"node": row.node,
                  "labels": [_label_word(l) for l in row.labels]}
                 for row in table.rows],
        "scores": {name: table.scores[name] for name in table.scenarios},
        "ranking": [{"scenario": name, "rank": rank}
                    for name, rank in table.ranking],
    }
    return _emit(args, "compare", [args.file] + paths, [], analysis, lines)


def _load_curve_csv(path: str) -> list[ValueCurveSample]:
    stages = {s.value: s for s in LifecycleStage}
    rank = {s: i for i, s in enumerate(LifecycleStage)}
    samples: list[ValueCurveSample] = []
    try:
        rows = list(csv.reader(_read(path).splitlines()))
    except csv.Error as exc:
        raise _Failure(f"{path}: {exc}") from exc
    for i, row in enumerate(rows):
        if not row or (i == 0 and [c.strip().lower() for c in row[:3]]
                       == ["t", "stage", "value"]):
            continue
        if len(row) < 3:
            raise _Failure(f"{path}: row {i + 1}: expected t,stage,value")
        try:
            t, value = float(row[0]), float(row[2])
        except ValueError as exc:
            raise _Failure(f"{path}: row {i + 1}: {exc}") from exc
        stage = stages.get(row[1].strip().lower())
        if stage is None:
            raise _Failure(f"{path}: row {i + 1}: unknown stage {row[1]!r}")
        if not 0.0 <= value <= 1.0:
            raise _Failure(f"{path}: row {i + 1}: value {value} outside [0, 1]")
        if samples and (t <= samples[-1].t
                        or rank[stage] < rank[samples[-1].stage]):
            raise _Failure(f"{path}: row {i + 1}: samples must move forward "
                           "in time and stage")
        samples.append(ValueCurveSample(t, stage, value))
    return samples


def _cmd_lifecycle(args) -> int:
    descriptor = _parse_file(parse_api_descriptor, args.file).model
    if args.curve:
        descriptor.curve = _load_curve_csv(args.curve)
    diagnostics = lint_characteristics(descriptor)
    thresholds = MismatchThresholds(high=args.high, drop_fraction=args.drop)
    if descriptor.curve:
        diagnostics = diagnostics + detect_value_mismatches(descriptor, thresholds)
    checklist = transition_checklist(descriptor)
    lines = [f"api: {descriptor.name}", f"stage: {descriptor.declared_stage.value}"]
    if checklist.transition is None:
        lines.append("no outgoing transition from the retire stage")
    else:
        lines.append(f"transition: {checklist.transition}")
        for entry in checklist.entries:
            mark = "matched" if entry.matched else "open"
            lines.append(f"  [{mark}] {entry.tag}: {entry.description}")
    for tag in checklist.uncatalogued:
        lines.append(f"  uncatalogued rationale: {tag}")
    analysis = {
        "api": descriptor.name,
        "stage": descriptor.declared_stage.value,
        "transition": checklist.transition,
        "triggers": [{"tag": e.tag, "description": e.description,
                      "matched": e.matched} for e in checklist.entries],
        "uncatalogued": checklist.uncatalogued,
        "thresholds": {"high": args.high, "drop": args.drop},
    }
    return _emit(args, "lifecycle", [args.file], diagnostics, analysis, lines)


def _load_items_csv(path: str) -> list[DecisionItem]:
    items: list[DecisionItem] = []
    rows = list(csv.reader(_read(path).splitlines()))
    for i, row in enumerate(rows):
        if not row or (i == 0 and [c.strip().lower() for c in row[:3]]
                       == ["name", "a", "b"]):
            continue
        if len(row) < 3:
            raise _Failure(f"{path}: row {i + 1}: expected name,a,b")
        try:
            items.append(DecisionItem(row[0].strip(), parse_score(row[1]),
                                      parse_score(row[2])))
        except ValueError as exc:
            raise _Failure(f"{path}: row {i + 1}: {exc}") from exc
    return items


def _cmd_govern(args) -> int:
    if args.govern_command == "openness":
        goods = classify_openness(Exclusion(args.exclusion),
                                  Subtractability(args.subtractability))
        lines = [f"{args.exclusion} exclusion + {args.subtractability} "
                 f"subtractability -> {goods.value}"]
        analysis = {"exclusion": args.exclusion,
                    "subtractability": args.subtractability,
                    "goodsClass": goods.value}
        return _emit(args, "govern openness", [], [], analysis, lines)
    if args.govern_command == "catalog":
        catalog = load_governance_catalog()
        lines = ["aspects:"]
        lines += [f"  {item['name']}: {item['description']}"
                  for item in catalog["aspects"]]
        lines.append("strategies:")
        lines += [f"  {item['name']}: {item['description']}"
                  for item in catalog["strategies"]]
        return _emit(args, "govern catalog", [], [], catalog, lines)
    items = _load_items_csv(args.file)
    ranked = prioritize_items(items, args.mode, args.threshold)
    lines = [f"mode: {args.mode} (threshold {args.threshold:g})"]
    lines += [f"  {quadrant.value} {item.name} (a={item.a:g}, b={item.b:g})"
              for item, quadrant in ranked]
    analysis = {
        "mode": args.mode,
        "threshold": args.threshold,
        "items": [{"name": item.name, "a": item.a, "b": item.b,
                   "quadrant": quadrant.value} for item, quadrant in ranked],
    }
    return _emit(args, "govern classify", [args.file], [], analysis, lines)


def _cmd_metrics(args) -> int:
    if args.metrics_command == "check":
        catalog = _parse_file(parse_metric_catalog, args.catalog).model
        diagnostics = check_metric_catalog(catalog)
        return _emit(args, "metrics check", [args.catalog], diagnostics,
                     {"metrics": [m.name for m in catalog]}, [])
    if args.metrics_command == "dimensions":
        catalog = _parse_file(parse_metric_catalog, args.catalog).model
        coverage = dimension_coverage_report(catalog)
        lines = []
        for dim, count in coverage.counts.items():
            names = ", ".join(coverage.metrics[dim])
            lines.append(f"{dim.value}: {count}" + (f" ({names})" if names else ""))
        for dim, question in coverage.gaps:
            lines.append(f"gap {dim.value}: {question}")
        analysis = {
            "counts": {d.value: n for d, n in coverage.counts.items()},
            "metrics": {d.value: names for d, names in coverage.metrics.items()},
            "gaps": [{"dimension": d.value, "question": qn}
                     for d, qn in coverage.gaps],
        }
        return _emit(args, "metrics dimensions", [args.catalog], [], analysis, lines)
    if args.metrics_command == "automation":
        catalog = _parse_file(parse_metric_catalog, args.catalog).model
        rep = automation_report(catalog)
        lines = []
        if rep.note:
            lines.append(rep.note)
        for level in AutomationLevel:
            if rep.groups[level]:
                lines.append(f"{level.value}: " + ", ".join(rep.groups[level]))
        if rep.unclassified:
            lines.append("unclassified: " + ", ".join(rep.unclassified))
        analysis = {
            "groups": {level.value: rep.groups[level] for level in AutomationLevel},
            "unclassified": rep.unclassified,
            "note": rep.note,
        }
        return _emit(args, "metrics automation", [args.catalog], [], analysis, lines)
    if args.metrics_command == "who":
        model = _parse_file(parse_goal_model, args.model).model
        catalog = _parse_file(parse_metric_catalog, args.catalog).model
        rows = who_report(model, catalog)
        lines = [
            f"{r.metric}: why={r.why or '?'} who={', '.join(r.who) or '?'} "
            f"where={', '.join(r.where) or '?'} actors={', '.join(r.actors) or '-'}"
            for r in rows
        ]
        analysis = {"rows": [{"metric": r.metric, "why": r.why, "who": r.who,
                              "where": r.where, "actors": r.actors}
                             for r in rows]}
        return _emit(args, "metrics who", [args.model, args.catalog], [],
                     analysis, lines)
    # link
    model = _parse_file(parse_goal_model, args.model).model
    catalog = _parse_file(parse_metric_catalog, args.catalog).model
    linked, diagnostics = link_metrics(model, catalog)
    text = print_goal_model(linked)
    if args.json:
        return _emit(args, "metrics link", [args.model, args.catalog],
                     diagnostics, {"goalModel": text}, [])
    _write_output(text, args.output)
    stream = sys.stderr if args.output is None else sys.stdout
    for d in sort_diagnostics(diagnostics):
        print(d.render(), file=stream)
    return exit_code_for(diagnostics, args.strict)


def _cmd_export(args) -> int:
    result = _parse_file(parse_model, args.file)
    if not isinstance(result.model, (ValueModel, GoalModel)):
        raise _Failure(f"{args.file}: only value and goal models can be exported")
    dot = export_dot(result.model, cluster_by_actor=not args.flat,
                     layer_bands=args.focus)
    if args.json:
        return _emit(args, "export", [args.file], [], {"dot": dot}, [])
    _write_output(dot, args.output)
    return 0


_HANDLERS = {
    "check": _cmd_check,
    "transform": _cmd_transform,
    "evaluate": _cmd_evaluate,
    "compare": _cmd_compare,
    "lifecycle": _cmd_lifecycle,
    "govern": _cmd_govern,
    "metrics": _cmd_metrics,
    "export": _cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits for usage errors and --help
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except _ParseFailure as exc:
        command = " ".join(filter(None, [
            args.command,
            getattr(args, "govern_command", None),
            getattr(args, "metrics_command", None)]))
        if getattr(args, "json", False):
            sys.stdout.write(report_json(make_report(
                command, [exc.path], exc.diagnostics, {})))
        else:
            for d in exc.diagnostics:
                print(d.render())
        return 2
    except _Failure as exc:
        print(str(exc), file=sys.stderr)
        return exc.exit_code
    except ApimodError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
