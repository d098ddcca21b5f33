"""Qualitative label propagation over goal models and metric hierarchies.

The engine works in evidence space: every node (element or dependum) holds an
:class:`~apimod.core.EvidencePair` that only ever gains evidence, so the
fixpoint exists and is reached quickly even when actors depend on each other
in cycles. Labels are projections of the pairs.

Rules applied until quiescence:

* refinement: a parent receives the min (AND) or max (OR) of its children's
  labels; if the parent is also a depender, the incoming dependum labels join
  that combination as further AND-style inputs;
* dependency: a dependum receives its dependee element's label unchanged;
* contribution: a quality accumulates evidence scaled by the link strength.

The contribution rules are the symmetric closure of the usual
satisfied-source rules: a denied source delivers inverted evidence through
hurts/breaks links. Reports flag this rule set as "symmetric-closure".

Human assignments always win: an assigned node keeps its label, and if the
rules would have produced something else the node is listed as overridden.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    ApimodError, ContributionStrength, Diagnostic, ElementKind, Evidence,
    EvidencePair, GoalModel, Label, NO_EVIDENCE, RefinementKind, Severity,
    evidence_to_label, label_max, label_min, label_to_evidence,
)
from .validate import validate_goal_model
from .core import sort_diagnostics

RULE_SET = "symmetric-closure"


@dataclass
class Scenario:
    """Initial labels for an evaluation; CONFLICT cannot be assigned."""

    name: str
    assignments: dict[str, Label] = field(default_factory=dict)


@dataclass
class EvaluationResult:
    labels: dict[str, Label]
    overridden: set[str]
    iterations: int
    diagnostics: list[Diagnostic]
    scenario: str = ""


# Evidence delivered through a contribution link, per source label.
# UNKNOWN sources deliver nothing. CONFLICT sources deliver mixed partial
# evidence through every strength: anything weaker would make the final
# labels depend on rule-application order (a transiently positive source
# could leave evidence behind that its settled conflicted state no longer
# justifies delivering).
_P = Evidence.PARTIAL
_F = Evidence.FULL
_MIXED = EvidencePair(_P, _P)
_CONTRIBUTION_TABLE: dict[ContributionStrength, dict[Label, EvidencePair]] = {
    ContributionStrength.MAKES: {
        Label.SATISFIED: EvidencePair(_F, Evidence.NONE),
        Label.PARTIALLY_SATISFIED: EvidencePair(_P, Evidence.NONE),
        Label.PARTIALLY_DENIED: EvidencePair(Evidence.NONE, _P),
        Label.DENIED: EvidencePair(Evidence.NONE, _F),
        Label.CONFLICT: _MIXED,
    },
    ContributionStrength.HELPS: {
        Label.SATISFIED: EvidencePair(_P, Evidence.NONE),
        Label.PARTIALLY_SATISFIED: EvidencePair(_P, Evidence.NONE),
        Label.PARTIALLY_DENIED: EvidencePair(Evidence.NONE, _P),
        Label.DENIED: EvidencePair(Evidence.NONE, _P),
        Label.CONFLICT: _MIXED,
    },
    ContributionStrength.HURTS: {
        Label.SATISFIED: EvidencePair(Evidence.NONE, _P),
        Label.PARTIALLY_SATISFIED: EvidencePair(Evidence.NONE, _P),
        Label.PARTIALLY_DENIED: EvidencePair(_P, Evidence.NONE),
        Label.DENIED: EvidencePair(_P, Evidence.NONE),
        Label.CONFLICT: _MIXED,
    },
    ContributionStrength.BREAKS: {
        Label.SATISFIED: EvidencePair(Evidence.NONE, _F),
        Label.PARTIALLY_SATISFIED: EvidencePair(Evidence.NONE, _P),
        Label.PARTIALLY_DENIED: EvidencePair(_P, Evidence.NONE),
        Label.DENIED: EvidencePair(_F, Evidence.NONE),
        Label.CONFLICT: _MIXED,
    },
}


def contribution_evidence(source_label: Label,
                          strength: ContributionStrength) -> EvidencePair:
    return _CONTRIBUTION_TABLE[strength].get(source_label, NO_EVIDENCE)


def evaluation_nodes(model: GoalModel) -> list[str]:
    """All label-carrying nodes in deterministic order: elements, then
    dependums (addressed by their dependency id)."""
    ids = [e.id for a in model.actors for e in a.elements]
    ids.extend(d.id for d in model.dependencies)
    return ids


def resolve_scenario(model: GoalModel, scenario: Scenario) -> dict[str, Label]:
    """Map scenario assignments onto node ids.

    Targets may be element ids, dependency ids, or a dependum name when that
    name is unique among the model's dependums.
    """
    elements = {e.id for a in model.actors for e in a.elements}
    dep_ids = {d.id for d in model.dependencies}
    by_dependum_name: dict[str, list[str]] = {}
    for d in model.dependencies:
        by_dependum_name.setdefault(d.dependum.name, []).append(d.id)
    resolved: dict[str, Label] = {}
    for target, label in scenario.assignments.items():
        if label is Label.CONFLICT:
            raise ApimodError(
                f"scenario {scenario.name!r} assigns conflict to {target!r}; "
                "conflict cannot be an initial label")
        if target in elements or target in dep_ids:
            resolved[target] = label
        elif target in by_dependum_name:
            candidates = by_dependum_name[target]
            if len(candidates) > 1:
                raise ApimodError(
                    f"scenario {scenario.name!r}: dependum name {target!r} is "
                    f"ambiguous ({', '.join(candidates)})")
            resolved[candidates[0]] = label
        else:
            raise ApimodError(
                f"scenario {scenario.name!r} labels unknown node {target!r}")
    return resolved


@dataclass
class _Rules:
    """Static view of the model's evidence-delivery rules."""

    # element id -> (refinement kind, child ids) for elements with refinement
    refinement: dict[str, tuple[RefinementKind, tuple[str, ...]]]
    # element id -> dependency ids whose depender element it is
    incoming_deps: dict[str, list[str]]
    # dependency id -> dependee element id (when the dependee end is open)
    dependee_of: dict[str, str]
    # (source element id, strength, target quality id)
    contributions: list[tuple[str, ContributionStrength, str]]


def _build_rules(model: GoalModel) -> _Rules:
    refinement = {}
    contributions = []
    for actor in model.actors:
        for el in actor.elements:
            if el.refinement is not None:
                refinement[el.id] = (el.refinement.kind, el.refinement.children)
            for c in el.contributions:
                contributions.append((el.id, c.strength, c.target))
    incoming: dict[str, list[str]] = {}
    dependee_of = {}
    elements = {e.id for a in model.actors for e in a.elements}
    for d in model.dependencies:
        if d.depender.element is not None and d.depender.element in elements:
            incoming.setdefault(d.depender.element, []).append(d.id)
        if d.dependee.element is not None and d.dependee.element in elements:
            dependee_of[d.id] = d.dependee.element
    return _Rules(refinement, incoming, dependee_of, contributions)


def _combined_input(node: str, rules: _Rules,
                    labels: dict[str, Label]) -> EvidencePair | None:
    """Refinement result AND incoming dependum labels, as one delivery.

    Returns None when the node has no refinement and no incoming dependums.
    """
    parts: list[Label] = []
    ref = rules.refinement.get(node)
    if ref is not None:
        kind, children = ref
        combine = label_min if kind is RefinementKind.AND else label_max
        acc = labels[children[0]]
        for child in children[1:]:
            acc = combine(acc, labels[child])
        parts.append(acc)
    for dep_id in rules.incoming_deps.get(node, ()):
        parts.append(labels[dep_id])
    if not parts:
        return None
    acc = parts[0]
    for lab in parts[1:]:
        acc = label_min(acc, lab)
    return label_to_evidence(acc)


def _deliveries(rules: _Rules, labels: dict[str, Label],
                nodes: list[str]) -> dict[str, EvidencePair]:
    """Evidence delivered to each node by one application of every rule."""
    delivered = {node: NO_EVIDENCE for node in nodes}
    for node in nodes:
        combined = _combined_input(node, rules, labels)
        if combined is not None:
            delivered[node] = delivered[node].merge(combined)
    for dep_id, dependee in rules.dependee_of.items():
        delivered[dep_id] = delivered[dep_id].merge(
            label_to_evidence(labels[dependee]))
    for source, strength, target in rules.contributions:
        delivered[target] = delivered[target].merge(
            contribution_evidence(labels[source], strength))
    return delivered


def propagate(model: GoalModel, scenario: Scenario) -> EvaluationResult:
    """Fixpoint evaluation of a goal model under a scenario."""
    errors = [d for d in validate_goal_model(model) if d.severity is Severity.ERROR]
    if errors:
        raise ApimodError(
            "model does not validate: " + "; ".join(d.message for d in errors))
    nodes = evaluation_nodes(model)
    assigned = resolve_scenario(model, scenario)
    rules = _build_rules(model)

    pairs: dict[str, EvidencePair] = {node: NO_EVIDENCE for node in nodes}
    for d in model.dependencies:
        if d.dependum.initial_label is not None:
            pairs[d.id] = pairs[d.id].merge(
                label_to_evidence(d.dependum.initial_label))
    for node, label in assigned.items():
        pairs[node] = label_to_evidence(label)

    iterations = 0
    while True:
        labels = {node: evidence_to_label(pairs[node]) for node in nodes}
        delivered = _deliveries(rules, labels, nodes)
        changed = False
        for node in nodes:
            if node in assigned:
                continue  # human assignment wins; rules cannot move it
            merged = pairs[node].merge(delivered[node])
            if merged != pairs[node]:
                pairs[node] = merged
                changed = True
        if not changed:
            break
        iterations += 1
    bound = 4 * max(1, len(nodes))
    assert iterations <= bound, f"fixpoint took {iterations} sweeps (> {bound})"

    labels = {node: evidence_to_label(pairs[node]) for node in nodes}
    computed = _deliveries(rules, labels, nodes)
    has_sources = set(rules.refinement) | set(rules.incoming_deps) \
        | set(rules.dependee_of)
    has_sources.update(target for _, _, target in rules.contributions)
    overridden = {
        node for node in assigned
        if node in has_sources
        and evidence_to_label(computed[node]) is not labels[node]
    }

    diagnostics = [
        Diagnostic(Severity.WARNING, "W-CONFLICT",
                   f"node {node!r} received both positive and negative evidence")
        for node in nodes if labels[node] is Label.CONFLICT
    ]
    return EvaluationResult(labels, overridden, iterations,
                            sort_diagnostics(diagnostics), scenario.name)


# ---------------------------------------------------------------------------
# Scenario comparison
# ---------------------------------------------------------------------------

@dataclass
class ComparisonRow:
    node: str
    labels: list[Label]  # one per scenario, in scenario order


@dataclass
class ComparisonTable:
    scenarios: list[str]
    rows: list[ComparisonRow]
    scores: dict[str, float]
    ranking: list[tuple[str, int]]  # (scenario, dense rank starting at 1)
    focus_actor: str | None = None


def scenario_score(model: GoalModel, result: EvaluationResult,
                   focus_actor: str | None = None) -> float:
    """Satisfied goals/qualities count 1, partially satisfied 0.5."""
    score = 0.0
    for actor in model.actors:
        if focus_actor is not None and actor.id != focus_actor:
            continue
        for el in actor.elements:
            if el.kind not in (ElementKind.GOAL, ElementKind.QUALITY):
                continue
            label = result.labels[el.id]
            if label is Label.SATISFIED:
                score += 1.0
            elif label is Label.PARTIALLY_SATISFIED:
                score += 0.5
    return score


def compare_scenarios(model: GoalModel, scenarios: list[Scenario],
                      focus_actor: str | None = None) -> ComparisonTable:
    """Evaluate several scenarios side by side and rank them by score."""
    if len(scenarios) < 2:
        raise ApimodError("comparison needs at least two scenarios")
    if focus_actor is not None and focus_actor not in model.actor_map():
        raise ApimodError(f"unknown focus actor {focus_actor!r}")
    results = [propagate(model, s) for s in scenarios]

    row_ids = [e.id for a in model.actors
               if focus_actor is None or a.id == focus_actor
               for e in a.elements]
    rows = [ComparisonRow(node, [r.labels[node] for r in results])
            for node in row_ids]
    scores = {s.name: scenario_score(model, r, focus_actor)
              for s, r in zip(scenarios, results)}

    distinct = sorted(set(scores.values()), reverse=True)
    rank_of = {value: i + 1 for i, value in enumerate(distinct)}
    ranking = sorted(((name, rank_of[score]) for name, score in scores.items()),
                     key=lambda nr: (nr[1], nr[0]))
    return ComparisonTable([s.name for s in scenarios], rows, scores, ranking,
                           focus_actor)


# ---------------------------------------------------------------------------
# Metric hierarchies
# ---------------------------------------------------------------------------

def propagate_metric_hierarchy(hierarchy: GoalModel,
                               measured: Scenario) -> EvaluationResult:
    """Propagate measured leaf values up a quality hierarchy.

    The hierarchy is a goal model restricted to qualities and contribution
    links; anything a measurement does not reach stays UNKNOWN.
    """
    for actor in hierarchy.actors:
        for el in actor.elements:
            if el.kind is not ElementKind.QUALITY:
                raise ApimodError(
                    f"metric hierarchy may contain qualities only; {el.id!r} "
                    f"is a {el.kind.value}")
    if hierarchy.dependencies:
        raise ApimodError("metric hierarchy may not contain dependencies")
    return propagate(hierarchy, measured)
