"""Recursive-descent parsers for the model formats.

Five dialects share one lexer:

* ``valuemodel <name> { ... }``   actors, activities, flows, stimuli
* ``goalmodel <name> { ... }``    actors, elements, refinements, dependencies
* ``api <name> { ... }``          lifecycle descriptor
* ``metric <name> { ... }``*      metric catalog (one block per metric)
* ``scenario <name> { ... }``     initial labels for evaluation

A malformed statement produces one Error diagnostic and parsing resumes at
the next statement keyword, so several problems are reported in one run.
Every reported span points inside the offending token range.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..core import (
    Activity, AssociationKind, AssociationLink, BapoTag, ContributionStrength,
    Contribution, Dependency, DependencyEnd, Dependum, Diagnostic, ElementKind,
    FlowStatus, GActor, GElement, GoalModel, Label, LABEL_WORDS, Layer,
    Refinement, RefinementKind, Severity, SourceSpan, Stimulus, VActor,
    ValueFlow, ValueModel, ValueObject, sort_diagnostics,
)
from ..evaluate import Scenario
from ..govern import AutomationLevel, Dimension, MetricDef
from ..lifecycle import (
    ApiDescriptor, Change, Characteristics, Commitment, Compatibility,
    Governance, LifecycleStage, Stability, Support, ValueCurveSample,
)
from .lexer import KEYWORDS, LexError, TokKind, Token, tokenize


@dataclass
class ParseResult:
    """Outcome of a parse: `model` is None iff an Error was reported."""

    model: Optional[object]
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.model is not None


class _ParseAbort(Exception):
    """Internal: unwinds to the nearest recovery point."""


_ELEMENT_KIND_WORDS = {k.value: k for k in ElementKind}
_STRENGTH_WORDS = {s.value: s for s in ContributionStrength}
_LAYER_WORDS = {l.value: l for l in Layer}
_BAPO_WORDS = {t.value: t for t in BapoTag}
_STAGE_WORDS = {s.value: s for s in LifecycleStage}
_DIMENSION_WORDS = {d.value: d for d in Dimension}
_AUTOMATION_WORDS = {a.value: a for a in AutomationLevel}
_STAGE_RANK = {s: i for i, s in enumerate(LifecycleStage)}

_OBSERVED_FIELDS = {
    "stability": ("stability", Stability),
    "change": ("change", Change),
    "commitment": ("commitment", Commitment),
    "governance": ("governance", Governance),
    "compatibility": ("compatibility", Compatibility),
    "support": ("support", Support),
}


class _Parser:
    def __init__(self, text: str, filename: str):
        self.filename = filename
        self.diagnostics: list[Diagnostic] = []
        self.pos = 0
        try:
            self.tokens = tokenize(text, filename)
        except LexError as exc:
            self.tokens = [Token(TokKind.EOF, "", exc.span)]
            self.error("E-SYNTAX", exc.message, exc.span)

    # -- token helpers ------------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind is not TokKind.EOF:
            self.pos += 1
        return tok

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind in (TokKind.IDENT, TokKind.PUNCT) and tok.value == value

    def eat(self, value: str) -> bool:
        if self.at(value):
            self.advance()
            return True
        return False

    def expect(self, value: str) -> Token:
        if self.at(value):
            return self.advance()
        tok = self.peek()
        shown = tok.value if tok.value else str(tok.kind.value)
        self.error("E-SYNTAX", f"expected {value!r}, found {shown!r}", tok.span)
        raise _ParseAbort()

    def name(self, what: str = "name") -> tuple[str, SourceSpan]:
        tok = self.peek()
        if tok.kind is TokKind.STRING:
            self.advance()
            return tok.value, tok.span
        if tok.kind is TokKind.IDENT and tok.value not in KEYWORDS:
            self.advance()
            return tok.value, tok.span
        shown = tok.value if tok.value else str(tok.kind.value)
        self.error("E-SYNTAX", f"expected {what}, found {shown!r}", tok.span)
        raise _ParseAbort()

    def number(self, what: str = "number") -> tuple[float, SourceSpan]:
        tok = self.peek()
        if tok.kind is TokKind.NUMBER:
            self.advance()
            return float(tok.value), tok.span
        self.error("E-SYNTAX", f"expected {what}, found {tok.value!r}", tok.span)
        raise _ParseAbort()

    def keyword_choice(self, words: dict, what: str):
        tok = self.peek()
        if tok.kind is TokKind.IDENT and tok.value in words:
            self.advance()
            return words[tok.value], tok.span
        shown = tok.value if tok.value else str(tok.kind.value)
        self.error("E-SYNTAX", f"expected {what}, found {shown!r}", tok.span)
        raise _ParseAbort()

    # -- diagnostics and recovery -------------------------------------------

    def error(self, code: str, message: str, span: SourceSpan) -> None:
        self.diagnostics.append(Diagnostic(Severity.ERROR, code, message, span))

    def sync(self, keywords: set[str]) -> None:
        """Skip tokens until a statement keyword or block boundary."""
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind is TokKind.EOF:
                return
            if depth == 0:
                if tok.kind is TokKind.PUNCT and tok.value == "}":
                    return
                if tok.kind is TokKind.IDENT and tok.value in keywords:
                    return
            if tok.kind is TokKind.PUNCT and tok.value == "{":
                depth += 1
            elif tok.kind is TokKind.PUNCT and tok.value == "}":
                depth -= 1
            self.advance()

    def has_errors(self) -> bool:
        return any(d.severity is Severity.ERROR for d in self.diagnostics)

    def result(self, model) -> ParseResult:
        diags = sort_diagnostics(self.diagnostics)
        return ParseResult(None if self.has_errors() else model, diags)

    # -- shared small rules ---------------------------------------------------

    def name_list(self) -> list[str]:
        names = [self.name()[0]]
        while self.eat(","):
            names.append(self.name()[0])
        return names

    def layer_stmt(self) -> tuple[str, Layer, SourceSpan]:
        kw = self.expect("layer")
        self.expect("(")
        focus, _ = self.name("api focus")
        self.expect(")")
        self.expect("=")
        layer, _ = self.keyword_choice(_LAYER_WORDS, "layer (domain|usage|api|asset)")
        return focus, layer, kw.span

    def bapo_stmt(self) -> list[tuple[BapoTag, SourceSpan]]:
        self.expect("bapo")
        self.expect("=")
        tags = []
        while True:
            tok = self.peek()
            if tok.kind is TokKind.IDENT and tok.value in _BAPO_WORDS:
                self.advance()
                tags.append((_BAPO_WORDS[tok.value], tok.span))
            else:
                self.error("E-SYNTAX", f"expected BAPO tag (B|A|P|O), found {tok.value!r}",
                           tok.span)
                raise _ParseAbort()
            if not self.eat(","):
                return tags

    def qualified_ref(self) -> tuple[str, Optional[str], SourceSpan]:
        """`Actor` or `Actor.element`; returns (actor, element, span)."""
        actor, span = self.name("actor reference")
        element = None
        if self.eat("."):
            element, espan = self.name("element reference")
            span = SourceSpan(span.file, span.start_line, span.start_col,
                              espan.end_line, espan.end_col)
        return actor, element, span


# ---------------------------------------------------------------------------
# Value models
# ---------------------------------------------------------------------------

_VM_TOP = {"actor", "flow", "stimulus"}
_VM_BODY = {"activity", "api", "market", "layer", "bapo"}


class _ValueModelParser(_Parser):
    def parse(self) -> ParseResult:
        try:
            self.expect("valuemodel")
            name, _ = self.name("model name")
            self.expect("{")
        except _ParseAbort:
            return self.result(None)
        model = ValueModel(name)
        raw_parents: list[tuple[VActor, str, SourceSpan]] = []
        raw_flows: list[tuple[ValueFlow, SourceSpan, SourceSpan]] = []
        while not self.at("}") and self.peek().kind is not TokKind.EOF:
            try:
                if self.at("actor"):
                    self.parse_actor(model, raw_parents)
                elif self.at("flow"):
                    self.parse_flow(model, raw_flows)
                elif self.at("stimulus"):
                    self.parse_stimulus(model)
                else:
                    tok = self.peek()
                    self.error("E-SYNTAX",
                               f"expected actor, flow, or stimulus, found {tok.value!r}",
                               tok.span)
                    raise _ParseAbort()
            except _ParseAbort:
                self.sync(_VM_TOP)
        try:
            self.expect("}")
        except _ParseAbort:
            pass
        self.link_and_check(model, raw_parents, raw_flows)
        return self.result(model)

    def parse_actor(self, model: ValueModel,
                    raw_parents: list[tuple[VActor, str, SourceSpan]]) -> None:
        self.expect("actor")
        name, span = self.name("actor name")
        actor = VActor(id=name, name=name, span=span)
        if self.eat("in"):
            parent, pspan = self.name("parent actor")
            raw_parents.append((actor, parent, pspan))
        model.actors.append(actor)
        if not self.eat("{"):
            return
        while not self.at("}") and self.peek().kind is not TokKind.EOF:
            try:
                if self.at("activity"):
                    self.advance()
                    aname, aspan = self.name("activity name")
                    actor.activities.append(Activity(id=aname, name=aname, span=aspan))
                elif self.at("api"):
                    self.advance()
                    actor.api_role = True
                elif self.at("market"):
                    self.advance()
                    actor.market_segment = True
                elif self.at("layer"):
                    focus, layer, lspan = self.layer_stmt()
                    if focus in actor.layer_assignments:
                        self.error("E-DUP", f"duplicate layer assignment for focus {focus!r}",
                                   lspan)
                    actor.layer_assignments[focus] = layer
                elif self.at("bapo"):
                    for tag, _ in self.bapo_stmt():
                        actor.bapo_tags.add(tag)
                else:
                    tok = self.peek()
                    self.error("E-SYNTAX",
                               f"expected actor-body statement, found {tok.value!r}",
                               tok.span)
                    raise _ParseAbort()
            except _ParseAbort:
                self.sync(_VM_BODY)
        self.expect("}")

    def parse_flow(self, model: ValueModel,
                   raw_flows: list[tuple[ValueFlow, SourceSpan, SourceSpan]]) -> None:
        kw = self.expect("flow")
        obj_name, _ = self.name("value object name")
        self.expect("from")
        src, src_el, src_span = self.qualified_ref()
        self.expect("to")
        dst, dst_el, dst_span = self.qualified_ref()
        kind = ElementKind.RESOURCE
        if self.eat(":"):
            kind, _ = self.keyword_choice(_ELEMENT_KIND_WORDS,
                                          "object kind (resource|task|goal|quality)")
        status = FlowStatus.NORMAL
        if self.eat("status"):
            tok = self.peek()
            if tok.kind is TokKind.IDENT and tok.value in ("problematic", "missing"):
                self.advance()
                status = FlowStatus(tok.value)
            else:
                self.error("E-SYNTAX",
                           f"expected problematic or missing, found {tok.value!r}", tok.span)
                raise _ParseAbort()
        group = None
        if self.eat("group"):
            group, _ = self.name("group id")
        flow = ValueFlow(
            id=f"f{len(raw_flows) + 1}",
            source=f"{src}.{src_el}" if src_el else src,
            target=f"{dst}.{dst_el}" if dst_el else dst,
            obj=ValueObject(obj_name, kind),
            status=status,
            group=group,
            span=kw.span,
        )
        model.flows.append(flow)
        raw_flows.append((flow, src_span, dst_span))

    def parse_stimulus(self, model: ValueModel) -> None:
        self.expect("stimulus")
        name, span = self.name("stimulus name")
        self.expect("in")
        owner, _ = self.name("owning actor")
        model.stimuli.append(Stimulus(id=name, name=name, at=owner, span=span))

    def link_and_check(self, model: ValueModel, raw_parents, raw_flows) -> None:
        seen: dict[str, SourceSpan] = {}
        for actor in model.actors:
            if actor.id in seen:
                self.error("E-DUP", f"duplicate identifier {actor.id!r}", actor.span)
            seen[actor.id] = actor.span
            for act in actor.activities:
                if act.id in seen:
                    self.error("E-DUP", f"duplicate identifier {act.id!r}", act.span)
                seen[act.id] = act.span
        for stim in model.stimuli:
            if stim.id in seen:
                self.error("E-DUP", f"duplicate identifier {stim.id!r}", stim.span)
            seen[stim.id] = stim.span

        actors = model.actor_map()
        for actor, parent, pspan in raw_parents:
            if parent not in actors:
                self.error("E-REF", f"unknown parent actor {parent!r}", pspan)
            else:
                actor.parent = parent
        # Partnership chains must not loop back on themselves.
        for actor in model.actors:
            hops, cur = 0, actor.parent
            while cur is not None and hops <= len(model.actors):
                if cur == actor.id:
                    self.error("E-CYCLE", f"partnership cycle through {actor.id!r}",
                               actor.span)
                    break
                cur = actors[cur].parent if cur in actors else None
                hops += 1

        endpoints = set(actors)
        activity_owner = {act.id: a.id for a in model.actors for act in a.activities}
        endpoints.update(activity_owner)
        for flow, src_span, dst_span in raw_flows:
            for attr, span in (("source", src_span), ("target", dst_span)):
                ref = getattr(flow, attr)
                if "." in ref:
                    actor_id, _, act_id = ref.partition(".")
                    if actor_id not in actors or activity_owner.get(act_id) != actor_id:
                        self.error("E-REF", f"unknown endpoint {ref!r}", span)
                    else:
                        setattr(flow, attr, act_id)
                elif ref not in endpoints:
                    self.error("E-REF", f"unknown endpoint {ref!r}", span)
            if flow.source == flow.target:
                self.error("E-SELF", "value flow must connect two distinct endpoints",
                           src_span)
        for stim in model.stimuli:
            if stim.at not in actors:
                self.error("E-REF", f"unknown actor {stim.at!r}", stim.span)


# ---------------------------------------------------------------------------
# Goal models
# ---------------------------------------------------------------------------

_GM_TOP = {"actor", "depend", "partof"}
_GM_BODY = {"goal", "task", "quality", "resource", "layer", "bapo"}


@dataclass
class _RawRefinement:
    parent: str
    kind: RefinementKind
    children: list[str]
    actor: GActor
    span: SourceSpan


@dataclass
class _RawContribution:
    source: str
    strength: ContributionStrength
    target: str
    actor: GActor
    span: SourceSpan


class _GoalModelParser(_Parser):
    def parse(self) -> ParseResult:
        try:
            self.expect("goalmodel")
            name, _ = self.name("model name")
            draft = self.eat("draft")
            self.expect("{")
        except _ParseAbort:
            return self.result(None)
        model = GoalModel(name, draft=draft)
        refinements: list[_RawRefinement] = []
        contributions: list[_RawContribution] = []
        while not self.at("}") and self.peek().kind is not TokKind.EOF:
            try:
                if self.at("actor"):
                    self.parse_actor(model, refinements, contributions)
                elif self.at("depend"):
                    self.parse_depend(model)
                elif self.at("partof"):
                    self.parse_partof(model)
                else:
                    tok = self.peek()
                    self.error("E-SYNTAX",
                               f"expected actor, depend, or partof, found {tok.value!r}",
                               tok.span)
                    raise _ParseAbort()
            except _ParseAbort:
                self.sync(_GM_TOP)
        try:
            self.expect("}")
        except _ParseAbort:
            pass
        self.link_and_check(model, refinements, contributions)
        return self.result(model)

    def parse_actor(self, model: GoalModel, refinements, contributions) -> None:
        self.expect("actor")
        name, span = self.name("actor name")
        actor = GActor(id=name, name=name, span=span)
        model.actors.append(actor)
        if self.eat("in"):
            # Goal models keep actors side by side; nesting syntax is
            # accepted and recorded as a part-of association.
            parent, pspan = self.name("parent actor")
            model.associations.append(AssociationLink(
                AssociationKind.PART_OF, name, parent, span=pspan))
        if not self.eat("{"):
            return
        while not self.at("}") and self.peek().kind is not TokKind.EOF:
            try:
                tok = self.peek()
                if tok.kind is TokKind.IDENT and tok.value in _ELEMENT_KIND_WORDS:
                    self.advance()
                    ename, espan = self.name("element name")
                    actor.elements.append(GElement(
                        id=ename, kind=_ELEMENT_KIND_WORDS[tok.value], name=ename,
                        span=espan))
                elif self.at("layer"):
                    focus, layer, lspan = self.layer_stmt()
                    if focus in actor.layer_assignments:
                        self.error("E-DUP",
                                   f"duplicate layer assignment for focus {focus!r}", lspan)
                    actor.layer_assignments[focus] = layer
                elif self.at("bapo"):
                    for tag, _ in self.bapo_stmt():
                        actor.bapo_tags.add(tag)
                elif tok.kind in (TokKind.IDENT, TokKind.STRING):
                    self.parse_link_stmt(actor, refinements, contributions)
                else:
                    self.error("E-SYNTAX",
                               f"expected actor-body statement, found {tok.value!r}",
                               tok.span)
                    raise _ParseAbort()
            except _ParseAbort:
                self.sync(_GM_BODY)
        self.expect("}")

    def parse_link_stmt(self, actor: GActor, refinements, contributions) -> None:
        source, span = self.name("element reference")
        tok = self.peek()
        if tok.kind is TokKind.IDENT and tok.value in ("and", "or"):
            self.advance()
            children = self.name_list()
            refinements.append(_RawRefinement(
                source, RefinementKind(tok.value), children, actor, span))
        elif tok.kind is TokKind.IDENT and tok.value in _STRENGTH_WORDS:
            self.advance()
            target, tspan = self.name("contribution target")
            contributions.append(_RawContribution(
                source, _STRENGTH_WORDS[tok.value], target, actor, tspan))
        else:
            self.error("E-SYNTAX",
                       f"expected and/or/makes/helps/hurts/breaks after {source!r}",
                       tok.span)
            raise _ParseAbort()

    def parse_depend(self, model: GoalModel) -> None:
        kw = self.expect("depend")
        dr_actor, dr_el, _ = self.qualified_ref()
        self.expect("->")
        de_actor, de_el, _ = self.qualified_ref()
        self.expect(":")
        kind, _ = self.keyword_choice(_ELEMENT_KIND_WORDS,
                                      "dependum kind (goal|quality|task|resource)")
        dname, _ = self.name("dependum name")
        initial = None
        if self.eat("="):
            word, _ = self.keyword_choice(LABEL_WORDS, "label")
            initial = word
        model.dependencies.append(Dependency(
            id=f"d{len(model.dependencies) + 1}",
            depender=DependencyEnd(dr_actor, dr_el),
            dependum=Dependum(kind, dname, initial),
            dependee=DependencyEnd(de_actor, de_el),
            span=kw.span,
        ))

    def parse_partof(self, model: GoalModel) -> None:
        kw = self.expect("partof")
        part, _ = self.name("actor")
        self.expect("->")
        whole, _ = self.name("actor")
        model.associations.append(AssociationLink(
            AssociationKind.PART_OF, part, whole, span=kw.span))

    def link_and_check(self, model: GoalModel, refinements, contributions) -> None:
        seen: dict[str, SourceSpan] = {}
        for actor in model.actors:
            if actor.id in seen:
                self.error("E-DUP", f"duplicate identifier {actor.id!r}", actor.span)
            seen[actor.id] = actor.span
        elements: dict[str, GElement] = {}
        for actor in model.actors:
            for el in actor.elements:
                if el.id in seen or el.id in elements:
                    self.error("E-DUP", f"duplicate identifier {el.id!r}", el.span)
                elements[el.id] = el

        for raw in refinements:
            local = {e.id: e for e in raw.actor.elements}
            parent = local.get(raw.parent)
            if parent is None:
                self.error("E-REF",
                           f"unknown element {raw.parent!r} in actor {raw.actor.id!r}",
                           raw.span)
                continue
            if parent.kind is ElementKind.QUALITY:
                self.error("E-REFINE",
                           f"quality {parent.id!r} cannot be refined; use contribution links",
                           raw.span)
                continue
            if parent.refinement is not None:
                self.error("E-REFINE",
                           f"element {parent.id!r} already has a refinement", raw.span)
                continue
            ok = True
            for child in raw.children:
                cel = local.get(child)
                if cel is None:
                    self.error("E-REF",
                               f"unknown element {child!r} in actor {raw.actor.id!r}",
                               raw.span)
                    ok = False
                elif cel.kind is ElementKind.QUALITY:
                    self.error("E-REFINE",
                               f"quality {child!r} cannot be a refinement child", raw.span)
                    ok = False
            if ok:
                parent.refinement = Refinement(raw.kind, tuple(raw.children))

        for raw in contributions:
            local = {e.id: e for e in raw.actor.elements}
            source = local.get(raw.source)
            if source is None:
                self.error("E-REF",
                           f"unknown element {raw.source!r} in actor {raw.actor.id!r}",
                           raw.span)
                continue
            target = elements.get(raw.target)
            if target is None:
                self.error("E-REF", f"unknown contribution target {raw.target!r}", raw.span)
                continue
            if target.kind is not ElementKind.QUALITY:
                self.error("E-CONTRIB",
                           f"contribution target {target.id!r} is a {target.kind.value}; "
                           "contributions target qualities only", raw.span)
                continue
            source.contributions.append(Contribution(raw.target, raw.strength))

        actors = model.actor_map()
        for dep in model.dependencies:
            for end in (dep.depender, dep.dependee):
                actor = actors.get(end.actor)
                if actor is None:
                    self.error("E-REF", f"unknown actor {end.actor!r}", dep.span)
                elif end.element is not None and actor.open \
                        and end.element not in {e.id for e in actor.elements}:
                    self.error("E-REF",
                               f"unknown element {end.element!r} in actor {end.actor!r}",
                               dep.span)
            if dep.depender.actor == dep.dependee.actor \
                    and dep.depender.element == dep.dependee.element:
                self.error("E-SELF", "dependency must connect two distinct ends", dep.span)
        for link in model.associations:
            for actor_id in (link.source, link.target):
                if actor_id not in actors:
                    self.error("E-REF", f"unknown actor {actor_id!r}", link.span)


# ---------------------------------------------------------------------------
# API descriptors
# ---------------------------------------------------------------------------

_API_BODY = {"stage", "observed", "curve", "rationale"}


class _ApiDescriptorParser(_Parser):
    def parse(self) -> ParseResult:
        try:
            self.expect("api")
            name, _ = self.name("api name")
            self.expect("{")
        except _ParseAbort:
            return self.result(None)
        stage: Optional[LifecycleStage] = None
        stage_span: Optional[SourceSpan] = None
        observed = Characteristics()
        curve: list[ValueCurveSample] = []
        rationales: list[str] = []
        while not self.at("}") and self.peek().kind is not TokKind.EOF:
            try:
                if self.at("stage"):
                    kw = self.advance()
                    value, _ = self.keyword_choice(_STAGE_WORDS, "lifecycle stage")
                    if stage is not None:
                        self.error("E-DUP", "stage declared twice", kw.span)
                    stage, stage_span = value, kw.span
                elif self.at("observed"):
                    self.advance()
                    self.parse_observed(observed)
                elif self.at("curve"):
                    self.advance()
                    self.parse_curve_sample(curve)
                elif self.at("rationale"):
                    self.advance()
                    tag, _ = self.name("rationale tag")
                    rationales.append(tag)
                else:
                    tok = self.peek()
                    self.error("E-SYNTAX",
                               "expected stage, observed, curve, or rationale, "
                               f"found {tok.value!r}", tok.span)
                    raise _ParseAbort()
            except _ParseAbort:
                self.sync(_API_BODY)
        try:
            self.expect("}")
            eof = self.peek()
            if eof.kind is not TokKind.EOF:
                self.error("E-SYNTAX", f"unexpected trailing input {eof.value!r}", eof.span)
        except _ParseAbort:
            pass
        if stage is None and not self.has_errors():
            self.error("E-SYNTAX", "api descriptor is missing a stage declaration",
                       self.peek().span)
        model = ApiDescriptor(
            name=name, declared_stage=stage or LifecycleStage.PLAN,
            observed=observed, curve=curve, transition_rationales=rationales)
        return self.result(model)

    def parse_observed(self, observed: Characteristics) -> None:
        tok = self.peek()
        if tok.kind is not TokKind.IDENT or tok.value not in _OBSERVED_FIELDS:
            self.error("E-SYNTAX", f"unknown characteristic {tok.value!r}", tok.span)
            raise _ParseAbort()
        self.advance()
        attr, enum_cls = _OBSERVED_FIELDS[tok.value]
        vtok = self.peek()
        values = {v.value: v for v in enum_cls}
        if vtok.kind is not TokKind.IDENT or vtok.value not in values:
            self.error("E-SYNTAX", f"unknown {tok.value} value {vtok.value!r}", vtok.span)
            raise _ParseAbort()
        self.advance()
        if getattr(observed, attr) is not None:
            self.error("E-DUP", f"characteristic {tok.value} observed twice", tok.span)
        setattr(observed, attr, values[vtok.value])

    def parse_curve_sample(self, curve: list[ValueCurveSample]) -> None:
        t, tspan = self.number("sample time")
        stage, _ = self.keyword_choice(_STAGE_WORDS, "lifecycle stage")
        value, vspan = self.number("sample value")
        if not 0.0 <= value <= 1.0:
            self.error("E-RANGE", f"curve value {value} outside [0, 1]", vspan)
        if curve:
            if t <= curve[-1].t:
                self.error("E-ORDER", "curve samples must have increasing times", tspan)
            if _STAGE_RANK[stage] < _STAGE_RANK[curve[-1].stage]:
                self.error("E-ORDER", "curve stages may not move backward", tspan)
        curve.append(ValueCurveSample(t, stage, value))


# ---------------------------------------------------------------------------
# Metric catalogs
# ---------------------------------------------------------------------------

_METRIC_BODY = {"what", "why", "who", "where", "dimensions", "automation", "links"}


class _MetricCatalogParser(_Parser):
    def parse(self) -> ParseResult:
        metrics: list[MetricDef] = []
        names: dict[str, SourceSpan] = {}
        while self.peek().kind is not TokKind.EOF:
            try:
                if not self.at("metric"):
                    tok = self.peek()
                    self.error("E-SYNTAX", f"expected metric block, found {tok.value!r}",
                               tok.span)
                    raise _ParseAbort()
                self.parse_metric(metrics, names)
            except _ParseAbort:
                self.sync({"metric"})
        return self.result(metrics)

    def parse_metric(self, metrics: list[MetricDef],
                     names: dict[str, SourceSpan]) -> None:
        self.expect("metric")
        name, span = self.name("metric name")
        if name in names:
            self.error("E-DUP", f"duplicate metric {name!r}", span)
        names[name] = span
        metric = MetricDef(name=name, span=span)
        self.expect("{")
        seen: set[str] = set()
        while not self.at("}") and self.peek().kind is not TokKind.EOF:
            try:
                tok = self.peek()
                if tok.kind is not TokKind.IDENT or tok.value not in _METRIC_BODY:
                    self.error("E-SYNTAX", f"unknown metric field {tok.value!r}", tok.span)
                    raise _ParseAbort()
                field_name = tok.value
                self.advance()
                if field_name in seen:
                    self.error("E-DUP", f"metric field {field_name} given twice", tok.span)
                seen.add(field_name)
                if field_name == "what":
                    metric.what = self.name("text")[0]
                elif field_name == "why":
                    metric.why = self.name("text")[0]
                elif field_name == "who":
                    metric.who = self.name_list()
                elif field_name == "where":
                    metric.where = self.name_list()
                elif field_name == "links":
                    metric.links = self.name_list()
                elif field_name == "dimensions":
                    dims = set()
                    while True:
                        dim, _ = self.keyword_choice(
                            _DIMENSION_WORDS,
                            "dimension (business|usage|design|implementation)")
                        dims.add(dim)
                        if not self.eat(","):
                            break
                    metric.dimensions = dims
                elif field_name == "automation":
                    level, _ = self.keyword_choice(
                        _AUTOMATION_WORDS, "automation level (automatable|partial|manual)")
                    metric.automation = level
            except _ParseAbort:
                self.sync(_METRIC_BODY)
        try:
            self.expect("}")
        except _ParseAbort:
            pass
        metrics.append(metric)


# ---------------------------------------------------------------------------
# Scenarios
# ---------------------------------------------------------------------------

class _ScenarioParser(_Parser):
    def parse(self) -> ParseResult:
        try:
            self.expect("scenario")
            name, _ = self.name("scenario name")
            self.expect("{")
        except _ParseAbort:
            return self.result(None)
        assignments: dict[str, Label] = {}
        while not self.at("}") and self.peek().kind is not TokKind.EOF:
            try:
                self.expect("label")
                target, tspan = self.name("element or dependum id")
                self.expect("=")
                label, _ = self.keyword_choice(LABEL_WORDS, "label")
                if target in assignments:
                    self.error("E-DUP", f"label assigned twice for {target!r}", tspan)
                assignments[target] = label
            except _ParseAbort:
                self.sync({"label"})
        try:
            self.expect("}")
        except _ParseAbort:
            pass
        return self.result(Scenario(name, assignments))


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------

def parse_value_model(text: str, filename: str = "<input>") -> ParseResult:
    return _ValueModelParser(text, filename).parse()


def parse_goal_model(text: str, filename: str = "<input>") -> ParseResult:
    return _GoalModelParser(text, filename).parse()


def parse_api_descriptor(text: str, filename: str = "<input>") -> ParseResult:
    return _ApiDescriptorParser(text, filename).parse()


def parse_metric_catalog(text: str, filename: str = "<input>") -> ParseResult:
    return _MetricCatalogParser(text, filename).parse()


def parse_scenario(text: str, filename: str = "<input>") -> ParseResult:
    return _ScenarioParser(text, filename).parse()


_DISPATCH = {
    "valuemodel": parse_value_model,
    "goalmodel": parse_goal_model,
    "api": parse_api_descriptor,
    "metric": parse_metric_catalog,
    "scenario": parse_scenario,
}


def parse_model(text: str, filename: str = "<input>") -> ParseResult:
    """Parse any supported format, dispatching on the leading keyword."""
    try:
        tokens = tokenize(text, filename)
    except LexError as exc:
        return ParseResult(None, [Diagnostic(Severity.ERROR, "E-SYNTAX",
                                             exc.message, exc.span)])
    head = tokens[0]
    parser = _DISPATCH.get(head.value) if head.kind is TokKind.IDENT else None
    if parser is None:
        return ParseResult(None, [Diagnostic(
            Severity.ERROR, "E-SYNTAX",
            f"unrecognized model format (found {head.value!r})", head.span)])
    return parser(text, filename)
