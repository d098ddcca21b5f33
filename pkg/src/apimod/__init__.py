"""apimod: modeling and analysis toolkit for strategic API ecosystems."""

__version__ = "0.1.0"

from .core import (
    BapoTag, Diagnostic, EvidencePair, GoalModel, Label, Layer, Severity,
    SourceSpan, ValueModel, evidence_to_label, label_max, label_min,
)
from .evaluate import (
    EvaluationResult, Scenario, compare_scenarios, propagate,
    propagate_metric_hierarchy,
)
from .govern import (
    DecisionItem, GoodsClass, MetricDef, Quadrant, classify_change,
    classify_implementation, classify_openness, prioritize_items,
)
from .lifecycle import (
    ApiDescriptor, LifecycleStage, detect_value_mismatches,
    expected_characteristics, lint_characteristics, transition_checklist,
)
from .link import link_metrics, who_report
from .transform import transform_value_to_goal
from .validate import (
    check_bapo_coverage, check_layer_coverage, validate_goal_model,
    validate_value_model,
)

__all__ = [
    "__version__",
    "BapoTag", "Diagnostic", "EvidencePair", "GoalModel", "Label", "Layer",
    "Severity", "SourceSpan", "ValueModel", "evidence_to_label", "label_max",
    "label_min",
    "EvaluationResult", "Scenario", "compare_scenarios", "propagate",
    "propagate_metric_hierarchy",
    "DecisionItem", "GoodsClass", "MetricDef", "Quadrant", "classify_change",
    "classify_implementation", "classify_openness", "prioritize_items",
    "ApiDescriptor", "LifecycleStage", "detect_value_mismatches",
    "expected_characteristics", "lint_characteristics", "transition_checklist",
    "link_metrics", "who_report", "transform_value_to_goal",
    "check_bapo_coverage", "check_layer_coverage", "validate_goal_model",
    "validate_value_model",
]
