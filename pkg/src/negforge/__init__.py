"""Polarity-flipping toolchain: tree patterns, rewrite rules, training pairs,
loss kernels, and cloze scoring."""

from .conllu import (
    ConlluError,
    ParsedSentence,
    Token,
    children_of,
    parse_conllu,
    parse_conllu_file,
    to_conllu,
    within_length_limit,
)
from .pattern import (
    CompiledPattern,
    MatchResult,
    PatternError,
    compile_pattern,
    first_match,
    match_all,
)
from .rules import (
    Action,
    ApplyError,
    NegationOutcome,
    NegationRule,
    RuleLoadError,
    RuleSet,
    apply_actions,
    coverage_stats,
    load_default_ruleset,
    load_ruleset,
    load_ruleset_file,
    negate,
    render,
)
from .pairs import (
    DatasetError,
    TrainingExample,
    build_contradictory,
    build_copy,
    build_plain,
    read_dataset,
    sample_dataset,
    write_dataset,
)
from .objective import (
    Schedule,
    StepPlan,
    combined_loss,
    kl_loss,
    make_schedule,
    steps_for_epochs,
    ul_loss,
)
from .cloze import (
    ClozeQuery,
    EvalReport,
    PredictionRecord,
    RelationTemplate,
    aggregate,
    instantiate,
    p_at_k,
    top1_error_negated,
)

__version__ = "0.1.0"
