"""eigenkit: derive, generate, and evaluate event-influence corpora.

The pipeline in one breath: curated influence graphs become multi-hop
generation corpora (derivation), samples render into single-string queries
(templating), a pluggable backend answers them (backend), answers assemble
into new graphs (graph_builder) or augment QA training data (qa_augment),
and generated text is scored against references (metrics).
"""

from .backend import (
    DEFAULT_STOP_TOKEN,
    BackendUnavailable,
    BadRequest,
    DuplicatePrompt,
    GenerationRequest,
    GenerationResult,
    Generator,
    MalformedResponse,
    RemoteGenerator,
    ScriptedGenerator,
    load_mock_script,
    mock_from_script,
)
from .derivation import (
    DatasetBundle,
    DerivationConfig,
    DerivedSample,
    InvalidGraph,
    Passage,
    PassageMismatch,
    StatsTable,
    derive_corpus,
    derive_samples,
    dump_passages,
    dump_samples,
    load_passages,
    load_samples,
    stats,
)
from .errors import BackendError, EigenkitError, InputError, IoFailure
from .graph import (
    Direction,
    EventNode,
    Finding,
    Hop,
    InfluenceEdge,
    InfluenceGraph,
    Path,
    RelationKind,
    Sign,
    UnknownNode,
    ValidationReport,
    compose,
    dump_graphs,
    enumerate_paths,
    invert,
    load_graphs,
    validate,
)
from .graph_builder import (
    Attachment,
    BuildSpec,
    GraphBuild,
    adjacency_text,
    build_graph,
    normalize_event_text,
)
from .metrics import (
    DEFAULT_LEXICON,
    EmptyCandidate,
    EmptyInput,
    EmptyReferences,
    MetricReport,
    MetricScores,
    Polarity,
    PolarityLexicon,
    bleu,
    evaluate_corpus,
    meteor_simple,
    polarity_match_rate,
    polarity_of,
    report_dict,
    report_text,
    rouge_l,
)
from .qa_augment import (
    AccuracyReport,
    AugmentedQASample,
    MissingPrediction,
    QASample,
    TrainerConfig,
    augment_queries,
    augment_sample,
    dump_predictions,
    dump_qa_samples,
    emit_training_files,
    load_predictions,
    load_qa_samples,
    score_predictions,
)
from .templating import EmptySource, MalformedQuery, ParsedQuery, parse_query, render_query

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport",
    "Attachment",
    "AugmentedQASample",
    "BackendError",
    "BackendUnavailable",
    "BadRequest",
    "BuildSpec",
    "DatasetBundle",
    "DEFAULT_LEXICON",
    "DEFAULT_STOP_TOKEN",
    "DerivationConfig",
    "DerivedSample",
    "Direction",
    "DuplicatePrompt",
    "EigenkitError",
    "EmptyCandidate",
    "EmptyInput",
    "EmptyReferences",
    "EmptySource",
    "EventNode",
    "Finding",
    "GenerationRequest",
    "GenerationResult",
    "Generator",
    "GraphBuild",
    "Hop",
    "InfluenceEdge",
    "InfluenceGraph",
    "InputError",
    "InvalidGraph",
    "IoFailure",
    "MalformedQuery",
    "MalformedResponse",
    "MetricReport",
    "MetricScores",
    "MissingPrediction",
    "ParsedQuery",
    "Passage",
    "PassageMismatch",
    "Path",
    "Polarity",
    "PolarityLexicon",
    "QASample",
    "RelationKind",
    "RemoteGenerator",
    "ScriptedGenerator",
    "Sign",
    "StatsTable",
    "TrainerConfig",
    "UnknownNode",
    "ValidationReport",
    "adjacency_text",
    "augment_queries",
    "augment_sample",
    "bleu",
    "build_graph",
    "compose",
    "derive_corpus",
    "derive_samples",
    "dump_graphs",
    "dump_passages",
    "dump_predictions",
    "dump_qa_samples",
    "dump_samples",
    "emit_training_files",
    "enumerate_paths",
    "evaluate_corpus",
    "invert",
    "load_graphs",
    "load_mock_script",
    "load_passages",
    "load_predictions",
    "load_qa_samples",
    "load_samples",
    "meteor_simple",
    "mock_from_script",
    "normalize_event_text",
    "parse_query",
    "polarity_match_rate",
    "polarity_of",
    "render_query",
    "report_dict",
    "report_text",
    "rouge_l",
    "score_predictions",
    "stats",
    "validate",
]
