"""Dictionary-hint prompting, lexicon induction, and translation evaluation.

The pipeline: induce or load a bilingual dictionary, build few-shot
translation prompts whose hint clauses offer per-word translations, send
them to a completion backend (or an offline mock), then score the
outputs with corpus BLEU and measure how often the hints were used.
"""

__version__ = "0.1.0"

from .backend import (
    BACKEND_KINDS,
    BackendConfig,
    CompletionResult,
    complete_batch,
    extract_hypothesis,
)
from .corpus import (
    AlignmentLinks,
    ParallelCorpus,
    load_alignments,
    load_parallel,
    load_parallel_tsv,
)
from .evaluation import (
    BleuScore,
    ControllabilityRow,
    HintDetail,
    HitReport,
    bleu_corpus,
    compare_controllability,
    hit_report,
)
from .induction import (
    DEFAULT_SMOOTHING,
    DEFAULT_THRESHOLD,
    InducedEntry,
    align_model1,
    induce_entries,
    induce_lexicon,
    train_model1,
    write_scores_tsv,
)
from .lexicon import (
    BilingualLexicon,
    CoverageStats,
    coverage_stats,
    downsample_to_type_coverage,
    load_muse,
    save_muse,
    shuffle_targets,
)
from .manifest import RunManifest, file_entry
from .prompting import (
    DEFAULT_K,
    DEFAULT_MAX_TRANSLATIONS,
    DEFAULT_STOPLIST_SIZE,
    STOP_SEQUENCE,
    STRATEGIES,
    Demonstration,
    Hint,
    HintSet,
    PromptRecord,
    RenderedPrompt,
    build_prompt,
    build_prompt_records,
    render_example,
    render_hint_clause,
    select_demonstrations,
    select_hints,
)
from .tokenization import (
    build_frequency_table,
    contains_tokens,
    eval_tokenize,
    lookup_tokenize,
    top_k_words,
)

__all__ = [
    "AlignmentLinks",
    "BACKEND_KINDS",
    "BackendConfig",
    "BilingualLexicon",
    "BleuScore",
    "CompletionResult",
    "ControllabilityRow",
    "CoverageStats",
    "DEFAULT_K",
    "DEFAULT_MAX_TRANSLATIONS",
    "DEFAULT_SMOOTHING",
    "DEFAULT_STOPLIST_SIZE",
    "DEFAULT_THRESHOLD",
    "Demonstration",
    "Hint",
    "HintDetail",
    "HintSet",
    "HitReport",
    "InducedEntry",
    "ParallelCorpus",
    "PromptRecord",
    "RenderedPrompt",
    "RunManifest",
    "STOP_SEQUENCE",
    "STRATEGIES",
    "align_model1",
    "bleu_corpus",
    "build_frequency_table",
    "build_prompt",
    "build_prompt_records",
    "compare_controllability",
    "complete_batch",
    "contains_tokens",
    "coverage_stats",
    "downsample_to_type_coverage",
    "eval_tokenize",
    "extract_hypothesis",
    "file_entry",
    "hit_report",
    "induce_entries",
    "induce_lexicon",
    "load_alignments",
    "load_muse",
    "load_parallel",
    "load_parallel_tsv",
    "lookup_tokenize",
    "render_example",
    "render_hint_clause",
    "save_muse",
    "select_demonstrations",
    "select_hints",
    "shuffle_targets",
    "top_k_words",
    "train_model1",
    "write_scores_tsv",
    "__version__",
]
