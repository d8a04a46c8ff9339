"""Few-shot prompt construction with per-word dictionary hints.

A prompt is a sequence of example blocks joined by one blank line.  Each
block has up to three lines: the instruction line with the source
sentence, an optional hint clause, and a final line that states the
target language and, for demonstrations, carries the reference.  The
query block ends exactly with "The full translation to <lang> is:" so
the model's continuation is the translation; generation stops at the
first newline.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .corpus import ParallelCorpus
from .lexicon import BilingualLexicon, shuffle_targets
from .tokenization import contains_tokens, lookup_tokenize
from .util import derive_rng, derive_seed

__all__ = [
    "DEFAULT_K",
    "DEFAULT_MAX_TRANSLATIONS",
    "DEFAULT_STOPLIST_SIZE",
    "Demonstration",
    "Hint",
    "HintSet",
    "PromptRecord",
    "RenderedPrompt",
    "STOP_SEQUENCE",
    "STRATEGIES",
    "build_prompt",
    "build_prompt_records",
    "render_example",
    "render_hint_clause",
    "select_demonstrations",
    "select_hints",
]

STRATEGIES = ("full", "gold", "random_single", "false_dict", "none")
STOP_SEQUENCE = "\n"
DEFAULT_K = 4
DEFAULT_MAX_TRANSLATIONS = 3
DEFAULT_STOPLIST_SIZE = 500


@dataclass(frozen=True)
class Hint:
    """One source word with the translations offered for it."""

    word: str
    translations: tuple[str, ...]


@dataclass(frozen=True)
class HintSet:
    """Hints for one sentence under one strategy.

    Source words are unique and ordered by first occurrence in the
    sentence.  Under gold, random_single, and false_dict every hint
    carries exactly one translation; under none the set is empty.
    """

    items: tuple[Hint, ...]
    strategy: str

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        words = [item.word for item in self.items]
        if len(set(words)) != len(words):
            raise ValueError("hint source words must be unique within a set")
        if self.strategy == "none" and self.items:
            raise ValueError("strategy 'none' cannot carry hints")
        if self.strategy in ("gold", "random_single", "false_dict"):
            for item in self.items:
                if len(item.translations) != 1:
                    raise ValueError(
                        f"strategy {self.strategy!r} requires exactly one translation "
                        f"per hint, got {len(item.translations)} for {item.word!r}"
                    )


@dataclass(frozen=True)
class Demonstration:
    """A dev-set pair rendered as an in-context example."""

    source: str
    reference: str
    hint_set: HintSet


@dataclass(frozen=True)
class RenderedPrompt:
    text: str
    stop: str
    instance_id: str


@dataclass(frozen=True)
class PromptRecord:
    """One prompt plus the metadata later stages need.

    reference travels along for scoring and for mock backends; hints
    travel along for hit-rate evaluation.
    """

    instance_id: str
    prompt: str
    stop: str
    source: str
    reference: str | None = None
    hints: tuple[Hint, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        row: dict = {
            "id": self.instance_id,
            "prompt": self.prompt,
            "stop": self.stop,
            "source": self.source,
            "hints": [
                {"word": h.word, "translations": list(h.translations)}
                for h in self.hints
            ],
        }
        if self.reference is not None:
            row["reference"] = self.reference
        return row

    @classmethod
    def from_json(cls, row: dict) -> PromptRecord:
        try:
            hints = tuple(
                Hint(h["word"], tuple(h["translations"])) for h in row["hints"]
            )
            return cls(
                instance_id=str(row["id"]),
                prompt=row["prompt"],
                stop=row["stop"],
                source=row["source"],
                reference=row.get("reference"),
                hints=hints,
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed prompt record: {json.dumps(row)[:200]}") from exc


def select_hints(
    sentence: str,
    lexicon: BilingualLexicon,
    stoplist: frozenset[str],
    strategy: str,
    seed: int,
    reference: str | None = None,
    max_translations: int = DEFAULT_MAX_TRANSLATIONS,
) -> HintSet:
    """Choose dictionary hints for one sentence.

    full      - all translations, downsampled to max_translations at random
    gold      - the single translation that appears in the reference; the
                word is skipped when zero or several distinct ones appear
    random_single / false_dict - one translation, uniformly at random
    none      - no hints

    The caller is responsible for shuffling the lexicon before false_dict;
    within this function it behaves like random_single.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    if strategy == "none":
        return HintSet((), "none")
    if strategy == "gold" and reference is None:
        raise ValueError("strategy 'gold' requires a reference")
    if max_translations < 1:
        raise ValueError(f"max_translations must be at least 1, got {max_translations}")
    rng = random.Random(seed)
    reference_tokens = lookup_tokenize(reference) if reference is not None else []
    items: list[Hint] = []
    seen: set[str] = set()
    for word in lookup_tokenize(sentence):
        if word in seen:
            continue
        seen.add(word)
        if word in stoplist:
            continue
        translations = lexicon.lookup(word)
        if not translations:
            continue
        if strategy == "full":
            chosen = list(translations)
            if len(chosen) > max_translations:
                chosen = rng.sample(chosen, max_translations)
        elif strategy == "gold":
            present = [t for t in translations if contains_tokens(reference_tokens, t)]
            if len(present) != 1:
                continue
            chosen = present
        else:
            chosen = [rng.choice(translations)]
        items.append(Hint(word, tuple(chosen)))
    return HintSet(tuple(items), strategy)


def render_hint_clause(hint_set: HintSet) -> str:
    """The hint sentence, or an empty string when there are no hints."""
    if not hint_set.items:
        return ""
    parts = []
    for item in hint_set.items:
        quoted = ", ".join(f'"{t}"' for t in item.translations)
        parts.append(f'the word "{item.word}" means {quoted}')
    return "In this context, " + "; ".join(parts) + "."


def render_example(
    source: str,
    target_lang: str,
    hint_set: HintSet | None = None,
    reference: str | None = None,
) -> str:
    """Render one example block; with a reference it is a demonstration."""
    lines = [f"Translate the following sentence to {target_lang}: {source}"]
    if hint_set is not None:
        clause = render_hint_clause(hint_set)
        if clause:
            lines.append(clause)
    final = f"The full translation to {target_lang} is:"
    if reference is not None:
        final += f" {reference}"
    lines.append(final)
    return "\n".join(lines)


def build_prompt(
    demonstrations: list[Demonstration],
    source: str,
    target_lang: str,
    hint_set: HintSet,
    instance_id: str = "",
) -> RenderedPrompt:
    """Assemble demonstrations plus the query block into one prompt."""
    blocks = [
        render_example(demo.source, target_lang, demo.hint_set, demo.reference)
        for demo in demonstrations
    ]
    blocks.append(render_example(source, target_lang, hint_set))
    return RenderedPrompt("\n\n".join(blocks), STOP_SEQUENCE, instance_id)


def select_demonstrations(
    dev: ParallelCorpus,
    k: int,
    seed: int,
    lexicon: BilingualLexicon,
    stoplist: frozenset[str],
    strategy: str,
    max_translations: int = DEFAULT_MAX_TRANSLATIONS,
) -> list[Demonstration]:
    """Draw k dev pairs without replacement and hint them.

    Demonstration hints use the dev reference, so the gold strategy works
    on demonstrations exactly as on scored instances.  Hint RNG streams
    are keyed by the pair's position in the dev set, which keeps a pair's
    hints stable no matter which other pairs were drawn.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    if k > len(dev.pairs):
        raise ValueError(f"cannot draw {k} demonstrations from {len(dev.pairs)} dev pairs")
    rng = derive_rng(seed, "demonstrations")
    indices = rng.sample(range(len(dev.pairs)), k)
    demonstrations = []
    for index in indices:
        source, reference = dev.pairs[index]
        hint_set = select_hints(
            source,
            lexicon,
            stoplist,
            strategy,
            seed=derive_seed(seed, "demo-hints", index),
            reference=reference,
            max_translations=max_translations,
        )
        demonstrations.append(Demonstration(source, reference, hint_set))
    return demonstrations


def build_prompt_records(
    test: ParallelCorpus,
    dev: ParallelCorpus,
    lexicon: BilingualLexicon,
    strategy: str,
    *,
    seed: int,
    k: int = DEFAULT_K,
    stoplist: frozenset[str] = frozenset(),
    max_translations: int = DEFAULT_MAX_TRANSLATIONS,
    demo_strategy: str | None = None,
    target_lang: str = "English",
) -> list[PromptRecord]:
    """Build the full prompt batch for a test set.

    Under false_dict the lexicon is shuffled once here, so demonstrations
    and all instances see the same wrong dictionary.  Each instance draws
    hints from its own RNG stream keyed by (seed, instance index), which
    makes the whole batch bit-identical across runs for a fixed seed.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    if strategy == "false_dict":
        lexicon = shuffle_targets(lexicon, derive_seed(seed, "false-dictionary"))
    if demo_strategy is None:
        demo_strategy = strategy
    demonstrations = select_demonstrations(
        dev, k, seed, lexicon, stoplist, demo_strategy, max_translations
    )
    records = []
    for index, (source, reference) in enumerate(test.pairs):
        hint_set = select_hints(
            source,
            lexicon,
            stoplist,
            strategy,
            seed=derive_seed(seed, "hints", index),
            reference=reference,
            max_translations=max_translations,
        )
        rendered = build_prompt(
            demonstrations, source, target_lang, hint_set, instance_id=str(index)
        )
        records.append(
            PromptRecord(
                instance_id=str(index),
                prompt=rendered.text,
                stop=rendered.stop,
                source=source,
                reference=reference,
                hints=hint_set.items,
            )
        )
    return records
