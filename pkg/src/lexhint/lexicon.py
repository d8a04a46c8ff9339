"""Bilingual lexicons: MUSE-format I/O, coverage, downsampling, shuffling.

A lexicon maps lookup-normalized source words to ordered lists of
translations.  Polysemous entries keep their order (file order when
loaded, descending score when induced) because hint selection treats the
list head as the preferred translation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .tokenization import lookup_tokenize
from .util import ParseError, read_lines, write_lines

__all__ = [
    "BilingualLexicon",
    "CoverageStats",
    "coverage_stats",
    "downsample_to_type_coverage",
    "load_muse",
    "save_muse",
    "shuffle_targets",
]

PROVENANCES = ("loaded", "induced", "downsampled", "shuffled")


@dataclass
class BilingualLexicon:
    """Ordered source-to-translations mapping with provenance."""

    entries: dict[str, list[str]] = field(default_factory=dict)
    source_lang: str = ""
    target_lang: str = ""
    provenance: str = "loaded"

    def __post_init__(self) -> None:
        if self.provenance not in PROVENANCES:
            raise ValueError(f"provenance must be one of {PROVENANCES}, got {self.provenance!r}")
        for word, translations in self.entries.items():
            if not word or any(ch.isspace() for ch in word):
                raise ValueError(f"invalid source word {word!r}")
            if not translations:
                raise ValueError(f"source word {word!r} has an empty translation list")
            if len(set(translations)) != len(translations):
                raise ValueError(f"source word {word!r} has duplicate translations")

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def lookup(self, word: str) -> list[str]:
        """Translations for word, or an empty list if absent."""
        return list(self.entries.get(word, ()))


def load_muse(
    path: str,
    *,
    source_lang: str = "",
    target_lang: str = "",
) -> BilingualLexicon:
    """Load a MUSE-format dictionary: one "source target" pair per line.

    Repeated source words accumulate translations in file order; exact
    duplicate pairs are dropped.  Both sides are lowercased.
    """
    entries: dict[str, list[str]] = {}
    seen: set[tuple[str, str]] = set()
    for line_no, line in enumerate(read_lines(path), start=1):
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(path, line_no, f"expected 2 whitespace-separated fields, got {len(fields)}")
        source, target = fields[0].lower(), fields[1].lower()
        if (source, target) in seen:
            continue
        seen.add((source, target))
        entries.setdefault(source, []).append(target)
    return BilingualLexicon(entries, source_lang, target_lang, "loaded")


def save_muse(lexicon: BilingualLexicon, path: str) -> None:
    """Write a lexicon in MUSE format, preserving entry and translation order."""
    lines = []
    for word, translations in lexicon.entries.items():
        for translation in translations:
            if any(ch.isspace() for ch in translation):
                raise ValueError(
                    f"translation {translation!r} of {word!r} contains whitespace "
                    "and cannot be written in MUSE format"
                )
            lines.append(f"{word} {translation}")
    write_lines(path, lines)


@dataclass(frozen=True)
class CoverageStats:
    """Lexicon coverage of a corpus side, in percent."""

    token_coverage: float
    type_coverage: float
    tokens: int
    types: int
    covered_tokens: int
    covered_types: int

    def to_json(self) -> dict:
        return {
            "token_coverage": self.token_coverage,
            "type_coverage": self.type_coverage,
            "tokens": self.tokens,
            "types": self.types,
            "covered_tokens": self.covered_tokens,
            "covered_types": self.covered_types,
        }


def coverage_stats(
    lexicon: BilingualLexicon,
    source_lines: list[str],
    stoplist: frozenset[str] = frozenset(),
) -> CoverageStats:
    """Token and type coverage over lookup tokens, stoplist excluded.

    Stoplisted words count neither as covered nor toward the denominators.
    """
    tokens = [
        tok
        for line in source_lines
        for tok in lookup_tokenize(line)
        if tok not in stoplist
    ]
    if not tokens:
        raise ValueError("coverage is undefined on an empty corpus")
    types = set(tokens)
    covered_tokens = sum(1 for tok in tokens if tok in lexicon)
    covered_types = sum(1 for tok in types if tok in lexicon)
    return CoverageStats(
        token_coverage=100.0 * covered_tokens / len(tokens),
        type_coverage=100.0 * covered_types / len(types),
        tokens=len(tokens),
        types=len(types),
        covered_tokens=covered_tokens,
        covered_types=covered_types,
    )


def downsample_to_type_coverage(
    lexicon: BilingualLexicon,
    target_rate: float,
    source_lines: list[str],
    stoplist: frozenset[str] = frozenset(),
    seed: int = 0,
) -> BilingualLexicon:
    """Remove whole entries until type coverage drops to at most target_rate.

    Only entries that actually cover a corpus type are candidates, shuffled
    by the seed and removed one at a time; each removal lowers coverage by
    exactly one type.  Entries for words outside the corpus survive, so a
    higher-rate result is always a superset of a lower-rate one under the
    same seed.
    """
    stats = coverage_stats(lexicon, source_lines, stoplist)
    if target_rate < 0:
        raise ValueError(f"target rate must be non-negative, got {target_rate}")
    if target_rate > stats.type_coverage:
        raise ValueError(
            f"target type coverage {target_rate} exceeds current coverage "
            f"{stats.type_coverage}"
        )
    corpus_types = {
        tok for line in source_lines for tok in lookup_tokenize(line)
    } - stoplist
    covering = [word for word in lexicon.entries if word in corpus_types]
    rng = random.Random(seed)
    rng.shuffle(covering)
    entries = dict(lexicon.entries)
    covered = len(covering)
    total = len(corpus_types)
    removed = 0
    while removed < len(covering) and 100.0 * covered / total > target_rate:
        del entries[covering[removed]]
        covered -= 1
        removed += 1
    return BilingualLexicon(entries, lexicon.source_lang, lexicon.target_lang, "downsampled")


def shuffle_targets(lexicon: BilingualLexicon, seed: int) -> BilingualLexicon:
    """Permute translation lists across source words, uniformly at random.

    Source vocabulary and the multiset of translation lists are preserved;
    a list may land back on its own word.
    """
    if not lexicon.entries:
        raise ValueError("cannot shuffle an empty lexicon")
    words = list(lexicon.entries)
    translation_lists = [list(lexicon.entries[word]) for word in words]
    rng = random.Random(seed)
    rng.shuffle(translation_lists)
    entries = dict(zip(words, translation_lists))
    return BilingualLexicon(entries, lexicon.source_lang, lexicon.target_lang, "shuffled")
