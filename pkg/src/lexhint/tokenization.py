"""Tokenizers and word-frequency tables.

Two deliberately different tokenizers live here and must never be mixed:

* ``lookup_tokenize`` is the lossy, lowercased scheme used for dictionary
  lookup, stoplists, alignment, and hint matching.
* ``eval_tokenize`` is the mteval-13a scheme used for BLEU scoring.  It
  keeps case and splits punctuation into separate tokens.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from collections.abc import Iterable, Sequence

__all__ = [
    "build_frequency_table",
    "contains_tokens",
    "eval_tokenize",
    "lookup_tokenize",
    "top_k_words",
]


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def lookup_tokenize(line: str) -> list[str]:
    """Split on whitespace, strip surrounding punctuation, lowercase.

    Only punctuation at the edges of a whitespace chunk is stripped;
    word-internal punctuation (hyphens, apostrophes) survives.  Chunks
    that were pure punctuation disappear.
    """
    tokens = []
    for chunk in line.split():
        start, end = 0, len(chunk)
        while start < end and _is_punct(chunk[start]):
            start += 1
        while end > start and _is_punct(chunk[end - 1]):
            end -= 1
        if end > start:
            tokens.append(chunk[start:end].lower())
    return tokens


# mteval-13a normalization, applied in this exact order.
_ENTITY_REPLACEMENTS = [
    ("<skipped>", ""),
    ("-\n", ""),
    ("\n", " "),
    ("&quot;", '"'),
    ("&amp;", "&"),
    ("&lt;", "<"),
    ("&gt;", ">"),
]
_13A_SYMBOL = re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])")
_13A_PERIOD_COMMA_AFTER_NONDIGIT = re.compile(r"([^0-9])([\.,])")
_13A_PERIOD_COMMA_BEFORE_NONDIGIT = re.compile(r"([\.,])([^0-9])")
_13A_DASH_AFTER_DIGIT = re.compile(r"([0-9])(-)")


def eval_tokenize(line: str) -> list[str]:
    """Tokenize with the mteval-13a scheme.  Case is preserved."""
    norm = line
    for old, new in _ENTITY_REPLACEMENTS:
        norm = norm.replace(old, new)
    norm = f" {norm} "
    norm = _13A_SYMBOL.sub(r" \1 ", norm)
    norm = _13A_PERIOD_COMMA_AFTER_NONDIGIT.sub(r"\1 \2 ", norm)
    norm = _13A_PERIOD_COMMA_BEFORE_NONDIGIT.sub(r" \1 \2", norm)
    norm = _13A_DASH_AFTER_DIGIT.sub(r"\1 \2 ", norm)
    return norm.split()


def build_frequency_table(lines: Iterable[str]) -> Counter[str]:
    """Count lookup tokens across a corpus side."""
    return Counter(tok for line in lines for tok in lookup_tokenize(line))


def top_k_words(table: Counter[str], k: int) -> list[str]:
    """The k most frequent words, ties broken lexicographically."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    ranked = sorted(table.items(), key=lambda item: (-item[1], item[0]))
    return [word for word, _ in ranked[:k]]


def contains_tokens(tokens: Sequence[str], phrase: str) -> bool:
    """True if the lookup tokens of phrase occur contiguously in tokens.

    Token-level equality, not substring matching: "cat" never matches
    inside "catalogue".  A phrase that tokenizes to nothing never matches.
    """
    needle = lookup_tokenize(phrase)
    if not needle:
        return False
    width = len(needle)
    return any(
        list(tokens[i : i + width]) == needle
        for i in range(len(tokens) - width + 1)
    )
