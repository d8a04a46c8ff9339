"""Parallel corpus ingestion and word-alignment files.

Corpora are loaded from paired line-aligned text files or a two-column
TSV.  Filtering drops pairs that are too long or too length-imbalanced;
pairs with an empty tokenized side are always dropped.  Alignments use
the Pharaoh ``i-j`` format, one line per corpus pair, indices 0-based
over lookup tokens.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .tokenization import lookup_tokenize
from .util import ParseError, read_lines

__all__ = [
    "AlignmentLinks",
    "ParallelCorpus",
    "load_alignments",
    "load_parallel",
    "load_parallel_tsv",
]

# one set of (source_index, target_index) links per corpus pair
AlignmentLinks = list[set[tuple[int, int]]]

RATIO_MODES = ("symmetric", "directional")


@dataclass(frozen=True)
class ParallelCorpus:
    """Sentence pairs plus optional language labels.

    Immutable after construction; every stage that transforms a corpus
    returns a new object.
    """

    pairs: list[tuple[str, str]] = field(default_factory=list)
    source_lang: str = ""
    target_lang: str = ""

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def source_lines(self) -> list[str]:
        return [source for source, _ in self.pairs]

    @property
    def target_lines(self) -> list[str]:
        return [target for _, target in self.pairs]


def _keep_pair(
    len_source: int,
    len_target: int,
    max_len: int | None,
    max_ratio: float | None,
    ratio_mode: str,
) -> bool:
    if len_source == 0 or len_target == 0:
        return False
    if max_len is not None and (len_source > max_len or len_target > max_len):
        return False
    if max_ratio is not None:
        if ratio_mode == "symmetric":
            ratio = max(len_source, len_target) / min(len_source, len_target)
        else:
            ratio = len_source / len_target
        # a ratio exactly at the limit is kept; only strictly above is dropped
        if ratio > max_ratio:
            return False
    return True


def _filter_pairs(
    raw_pairs: list[tuple[str, str]],
    max_len: int | None,
    max_ratio: float | None,
    ratio_mode: str,
) -> list[tuple[str, str]]:
    if ratio_mode not in RATIO_MODES:
        raise ValueError(f"ratio_mode must be one of {RATIO_MODES}, got {ratio_mode!r}")
    kept = []
    for source, target in raw_pairs:
        len_source = len(lookup_tokenize(source))
        len_target = len(lookup_tokenize(target))
        if _keep_pair(len_source, len_target, max_len, max_ratio, ratio_mode):
            kept.append((source, target))
    return kept


def load_parallel(
    source_path: str,
    target_path: str,
    *,
    max_len: int | None = 250,
    max_ratio: float | None = 1.5,
    ratio_mode: str = "symmetric",
    source_lang: str = "",
    target_lang: str = "",
) -> ParallelCorpus:
    """Load a corpus from two line-aligned files and filter it.

    max_len and max_ratio of None disable the respective filter.  The two
    files must have the same number of lines.
    """
    source_lines = read_lines(source_path)
    target_lines = read_lines(target_path)
    if len(source_lines) != len(target_lines):
        raise ValueError(
            f"line count mismatch: {source_path} has {len(source_lines)} lines, "
            f"{target_path} has {len(target_lines)} lines"
        )
    pairs = _filter_pairs(
        list(zip(source_lines, target_lines)), max_len, max_ratio, ratio_mode
    )
    return ParallelCorpus(pairs, source_lang, target_lang)


def load_parallel_tsv(
    path: str,
    *,
    max_len: int | None = 250,
    max_ratio: float | None = 1.5,
    ratio_mode: str = "symmetric",
    source_lang: str = "",
    target_lang: str = "",
) -> ParallelCorpus:
    """Load a corpus from a two-column tab-separated file."""
    raw_pairs = []
    for line_no, line in enumerate(read_lines(path), start=1):
        columns = line.split("\t")
        if len(columns) != 2:
            raise ParseError(path, line_no, f"expected 2 tab-separated columns, got {len(columns)}")
        raw_pairs.append((columns[0], columns[1]))
    pairs = _filter_pairs(raw_pairs, max_len, max_ratio, ratio_mode)
    return ParallelCorpus(pairs, source_lang, target_lang)


_LINK_RE = re.compile(r"(\d+)-(\d+)")


def load_alignments(path: str, corpus: ParallelCorpus) -> AlignmentLinks:
    """Load Pharaoh alignments, one line per corpus pair.

    Every index is validated against the lookup-token bounds of its pair.
    An empty line means an unaligned pair.
    """
    lines = read_lines(path)
    if len(lines) != len(corpus.pairs):
        raise ValueError(
            f"alignment count mismatch: {path} has {len(lines)} lines, "
            f"corpus has {len(corpus.pairs)} pairs"
        )
    all_links: AlignmentLinks = []
    for line_no, (line, (source, target)) in enumerate(zip(lines, corpus.pairs), start=1):
        n_source = len(lookup_tokenize(source))
        n_target = len(lookup_tokenize(target))
        links: set[tuple[int, int]] = set()
        for token in line.split():
            match = _LINK_RE.fullmatch(token)
            if match is None:
                raise ParseError(path, line_no, f"malformed link {token!r}")
            i, j = int(match.group(1)), int(match.group(2))
            if i >= n_source or j >= n_target:
                raise ParseError(
                    path,
                    line_no,
                    f"link {i}-{j} out of bounds for a {n_source}x{n_target} token pair",
                )
            links.add((i, j))
        all_links.append(links)
    return all_links
