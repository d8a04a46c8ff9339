"""Dictionary induction from parallel data.

A from-scratch IBM Model 1 aligner (EM over target-given-source lexical
probabilities) produces word links, and a smoothed matched-ratio rule
turns link counts into dictionary entries: a pair (s, t) is kept when

    aligned_count(s, t) / (source_count(s) + delta) >= lambda

Everything here is deterministic: EM starts from a uniform table, runs
single-threaded, and decoding breaks ties toward the lowest target index.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass

from .corpus import AlignmentLinks, ParallelCorpus
from .lexicon import BilingualLexicon
from .tokenization import lookup_tokenize
from .util import write_lines

__all__ = [
    "DEFAULT_SMOOTHING",
    "DEFAULT_THRESHOLD",
    "InducedEntry",
    "align_model1",
    "induce_entries",
    "induce_lexicon",
    "train_model1",
    "write_scores_tsv",
]

DEFAULT_THRESHOLD = 0.1
DEFAULT_SMOOTHING = 1.0


def train_model1(
    source_sentences: list[list[str]],
    target_sentences: list[list[str]],
    iterations: int = 5,
) -> dict[tuple[str, str], float]:
    """EM estimates of t(target_word | source_word) over co-occurring pairs."""
    if not source_sentences:
        raise ValueError("corpus must be non-empty")
    if iterations < 1:
        raise ValueError(f"iterations must be at least 1, got {iterations}")
    target_vocab = {tok for sent in target_sentences for tok in sent}
    if not target_vocab:
        return {}
    uniform = 1.0 / len(target_vocab)
    probs: dict[tuple[str, str], float] = {}
    for source_toks, target_toks in zip(source_sentences, target_sentences):
        for s in source_toks:
            for t in target_toks:
                probs[(s, t)] = uniform
    for _ in range(iterations):
        counts: defaultdict[tuple[str, str], float] = defaultdict(float)
        totals: defaultdict[str, float] = defaultdict(float)
        for source_toks, target_toks in zip(source_sentences, target_sentences):
            if not source_toks or not target_toks:
                continue
            for t in target_toks:
                denom = sum(probs[(s, t)] for s in source_toks)
                for s in source_toks:
                    posterior = probs[(s, t)] / denom
                    counts[(s, t)] += posterior
                    totals[s] += posterior
        probs = {pair: count / totals[pair[0]] for pair, count in counts.items()}
    return probs


def align_model1(
    corpus: ParallelCorpus,
    iterations: int = 5,
    seed: int | None = None,
) -> AlignmentLinks:
    """Align every source token to its most probable target token.

    Ties go to the lowest target index.  The seed parameter is accepted
    for interface symmetry but unused: training and decoding are fully
    deterministic.
    """
    del seed
    source_sentences = [lookup_tokenize(source) for source, _ in corpus.pairs]
    target_sentences = [lookup_tokenize(target) for _, target in corpus.pairs]
    probs = train_model1(source_sentences, target_sentences, iterations)
    all_links: AlignmentLinks = []
    for source_toks, target_toks in zip(source_sentences, target_sentences):
        links: set[tuple[int, int]] = set()
        if source_toks and target_toks:
            for i, s in enumerate(source_toks):
                best_j, best_p = 0, -1.0
                for j, t in enumerate(target_toks):
                    p = probs.get((s, t), 0.0)
                    if p > best_p:
                        best_j, best_p = j, p
                links.add((i, best_j))
        all_links.append(links)
    return all_links


@dataclass(frozen=True)
class InducedEntry:
    """One candidate dictionary pair with its extraction statistics.

    probability can exceed 1 when a source token carries multiple links,
    since aligned_count then counts links rather than occurrences.
    """

    source: str
    target: str
    probability: float
    aligned_count: int
    source_count: int


def induce_entries(
    corpus: ParallelCorpus,
    links: AlignmentLinks,
    threshold: float = DEFAULT_THRESHOLD,
    smoothing: float = DEFAULT_SMOOTHING,
) -> list[InducedEntry]:
    """Extract dictionary entries from alignment links.

    Entries are ordered by source word, then descending probability, then
    target word.
    """
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    if smoothing < 0:
        raise ValueError(f"smoothing must be non-negative, got {smoothing}")
    if len(links) != len(corpus.pairs):
        raise ValueError(
            f"got {len(links)} link sets for {len(corpus.pairs)} corpus pairs"
        )
    source_sentences = [lookup_tokenize(source) for source, _ in corpus.pairs]
    target_sentences = [lookup_tokenize(target) for _, target in corpus.pairs]
    source_count: Counter[str] = Counter(
        tok for sent in source_sentences for tok in sent
    )
    aligned: Counter[tuple[str, str]] = Counter()
    for source_toks, target_toks, pair_links in zip(
        source_sentences, target_sentences, links
    ):
        for i, j in pair_links:
            aligned[(source_toks[i], target_toks[j])] += 1
    entries = []
    for (s, t), count in aligned.items():
        probability = count / (source_count[s] + smoothing)
        if probability >= threshold:
            entries.append(InducedEntry(s, t, probability, count, source_count[s]))
    entries.sort(key=lambda e: (e.source, -e.probability, e.target))
    return entries


def induce_lexicon(
    corpus: ParallelCorpus,
    links: AlignmentLinks,
    threshold: float = DEFAULT_THRESHOLD,
    smoothing: float = DEFAULT_SMOOTHING,
) -> BilingualLexicon:
    """Induce a lexicon; translations per word ordered by descending probability."""
    entries: dict[str, list[str]] = {}
    for entry in induce_entries(corpus, links, threshold, smoothing):
        entries.setdefault(entry.source, []).append(entry.target)
    return BilingualLexicon(entries, corpus.source_lang, corpus.target_lang, "induced")


def write_scores_tsv(entries: list[InducedEntry], path: str) -> None:
    """Write per-entry extraction statistics next to an induced dictionary."""
    lines = ["source\ttarget\tprobability\taligned_count\tsource_count"]
    lines.extend(
        f"{e.source}\t{e.target}\t{e.probability:.6f}\t{e.aligned_count}\t{e.source_count}"
        for e in entries
    )
    write_lines(path, lines)
