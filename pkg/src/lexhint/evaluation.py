"""Translation quality and hint controllability metrics.

BLEU here is corpus-level: clipped n-gram matches (n = 1..4) are summed
over the whole corpus before the precisions are formed, the brevity
penalty uses total lengths, and text is tokenized with the mteval-13a
scheme without lowercasing.  Any zero precision zeroes the score unless
exponential smoothing is switched on.

The hit rate measures whether hinted translations surface in the output:
a hinted word scores one hit when at least one of its offered
translations occurs in the lookup-tokenized output as a token or a
contiguous token subsequence.  Several matching translations still count
as one hit.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass

from .prompting import Hint
from .tokenization import contains_tokens, eval_tokenize, lookup_tokenize

__all__ = [
    "BleuScore",
    "ControllabilityRow",
    "HintDetail",
    "HitReport",
    "bleu_corpus",
    "compare_controllability",
    "hit_report",
]

MAX_NGRAM_ORDER = 4


@dataclass(frozen=True)
class BleuScore:
    """Corpus BLEU with its components.

    precisions are fractions in [0, 1]; score is on the 0-100 scale.
    """

    score: float
    precisions: tuple[float, float, float, float]
    brevity_penalty: float
    hyp_len: int
    ref_len: int

    def format(self) -> str:
        precision_part = "/".join(f"{100 * p:.1f}" for p in self.precisions)
        ratio = self.hyp_len / self.ref_len if self.ref_len else 0.0
        return (
            f"BLEU = {self.score:.2f} {precision_part} "
            f"(BP = {self.brevity_penalty:.3f} ratio = {ratio:.3f} "
            f"hyp_len = {self.hyp_len} ref_len = {self.ref_len})"
        )

    def to_json(self) -> dict:
        return {
            "bleu": self.score,
            "precisions": list(self.precisions),
            "brevity_penalty": self.brevity_penalty,
            "hyp_len": self.hyp_len,
            "ref_len": self.ref_len,
        }


def _ngram_counts(tokens: list[str], order: int) -> Counter[tuple[str, ...]]:
    return Counter(
        tuple(tokens[i : i + order]) for i in range(len(tokens) - order + 1)
    )


def bleu_corpus(
    hypotheses: list[str],
    references: list[str],
    smooth: bool = False,
) -> BleuScore:
    """Corpus BLEU over 13a tokens, one reference per hypothesis.

    smooth=True applies exponential smoothing to zero precisions (each
    successive zero n-gram order contributes 1 / 2^k of a match); the
    default leaves them at zero, which zeroes the score.
    """
    if len(hypotheses) != len(references):
        raise ValueError(
            f"got {len(hypotheses)} hypotheses for {len(references)} references"
        )
    if not hypotheses:
        raise ValueError("cannot score an empty corpus")
    correct = [0] * MAX_NGRAM_ORDER
    total = [0] * MAX_NGRAM_ORDER
    hyp_len = 0
    ref_len = 0
    for hypothesis, reference in zip(hypotheses, references):
        hyp_tokens = eval_tokenize(hypothesis)
        ref_tokens = eval_tokenize(reference)
        hyp_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        for n in range(1, MAX_NGRAM_ORDER + 1):
            hyp_ngrams = _ngram_counts(hyp_tokens, n)
            if not hyp_ngrams:
                continue
            ref_ngrams = _ngram_counts(ref_tokens, n)
            correct[n - 1] += sum((hyp_ngrams & ref_ngrams).values())
            total[n - 1] += sum(hyp_ngrams.values())

    precisions = [0.0] * MAX_NGRAM_ORDER
    smooth_denominator = 1.0
    for n in range(MAX_NGRAM_ORDER):
        if total[n] == 0:
            continue
        if correct[n] == 0 and smooth:
            smooth_denominator *= 2.0
            precisions[n] = 1.0 / (smooth_denominator * total[n])
        else:
            precisions[n] = correct[n] / total[n]

    if hyp_len == 0:
        return BleuScore(0.0, tuple(precisions), 0.0, hyp_len, ref_len)
    brevity_penalty = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    if any(p == 0.0 for p in precisions):
        score = 0.0
    else:
        log_mean = sum(math.log(p) for p in precisions) / MAX_NGRAM_ORDER
        score = 100.0 * brevity_penalty * math.exp(log_mean)
    return BleuScore(score, tuple(precisions), brevity_penalty, hyp_len, ref_len)


@dataclass(frozen=True)
class HintDetail:
    """The outcome for one hinted word in one output."""

    word: str
    hit: bool
    matched: tuple[str, ...]

    def to_json(self) -> dict:
        return {"word": self.word, "hit": self.hit, "matched": list(self.matched)}


@dataclass(frozen=True)
class HitReport:
    """Hit rate over a batch, with per-sentence detail.

    rate is in percent, or None when there were no hinted words at all.
    The top-line counts are recomputable from details.
    """

    opportunities: int
    hits: int
    rate: float | None
    details: tuple[tuple[HintDetail, ...], ...]

    def to_json(self) -> dict:
        return {
            "opportunities": self.opportunities,
            "hits": self.hits,
            "rate": self.rate,
            "details": [
                [detail.to_json() for detail in sentence] for sentence in self.details
            ],
        }


def hit_report(
    hint_sets: Sequence[Sequence[Hint]],
    outputs: Sequence[str],
) -> HitReport:
    """Score hinted-word usage in model outputs.

    hint_sets[i] holds the hints that were offered for outputs[i].  Each
    hinted word is one opportunity; it is one hit when any of its
    translations occurs in the lookup-tokenized output as a contiguous
    token subsequence (case-insensitive by construction).
    """
    if len(hint_sets) != len(outputs):
        raise ValueError(
            f"got {len(hint_sets)} hint sets for {len(outputs)} outputs"
        )
    opportunities = 0
    hits = 0
    details: list[tuple[HintDetail, ...]] = []
    for hints, output in zip(hint_sets, outputs):
        output_tokens = lookup_tokenize(output)
        sentence_details = []
        for hint in hints:
            matched = tuple(
                t for t in hint.translations if contains_tokens(output_tokens, t)
            )
            hit = bool(matched)
            opportunities += 1
            hits += int(hit)
            sentence_details.append(HintDetail(hint.word, hit, matched))
        details.append(tuple(sentence_details))
    rate = 100.0 * hits / opportunities if opportunities else None
    return HitReport(opportunities, hits, rate, tuple(details))


@dataclass(frozen=True)
class ControllabilityRow:
    """Hit rates with and without hints in the prompt, and their gap.

    baseline_rate is how often the hinted translations appear anyway;
    delta above zero means the hints steered the output.
    """

    label: str
    opportunities: int
    baseline_rate: float
    treated_rate: float
    delta: float

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "opportunities": self.opportunities,
            "baseline": self.baseline_rate,
            "treated": self.treated_rate,
            "delta": self.delta,
        }


def compare_controllability(
    baseline: HitReport,
    treated: HitReport,
    label: str = "",
) -> ControllabilityRow:
    """Delta between treated and baseline hit rates over shared hint sets.

    Both reports must have been computed against the same hint sets, so
    their opportunity counts must agree and be non-zero.
    """
    if baseline.opportunities != treated.opportunities:
        raise ValueError(
            f"hint sets differ: baseline has {baseline.opportunities} opportunities, "
            f"treated has {treated.opportunities}"
        )
    if baseline.opportunities == 0:
        raise ValueError("no hint opportunities to compare")
    assert baseline.rate is not None and treated.rate is not None
    return ControllabilityRow(
        label=label,
        opportunities=baseline.opportunities,
        baseline_rate=baseline.rate,
        treated_rate=treated.rate,
        delta=treated.rate - baseline.rate,
    )
