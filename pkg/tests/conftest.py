"""Shared fixtures and the acceptance-criteria summary."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from lexhint import BilingualLexicon, ParallelCorpus

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


def synthetic_pipeline_fixture(
    n_sentences: int,
    seed: int = 0,
    vocab_size: int = 60,
) -> tuple[ParallelCorpus, ParallelCorpus, BilingualLexicon]:
    """A deterministic (test, dev, lexicon) triple for pipeline tests.

    Even-numbered source words translate to target words that do appear in
    references; odd-numbered words translate to decoys that never do.  That
    gives hinted runs headroom over an echo baseline.
    """
    rng = random.Random(seed)
    source_vocab = [f"sw{i}" for i in range(vocab_size)]
    entries: dict[str, list[str]] = {}
    for i, word in enumerate(source_vocab):
        if i % 2 == 0:
            entries[word] = [f"tw{i}"]
        else:
            entries[word] = [f"decoy{i}"]
    lexicon = BilingualLexicon(entries, "Source", "English")

    def make_pair() -> tuple[str, str]:
        indices = rng.sample(range(vocab_size), rng.randrange(4, 9))
        source = " ".join(source_vocab[i] for i in indices)
        # references carry the even words' translations plus filler
        ref_words = [f"tw{i}" for i in indices if i % 2 == 0] or ["tw0"]
        filler = [f"fill{rng.randrange(20)}" for _ in range(3)]
        reference = " ".join(ref_words + filler)
        return source, reference

    test = ParallelCorpus([make_pair() for _ in range(n_sentences)], "Source", "English")
    dev = ParallelCorpus([make_pair() for _ in range(max(8, n_sentences // 4))], "Source", "English")
    return test, dev, lexicon


@pytest.fixture
def synthetic_pipeline():
    return synthetic_pipeline_fixture


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One line per acceptance criterion at the end of the run."""
    rows: dict[str, str] = {}
    for status, label in (("passed", "PASS"), ("failed", "FAIL"),
                          ("error", "FAIL"), ("skipped", "SKIP")):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            # a FAIL from any phase wins over PASS/SKIP from another
            if rows.get(name) != "FAIL":
                rows[name] = label
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name in sorted(rows):
            terminalreporter.write_line(f"{rows[name]:4s} {name}")
