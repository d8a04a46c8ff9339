import random

import pytest
from hypothesis import given, settings, strategies as st

from lexhint import (
    BilingualLexicon,
    coverage_stats,
    downsample_to_type_coverage,
    load_muse,
    save_muse,
    shuffle_targets,
)
from lexhint.util import ParseError


class TestBilingualLexicon:
    def test_lookup_returns_copy(self):
        lex = BilingualLexicon({"pintu": ["door", "doors"]})
        got = lex.lookup("pintu")
        got.append("gate")
        assert lex.lookup("pintu") == ["door", "doors"]

    def test_lookup_unknown(self):
        assert BilingualLexicon({}).lookup("x") == []

    def test_contains_and_len(self):
        lex = BilingualLexicon({"a": ["x"], "b": ["y"]})
        assert "a" in lex and "c" not in lex
        assert len(lex) == 2

    def test_empty_translation_list_rejected(self):
        with pytest.raises(ValueError, match="empty translation"):
            BilingualLexicon({"a": []})

    def test_duplicate_translations_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            BilingualLexicon({"a": ["x", "x"]})

    def test_whitespace_source_rejected(self):
        with pytest.raises(ValueError, match="invalid source word"):
            BilingualLexicon({"a b": ["x"]})

    def test_bad_provenance_rejected(self):
        with pytest.raises(ValueError, match="provenance"):
            BilingualLexicon({}, provenance="guessed")


class TestMuseIO:
    def test_load_accumulates_polysemy_in_file_order(self, data_dir):
        lex = load_muse(data_dir / "id_en.dict.txt")
        assert lex.lookup("pintu") == ["door", "doors"]
        assert lex.lookup("membatasi") == ["limiting", "restrict", "limit"]
        assert lex.lookup("sambil") == ["while"]
        assert lex.lookup("tidak") == []

    def test_load_lowercases_and_dedupes(self, tmp_path):
        path = tmp_path / "dict.txt"
        path.write_text("Pintu Door\npintu door\npintu doors\n", encoding="utf-8")
        lex = load_muse(str(path))
        assert lex.lookup("pintu") == ["door", "doors"]

    def test_load_empty_file(self, tmp_path):
        path = tmp_path / "dict.txt"
        path.write_text("", encoding="utf-8")
        assert len(load_muse(str(path))) == 0

    def test_load_tab_separated(self, tmp_path):
        path = tmp_path / "dict.txt"
        path.write_text("pintu\tdoor\n", encoding="utf-8")
        assert load_muse(str(path)).lookup("pintu") == ["door"]

    def test_load_rejects_wrong_field_count(self, tmp_path):
        path = tmp_path / "dict.txt"
        path.write_text("pintu door\nbel\n", encoding="utf-8")
        with pytest.raises(ParseError) as excinfo:
            load_muse(str(path))
        assert ":2:" in str(excinfo.value)

    def test_round_trip(self, tmp_path, data_dir):
        lex = load_muse(data_dir / "id_en.dict.txt")
        out = tmp_path / "copy.txt"
        save_muse(lex, str(out))
        again = load_muse(str(out))
        assert again.entries == lex.entries

    def test_save_rejects_multiword_translation(self, tmp_path):
        lex = BilingualLexicon({"bel": ["door bell"]})
        with pytest.raises(ValueError, match="whitespace"):
            save_muse(lex, str(tmp_path / "dict.txt"))


class TestCoverageStats:
    def test_hand_counted(self):
        lex = BilingualLexicon({"a": ["x"]})
        stats = coverage_stats(lex, ["a b a"])
        assert stats.tokens == 3 and stats.types == 2
        assert stats.covered_tokens == 2 and stats.covered_types == 1
        assert stats.token_coverage == pytest.approx(100 * 2 / 3)
        assert stats.type_coverage == pytest.approx(50.0)

    def test_full_coverage(self):
        lex = BilingualLexicon({"a": ["x"], "b": ["y"]})
        stats = coverage_stats(lex, ["a b", "b a"])
        assert stats.token_coverage == 100.0
        assert stats.type_coverage == 100.0

    def test_stoplist_excluded_from_both_sides(self):
        lex = BilingualLexicon({"a": ["x"], "b": ["y"]})
        stats = coverage_stats(lex, ["a b c"], stoplist=frozenset({"a"}))
        # denominator drops the stoplisted token too: b, c remain
        assert stats.tokens == 2 and stats.types == 2
        assert stats.covered_tokens == 1 and stats.covered_types == 1

    def test_empty_corpus_rejected(self):
        lex = BilingualLexicon({"a": ["x"]})
        with pytest.raises(ValueError, match="empty"):
            coverage_stats(lex, [])
        with pytest.raises(ValueError, match="empty"):
            coverage_stats(lex, ["..."])

    def test_to_json_round_trip(self):
        lex = BilingualLexicon({"a": ["x"]})
        row = coverage_stats(lex, ["a b"]).to_json()
        assert row["type_coverage"] == 50.0
        assert row["tokens"] == 2

    @given(st.lists(st.lists(st.sampled_from("abcdefgh"), min_size=1, max_size=8),
                    min_size=1, max_size=10),
           st.sets(st.sampled_from("abcd"), max_size=3))
    def test_matches_naive_recount(self, token_lines, covered):
        lines = [" ".join(toks) for toks in token_lines]
        lex = BilingualLexicon({word: ["t"] for word in covered})
        stats = coverage_stats(lex, lines)
        all_tokens = [tok for toks in token_lines for tok in toks]
        assert stats.tokens == len(all_tokens)
        assert stats.covered_tokens == sum(1 for tok in all_tokens if tok in covered)
        assert stats.types == len(set(all_tokens))
        assert stats.covered_types == len(set(all_tokens) & covered)


def make_lexicon_and_corpus(n_types=10, n_covered=6):
    """A corpus of n_types distinct words; the lexicon covers the first n_covered."""
    words = [f"w{i}" for i in range(n_types)]
    lines = [" ".join(words)]
    entries = {w: [f"t_{w}"] for w in words[:n_covered]}
    # plus entries for words outside the corpus, which downsampling must keep
    entries["offcorpus1"] = ["x"]
    entries["offcorpus2"] = ["y"]
    return BilingualLexicon(entries), lines


class TestDownsample:
    def test_exact_target_reached(self):
        lex, lines = make_lexicon_and_corpus(10, 6)
        down = downsample_to_type_coverage(lex, 30.0, lines, seed=0)
        assert coverage_stats(down, lines).type_coverage == pytest.approx(30.0)

    def test_target_zero_removes_all_covering(self):
        lex, lines = make_lexicon_and_corpus(10, 6)
        down = downsample_to_type_coverage(lex, 0.0, lines, seed=0)
        assert coverage_stats(down, lines).type_coverage == 0.0
        # off-corpus entries survive
        assert "offcorpus1" in down and "offcorpus2" in down

    def test_target_at_current_is_identity(self):
        lex, lines = make_lexicon_and_corpus(10, 6)
        current = coverage_stats(lex, lines).type_coverage
        down = downsample_to_type_coverage(lex, current, lines, seed=0)
        assert down.entries == lex.entries

    def test_target_above_current_rejected(self):
        lex, lines = make_lexicon_and_corpus(10, 6)
        with pytest.raises(ValueError) as excinfo:
            downsample_to_type_coverage(lex, 90.0, lines, seed=0)
        message = str(excinfo.value)
        assert "90.0" in message and "60.0" in message

    def test_negative_target_rejected(self):
        lex, lines = make_lexicon_and_corpus(10, 6)
        with pytest.raises(ValueError, match="non-negative"):
            downsample_to_type_coverage(lex, -5.0, lines, seed=0)

    def test_same_seed_same_result(self):
        lex, lines = make_lexicon_and_corpus(20, 15)
        a = downsample_to_type_coverage(lex, 25.0, lines, seed=7)
        b = downsample_to_type_coverage(lex, 25.0, lines, seed=7)
        assert a.entries == b.entries

    def test_nested_when_chained(self):
        lex, lines = make_lexicon_and_corpus(20, 16)
        d60 = downsample_to_type_coverage(lex, 60.0, lines, seed=3)
        d30 = downsample_to_type_coverage(d60, 30.0, lines, seed=3)
        assert all(d30.entries[w] == d60.entries[w] for w in d30.entries if w in d60.entries)
        assert set(d30.entries) <= set(d60.entries)

    def test_provenance(self):
        lex, lines = make_lexicon_and_corpus()
        assert downsample_to_type_coverage(lex, 0.0, lines, seed=0).provenance == "downsampled"

    def test_stoplisted_words_are_not_coverage(self):
        words = ["w0", "w1", "w2", "w3"]
        lines = [" ".join(words)]
        lex = BilingualLexicon({w: ["t"] for w in words})
        down = downsample_to_type_coverage(
            lex, 0.0, lines, stoplist=frozenset({"w0"}), seed=0
        )
        # the stoplisted word's entry is not covering, so it survives
        assert "w0" in down
        assert all(w not in down for w in ["w1", "w2", "w3"])

    @given(st.integers(0, 2**31), st.integers(0, 10))
    @settings(max_examples=30)
    def test_achieved_close_under_any_seed(self, seed, target_tenth):
        lex, lines = make_lexicon_and_corpus(10, 8)
        target = 10.0 * target_tenth
        current = coverage_stats(lex, lines).type_coverage
        if target > current:
            with pytest.raises(ValueError):
                downsample_to_type_coverage(lex, target, lines, seed=seed)
            return
        down = downsample_to_type_coverage(lex, target, lines, seed=seed)
        achieved = coverage_stats(down, lines).type_coverage
        assert achieved <= target + 1e-9
        # each removal is one type out of ten, so at most one step below
        assert achieved > target - 10.0 - 1e-9


class TestShuffleTargets:
    def test_single_entry_unchanged(self):
        lex = BilingualLexicon({"a": ["x", "y"]})
        assert shuffle_targets(lex, seed=5).entries == lex.entries

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            shuffle_targets(BilingualLexicon({}), seed=0)

    def test_two_entries_swap_under_some_seed(self):
        lex = BilingualLexicon({"a": ["x"], "b": ["y"]})
        swapped_seeds = [
            seed for seed in range(20)
            if shuffle_targets(lex, seed).entries == {"a": ["y"], "b": ["x"]}
        ]
        assert swapped_seeds, "no seed in 0..19 produced the swap"
        for seed in range(20):
            result = shuffle_targets(lex, seed).entries
            assert result in ({"a": ["x"], "b": ["y"]}, {"a": ["y"], "b": ["x"]})

    def test_same_seed_same_result(self):
        lex = BilingualLexicon({f"w{i}": [f"t{i}", f"u{i}"] for i in range(30)})
        assert shuffle_targets(lex, 11).entries == shuffle_targets(lex, 11).entries

    def test_provenance(self):
        lex = BilingualLexicon({"a": ["x"]})
        assert shuffle_targets(lex, 0).provenance == "shuffled"

    @given(st.integers(0, 2**31))
    @settings(max_examples=30)
    def test_preserves_vocab_and_list_multiset(self, seed):
        rng = random.Random(seed)
        entries = {
            f"w{i}": [f"t{i}_{j}" for j in range(rng.randrange(1, 4))]
            for i in range(rng.randrange(1, 12))
        }
        lex = BilingualLexicon(dict(entries))
        shuffled = shuffle_targets(lex, seed)
        assert set(shuffled.entries) == set(entries)
        original_lists = sorted(map(tuple, entries.values()))
        shuffled_lists = sorted(map(tuple, shuffled.entries.values()))
        assert original_lists == shuffled_lists
