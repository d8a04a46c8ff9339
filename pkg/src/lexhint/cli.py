"""Command-line interface.

Subcommands compose into a pipeline:

    induce     build a dictionary from parallel data
    coverage   measure dictionary coverage of a corpus
    prompts    build a hinted prompt batch for a test set
    translate  run a prompt batch against a backend (HTTP or mock)
    score      corpus BLEU for a results file
    control    hit-rate comparison between baseline and treated runs
    ablate     prompt batches across a dictionary-coverage sweep

Every parameter can come from a TOML config file (--config); explicit
flags override the file, which overrides built-in defaults.  Each command
writes a manifest with input/output digests next to its main output, and
reruns with the same inputs are byte-identical.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .backend import BACKEND_KINDS, DEFAULT_API_KEY_ENV, BackendConfig, complete_batch
from .corpus import ParallelCorpus, load_alignments, load_parallel, load_parallel_tsv
from .evaluation import bleu_corpus, compare_controllability, hit_report
from .induction import (
    DEFAULT_SMOOTHING,
    DEFAULT_THRESHOLD,
    align_model1,
    induce_entries,
    write_scores_tsv,
)
from .lexicon import (
    BilingualLexicon,
    coverage_stats,
    downsample_to_type_coverage,
    load_muse,
    save_muse,
)
from .manifest import RunManifest, file_entry
from .prompting import (
    DEFAULT_K,
    DEFAULT_MAX_TRANSLATIONS,
    DEFAULT_STOPLIST_SIZE,
    STRATEGIES,
    Hint,
    PromptRecord,
    build_prompt_records,
)
from .tokenization import build_frequency_table, top_k_words
from .util import derive_seed, read_json_file, read_jsonl, read_lines, write_json, write_jsonl, write_lines


@dataclass(frozen=True)
class Opt:
    """One tunable parameter: a CLI flag that a config file can also set."""

    key: str
    flag: str
    type: object
    default: object
    help: str
    choices: tuple | None = None


_STRATEGY_OPTS = [
    Opt("strategy", "--strategy", str, "full", "hint strategy", STRATEGIES),
    Opt("demo_strategy", "--demo-strategy", str, None,
        "hint strategy for demonstrations (default: same as --strategy)", STRATEGIES),
    Opt("seed", "--seed", int, 0, "run seed"),
    Opt("k", "--k", int, DEFAULT_K, "number of demonstrations"),
    Opt("stoplist_size", "--stoplist-size", int, DEFAULT_STOPLIST_SIZE,
        "how many top dev-set words to exclude from hinting"),
    Opt("max_hints", "--max-hints", int, DEFAULT_MAX_TRANSLATIONS,
        "maximum translations per hint under the full strategy"),
    Opt("target_lang", "--target-lang", str, "English", "target language name used in prompts"),
]

TUNABLES: dict[str, list[Opt]] = {
    "induce": [
        Opt("lambda", "--lambda", float, DEFAULT_THRESHOLD,
            "matched-ratio threshold for keeping an entry"),
        Opt("delta", "--delta", float, DEFAULT_SMOOTHING,
            "additive smoothing on the source count"),
        Opt("iterations", "--iterations", int, 5, "EM iterations for the aligner"),
        Opt("max_len", "--max-len", int, 250,
            "drop pairs with more tokens than this on either side (<= 0 disables)"),
        Opt("max_ratio", "--max-ratio", float, 1.5,
            "drop pairs with a length ratio above this (<= 0 disables)"),
        Opt("seed", "--seed", int, 0, "run seed"),
        Opt("source_lang", "--source-lang", str, "", "source language label"),
        Opt("target_lang", "--target-lang", str, "", "target language label"),
    ],
    "coverage": [
        Opt("stoplist_size", "--stoplist-size", int, DEFAULT_STOPLIST_SIZE,
            "how many top dev-set words to exclude (needs --dev-source)"),
    ],
    "prompts": list(_STRATEGY_OPTS),
    "translate": [
        Opt("backend", "--backend", str, "http", "completion backend", BACKEND_KINDS),
        Opt("endpoint", "--endpoint", str, "", "base URL of an OpenAI-compatible API"),
        Opt("model", "--model", str, "", "model name sent to the API"),
        Opt("max_tokens", "--max-tokens", int, 256, "completion token budget"),
        Opt("temperature", "--temperature", float, 0.0, "sampling temperature"),
        Opt("max_concurrent", "--max-concurrent", int, 4, "concurrent requests"),
        Opt("retries", "--retries", int, 3, "attempts per request"),
        Opt("backoff", "--backoff", float, 0.5, "base retry delay in seconds"),
        Opt("timeout", "--timeout", float, 60.0, "per-request timeout in seconds"),
        Opt("api_key_env", "--api-key-env", str, DEFAULT_API_KEY_ENV,
            "environment variable holding the API key"),
    ],
    "score": [
        Opt("smooth", "--smooth", bool, False, "apply exponential smoothing to zero precisions"),
    ],
    "control": [],
    "ablate": list(_STRATEGY_OPTS) + [
        Opt("step", "--step", float, 5.0, "coverage grid step in percentage points"),
    ],
}


def _load_config(path: str | None, allowed: set[str], command: str) -> dict:
    if path is None:
        return {}
    with open(path, "rb") as handle:
        data = tomllib.load(handle)
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ValueError(
            f"config keys not recognized by {command!r}: {', '.join(unknown)}"
        )
    return data


def effective_params(args: argparse.Namespace, command: str) -> dict:
    """defaults, overridden by the config file, overridden by explicit flags."""
    opts = TUNABLES[command]
    allowed = {opt.key for opt in opts}
    params = {opt.key: opt.default for opt in opts}
    params.update(_load_config(getattr(args, "config", None), allowed, command))
    params.update({k: v for k, v in vars(args).items() if k in allowed})
    for opt in opts:
        if opt.choices is not None and params[opt.key] is not None:
            if params[opt.key] not in opt.choices:
                raise ValueError(
                    f"{opt.key} must be one of {opt.choices}, got {params[opt.key]!r}"
                )
    return params


def _add_tunables(parser: argparse.ArgumentParser, command: str) -> None:
    for opt in TUNABLES[command]:
        if opt.type is bool:
            parser.add_argument(
                opt.flag, dest=opt.key, action="store_true",
                default=argparse.SUPPRESS, help=opt.help,
            )
        else:
            parser.add_argument(
                opt.flag, dest=opt.key, type=opt.type,
                default=argparse.SUPPRESS, metavar=opt.key.upper(), help=opt.help,
            )
    parser.add_argument("--config", default=None, help="TOML file supplying parameter defaults")


def _load_corpus(source_path: str, target_path: str | None, **kwargs) -> ParallelCorpus:
    if target_path is None:
        return load_parallel_tsv(source_path, **kwargs)
    return load_parallel(source_path, target_path, **kwargs)


def _build_stoplist(dev_source_lines: list[str], size: int) -> list[str]:
    return top_k_words(build_frequency_table(dev_source_lines), size)


def _parse_result_hints(rows: list[dict]) -> list[list[Hint]]:
    return [
        [Hint(h["word"], tuple(h["translations"])) for h in row.get("hints", [])]
        for row in rows
    ]


# --- subcommands -----------------------------------------------------------


def cmd_induce(args: argparse.Namespace) -> None:
    params = effective_params(args, "induce")
    max_len = params["max_len"] if params["max_len"] > 0 else None
    max_ratio = params["max_ratio"] if params["max_ratio"] > 0 else None
    corpus = _load_corpus(
        args.source, args.target,
        max_len=max_len, max_ratio=max_ratio,
        source_lang=params["source_lang"], target_lang=params["target_lang"],
    )
    inputs = {"source": file_entry(args.source)}
    if args.target is not None:
        inputs["target"] = file_entry(args.target)
    if args.alignments is not None:
        links = load_alignments(args.alignments, corpus)
        inputs["alignments"] = file_entry(args.alignments)
    else:
        links = align_model1(corpus, iterations=params["iterations"], seed=params["seed"])
    entries = induce_entries(
        corpus, links, threshold=params["lambda"], smoothing=params["delta"]
    )
    lexicon_entries: dict[str, list[str]] = {}
    for entry in entries:
        lexicon_entries.setdefault(entry.source, []).append(entry.target)
    lexicon = BilingualLexicon(
        lexicon_entries, params["source_lang"], params["target_lang"], "induced"
    )
    save_muse(lexicon, args.out)
    scores_path = f"{args.out}.scores.tsv"
    write_scores_tsv(entries, scores_path)
    manifest = RunManifest(
        command="induce",
        params=params,
        inputs=inputs,
        outputs={"dictionary": file_entry(args.out), "scores": file_entry(scores_path)},
    )
    manifest.write(f"{args.out}.manifest.json")
    print(f"induced {len(entries)} entries for {len(lexicon)} source words -> {args.out}")


def cmd_coverage(args: argparse.Namespace) -> None:
    params = effective_params(args, "coverage")
    lexicon = load_muse(args.lexicon)
    source_lines = read_lines(args.source)
    inputs = {"lexicon": file_entry(args.lexicon), "source": file_entry(args.source)}
    stoplist: frozenset[str] = frozenset()
    if args.dev_source is not None:
        stoplist = frozenset(_build_stoplist(read_lines(args.dev_source), params["stoplist_size"]))
        inputs["dev_source"] = file_entry(args.dev_source)
    stats = coverage_stats(lexicon, source_lines, stoplist)
    report = dict(stats.to_json(), entries=len(lexicon), stoplist_size=len(stoplist))
    write_json(args.out, report)
    manifest = RunManifest(
        command="coverage", params=params, inputs=inputs,
        outputs={"report": file_entry(args.out)},
    )
    manifest.write(f"{args.out}.manifest.json")
    print(
        f"token coverage {stats.token_coverage:.2f}%  "
        f"type coverage {stats.type_coverage:.2f}%  -> {args.out}"
    )


def cmd_prompts(args: argparse.Namespace) -> None:
    params = effective_params(args, "prompts")
    test = _load_corpus(
        args.test_source, args.test_target,
        max_len=None, max_ratio=None, target_lang=params["target_lang"],
    )
    dev = _load_corpus(args.dev_source, args.dev_target, max_len=None, max_ratio=None)
    lexicon = load_muse(args.lexicon)
    stoplist_words = _build_stoplist(dev.source_lines, params["stoplist_size"])
    records = build_prompt_records(
        test, dev, lexicon, params["strategy"],
        seed=params["seed"], k=params["k"],
        stoplist=frozenset(stoplist_words),
        max_translations=params["max_hints"],
        demo_strategy=params["demo_strategy"],
        target_lang=params["target_lang"],
    )
    write_jsonl(args.out, [record.to_json() for record in records])
    stoplist_path = f"{args.out}.stoplist.txt"
    write_lines(stoplist_path, stoplist_words)
    inputs = {
        "test_source": file_entry(args.test_source),
        "dev_source": file_entry(args.dev_source),
        "lexicon": file_entry(args.lexicon),
    }
    if args.test_target is not None:
        inputs["test_target"] = file_entry(args.test_target)
    if args.dev_target is not None:
        inputs["dev_target"] = file_entry(args.dev_target)
    manifest = RunManifest(
        command="prompts", params=params, inputs=inputs,
        outputs={"prompts": file_entry(args.out), "stoplist": file_entry(stoplist_path)},
    )
    manifest.write(f"{args.out}.manifest.json")
    print(f"wrote {len(records)} prompts -> {args.out}")


def cmd_translate(args: argparse.Namespace) -> None:
    params = effective_params(args, "translate")
    rows = read_jsonl(args.prompts)
    records = [PromptRecord.from_json(row) for row in rows]
    inputs = {"prompts": file_entry(args.prompts)}
    canned = None
    if args.canned is not None:
        canned = read_json_file(args.canned)
        inputs["canned"] = file_entry(args.canned)
    config = BackendConfig(
        kind=params["backend"],
        endpoint=params["endpoint"],
        model=params["model"],
        max_tokens=params["max_tokens"],
        temperature=params["temperature"],
        canned=canned,
        max_concurrent=params["max_concurrent"],
        max_attempts=params["retries"],
        backoff_base=params["backoff"],
        timeout=params["timeout"],
        api_key_env=params["api_key_env"],
    )
    results = complete_batch(records, config)
    out_rows = []
    failures = 0
    for record, result in zip(records, results):
        row = {
            "id": record.instance_id,
            "source": record.source,
            "hypothesis": result.hypothesis,
            "raw": result.raw,
            "hints": [
                {"word": h.word, "translations": list(h.translations)}
                for h in record.hints
            ],
        }
        if record.reference is not None:
            row["reference"] = record.reference
        if result.error is not None:
            row["error"] = result.error
            failures += 1
        out_rows.append(row)
    write_jsonl(args.out, out_rows)
    manifest = RunManifest(
        command="translate", params=params, inputs=inputs,
        outputs={"results": file_entry(args.out)},
    )
    manifest.write(f"{args.out}.manifest.json")
    status = f", {failures} failed" if failures else ""
    print(f"completed {len(out_rows)} prompts{status} -> {args.out}")


def cmd_score(args: argparse.Namespace) -> None:
    params = effective_params(args, "score")
    rows = read_jsonl(args.results)
    hypotheses = [row.get("hypothesis", "") for row in rows]
    inputs = {"results": file_entry(args.results)}
    if args.refs is not None:
        references = read_lines(args.refs)
        if len(references) != len(rows):
            raise ValueError(
                f"line count mismatch: {args.refs} has {len(references)} lines, "
                f"{args.results} has {len(rows)} rows"
            )
        inputs["refs"] = file_entry(args.refs)
    else:
        missing = [row["id"] for row in rows if "reference" not in row]
        if missing:
            raise ValueError(
                f"results rows {missing[:5]} carry no reference; pass --refs"
            )
        references = [row["reference"] for row in rows]
    score = bleu_corpus(hypotheses, references, smooth=params["smooth"])
    report = dict(score.to_json(), instances=len(rows))
    write_json(args.out, report)
    manifest = RunManifest(
        command="score", params=params, inputs=inputs,
        outputs={"report": file_entry(args.out)},
    )
    manifest.write(f"{args.out}.manifest.json")
    print(score.format())


def cmd_control(args: argparse.Namespace) -> None:
    params = effective_params(args, "control")
    baseline_rows = read_jsonl(args.baseline)
    baseline_ids = [row["id"] for row in baseline_rows]
    baseline_outputs = [row.get("hypothesis", "") for row in baseline_rows]
    inputs = {"baseline": file_entry(args.baseline)}
    groups = []
    for index, treated_path in enumerate(args.treated):
        rows = read_jsonl(treated_path)
        ids = [row["id"] for row in rows]
        if ids != baseline_ids:
            raise ValueError(
                f"instance ids in {treated_path} do not match the baseline run"
            )
        hint_sets = _parse_result_hints(rows)
        treated_report = hit_report(hint_sets, [row.get("hypothesis", "") for row in rows])
        baseline_report = hit_report(hint_sets, baseline_outputs)
        row = compare_controllability(
            baseline_report, treated_report, label=Path(treated_path).stem
        )
        groups.append(row)
        inputs[f"treated_{index}"] = file_entry(treated_path)
    write_json(args.out, {"groups": [group.to_json() for group in groups]})
    manifest = RunManifest(
        command="control", params=params, inputs=inputs,
        outputs={"report": file_entry(args.out)},
    )
    manifest.write(f"{args.out}.manifest.json")
    for group in groups:
        print(
            f"{group.label}: baseline {group.baseline_rate:.1f}%  "
            f"treated {group.treated_rate:.1f}%  delta {group.delta:+.1f}"
        )


def _coverage_grid(full_rate: float, step: float) -> list[float]:
    """0, step, 2*step, ... plus the full rate as the final point."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if math.isclose(full_rate, 0.0):
        return [0.0]
    rates = [0.0]
    rate = step
    while rate < full_rate and not math.isclose(rate, full_rate):
        rates.append(rate)
        rate += step
    rates.append(full_rate)
    return rates


def cmd_ablate(args: argparse.Namespace) -> None:
    params = effective_params(args, "ablate")
    test = _load_corpus(
        args.test_source, args.test_target,
        max_len=None, max_ratio=None, target_lang=params["target_lang"],
    )
    dev = _load_corpus(args.dev_source, args.dev_target, max_len=None, max_ratio=None)
    lexicon = load_muse(args.lexicon)
    stoplist_words = _build_stoplist(dev.source_lines, params["stoplist_size"])
    stoplist = frozenset(stoplist_words)
    full_rate = coverage_stats(lexicon, test.source_lines, stoplist).type_coverage
    rates = _coverage_grid(full_rate, params["step"])

    # build the sweep downward so each dictionary nests inside the previous
    by_rate: dict[float, BilingualLexicon] = {}
    current = lexicon
    for rate in sorted(set(rates), reverse=True):
        if math.isclose(rate, full_rate):
            by_rate[rate] = lexicon
        elif rate == 0.0:
            # 0% means no dictionary at all, not just zero measured coverage
            by_rate[rate] = BilingualLexicon(
                {}, lexicon.source_lang, lexicon.target_lang, "downsampled"
            )
        else:
            current = downsample_to_type_coverage(
                current, rate, test.source_lines, stoplist,
                seed=derive_seed(params["seed"], "downsample", rate),
            )
            by_rate[rate] = current

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = {}
    summary_rows = []
    nested = True
    previous_entries: dict[str, list[str]] | None = None
    for index, rate in enumerate(rates):
        rate_lexicon = by_rate[rate]
        rate_dir = out_dir / f"rate_{index:02d}"
        rate_dir.mkdir(exist_ok=True)
        dictionary_path = rate_dir / "dictionary.txt"
        prompts_path = rate_dir / "prompts.jsonl"
        save_muse(rate_lexicon, str(dictionary_path))
        records = build_prompt_records(
            test, dev, rate_lexicon, params["strategy"],
            seed=params["seed"], k=params["k"], stoplist=stoplist,
            max_translations=params["max_hints"],
            demo_strategy=params["demo_strategy"],
            target_lang=params["target_lang"],
        )
        write_jsonl(prompts_path, [record.to_json() for record in records])
        achieved = coverage_stats(rate_lexicon, test.source_lines, stoplist).type_coverage
        if previous_entries is not None:
            nested = nested and all(
                rate_lexicon.entries.get(word) == translations
                for word, translations in previous_entries.items()
            )
        previous_entries = rate_lexicon.entries
        summary_rows.append({
            "index": index,
            "directory": rate_dir.name,
            "target_rate": rate,
            "achieved_rate": achieved,
            "entries": len(rate_lexicon),
        })
        outputs[f"{rate_dir.name}/dictionary"] = file_entry(dictionary_path)
        outputs[f"{rate_dir.name}/prompts"] = file_entry(prompts_path)

    summary = {
        "full_coverage": full_rate,
        "step": params["step"],
        "nested": nested,
        "rates": summary_rows,
    }
    summary_path = out_dir / "summary.json"
    write_json(summary_path, summary)
    outputs["summary"] = file_entry(summary_path)
    inputs = {
        "test_source": file_entry(args.test_source),
        "dev_source": file_entry(args.dev_source),
        "lexicon": file_entry(args.lexicon),
    }
    if args.test_target is not None:
        inputs["test_target"] = file_entry(args.test_target)
    if args.dev_target is not None:
        inputs["dev_target"] = file_entry(args.dev_target)
    manifest = RunManifest(command="ablate", params=params, inputs=inputs, outputs=outputs)
    manifest.write(out_dir / "manifest.json")
    print(f"wrote {len(rates)} coverage points -> {out_dir}")


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexhint",
        description="dictionary-hint prompting, lexicon induction, and translation evaluation",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    induce = subparsers.add_parser("induce", help="induce a dictionary from parallel data")
    induce.add_argument("--source", required=True, help="source-side text file, or a 2-column TSV")
    induce.add_argument("--target", default=None, help="target-side text file")
    induce.add_argument("--alignments", default=None,
                        help="Pharaoh alignment file; omit to run the built-in aligner")
    induce.add_argument("--out", required=True, help="output dictionary path")
    _add_tunables(induce, "induce")
    induce.set_defaults(func=cmd_induce)

    coverage = subparsers.add_parser("coverage", help="measure dictionary coverage of a corpus")
    coverage.add_argument("--lexicon", required=True)
    coverage.add_argument("--source", required=True, help="corpus side to measure coverage on")
    coverage.add_argument("--dev-source", default=None,
                          help="dev source side used to build the stoplist")
    coverage.add_argument("--out", required=True, help="output JSON report path")
    _add_tunables(coverage, "coverage")
    coverage.set_defaults(func=cmd_coverage)

    prompts = subparsers.add_parser("prompts", help="build a hinted prompt batch")
    prompts.add_argument("--test-source", required=True)
    prompts.add_argument("--test-target", default=None)
    prompts.add_argument("--dev-source", required=True)
    prompts.add_argument("--dev-target", default=None)
    prompts.add_argument("--lexicon", required=True)
    prompts.add_argument("--out", required=True, help="output prompts JSONL path")
    _add_tunables(prompts, "prompts")
    prompts.set_defaults(func=cmd_prompts)

    translate = subparsers.add_parser("translate", help="run prompts against a backend")
    translate.add_argument("--prompts", required=True, help="prompts JSONL from the prompts command")
    translate.add_argument("--canned", default=None,
                           help="JSON file mapping instance id to completion (mock_map backend)")
    translate.add_argument("--out", required=True, help="output results JSONL path")
    _add_tunables(translate, "translate")
    translate.set_defaults(func=cmd_translate)

    score = subparsers.add_parser("score", help="corpus BLEU for a results file")
    score.add_argument("--results", required=True, help="results JSONL from the translate command")
    score.add_argument("--refs", default=None,
                       help="reference file; defaults to references embedded in the results")
    score.add_argument("--out", required=True, help="output JSON report path")
    _add_tunables(score, "score")
    score.set_defaults(func=cmd_score)

    control = subparsers.add_parser("control", help="hit-rate delta between runs")
    control.add_argument("--baseline", required=True,
                         help="results JSONL of the no-hint baseline run")
    control.add_argument("--treated", required=True, nargs="+",
                         help="results JSONL of one or more hinted runs")
    control.add_argument("--out", required=True, help="output JSON report path")
    _add_tunables(control, "control")
    control.set_defaults(func=cmd_control)

    ablate = subparsers.add_parser("ablate", help="prompt batches across a coverage sweep")
    ablate.add_argument("--test-source", required=True)
    ablate.add_argument("--test-target", default=None)
    ablate.add_argument("--dev-source", required=True)
    ablate.add_argument("--dev-target", default=None)
    ablate.add_argument("--lexicon", required=True)
    ablate.add_argument("--out-dir", required=True, help="output directory for the sweep")
    _add_tunables(ablate, "ablate")
    ablate.set_defaults(func=cmd_ablate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
