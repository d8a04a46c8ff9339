"""Shared helpers: seed derivation, hashing, and line/JSONL file I/O."""

from __future__ import annotations

import hashlib
import json
import random
from pathlib import Path

__all__ = [
    "ParseError",
    "derive_rng",
    "derive_seed",
    "read_json_file",
    "read_jsonl",
    "read_lines",
    "sha256_file",
    "write_json",
    "write_jsonl",
    "write_lines",
]


class ParseError(ValueError):
    """A malformed line in an input file, reported with path and line number."""

    def __init__(self, path: str | Path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


def derive_seed(seed: int, *parts: object) -> int:
    """Derive a child seed from a run seed and a label path.

    Uses SHA-256 rather than hash() so the result is stable across
    processes and interpreter versions.
    """
    material = ":".join([str(seed), *(str(p) for p in parts)])
    digest = hashlib.sha256(material.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def derive_rng(seed: int, *parts: object) -> random.Random:
    """An independent RNG stream keyed by (seed, *parts)."""
    return random.Random(derive_seed(seed, *parts))


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def read_lines(path: str | Path) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


def write_lines(path: str | Path, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.writelines(line + "\n" for line in lines)


def write_jsonl(path: str | Path, rows: list[dict]) -> None:
    # sort_keys keeps reruns byte-identical regardless of dict build order
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for row in rows:
            handle.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")


def read_jsonl(path: str | Path) -> list[dict]:
    rows = []
    for line_no, line in enumerate(read_lines(path), start=1):
        if not line.strip():
            continue
        try:
            rows.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ParseError(path, line_no, f"invalid JSON: {exc}") from exc
    return rows


def read_json_file(path: str | Path):
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def write_json(path: str | Path, obj: object) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(obj, handle, ensure_ascii=False, sort_keys=True, indent=2)
        handle.write("\n")
