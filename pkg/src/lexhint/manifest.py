"""Run manifests: enough provenance to reproduce a command exactly.

A manifest records the command, tool version, effective parameters, and
SHA-256 digests of every input and output file.  It contains no
timestamps, host names, or secrets, so rerunning a command from its
manifest produces a byte-identical manifest again.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .util import sha256_file, write_json

__all__ = ["RunManifest", "file_entry"]


def file_entry(path: str | Path) -> dict:
    """A manifest entry for one file: its path and content digest."""
    return {"path": str(path), "sha256": sha256_file(path)}


@dataclass
class RunManifest:
    """Provenance for one CLI run."""

    command: str
    params: dict
    inputs: dict[str, dict] = field(default_factory=dict)
    outputs: dict[str, dict] = field(default_factory=dict)
    tool_version: str = __version__

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "tool_version": self.tool_version,
            "params": self.params,
            "inputs": self.inputs,
            "outputs": self.outputs,
        }

    def write(self, path: str | Path) -> None:
        write_json(path, self.to_json())

    @classmethod
    def load(cls, path: str | Path) -> RunManifest:
        with open(path, encoding="utf-8") as handle:
            row = json.load(handle)
        return cls(
            command=row["command"],
            params=row["params"],
            inputs=row["inputs"],
            outputs=row["outputs"],
            tool_version=row["tool_version"],
        )

    def verify_inputs(self) -> None:
        """Raise if any recorded input no longer matches its digest."""
        for label, entry in self.inputs.items():
            digest = sha256_file(entry["path"])
            if digest != entry["sha256"]:
                raise ValueError(
                    f"input {label} at {entry['path']} has digest {digest}, "
                    f"manifest says {entry['sha256']}"
                )
