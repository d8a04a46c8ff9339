import hashlib
import json

import pytest

from lexhint import RunManifest, file_entry


@pytest.fixture
def sample_file(tmp_path):
    path = tmp_path / "input.txt"
    path.write_text("hello\n", encoding="utf-8")
    return path


class TestFileEntry:
    def test_records_path_and_digest(self, sample_file):
        entry = file_entry(sample_file)
        expected = hashlib.sha256(b"hello\n").hexdigest()
        assert entry == {"path": str(sample_file), "sha256": expected}

    def test_missing_file_raises(self, tmp_path):
        with pytest.raises(OSError):
            file_entry(tmp_path / "absent.txt")


class TestRunManifest:
    def make(self, sample_file):
        return RunManifest(
            command="score",
            params={"smooth": False},
            inputs={"results": file_entry(sample_file)},
            outputs={},
        )

    def test_round_trip(self, tmp_path, sample_file):
        manifest = self.make(sample_file)
        path = tmp_path / "run.manifest.json"
        manifest.write(path)
        loaded = RunManifest.load(path)
        assert loaded == manifest

    def test_json_key_order_is_fixed(self, tmp_path, sample_file):
        manifest = self.make(sample_file)
        assert list(manifest.to_json()) == [
            "command", "tool_version", "params", "inputs", "outputs",
        ]

    def test_serialization_has_no_timestamps(self, tmp_path, sample_file):
        path = tmp_path / "run.manifest.json"
        self.make(sample_file).write(path)
        row = json.loads(path.read_text(encoding="utf-8"))

        def keys(node):
            if isinstance(node, dict):
                for key, value in node.items():
                    yield key
                    yield from keys(value)

        banned = ("time", "date", "created", "host")
        assert not [k for k in keys(row) if any(b in k.lower() for b in banned)]
        assert row["tool_version"]

    def test_rewrite_is_byte_identical(self, tmp_path, sample_file):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        self.make(sample_file).write(a)
        self.make(sample_file).write(b)
        assert a.read_bytes() == b.read_bytes()

    def test_verify_inputs_accepts_unchanged(self, sample_file):
        self.make(sample_file).verify_inputs()

    def test_verify_inputs_rejects_modified(self, sample_file):
        manifest = self.make(sample_file)
        sample_file.write_text("changed\n", encoding="utf-8")
        with pytest.raises(ValueError, match="results"):
            manifest.verify_inputs()
