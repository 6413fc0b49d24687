"""Durable, replayable persistence: append-only JSONL stores plus a
directory of versioned model files.

One record per line; a crash can lose at most the line being written.
Restart replays the files to rebuild in-memory state. Correction
consumption is itself an appended event, keeping the files append-only.
"""

import json
import os
import threading
import time
import uuid
from dataclasses import asdict, dataclass
from pathlib import Path

from .model import BlstmModel
from .model_io import load_model, save_model
from .tagger import TaggedDocument, document_from_dict, document_to_dict
from .trainer import Correction


def new_id() -> str:
    return uuid.uuid4().hex


@dataclass
class AnalysisRecord:
    id: str
    created_at: float
    source: str
    input_hash: str
    result: TaggedDocument
    model_version: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "created_at": self.created_at,
            "source": self.source,
            "input_hash": self.input_hash,
            "model_version": self.model_version,
            "result": document_to_dict(self.result),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisRecord":
        return cls(
            id=data["id"],
            created_at=data["created_at"],
            source=data["source"],
            input_hash=data["input_hash"],
            model_version=data["model_version"],
            result=document_from_dict(data["result"]),
        )


class _JsonlFile:
    def __init__(self, path: Path):
        self.path = path
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def append(self, record: dict) -> None:
        line = json.dumps(record, ensure_ascii=False)
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def replay(self) -> list[dict]:
        if not self.path.exists():
            return []
        records = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
        return records


class AnalysisStore:
    """Append-only store of analysis records with an id index."""

    def __init__(self, directory: str | Path):
        self._file = _JsonlFile(Path(directory) / "analyses.jsonl")
        self._records: dict[str, AnalysisRecord] = {}
        self._lock = threading.Lock()
        for raw in self._file.replay():
            record = AnalysisRecord.from_dict(raw)
            self._records[record.id] = record

    def add(self, record: AnalysisRecord) -> None:
        self._file.append(record.to_dict())
        with self._lock:
            self._records[record.id] = record

    def get(self, analysis_id: str) -> AnalysisRecord | None:
        with self._lock:
            return self._records.get(analysis_id)

    def documents(self) -> dict[str, TaggedDocument]:
        with self._lock:
            return {rid: rec.result for rid, rec in self._records.items()}


class CorrectionStore:
    """Append-only store of corrections and consumption events."""

    def __init__(self, directory: str | Path):
        self._file = _JsonlFile(Path(directory) / "corrections.jsonl")
        self._corrections: dict[str, Correction] = {}
        self._consumed: set[str] = set()
        self._lock = threading.Lock()
        for raw in self._file.replay():
            if raw.get("kind") == "consumed":
                self._consumed.update(raw["ids"])
            else:
                data = {k: v for k, v in raw.items() if k != "kind"}
                self._corrections[data["id"]] = Correction(**data)

    def add(self, correction: Correction) -> None:
        self._file.append({"kind": "correction", **asdict(correction)})
        with self._lock:
            self._corrections[correction.id] = correction

    def pending(self) -> list[Correction]:
        with self._lock:
            items = [c for cid, c in self._corrections.items() if cid not in self._consumed]
        return sorted(items, key=lambda c: (c.submitted_at, c.id))

    def mark_consumed(self, ids: list[str]) -> None:
        if not ids:
            return
        self._file.append({"kind": "consumed", "ids": list(ids), "at": time.time()})
        with self._lock:
            self._consumed.update(ids)


class ModelDir:
    """Versioned model files: model-v0001.blstm, model-v0002.blstm, ...

    The highest version is the serving model. Writes go to a temp file
    first and are moved into place, so a version either exists fully or
    not at all.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, version: int) -> Path:
        return self.directory / f"model-v{version:04d}.blstm"

    def corpus_path(self, version: int) -> Path:
        return self.directory / f"corpus-v{version:04d}.tsv"

    def versions(self) -> list[int]:
        found = []
        for path in self.directory.glob("model-v*.blstm"):
            stem = path.stem  # model-vNNNN
            try:
                found.append(int(stem.split("-v")[1]))
            except (IndexError, ValueError):
                continue
        return sorted(found)

    def latest_version(self) -> int | None:
        versions = self.versions()
        return versions[-1] if versions else None

    def load_latest(self) -> tuple[BlstmModel, str] | None:
        version = self.latest_version()
        if version is None:
            return None
        return load_model(self._path(version)), version_name(version)

    def save_version(self, model: BlstmModel, version: int) -> Path:
        final = self._path(version)
        tmp = final.with_suffix(".tmp")
        save_model(model, tmp)
        os.replace(tmp, final)
        return final


def version_name(version: int) -> str:
    return f"v{version:04d}"
