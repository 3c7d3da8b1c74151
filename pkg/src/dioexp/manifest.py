"""Experiment manifests: everything needed to rerun a report byte for byte."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path


def canonical(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass
class ExperimentManifest:
    command: list
    inputs: dict
    bounds: dict = field(default_factory=dict)
    seed: int | None = None
    precision: int | None = None
    outputs: dict = field(default_factory=dict)
    id: str = ""

    def body(self):
        d = asdict(self)
        d.pop("id")
        d.pop("outputs")
        return d

    def digest(self):
        return hashlib.sha256(canonical(self.body()).encode()).hexdigest()

    def __post_init__(self):
        if not self.id:
            self.id = self.digest()[:12]

    def to_json(self):
        d = asdict(self)
        d["sha256"] = self.digest()
        return json.dumps(d, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        d.pop("sha256", None)
        return cls(**d)

    def save(self, path):
        Path(path).write_text(self.to_json())
        return path
