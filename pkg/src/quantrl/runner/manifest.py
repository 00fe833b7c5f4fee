"""Run manifest: config hash, artifact paths, timestamps, software version."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path


@dataclass(frozen=True)
class RunManifest:
    config_hash: str
    artifacts: dict[str, str]
    created_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    version: str = ""

    def write(self, path: str | Path) -> None:
        data = {
            "config_hash": self.config_hash,
            "artifacts": self.artifacts,
            "created_at": self.created_at,
            "version": self.version,
        }
        Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")

    @classmethod
    def read(cls, path: str | Path) -> "RunManifest":
        data = json.loads(Path(path).read_text())
        return cls(
            config_hash=data["config_hash"],
            artifacts=data["artifacts"],
            created_at=data["created_at"],
            version=data.get("version", ""),
        )
