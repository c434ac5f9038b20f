"""Run manifests: audit records written alongside every produced artifact."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any


@dataclass
class RunManifest:
    """What produced an artifact: tool version, subcommand, flags, seeds, paths.

    Manifests live in a ``<artifact>.manifest.json`` sidecar so the artifact
    bytes themselves stay deterministic for fixed seeds (timestamps only ever
    appear in the sidecar).
    """

    tool_version: str
    subcommand: str
    flags: dict[str, Any] = field(default_factory=dict)
    seeds: dict[str, Any] = field(default_factory=dict)
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat()
    )

    def write_sidecar(self, artifact_path: str | Path) -> Path:
        path = Path(f"{artifact_path}.manifest.json")
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")
        return path
