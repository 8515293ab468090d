"""Artifact files of a pipeline run and the manifest that traces them."""

import hashlib
import json
import logging
import platform
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from .. import __version__
from ..errors import ArtifactIOError, MissingArtifactError

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"


@dataclass(frozen=True)
class ArtifactSpec:
    files: Tuple[str, ...]
    producer: str


ARTIFACTS: Dict[str, ArtifactSpec] = {
    "twin_dataset": ArtifactSpec(("twin_dataset.csv", "twin_dataset.json"), "gen-data"),
    "twin": ArtifactSpec(("twin_model.json",), "train-twin"),
    "labels": ArtifactSpec(("labels.csv", "labels.json"), "build-labels"),
    "classifier": ArtifactSpec(("classifier_model.json",), "train-clf"),
    "report": ArtifactSpec(("report.csv", "report_summary.json"), "evaluate"),
    "plotdata": ArtifactSpec(("report_plotdata.csv",), "evaluate"),
}


def file_digest(path: Path) -> str:
    sha = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            sha.update(chunk)
    return sha.hexdigest()


def _empty_manifest() -> Dict[str, Any]:
    return {"config_hash": None, "seed": None, "versions": {}, "updated_at": None, "artifacts": {}}


class ArtifactStore:
    """Fixed artifact layout under one output directory."""

    def __init__(self, output_dir):
        self.output_dir = Path(output_dir)
        self._lock = threading.Lock()

    @property
    def manifest_path(self) -> Path:
        return self.output_dir / MANIFEST_FILE

    def ensure_dir(self) -> Path:
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ArtifactIOError(f"Cannot create {self.output_dir}: {e}") from e
        return self.output_dir

    def paths(self, artifact: str) -> List[Path]:
        try:
            spec = ARTIFACTS[artifact]
        except KeyError:
            raise ArtifactIOError(f"unknown artifact '{artifact}'") from None
        return [self.output_dir / name for name in spec.files]

    def path(self, artifact: str, index: int = 0) -> Path:
        return self.paths(artifact)[index]

    def exists(self, artifact: str) -> bool:
        return all(p.is_file() for p in self.paths(artifact))

    def require(self, artifact: str) -> List[Path]:
        """Paths of an artifact that must already exist.

        Raises:
            MissingArtifactError: naming the command that produces it
        """
        if not self.exists(artifact):
            raise MissingArtifactError(artifact, ARTIFACTS[artifact].producer)
        return self.paths(artifact)

    def digest(self, artifact: str) -> str:
        """One sha256 over the digests of all files of an artifact."""
        sha = hashlib.sha256()
        for path in self.require(artifact):
            sha.update(f"{path.name}:{file_digest(path)}\n".encode())
        return sha.hexdigest()

    def load_manifest(self) -> Dict[str, Any]:
        if not self.manifest_path.exists():
            return _empty_manifest()
        try:
            return json.loads(self.manifest_path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ArtifactIOError(f"Cannot read manifest {self.manifest_path}: {e}") from e

    def record(
        self,
        artifact: str,
        stage: str,
        config_hash: str,
        seed: int,
        inputs: Iterable[str] = (),
    ) -> Dict[str, Any]:
        """Register a freshly written artifact and rewrite the manifest."""
        with self._lock:
            manifest = self.load_manifest()
            previous = manifest.get("config_hash")
            if previous is not None and previous != config_hash:
                logger.warning(
                    "Output directory holds artifacts of config %s, now writing %s",
                    previous[:12], config_hash[:12],
                )
            manifest["config_hash"] = config_hash
            manifest["seed"] = seed
            manifest["versions"] = {
                "llcalloc": __version__,
                "numpy": np.__version__,
                "python": platform.python_version(),
            }
            manifest["artifacts"][artifact] = {
                "stage": stage,
                "files": {p.name: file_digest(p) for p in self.require(artifact)},
                "inputs": {name: self.digest(name) for name in inputs},
            }
            self._save_manifest(manifest)
        logger.debug("Recorded artifact %s from %s", artifact, stage)
        return manifest

    def _save_manifest(self, manifest: Dict[str, Any]) -> None:
        self.ensure_dir()
        manifest["updated_at"] = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        try:
            self.manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        except OSError as e:
            raise ArtifactIOError(f"Cannot write manifest {self.manifest_path}: {e}") from e

    def recorded(self, artifact: str) -> Optional[Dict[str, Any]]:
        return self.load_manifest()["artifacts"].get(artifact)
