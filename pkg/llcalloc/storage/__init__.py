"""Artifact persistence."""

from .artifacts import ARTIFACTS, MANIFEST_FILE, ArtifactSpec, ArtifactStore, file_digest

__all__ = ["ARTIFACTS", "MANIFEST_FILE", "ArtifactSpec", "ArtifactStore", "file_digest"]
