"""
Manifest Service
Run manifests written next to every CLI artifact
"""

import logging
from pathlib import Path
from typing import Optional, Sequence

from app.core.config import settings
from app.schemas.manifest import RunManifest

logger = logging.getLogger(__name__)


def build_manifest(
    command: Sequence[str],
    equation: Optional[str] = None,
    n: Optional[int] = None,
    r: Optional[int] = None,
    seed: Optional[int] = None,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
    wall_seconds: float = 0.0,
) -> RunManifest:
    """Create a manifest carrying the frozen tolerances and versions"""
    return RunManifest(
        command=list(command),
        equation=equation,
        n=n,
        r=r,
        seed=seed,
        budget=budget,
        threads=threads,
        tolerances=settings.tolerances(),
        artifact_version=settings.ARTIFACT_VERSION,
        schema_version=settings.SCHEMA_VERSION,
        wall_seconds=wall_seconds,
    )


def write_manifest(manifest: RunManifest, directory: Path) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / "manifest.json"
    path.write_text(manifest.model_dump_json(indent=2) + "\n")
    logger.info(f"Wrote {path}")
    return path
