"""
Run Manifest Schema
Serialized with every CLI artifact so a run can be replayed
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class RunManifest(BaseModel):
    command: List[str] = Field(..., description="Command line arguments")
    equation: Optional[str] = None
    n: Optional[int] = None
    r: Optional[int] = None
    seed: Optional[int] = None
    budget: Optional[int] = None
    threads: Optional[int] = None
    tolerances: Dict[str, float] = {}
    artifact_version: str
    schema_version: int
    wall_seconds: float = 0.0
